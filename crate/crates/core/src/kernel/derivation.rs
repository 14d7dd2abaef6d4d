use std::fmt;

use super::formula::Printer;
use super::rule::{apply_rule, CalculusSpec, Instance, RuleKind};
use super::sequent::Sequent;

/// A finite tree of rule instances. A node without a step is an open leaf;
/// complete derivations have none.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    pub sequent: Sequent,
    pub step: Option<Instance>,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn open(sequent: Sequent) -> Self {
        Derivation { sequent, step: None, children: Vec::new() }
    }

    pub fn node(sequent: Sequent, step: Instance, children: Vec<Derivation>) -> Self {
        Derivation { sequent, step: Some(step), children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn open_leaves(&self) -> Vec<&Sequent> {
        let mut out = Vec::new();
        self.collect_open(&mut out);
        out
    }

    fn collect_open<'a>(&'a self, out: &mut Vec<&'a Sequent>) {
        if self.step.is_none() {
            out.push(&self.sequent);
        }
        self.children.iter().for_each(|c| c.collect_open(out));
    }

    /// Rule names in pre-order.
    pub fn rule_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |d| {
            if let Some(s) = &d.step {
                out.push(s.rule.as_str());
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        f(self);
        self.children.iter().for_each(|c| c.walk(f));
    }

    /// Indented tree rendering, conclusion first.
    pub fn show(&self, p: Printer<'_>) -> String {
        let mut s = String::new();
        self.show_into(p, 0, &mut s);
        s
    }

    fn show_into(&self, p: Printer<'_>, indent: usize, out: &mut String) {
        let rule = self.step.as_ref().map_or("open", |s| s.rule.as_str());
        out.push_str(&format!("{}{}  [{}]\n", "  ".repeat(indent), self.sequent.show(p), rule));
        for c in &self.children {
            c.show_into(p, indent + 1, out);
        }
    }
}

/// Where and why a derivation failed to check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationError {
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at node {:?}: {}", self.path, self.reason)
    }
}

impl std::error::Error for ValidationError {}

/// Checks a complete derivation: every node replays under `apply_rule` and
/// every leaf is an initial instance.
pub fn validate_derivation(calc: &CalculusSpec, d: &Derivation) -> Result<(), ValidationError> {
    check(calc, d, &mut Vec::new(), false)
}

/// Like [`validate_derivation`] but open leaves are allowed.
pub fn validate_partial(calc: &CalculusSpec, d: &Derivation) -> Result<(), ValidationError> {
    check(calc, d, &mut Vec::new(), true)
}

fn check(calc: &CalculusSpec, d: &Derivation, path: &mut Vec<usize>, allow_open: bool) -> Result<(), ValidationError> {
    let fail = |path: &Vec<usize>, reason: String| Err(ValidationError { path: path.clone(), reason });
    if !calc.respects_arity(&d.sequent) {
        return fail(path, "sequent violates succedent arity".into());
    }
    let Some(step) = &d.step else {
        if allow_open && d.children.is_empty() {
            return Ok(());
        }
        return fail(path, "open leaf".into());
    };
    let Some(rule) = calc.rule(&step.rule) else {
        return fail(path, format!("unknown rule {}", step.rule));
    };
    let premises = match apply_rule(&rule, &d.sequent, step) {
        Ok(p) => p,
        Err(e) => return fail(path, e.to_string()),
    };
    if premises.len() != d.children.len() {
        return fail(path, format!("{} expects {} premises, found {}", rule.name, premises.len(), d.children.len()));
    }
    if premises.is_empty() && rule.kind != RuleKind::Initial {
        return fail(path, format!("leaf closed by non-initial rule {}", rule.name));
    }
    for (i, (p, c)) in premises.iter().zip(&d.children).enumerate() {
        if p != &c.sequent {
            return fail(path, format!("premise {} is {} but child concludes {}", i, p, c.sequent));
        }
    }
    for (i, c) in d.children.iter().enumerate() {
        path.push(i);
        check(calc, c, path, allow_open)?;
        path.pop();
    }
    Ok(())
}
