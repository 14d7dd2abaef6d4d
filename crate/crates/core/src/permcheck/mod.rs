//! Schema-level rule permutation.
//!
//! A check instantiates the lower rule generically: metavariables become
//! fresh atoms (`l0, l1, ..` for the lower rule, `u0, ..` for the upper one)
//! and each context variable a single token atom (`g0, ..` on the left,
//! `d0, ..` on the right). The upper rule's main formula is placed in one of
//! the lower conclusion's context variables and the upper rule is applied to
//! it in every premise where it lands. Each resulting two-layer partial
//! derivation is an [`InterferenceTemplate`]. The check then looks for a
//! reordering that starts with the upper rule on the same occurrence and
//! uses only lower-rule steps on the lower main formula above it, every
//! open leaf of which is a leaf of the template.

mod reorder;
mod template;
mod witness;

use std::collections::BTreeSet;

use crate::kernel::{
    CalculusSpec, Derivation, Formula, Item, RuleKind, RuleSchema, Sequent, SequentPattern, Side, Succedent,
};

pub use template::{contraction_templates, interference_templates};
pub use witness::{instantiate_witness, validate_witness, WitnessError};

use reorder::{Outcome, Reorder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// More templates than this for one pair gives `Unknown`.
    pub max_templates: usize,
    /// Longest branch of a candidate reordering, counting every step.
    pub max_candidate_depth: usize,
    /// Total rule instances tried while building and searching.
    pub max_splits: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_templates: 4096, max_candidate_depth: 3, max_splits: 2_000_000 }
    }
}

impl Budget {
    /// Parses `key=value` pairs separated by commas, e.g.
    /// `max_splits=5000,max_candidate_depth=4`. Unset keys keep defaults.
    pub fn parse(s: &str) -> Result<Budget, String> {
        let mut b = Budget::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got {:?}", part))?;
            let n: usize = v.trim().parse().map_err(|_| format!("not a number: {:?}", v))?;
            if n == 0 {
                return Err(format!("{} must be positive", k));
            }
            match k.trim() {
                "max_templates" => b.max_templates = n,
                "max_candidate_depth" => b.max_candidate_depth = n,
                "max_splits" => b.max_splits = n,
                other => return Err(format!("unknown budget key {:?}", other)),
            }
        }
        Ok(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub budget: Budget,
    /// Allow weakening steps in a reordering (only on sides where the
    /// calculus declares weakening).
    pub structural_in_witness: bool,
    /// For single-succedent calculi, also check the pair in the calculus
    /// obtained by giving every right side a context variable, and report a
    /// failure there. Without it, right rules never interfere with each
    /// other and all such pairs hold vacuously.
    pub relax_single_succedent: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: Budget::default(), structural_in_witness: false, relax_single_succedent: true }
    }
}

/// Two-layer partial derivation: the lower rule at the root, the upper rule
/// applied to its main formula in the premises that contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterferenceTemplate {
    pub lower: String,
    pub upper: String,
    /// Context variable of the lower conclusion holding the upper main
    /// formula, or a label for contraction templates.
    pub position: String,
    pub lower_main: (Side, Formula),
    pub upper_main: (Side, Formula),
    pub derivation: Derivation,
}

impl InterferenceTemplate {
    pub fn end_sequent(&self) -> &Sequent {
        &self.derivation.sequent
    }

    pub fn open_leaves(&self) -> Vec<&Sequent> {
        self.derivation.open_leaves()
    }
}

/// A template together with its reordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub template: InterferenceTemplate,
    pub reordered: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds(Vec<Witness>),
    HoldsVacuously,
    Fails(InterferenceTemplate),
    Unknown(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_) | Verdict::HoldsVacuously)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "holds",
            Verdict::HoldsVacuously => "holds-vacuously",
            Verdict::Fails(_) => "fails",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermResult {
    pub verdict: Verdict,
    /// Rule instances tried.
    pub budget_used: usize,
    /// The verdict comes from the relaxed multi-succedent check.
    pub relaxed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// Does `lower` permute up `upper`?
pub fn permutes_up(calc: &CalculusSpec, lower: &RuleSchema, upper: &RuleSchema, opts: &CheckOptions) -> PermResult {
    let strict = check_pair(calc, lower, upper, opts);
    if calc.succedent == Succedent::Multi || !opts.relax_single_succedent {
        return strict;
    }
    if matches!(strict.verdict, Verdict::Fails(_) | Verdict::Unknown(_)) {
        return strict;
    }
    let rc = relax(calc);
    let relaxed = check_pair(&rc, &relax_rule(lower), &relax_rule(upper), opts);
    let used = strict.budget_used + relaxed.budget_used;
    match relaxed.verdict {
        Verdict::Fails(_) | Verdict::Unknown(_) => PermResult { budget_used: used, relaxed: true, ..relaxed },
        _ => PermResult { budget_used: used, ..strict },
    }
}

fn check_pair(calc: &CalculusSpec, lower: &RuleSchema, upper: &RuleSchema, opts: &CheckOptions) -> PermResult {
    let mut meter = Meter::new(opts.budget.max_splits);
    let templates = match template::build(calc, lower, upper, &mut meter) {
        Ok(t) => t,
        Err(Exhausted) => return unknown("split budget exhausted while building templates", &meter),
    };
    let Some((lside, lmain)) = template::lower_main(lower) else {
        return PermResult { verdict: Verdict::HoldsVacuously, budget_used: meter.used, relaxed: false };
    };
    let Some(first) = templates.first() else {
        return PermResult { verdict: Verdict::HoldsVacuously, budget_used: meter.used, relaxed: false };
    };
    let (uside, umain) = first.upper_main.clone();
    let then = vec![(lower.clone(), lside, lmain)];
    judge(calc, templates, (upper.clone(), uside, umain), then, opts, meter)
}

/// Does contraction `c` permute up `alpha` onto its auxiliary formulas?
pub fn contraction_permutes_up_c(
    calc: &CalculusSpec,
    c: &RuleSchema,
    alpha: &RuleSchema,
    opts: &CheckOptions,
) -> Result<PermResult, PermError> {
    let RuleKind::Contraction(side) = c.kind else {
        return Err(PermError::NotApplicable(format!("{} is not a contraction rule", c.name)));
    };
    if !calc.structural.contraction(side) {
        return Err(PermError::NotApplicable(format!("{} declares no contraction on the {}", calc.name, side.as_str())));
    }
    let Some((aside, amain)) = template::lower_main(alpha) else {
        return Err(PermError::NotApplicable(format!("{} has no main formula", alpha.name)));
    };
    if aside != side {
        return Ok(PermResult { verdict: Verdict::HoldsVacuously, budget_used: 0, relaxed: false });
    }
    let mut meter = Meter::new(opts.budget.max_splits);
    let templates = match template::build_contraction(calc, c, alpha, &mut meter) {
        Ok(t) => t,
        Err(Exhausted) => return Ok(unknown("split budget exhausted while building templates", &meter)),
    };
    if templates.is_empty() {
        return Ok(PermResult { verdict: Verdict::HoldsVacuously, budget_used: meter.used, relaxed: false });
    }
    let then = template::auxiliaries(alpha)
        .into_iter()
        .filter(|(s, _)| calc.structural.contraction(*s))
        .map(|(s, f)| (RuleSchema::contraction(s), s, f))
        .collect();
    Ok(judge(calc, templates, (alpha.clone(), aside, amain), then, opts, meter))
}

fn judge(
    calc: &CalculusSpec,
    templates: Vec<InterferenceTemplate>,
    first: (RuleSchema, Side, Formula),
    then: Vec<(RuleSchema, Side, Formula)>,
    opts: &CheckOptions,
    mut meter: Meter,
) -> PermResult {
    if templates.len() > opts.budget.max_templates {
        return unknown(&format!("{} templates exceed max_templates", templates.len()), &meter);
    }
    let mut witnesses = Vec::new();
    let mut pending: Option<String> = None;
    for t in templates {
        let leaves: BTreeSet<Sequent> = t.open_leaves().into_iter().cloned().collect();
        let r = Reorder {
            calc,
            first: &first,
            then: &then,
            leaves: &leaves,
            weaken: opts.structural_in_witness,
            max_depth: opts.budget.max_candidate_depth,
        };
        match r.run(t.end_sequent(), &mut meter) {
            Outcome::Found(d) => witnesses.push(Witness { template: t, reordered: d }),
            Outcome::None { cut: false } => {
                return PermResult { verdict: Verdict::Fails(t), budget_used: meter.used, relaxed: false }
            }
            Outcome::None { cut: true } => {
                pending.get_or_insert_with(|| "candidate depth reached".into());
            }
            Outcome::Exhausted => return unknown("split budget exhausted during search", &meter),
        }
    }
    match pending {
        Some(why) => unknown(&why, &meter),
        None => PermResult { verdict: Verdict::Holds(witnesses), budget_used: meter.used, relaxed: false },
    }
}

fn unknown(why: &str, meter: &Meter) -> PermResult {
    PermResult { verdict: Verdict::Unknown(why.into()), budget_used: meter.used, relaxed: false }
}

#[derive(Debug)]
pub(crate) struct Exhausted;

pub(crate) struct Meter {
    used: usize,
    max: usize,
}

impl Meter {
    fn new(max: usize) -> Self {
        Meter { used: 0, max }
    }

    fn tick(&mut self) -> Result<(), Exhausted> {
        self.used += 1;
        if self.used > self.max {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }
}

/// Multi-succedent version of a single-succedent calculus: every rule
/// pattern whose right side has no context variable gets one. Premises
/// with the same left context variables share the new variable, and the
/// conclusion receives all of them.
pub fn relax(calc: &CalculusSpec) -> CalculusSpec {
    CalculusSpec {
        name: calc.name.clone(),
        succedent: Succedent::Multi,
        connectives: calc.connectives.clone(),
        logical: calc.logical.iter().map(relax_rule).collect(),
        structural: calc.structural,
    }
}

pub fn relax_rule(rule: &RuleSchema) -> RuleSchema {
    if rule.kind.is_structural() {
        return rule.clone();
    }
    let mut used: BTreeSet<String> = std::iter::once(&rule.conclusion)
        .chain(rule.variants.iter().flatten())
        .flat_map(|p| p.all_context_vars().into_iter().map(String::from))
        .collect();
    let mut fresh: Vec<(Vec<String>, String)> = Vec::new();
    let mut out = rule.clone();
    for prem in out.variants.iter_mut().flatten() {
        if prem.context_vars(Side::Right).next().is_some() {
            continue;
        }
        let mut key: Vec<String> = prem.context_vars(Side::Left).map(String::from).collect();
        key.sort();
        let var = match fresh.iter().find(|(k, _)| *k == key) {
            Some((_, v)) => v.clone(),
            None => {
                let v = fresh_var(&mut used);
                fresh.push((key, v.clone()));
                v
            }
        };
        prem.right.insert(0, Item::Ctx(var));
    }
    let concl: &mut SequentPattern = &mut out.conclusion;
    if fresh.is_empty() && concl.context_vars(Side::Right).next().is_none() {
        concl.right.insert(0, Item::Ctx(fresh_var(&mut used)));
    }
    for (i, (_, v)) in fresh.into_iter().enumerate() {
        concl.right.insert(i, Item::Ctx(v));
    }
    out
}

fn fresh_var(used: &mut BTreeSet<String>) -> String {
    let mut v = "Θ".to_string();
    while used.contains(&v) {
        v.push('\'');
    }
    used.insert(v.clone());
    v
}

#[cfg(test)]
mod tests;
