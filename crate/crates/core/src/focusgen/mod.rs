//! Focused calculi generated from a focusable bipartition.
//!
//! Sequents are `Γ ; Γ' ⊢ᵖ Δ ; Δ'` with passive contexts Γ, Δ, active
//! contexts Γ', Δ' and a label p: negative (−), positive (+) or neutral
//! (0). A formula's polarity comes from the component of the rule that
//! introduces its top connective on its side; atoms are neutral.
//!
//! Conventions the construction fixes:
//! - atoms are never selected; store moves them out of the active contexts
//!   in either phase;
//! - initial closes a neutral sequent whose passive part is an initial
//!   sequent, or a positive one whose only active formula is an atom with a
//!   passive dual;
//! - where contraction is not admissible for a phase, selecting one of its
//!   formulas keeps a copy in the passive context, and contractible passive
//!   formulas (those, plus atoms) go to every branch of a rule that splits
//!   the context.

mod erase;
mod lifted;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{FocusableBipartition, RuleSet};
use crate::kernel::{CalculusSpec, ContextMode, Formula, Printer, RuleKind, RuleSchema, Sequent, Side};
use crate::permcheck::{contraction_permutes_up_c, permutes_up, CheckOptions, Verdict};

pub use erase::erase_focus;
pub use lifted::{validate_focused, FocusedValidationError};
pub use text::{parse_focused, print_focused};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Negative,
    Positive,
    Neutral,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Negative => "negative",
            Polarity::Positive => "positive",
            Polarity::Neutral => "neutral",
        }
    }
}

/// Sequent label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Neutral,
    Negative,
    Positive,
}

impl Label {
    pub fn symbol(self) -> &'static str {
        match self {
            Label::Neutral => "⁰",
            Label::Negative => "⁻",
            Label::Positive => "⁺",
        }
    }
}

/// The two phases, indexed like the bipartition's components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Negative,
    Positive,
}

impl Phase {
    pub const BOTH: [Phase; 2] = [Phase::Negative, Phase::Positive];

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Negative => "negative",
            Phase::Positive => "positive",
        }
    }

    pub fn label(self) -> Label {
        match self {
            Phase::Negative => Label::Negative,
            Phase::Positive => Label::Positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FocusError {
    #[error("no {side} introduction rule for connective {conn}")]
    NoIntroductionRule { conn: String, side: &'static str },
    #[error("connective {conn} on the {side} is introduced by rules in both components")]
    AmbiguousPolarity { conn: String, side: &'static str },
    #[error("bipartition rejected: {0}")]
    Bipartition(String),
    #[error("focused text: {0}")]
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FocusedSequent {
    pub passive: Sequent,
    pub active: Sequent,
    pub label: Label,
}

impl FocusedSequent {
    pub fn neutral(s: Sequent) -> Self {
        FocusedSequent { passive: s, active: Sequent::default(), label: Label::Neutral }
    }

    /// Passive and active contexts joined.
    pub fn merged(&self) -> Sequent {
        let join = |side| {
            let mut v = self.passive.side(side).to_vec();
            v.extend_from_slice(self.active.side(side));
            v
        };
        Sequent::new(join(Side::Left), join(Side::Right))
    }

    pub fn show(&self, p: Printer<'_>) -> String {
        let list = |fs: &[Formula]| {
            if fs.is_empty() {
                "·".to_string()
            } else {
                fs.iter().map(|f| p.formula(f)).collect::<Vec<_>>().join(", ")
            }
        };
        format!(
            "{} ; {} ⊢{} {} ; {}",
            list(self.passive.left()),
            list(self.active.left()),
            self.label.symbol(),
            list(self.passive.right()),
            list(self.active.right())
        )
    }
}

impl fmt::Display for FocusedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show(Printer::new(&[])))
    }
}

/// A phase-rule application: a base rule instance whose context variables
/// are each split into a passive and an active part. `shared` formulas are
/// passive formulas handed to every context variable on their side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftedInstance {
    pub rule: String,
    pub variant: usize,
    pub formulas: BTreeMap<String, Formula>,
    pub passive: BTreeMap<String, Vec<Formula>>,
    pub active: BTreeMap<String, Vec<Formula>>,
    pub shared: Vec<(Side, Formula)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FocusedStep {
    Select { side: Side, formula: Formula, copy: bool },
    Store { side: Side, formula: Formula },
    End,
    Phase(LiftedInstance),
    Init,
}

impl FocusedStep {
    pub fn name(&self) -> String {
        match self {
            FocusedStep::Select { side, .. } => format!("sel_{}", side.suffix()),
            FocusedStep::Store { side, .. } => format!("st_{}", side.suffix()),
            FocusedStep::End => "end".into(),
            FocusedStep::Phase(l) => l.rule.clone(),
            FocusedStep::Init => "init".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FocusedDerivation {
    pub sequent: FocusedSequent,
    pub step: Option<FocusedStep>,
    pub children: Vec<FocusedDerivation>,
}

impl FocusedDerivation {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(FocusedDerivation::size).sum::<usize>()
    }

    pub fn show(&self, p: Printer<'_>) -> String {
        let mut out = String::new();
        self.show_into(p, 0, &mut out);
        out
    }

    fn show_into(&self, p: Printer<'_>, depth: usize, out: &mut String) {
        let name = self.step.as_ref().map_or("open".to_string(), FocusedStep::name);
        let copy = matches!(self.step, Some(FocusedStep::Select { copy: true, .. }));
        out.push_str(&format!(
            "{}{}   [{}{}]\n",
            "  ".repeat(depth),
            self.sequent.show(p),
            name,
            if copy { ", copy" } else { "" }
        ));
        for c in &self.children {
            c.show_into(p, depth + 1, out);
        }
    }
}

/// One contraction rule checked against one phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseContraction {
    pub phase: Phase,
    pub contraction: String,
    pub admissible: bool,
    /// Failing rules with the two verdict labels (↑, then ↑_c).
    pub failures: Vec<(String, &'static str, &'static str)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ContractionReport {
    pub entries: Vec<PhaseContraction>,
}

impl ContractionReport {
    pub fn admissible(&self, phase: Phase) -> bool {
        self.entries.iter().filter(|e| e.phase == phase).all(|e| e.admissible)
    }

    /// Admissibility of contraction on `side` within `phase`.
    pub fn admissible_on(&self, phase: Phase, side: Side) -> bool {
        let name = format!("c_{}", side.suffix());
        self.entries.iter().filter(|e| e.phase == phase && e.contraction == name).all(|e| e.admissible)
    }

    /// Failing rules of a phase, each once, sorted.
    pub fn failing(&self, phase: Phase) -> Vec<String> {
        let mut v: Vec<String> =
            self.entries.iter().filter(|e| e.phase == phase).flat_map(|e| e.failures.iter().map(|f| f.0.clone())).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// For each phase and contraction rule of `calc`: contraction is admissible
/// in the phase iff it permutes up, and permutes up onto auxiliaries of,
/// every rule of the phase. Undecided checks count as failures.
pub fn contraction_phase_admissibility(
    calc: &CalculusSpec,
    bp: &FocusableBipartition,
    opts: &CheckOptions,
) -> ContractionReport {
    let mut entries = Vec::new();
    let cs: Vec<RuleSchema> =
        calc.structural_rules().into_iter().filter(|r| matches!(r.kind, RuleKind::Contraction(_))).collect();
    for phase in Phase::BOTH {
        for c in &cs {
            let mut failures = Vec::new();
            for name in component(bp, phase) {
                let Some(alpha) = calc.logical.iter().find(|r| &r.name == name) else { continue };
                let up = permutes_up(calc, c, alpha, opts).verdict;
                let up_c = contraction_permutes_up_c(calc, c, alpha, opts).map(|r| r.verdict);
                let up_c_label = match &up_c {
                    Ok(v) => v.label(),
                    Err(_) => "not-applicable",
                };
                if !up.holds() || !up_c.as_ref().is_ok_and(Verdict::holds) {
                    failures.push((name.clone(), up.label(), up_c_label));
                }
            }
            entries.push(PhaseContraction { phase, contraction: c.name.clone(), admissible: failures.is_empty(), failures });
        }
    }
    ContractionReport { entries }
}

fn component(bp: &FocusableBipartition, phase: Phase) -> &RuleSet {
    match phase {
        Phase::Negative => &bp.negative,
        Phase::Positive => &bp.positive,
    }
}

/// A base calculus with a focusable bipartition and its contraction policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusedCalculus {
    pub name: String,
    pub base: CalculusSpec,
    pub bipartition: FocusableBipartition,
    pub contraction: ContractionReport,
    polarities: BTreeMap<(String, Side), Polarity>,
}

/// Polarity of `f` on `side` under `bp`.
pub fn polarity_of(calc: &CalculusSpec, f: &Formula, side: Side, bp: &FocusableBipartition) -> Result<Polarity, FocusError> {
    let Some(conn) = f.connective() else { return Ok(Polarity::Neutral) };
    connective_polarity(calc, conn, side, bp)
}

fn connective_polarity(calc: &CalculusSpec, conn: &str, side: Side, bp: &FocusableBipartition) -> Result<Polarity, FocusError> {
    let rules = calc.introduction_rules(conn, side);
    if rules.is_empty() {
        return Err(FocusError::NoIntroductionRule { conn: conn.into(), side: side.as_str() });
    }
    let neg = rules.iter().all(|r| bp.negative.contains(&r.name));
    let pos = rules.iter().all(|r| bp.positive.contains(&r.name));
    match (neg, pos) {
        (true, false) => Ok(Polarity::Negative),
        (false, true) => Ok(Polarity::Positive),
        _ => Err(FocusError::AmbiguousPolarity { conn: conn.into(), side: side.as_str() }),
    }
}

/// Checks `bp` again against the rule shapes and builds the focused calculus.
pub fn generate_focused(
    calc: &CalculusSpec,
    bp: &FocusableBipartition,
    report: &ContractionReport,
) -> Result<FocusedCalculus, FocusError> {
    let bad = |m: String| Err(FocusError::Bipartition(m));
    let all: RuleSet = calc.logical_names().into_iter().collect();
    let covered: RuleSet = bp.negative.union(&bp.positive).cloned().collect();
    if covered != all || !bp.negative.is_disjoint(&bp.positive) {
        return bad("components must be disjoint and cover every logical rule".into());
    }
    if bp.negative.is_empty() || bp.positive.is_empty() {
        return bad("both components must be nonempty".into());
    }
    let expected: Vec<(String, String)> =
        bp.positive.iter().flat_map(|u| bp.negative.iter().map(move |l| (u.clone(), l.clone()))).collect();
    let mut witness = bp.hierarchy_witness.clone();
    witness.sort();
    let mut exp_sorted = expected;
    exp_sorted.sort();
    if witness != exp_sorted {
        return bad("hierarchy witness does not cover every positive/negative pair".into());
    }
    for r in calc.logical.iter().filter(|r| bp.positive.contains(&r.name)) {
        if r.max_aux_per_premise() > 1 {
            return bad(format!("positive rule {} has a premise with several auxiliary formulas", r.name));
        }
        if r.context_mode() == ContextMode::Additive {
            return bad(format!("positive rule {} copies its context", r.name));
        }
    }
    let mut polarities = BTreeMap::new();
    for d in &calc.connectives {
        for side in Side::BOTH {
            match connective_polarity(calc, &d.name, side, bp) {
                Ok(p) => {
                    polarities.insert((d.name.clone(), side), p);
                }
                Err(FocusError::NoIntroductionRule { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(FocusedCalculus {
        name: format!("{}f", calc.name),
        base: calc.clone(),
        bipartition: bp.clone(),
        contraction: report.clone(),
        polarities,
    })
}

impl FocusedCalculus {
    /// Polarity on a side; formulas whose connective has no rule on that
    /// side are inert and treated like atoms.
    pub fn polarity(&self, f: &Formula, side: Side) -> Polarity {
        match f.connective() {
            None => Polarity::Neutral,
            Some(c) => self.polarities.get(&(c.to_string(), side)).copied().unwrap_or(Polarity::Neutral),
        }
    }

    pub fn phase_of_rule(&self, rule: &str) -> Option<Phase> {
        if self.bipartition.negative.contains(rule) {
            Some(Phase::Negative)
        } else if self.bipartition.positive.contains(rule) {
            Some(Phase::Positive)
        } else {
            None
        }
    }

    /// May `f` on `side` be duplicated?
    pub fn contractible(&self, f: &Formula, side: Side) -> bool {
        if !self.base.structural.contraction(side) {
            return false;
        }
        match self.polarity(f, side) {
            Polarity::Neutral => true,
            Polarity::Negative => !self.contraction.admissible_on(Phase::Negative, side),
            Polarity::Positive => !self.contraction.admissible_on(Phase::Positive, side),
        }
    }

    /// Sides on which selecting a formula of `phase` keeps a copy.
    pub fn copy_sides(&self, phase: Phase) -> Vec<Side> {
        Side::BOTH
            .into_iter()
            .filter(|&s| self.base.structural.contraction(s) && !self.contraction.admissible_on(phase, s))
            .collect()
    }

    pub fn printer(&self) -> Printer<'_> {
        self.base.printer()
    }
}

#[cfg(test)]
mod tests;
