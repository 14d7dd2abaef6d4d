use std::collections::BTreeSet;

use super::formula::{ConnectiveDecl, Formula, Pattern, Printer};
use super::matching::match_sequent;
use super::sequent::{Item, Sequent, SequentPattern, Side, Substitution};
use super::KernelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Logical,
    Contraction(Side),
    Weakening(Side),
    Initial,
}

impl RuleKind {
    pub fn is_structural(self) -> bool {
        !matches!(self, RuleKind::Logical)
    }
}

/// How a rule treats the surrounding context across premises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextMode {
    /// At most one premise.
    Unary,
    /// Context variables repeated across premises.
    Additive,
    /// Context variables split across premises.
    Multiplicative,
}

impl ContextMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ContextMode::Unary => "unary",
            ContextMode::Additive => "additive",
            ContextMode::Multiplicative => "multiplicative",
        }
    }
}

/// An inference rule schema.
///
/// `variants` holds alternative premise lists sharing one conclusion; a rule
/// such as `Γ, A_i ⊢ Δ / Γ, A_1 & A_2 ⊢ Δ` has two single-premise variants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleSchema {
    pub name: String,
    pub kind: RuleKind,
    pub conclusion: SequentPattern,
    pub variants: Vec<Vec<SequentPattern>>,
}

impl RuleSchema {
    pub fn logical(name: &str, variants: Vec<Vec<SequentPattern>>, conclusion: SequentPattern) -> Self {
        RuleSchema { name: name.into(), kind: RuleKind::Logical, conclusion, variants }
    }

    pub fn contraction(side: Side) -> Self {
        let f = || Item::marked(Pattern::meta("F"));
        let (mut concl, mut prem) = (ctx_pair(), ctx_pair());
        concl.side_mut(side).push(f());
        prem.side_mut(side).extend([f(), f()]);
        RuleSchema {
            name: format!("c_{}", side.suffix()),
            kind: RuleKind::Contraction(side),
            conclusion: concl,
            variants: vec![vec![prem]],
        }
    }

    pub fn weakening(side: Side) -> Self {
        let mut concl = ctx_pair();
        concl.side_mut(side).push(Item::marked(Pattern::meta("F")));
        RuleSchema {
            name: format!("w_{}", side.suffix()),
            kind: RuleKind::Weakening(side),
            conclusion: concl,
            variants: vec![vec![ctx_pair()]],
        }
    }

    /// Atomic initial rule; contexts are absorbed on sides that admit weakening.
    pub fn initial(absorb_left: bool, absorb_right: bool) -> Self {
        let p = || Item::Formula { pattern: Pattern::meta("P"), marked: false };
        let mut left = Vec::new();
        if absorb_left {
            left.push(Item::Ctx("Γ".into()));
        }
        left.push(p());
        let mut right = vec![p()];
        if absorb_right {
            right.push(Item::Ctx("Δ".into()));
        }
        RuleSchema {
            name: "init".into(),
            kind: RuleKind::Initial,
            conclusion: SequentPattern::new(left, right),
            variants: vec![vec![]],
        }
    }

    /// The designated main formula of the conclusion. Absent for initial.
    pub fn main(&self) -> Option<(Side, &Pattern)> {
        if self.kind == RuleKind::Initial {
            return None;
        }
        self.conclusion.marked().into_iter().next()
    }

    pub fn premise_count(&self) -> usize {
        self.variants.first().map_or(0, Vec::len)
    }

    pub fn auxiliaries(&self, variant: usize, premise: usize) -> Vec<(Side, &Pattern)> {
        self.variants[variant][premise].marked()
    }

    pub fn max_aux_per_premise(&self) -> usize {
        self.variants.iter().flatten().map(|p| p.marked().len()).max().unwrap_or(0)
    }

    pub fn context_mode(&self) -> ContextMode {
        let Some(prems) = self.variants.first() else {
            return ContextMode::Unary;
        };
        if prems.len() <= 1 {
            return ContextMode::Unary;
        }
        let mut seen = BTreeSet::new();
        for p in prems {
            let vars: BTreeSet<&str> = p.all_context_vars().into_iter().collect();
            if vars.iter().any(|v| seen.contains(v)) {
                return ContextMode::Additive;
            }
            seen.extend(vars);
        }
        ContextMode::Multiplicative
    }

    /// Short display of the inference, premises over conclusion.
    pub fn show(&self, p: Printer<'_>) -> String {
        let prems: Vec<String> = self
            .variants
            .iter()
            .map(|v| v.iter().map(|s| s.show(p)).collect::<Vec<_>>().join(" ; "))
            .collect();
        format!("{} / {}", prems.join(" | "), self.conclusion.show(p))
    }
}

fn ctx_pair() -> SequentPattern {
    SequentPattern::new(vec![Item::Ctx("Γ".into())], vec![Item::Ctx("Δ".into())])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Succedent {
    Multi,
    /// Exactly one formula on the right of every sequent.
    Single,
}

/// Structural rules declared by a calculus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Structural {
    pub contraction_left: bool,
    pub contraction_right: bool,
    pub weakening_left: bool,
    pub weakening_right: bool,
    pub initial: bool,
}

impl Structural {
    pub fn contraction(&self, side: Side) -> bool {
        match side {
            Side::Left => self.contraction_left,
            Side::Right => self.contraction_right,
        }
    }

    pub fn weakening(&self, side: Side) -> bool {
        match side {
            Side::Left => self.weakening_left,
            Side::Right => self.weakening_right,
        }
    }

    pub fn any_contraction(&self) -> bool {
        self.contraction_left || self.contraction_right
    }
}

/// A sequent calculus: connectives, logical rules and structural rules.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CalculusSpec {
    pub name: String,
    pub succedent: Succedent,
    pub connectives: Vec<ConnectiveDecl>,
    pub logical: Vec<RuleSchema>,
    pub structural: Structural,
}

impl CalculusSpec {
    pub fn printer(&self) -> Printer<'_> {
        Printer::new(&self.connectives)
    }

    /// Structural rule schemas materialized from the declarations.
    pub fn structural_rules(&self) -> Vec<RuleSchema> {
        let s = &self.structural;
        let mut out = Vec::new();
        for side in Side::BOTH {
            if s.contraction(side) {
                out.push(RuleSchema::contraction(side));
            }
        }
        for side in Side::BOTH {
            if s.weakening(side) {
                out.push(RuleSchema::weakening(side));
            }
        }
        if s.initial {
            out.push(RuleSchema::initial(s.weakening_left, s.weakening_right && self.succedent == Succedent::Multi));
        }
        out
    }

    pub fn rules(&self) -> Vec<RuleSchema> {
        let mut r = self.logical.clone();
        r.extend(self.structural_rules());
        r
    }

    pub fn rule(&self, name: &str) -> Option<RuleSchema> {
        self.logical
            .iter()
            .find(|r| r.name == name)
            .cloned()
            .or_else(|| self.structural_rules().into_iter().find(|r| r.name == name))
    }

    pub fn logical_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.logical.iter().map(|r| r.name.clone()).collect();
        v.sort();
        v
    }

    pub fn respects_arity(&self, s: &Sequent) -> bool {
        match self.succedent {
            Succedent::Multi => true,
            Succedent::Single => s.right().len() == 1,
        }
    }

    /// Logical rules introducing `conn` on `side`.
    pub fn introduction_rules(&self, conn: &str, side: Side) -> Vec<&RuleSchema> {
        self.logical
            .iter()
            .filter(|r| matches!(r.main(), Some((s, p)) if s == side && p.connective() == Some(conn)))
            .collect()
    }
}

/// A fully determined application of a rule: which premise variant and the
/// substitution fixing main formula and context split.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    pub rule: String,
    pub variant: usize,
    pub subst: Substitution,
}

impl Instance {
    pub fn main_formula(&self, rule: &RuleSchema) -> Option<(Side, Formula)> {
        let (side, p) = rule.main()?;
        Some((side, p.instantiate(&self.subst.formulas)?))
    }
}

/// Every instance of `rule` whose conclusion is `goal` and whose premises
/// respect the calculus's succedent arity.
pub fn instances(calc: &CalculusSpec, rule: &RuleSchema, goal: &Sequent) -> Vec<Instance> {
    let mut out = Vec::new();
    for subst in match_sequent(&rule.conclusion, goal) {
        if rule.kind == RuleKind::Initial && !subst.formulas.get("P").is_some_and(Formula::is_atom) {
            continue;
        }
        for (vi, prems) in rule.variants.iter().enumerate() {
            let ok = prems.iter().all(|p| subst.apply(p).is_some_and(|s| calc.respects_arity(&s)));
            if ok {
                out.push(Instance { rule: rule.name.clone(), variant: vi, subst: subst.clone() });
            }
        }
    }
    out
}

/// Instances whose main formula is exactly `main` on `side`.
pub fn instances_on(
    calc: &CalculusSpec,
    rule: &RuleSchema,
    goal: &Sequent,
    side: Side,
    main: &Formula,
) -> Vec<Instance> {
    instances(calc, rule, goal)
        .into_iter()
        .filter(|i| i.main_formula(rule).is_some_and(|(s, f)| s == side && &f == main))
        .collect()
}

/// Backward application: the premises of `inst` for conclusion `goal`.
pub fn apply_rule(rule: &RuleSchema, goal: &Sequent, inst: &Instance) -> Result<Vec<Sequent>, KernelError> {
    let no_match = || KernelError::NoMatch { rule: rule.name.clone(), goal: goal.to_string() };
    if inst.rule != rule.name {
        return Err(no_match());
    }
    if inst.subst.apply(&rule.conclusion).as_ref() != Some(goal) {
        return Err(no_match());
    }
    if rule.kind == RuleKind::Initial && !inst.subst.formulas.get("P").is_some_and(Formula::is_atom) {
        return Err(no_match());
    }
    let prems = rule.variants.get(inst.variant).ok_or_else(|| KernelError::BadVariant {
        rule: rule.name.clone(),
        variant: inst.variant,
    })?;
    prems.iter().map(|p| inst.subst.apply(p).ok_or_else(no_match)).collect()
}
