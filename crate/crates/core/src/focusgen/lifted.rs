use std::collections::BTreeMap;
use std::fmt;

use crate::kernel::{distribute, instances, Formula, Item, RuleSchema, Sequent, SequentPattern, Side};

use super::{FocusedCalculus, FocusedDerivation, FocusedSequent, FocusedStep, Label, LiftedInstance, Phase, Polarity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusedValidationError {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for FocusedValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.path, self.reason)
    }
}

impl std::error::Error for FocusedValidationError {}

type Parts = (Sequent, Sequent);

/// Passive and active contents per context variable.
type Split = BTreeMap<String, (Vec<Formula>, Vec<Formula>)>;

/// Passive and active parts of a lifted pattern.
fn lifted_side(p: &SequentPattern, li: &LiftedInstance, with_main: bool, conclusion: bool) -> Option<Parts> {
    let mut passive = [Vec::new(), Vec::new()];
    let mut active = [Vec::new(), Vec::new()];
    for (k, side) in Side::BOTH.into_iter().enumerate() {
        let shared: Vec<&Formula> = li.shared.iter().filter(|(s, _)| *s == side).map(|(_, f)| f).collect();
        if conclusion {
            passive[k].extend(shared.iter().map(|f| (*f).clone()));
        }
        for item in p.side(side) {
            match item {
                Item::Ctx(x) => {
                    passive[k].extend(li.passive.get(x)?.iter().cloned());
                    active[k].extend(li.active.get(x)?.iter().cloned());
                    if !conclusion {
                        passive[k].extend(shared.iter().map(|f| (*f).clone()));
                    }
                }
                Item::Formula { pattern, .. } => {
                    if with_main {
                        active[k].push(pattern.instantiate(&li.formulas)?);
                    }
                }
            }
        }
    }
    let [pl, pr] = passive;
    let [al, ar] = active;
    Some((Sequent::new(pl, pr), Sequent::new(al, ar)))
}

/// Conclusion and premises of a lifted instance.
pub(crate) fn lifted_apply(rule: &RuleSchema, li: &LiftedInstance) -> Option<(Parts, Vec<Parts>)> {
    let concl = lifted_side(&rule.conclusion, li, true, true)?;
    let prems = rule.variants.get(li.variant)?.iter().map(|p| lifted_side(p, li, true, false)).collect::<Option<Vec<_>>>()?;
    Some((concl, prems))
}

fn ctx_count(rule: &RuleSchema, side: Side) -> usize {
    rule.conclusion.context_vars(side).count()
}

fn remove_one(v: &mut Vec<Formula>, f: &Formula) -> bool {
    match v.iter().position(|g| g == f) {
        Some(i) => {
            v.remove(i);
            true
        }
        None => false,
    }
}

impl FocusedCalculus {
    fn init_rule(&self) -> Option<RuleSchema> {
        self.base.rule("init")
    }

    fn closes(&self, fs: &FocusedSequent) -> bool {
        let Some(init) = self.init_rule() else { return false };
        let merged = fs.merged();
        match fs.label {
            Label::Neutral => !instances(&self.base, &init, &merged).is_empty(),
            Label::Positive => {
                let act: Vec<(Side, &Formula)> =
                    Side::BOTH.iter().flat_map(|&s| fs.active.side(s).iter().map(move |f| (s, f))).collect();
                let [(_, a)] = act.as_slice() else { return false };
                a.is_atom()
                    && instances(&self.base, &init, &merged).iter().any(|i| i.subst.formulas.get("P") == Some(*a))
            }
            Label::Negative => false,
        }
    }

    fn storable(&self, f: &Formula, side: Side, label: Label) -> bool {
        matches!(
            (self.polarity(f, side), label),
            (Polarity::Neutral, _) | (Polarity::Negative, Label::Positive) | (Polarity::Positive, Label::Negative)
        )
    }

    fn has_negative_passive(&self, fs: &FocusedSequent) -> bool {
        Side::BOTH.iter().any(|&s| fs.passive.side(s).iter().any(|f| self.polarity(f, s) == Polarity::Negative))
    }

    /// Every lifted instance of the rule introducing active `main` on `side`.
    pub(crate) fn phase_instances(&self, fs: &FocusedSequent, side: Side, main: &Formula) -> Vec<(LiftedInstance, Vec<FocusedSequent>)> {
        let mut out = Vec::new();
        let Some(conn) = main.connective() else { return out };
        for rule in self.base.introduction_rules(conn, side) {
            if self.phase_of_rule(&rule.name).map(Phase::label) != Some(fs.label) {
                continue;
            }
            let Some((_, pat)) = rule.main() else { continue };
            let mut formulas = BTreeMap::new();
            if !pat.unify(main, &mut formulas) {
                continue;
            }
            let mut shared = Vec::new();
            let mut per_side: Vec<Vec<Split>> = Vec::new();
            let mut dead = false;
            for s in Side::BOTH {
                let k = ctx_count(rule, s);
                let mut act = fs.active.side(s).to_vec();
                if s == side {
                    remove_one(&mut act, main);
                }
                let mut items: Vec<(u8, Formula)> = act.into_iter().map(|f| (1, f)).collect();
                for f in fs.passive.side(s) {
                    if k >= 2 && self.contractible(f, s) {
                        shared.push((s, f.clone()));
                    } else {
                        items.push((0, f.clone()));
                    }
                }
                let vars: Vec<String> = rule.conclusion.context_vars(s).map(String::from).collect();
                let splits = distribute(&items, vars.len());
                if splits.is_empty() {
                    dead = true;
                    break;
                }
                per_side.push(
                    splits
                        .into_iter()
                        .map(|groups| {
                            vars.iter()
                                .zip(groups)
                                .map(|(v, g)| {
                                    let (p, a): (Vec<_>, Vec<_>) = g.into_iter().partition(|(t, _)| *t == 0);
                                    (v.clone(), (p.into_iter().map(|x| x.1).collect(), a.into_iter().map(|x| x.1).collect()))
                                })
                                .collect()
                        })
                        .collect(),
                );
            }
            if dead {
                continue;
            }
            for left in &per_side[0] {
                for right in &per_side[1] {
                    let (mut passive, mut active) = (BTreeMap::new(), BTreeMap::new());
                    for (v, (p, a)) in left.iter().chain(right.iter()) {
                        passive.insert(v.clone(), p.clone());
                        active.insert(v.clone(), a.clone());
                    }
                    for variant in 0..rule.variants.len() {
                        let li = LiftedInstance {
                            rule: rule.name.clone(),
                            variant,
                            formulas: formulas.clone(),
                            passive: passive.clone(),
                            active: active.clone(),
                            shared: shared.clone(),
                        };
                        let Some((_, prems)) = lifted_apply(rule, &li) else { continue };
                        let prems: Vec<FocusedSequent> = prems
                            .into_iter()
                            .map(|(passive, active)| FocusedSequent { passive, active, label: fs.label })
                            .collect();
                        if prems.iter().all(|p| self.base.respects_arity(&p.merged())) {
                            out.push((li, prems));
                        }
                    }
                }
            }
        }
        out
    }

    /// Moves of the search strategy: initial when it closes, otherwise the
    /// first negative selection (or every positive one), eager store, end,
    /// and the instances of the rule for the first active formula. Atoms
    /// on the right behave as positive, those on the left are released.
    pub fn moves(&self, fs: &FocusedSequent) -> Vec<(FocusedStep, Vec<FocusedSequent>)> {
        if self.closes(fs) {
            return vec![(FocusedStep::Init, Vec::new())];
        }
        let cands = |pol: Polarity| -> Vec<(Side, Formula)> {
            let mut v = Vec::new();
            for s in Side::BOTH {
                let mut fs_side: Vec<&Formula> = fs.passive.side(s).iter().filter(|f| self.polarity(f, s) == pol).collect();
                fs_side.dedup();
                v.extend(fs_side.into_iter().map(|f| (s, f.clone())));
            }
            v
        };
        let select = |(side, formula): (Side, Formula)| {
            let step = FocusedStep::Select { copy: self.contractible(&formula, side), side, formula };
            let prem = self.check_step(fs, &step).expect("strategy produced an illegal selection");
            (step, prem)
        };
        if fs.label == Label::Neutral {
            let neg = cands(Polarity::Negative);
            if let Some(first) = neg.into_iter().next() {
                return vec![select(first)];
            }
            return cands(Polarity::Positive).into_iter().map(select).collect();
        }
        // A right atom under positive focus closes by initial or not at all.
        if fs.label == Label::Positive && fs.active.right().iter().any(Formula::is_atom) {
            return Vec::new();
        }
        for s in Side::BOTH {
            if let Some(f) = fs.active.side(s).iter().find(|f| self.storable(f, s, fs.label)) {
                let step = FocusedStep::Store { side: s, formula: f.clone() };
                let prem = self.check_step(fs, &step).expect("strategy produced an illegal store");
                return vec![(step, prem)];
            }
        }
        if fs.active.is_empty() {
            let prem = FocusedSequent { label: Label::Neutral, ..fs.clone() };
            return vec![(FocusedStep::End, vec![prem])];
        }
        for s in Side::BOTH {
            if let Some(f) = fs.active.side(s).first() {
                return self
                    .phase_instances(fs, s, f)
                    .into_iter()
                    .map(|(li, p)| (FocusedStep::Phase(li), p))
                    .collect();
            }
        }
        Vec::new()
    }

    /// Premises of `step` at `fs`, or why it does not apply.
    pub fn check_step(&self, fs: &FocusedSequent, step: &FocusedStep) -> Result<Vec<FocusedSequent>, String> {
        if fs.label == Label::Neutral && !fs.active.is_empty() {
            return Err("neutral sequent with nonempty active context".into());
        }
        if !self.base.respects_arity(&fs.merged()) {
            return Err("sequent violates succedent arity".into());
        }
        match step {
            FocusedStep::Select { side, formula, copy } => {
                if fs.label != Label::Neutral {
                    return Err("selection needs a neutral sequent".into());
                }
                let pol = self.polarity(formula, *side);
                let label = match pol {
                    Polarity::Neutral => return Err("atoms are not selectable".into()),
                    Polarity::Negative => Label::Negative,
                    Polarity::Positive => {
                        if self.has_negative_passive(fs) {
                            return Err("positive selection blocked by a negative formula".into());
                        }
                        Label::Positive
                    }
                };
                if *copy && !self.contractible(formula, *side) {
                    return Err("copy on selection not permitted for this formula".into());
                }
                let mut passive = [fs.passive.left().to_vec(), fs.passive.right().to_vec()];
                let k = (*side == Side::Right) as usize;
                if !remove_one(&mut passive[k], formula) {
                    return Err("selected formula not in the passive context".into());
                }
                if *copy {
                    passive[k].push(formula.clone());
                }
                let [l, r] = passive;
                let active = Sequent::default().with_added(*side, formula.clone());
                Ok(vec![FocusedSequent { passive: Sequent::new(l, r), active, label }])
            }
            FocusedStep::Store { side, formula } => {
                if fs.label == Label::Neutral {
                    return Err("store needs a labelled sequent".into());
                }
                if !self.storable(formula, *side, fs.label) {
                    return Err("formula has the polarity of the current phase".into());
                }
                let active = fs.active.with_removed(*side, formula).ok_or("stored formula not active")?;
                Ok(vec![FocusedSequent { passive: fs.passive.with_added(*side, formula.clone()), active, label: fs.label }])
            }
            FocusedStep::End => {
                if fs.label == Label::Neutral || !fs.active.is_empty() {
                    return Err("end needs a labelled sequent with empty active contexts".into());
                }
                Ok(vec![FocusedSequent { label: Label::Neutral, ..fs.clone() }])
            }
            FocusedStep::Init => {
                if self.closes(fs) {
                    Ok(Vec::new())
                } else {
                    Err("initial does not apply".into())
                }
            }
            FocusedStep::Phase(li) => {
                let rule = self.base.logical.iter().find(|r| r.name == li.rule).ok_or("unknown rule")?;
                if self.phase_of_rule(&rule.name).map(Phase::label) != Some(fs.label) {
                    return Err(format!("{} does not belong to this phase", rule.name));
                }
                for (s, f) in &li.shared {
                    if !self.contractible(f, *s) || ctx_count(rule, *s) < 2 {
                        return Err(format!("formula {} may not be shared", f));
                    }
                }
                let ((passive, active), prems) = lifted_apply(rule, li).ok_or("instance does not fit the rule")?;
                if passive != fs.passive || active != fs.active {
                    return Err(format!("{} conclusion does not match", rule.name));
                }
                let prems: Vec<FocusedSequent> =
                    prems.into_iter().map(|(passive, active)| FocusedSequent { passive, active, label: fs.label }).collect();
                if !prems.iter().all(|p| self.base.respects_arity(&p.merged())) {
                    return Err("premise violates succedent arity".into());
                }
                Ok(prems)
            }
        }
    }
}

/// Replays a focused derivation step by step; open leaves are rejected.
pub fn validate_focused(fc: &FocusedCalculus, d: &FocusedDerivation) -> Result<(), FocusedValidationError> {
    fn go(fc: &FocusedCalculus, d: &FocusedDerivation, path: &mut Vec<usize>) -> Result<(), FocusedValidationError> {
        let fail = |path: &Vec<usize>, reason: String| Err(FocusedValidationError { path: path.clone(), reason });
        let Some(step) = &d.step else { return fail(path, "open leaf".into()) };
        let prems = match fc.check_step(&d.sequent, step) {
            Ok(p) => p,
            Err(e) => return fail(path, e),
        };
        if prems.len() != d.children.len() || prems.iter().zip(&d.children).any(|(p, c)| p != &c.sequent) {
            return fail(path, format!("children do not match the premises of {}", step.name()));
        }
        for (i, c) in d.children.iter().enumerate() {
            path.push(i);
            go(fc, c, path)?;
            path.pop();
        }
        Ok(())
    }
    go(fc, d, &mut Vec::new())
}
