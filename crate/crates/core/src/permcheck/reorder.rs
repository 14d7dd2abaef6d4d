use std::collections::{BTreeMap, BTreeSet};

use crate::kernel::{apply_rule, instances_on, CalculusSpec, Derivation, Formula, RuleKind, RuleSchema, Sequent, Side};

use super::{Exhausted, Meter};

pub(crate) enum Outcome {
    Found(Derivation),
    /// No reordering; `cut` if some branch stopped at the depth bound.
    None { cut: bool },
    Exhausted,
}

/// AND-OR search for a reordering of one template.
pub(crate) struct Reorder<'a> {
    pub calc: &'a CalculusSpec,
    pub first: &'a (RuleSchema, Side, Formula),
    pub then: &'a [(RuleSchema, Side, Formula)],
    pub leaves: &'a BTreeSet<Sequent>,
    pub weaken: bool,
    pub max_depth: usize,
}

impl Reorder<'_> {
    pub fn run(&self, end: &Sequent, meter: &mut Meter) -> Outcome {
        // Contraction only grows its formula, so more copies than any leaf
        // holds can never close.
        let mut caps = BTreeMap::new();
        for (r, s, f) in self.then {
            if matches!(r.kind, RuleKind::Contraction(_)) {
                let most = self.leaves.iter().map(|l| count(l, *s, f)).max().unwrap_or(0);
                caps.insert((*s, f.clone()), most);
            }
        }
        let mut cut = false;
        match self.step(end, self.max_depth, true, &caps, &mut cut, meter) {
            Ok(Some(d)) => Outcome::Found(d),
            Ok(None) => Outcome::None { cut },
            Err(Exhausted) => Outcome::Exhausted,
        }
    }

    fn step(
        &self,
        goal: &Sequent,
        depth: usize,
        first: bool,
        caps: &BTreeMap<(Side, Formula), usize>,
        cut: &mut bool,
        meter: &mut Meter,
    ) -> Result<Option<Derivation>, Exhausted> {
        if !first {
            if let Some(d) = self.close(goal) {
                return Ok(Some(d));
            }
        }
        if caps.iter().any(|((s, f), &n)| count(goal, *s, f) > n) {
            return Ok(None);
        }
        if depth == 0 {
            *cut = true;
            return Ok(None);
        }
        let moves = if first { std::slice::from_ref(self.first) } else { self.then };
        for (rule, side, main) in moves {
            for inst in instances_on(self.calc, rule, goal, *side, main) {
                meter.tick()?;
                let Ok(prems) = apply_rule(rule, goal, &inst) else { continue };
                let mut kids = Vec::with_capacity(prems.len());
                for p in &prems {
                    match self.step(p, depth - 1, false, caps, cut, meter)? {
                        Some(d) => kids.push(d),
                        None => break,
                    }
                }
                if kids.len() == prems.len() {
                    return Ok(Some(Derivation::node(goal.clone(), inst, kids)));
                }
            }
        }
        Ok(None)
    }

    /// `goal` as an open leaf of the template, possibly after weakening.
    fn close(&self, goal: &Sequent) -> Option<Derivation> {
        if self.leaves.contains(goal) {
            return Some(Derivation::open(goal.clone()));
        }
        if !self.weaken {
            return None;
        }
        let s = &self.calc.structural;
        let leaf = self.leaves.iter().find(|l| {
            l.is_sub_multiset_of(goal)
                && Side::BOTH.iter().all(|&sd| s.weakening(sd) || l.side(sd).len() == goal.side(sd).len())
        })?;
        weaken_down(self.calc, goal, leaf)
    }
}

fn count(s: &Sequent, side: Side, f: &Formula) -> usize {
    s.side(side).iter().filter(|g| *g == f).count()
}

fn weaken_down(calc: &CalculusSpec, goal: &Sequent, leaf: &Sequent) -> Option<Derivation> {
    if goal == leaf {
        return Some(Derivation::open(goal.clone()));
    }
    for side in Side::BOTH {
        let extra = goal.side(side).iter().find(|f| count(goal, side, f) > count(leaf, side, f));
        if let Some(f) = extra {
            let rule = RuleSchema::weakening(side);
            let inst = instances_on(calc, &rule, goal, side, f).into_iter().next()?;
            let prem = apply_rule(&rule, goal, &inst).ok()?.pop()?;
            return Some(Derivation::node(goal.clone(), inst, vec![weaken_down(calc, &prem, leaf)?]));
        }
    }
    None
}
