//! Bounded backward proof search, for base calculi and for focused ones.
//!
//! Both searches share one AND-OR engine. A failure is *clean* when no
//! branch under it was cut by a bound; only a clean failure at the root is
//! reported as [`SearchOutcome::Refuted`]. Goals equal to an ancestor on the
//! same branch are pruned (cleanly: a shortest proof never repeats a goal).
//! Failed goals are cached only in calculi without contraction, where a
//! goal's provability does not depend on its branch.

mod corpus;

use std::collections::{BTreeMap, BTreeSet};

use crate::focusgen::{FocusedCalculus, FocusedDerivation, FocusedSequent, FocusedStep};
use crate::kernel::{apply_rule, instances, instances_on, CalculusSpec, Derivation, Formula, Instance, RuleSchema, Sequent, Side};

pub use corpus::{cross_validate, gen_corpus, CorpusParams, OutcomeKind, ValidationReport, ValidationRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_depth: usize,
    pub max_nodes: usize,
    /// Contractions (or copying selections) allowed per formula per branch.
    pub allow_contraction_copies: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_depth: 64, max_nodes: 200_000, allow_contraction_copies: 2 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    Base(Derivation),
    Focused(FocusedDerivation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(Proof, SearchStats),
    Refuted(SearchStats),
    BoundHit(SearchStats),
}

impl SearchOutcome {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            SearchOutcome::Proved(..) => OutcomeKind::Proved,
            SearchOutcome::Refuted(_) => OutcomeKind::Refuted,
            SearchOutcome::BoundHit(_) => OutcomeKind::BoundHit,
        }
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            SearchOutcome::Proved(_, s) | SearchOutcome::Refuted(s) | SearchOutcome::BoundHit(s) => *s,
        }
    }
}

type CopyKey = (Side, Formula);

struct Alt<G, S> {
    step: S,
    premises: Vec<G>,
    /// Formula whose per-branch copy count this step spends.
    spends: Option<CopyKey>,
    /// The step is a weakened stand-in for one the copy cap forbade.
    degraded: bool,
}

struct Tree<G, S> {
    goal: G,
    step: S,
    children: Vec<Tree<G, S>>,
}

/// `Err(true)` is a failure under a cut branch, `Err(false)` a clean one.
type Found<G, S> = Result<Tree<G, S>, bool>;

struct Engine<G> {
    bounds: SearchBounds,
    stats: SearchStats,
    failed: Option<BTreeSet<G>>,
    out_of_nodes: bool,
}

impl<G: Clone + Ord> Engine<G> {
    fn new(bounds: SearchBounds, memo: bool) -> Self {
        Engine { bounds, stats: SearchStats::default(), failed: memo.then(BTreeSet::new), out_of_nodes: false }
    }

    /// `expand` returns the alternatives at a goal and whether the copy cap
    /// removed any.
    fn run<S, F>(&mut self, goal: &G, expand: &F) -> Found<G, S>
    where
        F: Fn(&G, &BTreeMap<CopyKey, usize>) -> (Vec<Alt<G, S>>, bool),
    {
        self.go(goal, 0, &mut Vec::new(), &mut BTreeMap::new(), expand)
    }

    fn go<S, F>(
        &mut self,
        goal: &G,
        depth: usize,
        ancestors: &mut Vec<G>,
        copies: &mut BTreeMap<CopyKey, usize>,
        expand: &F,
    ) -> Found<G, S>
    where
        F: Fn(&G, &BTreeMap<CopyKey, usize>) -> (Vec<Alt<G, S>>, bool),
    {
        if self.failed.as_ref().is_some_and(|m| m.contains(goal)) || ancestors.contains(goal) {
            return Err(false);
        }
        if depth > self.bounds.max_depth || self.stats.nodes >= self.bounds.max_nodes {
            self.out_of_nodes |= self.stats.nodes >= self.bounds.max_nodes;
            return Err(true);
        }
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let (alts, capped) = expand(goal, copies);
        let mut cut = capped;
        ancestors.push(goal.clone());
        let mut found = None;
        'alts: for alt in alts {
            if let Some(k) = &alt.spends {
                *copies.entry(k.clone()).or_default() += 1;
            }
            let mut children = Vec::new();
            let mut ok = true;
            for p in &alt.premises {
                match self.go(p, depth + 1, ancestors, copies, expand) {
                    Ok(t) => children.push(t),
                    Err(c) => {
                        cut |= c || alt.degraded;
                        ok = false;
                        break;
                    }
                }
            }
            if let Some(k) = &alt.spends {
                *copies.get_mut(k).unwrap() -= 1;
            }
            if ok {
                found = Some(Tree { goal: goal.clone(), step: alt.step, children });
                break 'alts;
            }
            if self.out_of_nodes {
                break;
            }
        }
        ancestors.pop();
        match found {
            Some(t) => Ok(t),
            None => {
                if !cut {
                    if let Some(m) = self.failed.as_mut() {
                        m.insert(goal.clone());
                    }
                }
                Err(cut)
            }
        }
    }
}

fn finish<G, S, P>(res: Found<G, S>, stats: SearchStats, build: impl Fn(Tree<G, S>) -> P, wrap: impl Fn(P) -> Proof) -> SearchOutcome {
    match res {
        Ok(t) => SearchOutcome::Proved(wrap(build(t)), stats),
        Err(true) => SearchOutcome::BoundHit(stats),
        Err(false) => SearchOutcome::Refuted(stats),
    }
}

/// Backward search in the base calculus: initial first, then every logical
/// rule instance, then contraction within the copy cap.
pub fn prove(calc: &CalculusSpec, s: &Sequent, b: &SearchBounds) -> SearchOutcome {
    let init = calc.rule("init");
    let mut rules: Vec<&RuleSchema> = calc.logical.iter().collect();
    rules.sort_by(|x, y| x.name.cmp(&y.name));
    let contractions: Vec<(Side, RuleSchema)> =
        Side::BOTH.into_iter().filter(|&sd| calc.structural.contraction(sd)).map(|sd| (sd, RuleSchema::contraction(sd))).collect();
    let expand = |g: &Sequent, copies: &BTreeMap<CopyKey, usize>| -> (Vec<Alt<Sequent, Instance>>, bool) {
        let mut alts = Vec::new();
        if let Some(init) = &init {
            if let Some(i) = instances(calc, init, g).into_iter().next() {
                alts.push(Alt { step: i, premises: Vec::new(), spends: None, degraded: false });
                return (alts, false);
            }
        }
        for r in &rules {
            for i in instances(calc, r, g) {
                if let Ok(premises) = apply_rule(r, g, &i) {
                    alts.push(Alt { step: i, premises, spends: None, degraded: false });
                }
            }
        }
        let mut capped = false;
        for (side, c) in &contractions {
            let mut seen: Vec<&Formula> = g.side(*side).iter().collect();
            seen.dedup();
            for f in seen {
                let key = (*side, f.clone());
                if copies.get(&key).copied().unwrap_or(0) >= b.allow_contraction_copies {
                    capped = true;
                    continue;
                }
                let Some(i) = instances_on(calc, c, g, *side, f).into_iter().next() else { continue };
                if let Ok(premises) = apply_rule(c, g, &i) {
                    alts.push(Alt { step: i, premises, spends: Some(key), degraded: false });
                }
            }
        }
        (alts, capped)
    };
    let mut e = Engine::new(*b, !calc.structural.any_contraction());
    let res = e.run(s, &expand);
    finish(res, e.stats, base_tree, Proof::Base)
}

fn base_tree(t: Tree<Sequent, Instance>) -> Derivation {
    Derivation::node(t.goal, t.step, t.children.into_iter().map(base_tree).collect())
}

/// Search in a focused calculus from the neutral lifting of `s`, following
/// [`FocusedCalculus::moves`]. A copying selection past the cap is replaced
/// by a non-copying one, and failure below it counts as a bound hit.
pub fn prove_focused(fc: &FocusedCalculus, s: &Sequent, b: &SearchBounds) -> SearchOutcome {
    let expand = |g: &FocusedSequent, copies: &BTreeMap<CopyKey, usize>| -> (Vec<Alt<FocusedSequent, FocusedStep>>, bool) {
        let alts = fc
            .moves(g)
            .into_iter()
            .map(|(step, premises)| match &step {
                FocusedStep::Select { side, formula, copy: true } => {
                    let key = (*side, formula.clone());
                    if copies.get(&key).copied().unwrap_or(0) < b.allow_contraction_copies {
                        return Alt { step, premises, spends: Some(key), degraded: false };
                    }
                    let weaker = FocusedStep::Select { side: *side, formula: formula.clone(), copy: false };
                    let premises = fc.check_step(g, &weaker).expect("a copying selection also applies without the copy");
                    Alt { step: weaker, premises, spends: None, degraded: true }
                }
                _ => Alt { step, premises, spends: None, degraded: false },
            })
            .collect();
        (alts, false)
    };
    let mut e = Engine::new(*b, !fc.base.structural.any_contraction());
    let res = e.run(&FocusedSequent::neutral(s.clone()), &expand);
    finish(res, e.stats, focused_tree, Proof::Focused)
}

fn focused_tree(t: Tree<FocusedSequent, FocusedStep>) -> FocusedDerivation {
    FocusedDerivation { sequent: t.goal, step: Some(t.step), children: t.children.into_iter().map(focused_tree).collect() }
}

#[cfg(test)]
mod tests;
