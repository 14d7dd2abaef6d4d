use std::collections::{BTreeMap, BTreeSet};

use super::formula::{Formula, Pattern};
use super::sequent::{Item, Sequent, SequentPattern, Side, Substitution};

/// Every way to split the multiset `items` (sorted) into `k` ordered parts.
/// Parts are sorted and the result contains no duplicates.
pub fn distribute<T: Clone + Ord>(items: &[T], k: usize) -> Vec<Vec<Vec<T>>> {
    if k == 0 {
        return if items.is_empty() { vec![vec![]] } else { vec![] };
    }
    // group equal items
    let mut groups: Vec<(&T, usize)> = Vec::new();
    for it in items {
        match groups.last_mut() {
            Some((g, n)) if *g == it => *n += 1,
            _ => groups.push((it, 1)),
        }
    }
    let mut out = Vec::new();
    let mut parts: Vec<Vec<T>> = vec![Vec::new(); k];
    distribute_groups(&groups, 0, &mut parts, &mut out);
    out
}

fn distribute_groups<T: Clone + Ord>(
    groups: &[(&T, usize)],
    gi: usize,
    parts: &mut Vec<Vec<T>>,
    out: &mut Vec<Vec<Vec<T>>>,
) {
    if gi == groups.len() {
        out.push(parts.clone());
        return;
    }
    let (item, count) = groups[gi];
    compositions(count, parts.len(), &mut Vec::new(), &mut |counts| {
        for (p, &c) in parts.iter_mut().zip(counts) {
            p.extend(std::iter::repeat_n(item.clone(), c));
        }
        distribute_groups(groups, gi + 1, parts, out);
        for (p, &c) in parts.iter_mut().zip(counts) {
            p.truncate(p.len() - c);
        }
    });
}

fn compositions(n: usize, k: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if acc.len() + 1 == k {
        acc.push(n);
        f(acc);
        acc.pop();
        return;
    }
    for c in 0..=n {
        acc.push(c);
        compositions(n - c, k, acc, f);
        acc.pop();
    }
}

/// All substitutions under which `pattern` instantiates to `target`.
///
/// Formula schemas are matched against distinct occurrences; whatever is
/// left on a side is split among that side's context variables. The
/// result is sorted and duplicate-free.
pub fn match_sequent(pattern: &SequentPattern, target: &Sequent) -> Vec<Substitution> {
    let mut slots: Vec<(Side, &Pattern)> = Vec::new();
    for side in Side::BOTH {
        for item in pattern.side(side) {
            if let Item::Formula { pattern, .. } = item {
                slots.push((side, pattern));
            }
        }
    }
    let mut used = [vec![false; target.left().len()], vec![false; target.right().len()]];
    let mut results = BTreeSet::new();
    assign(pattern, target, &slots, 0, &mut used, BTreeMap::new(), &mut results);
    results.into_iter().collect()
}

fn side_ix(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

fn assign(
    pattern: &SequentPattern,
    target: &Sequent,
    slots: &[(Side, &Pattern)],
    k: usize,
    used: &mut [Vec<bool>; 2],
    bindings: BTreeMap<String, Formula>,
    results: &mut BTreeSet<Substitution>,
) {
    if k == slots.len() {
        finish(pattern, target, used, bindings, results);
        return;
    }
    let (side, pat) = slots[k];
    let formulas = target.side(side);
    let si = side_ix(side);
    for i in 0..formulas.len() {
        if used[si][i] {
            continue;
        }
        // equal neighbours give the same result; try the first unused one only
        if i > 0 && formulas[i - 1] == formulas[i] && !used[si][i - 1] {
            continue;
        }
        let mut b = bindings.clone();
        if pat.unify(&formulas[i], &mut b) {
            used[si][i] = true;
            assign(pattern, target, slots, k + 1, used, b, results);
            used[si][i] = false;
        }
    }
}

fn finish(
    pattern: &SequentPattern,
    target: &Sequent,
    used: &[Vec<bool>; 2],
    bindings: BTreeMap<String, Formula>,
    results: &mut BTreeSet<Substitution>,
) {
    let mut per_side = Vec::new();
    for side in Side::BOTH {
        let rest: Vec<Formula> = target
            .side(side)
            .iter()
            .zip(&used[side_ix(side)])
            .filter(|(_, u)| !**u)
            .map(|(f, _)| f.clone())
            .collect();
        let vars: Vec<&str> = pattern.context_vars(side).collect();
        let splits = distribute(&rest, vars.len());
        if splits.is_empty() {
            return;
        }
        per_side.push((vars, splits));
    }
    let (lv, ls) = &per_side[0];
    let (rv, rs) = &per_side[1];
    for l in ls {
        for r in rs {
            let mut s = Substitution { formulas: bindings.clone(), contexts: BTreeMap::new() };
            for (v, c) in lv.iter().zip(l).chain(rv.iter().zip(r)) {
                s.bind_context(v, c.clone());
            }
            results.insert(s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::formula::Pattern as P;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn distribute_dedupes_equal_items() {
        let items = vec![a("a"), a("a")];
        // {a,a} into two parts: (aa|), (a|a), (|aa)
        assert_eq!(distribute(&items, 2).len(), 3);
        assert_eq!(distribute(&items, 1).len(), 1);
        assert!(distribute(&items, 0).is_empty());
        assert_eq!(distribute::<Formula>(&[], 0).len(), 1);
    }

    #[test]
    fn conjunction_left_unique_decomposition() {
        // Γ, [A ∧ B] ⊢ C  against  a ∧ b, c ⊢ d
        let p = SequentPattern::new(
            vec![Item::Ctx("Γ".into()), Item::marked(P::compound("and", vec![P::meta("A"), P::meta("B")]))],
            vec![Item::Formula { pattern: P::meta("C"), marked: false }],
        );
        let s = Sequent::new(vec![Formula::compound("and", vec![a("a"), a("b")]), a("c")], vec![a("d")]);
        let m = match_sequent(&p, &s);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].formulas["A"], a("a"));
        assert_eq!(m[0].formulas["B"], a("b"));
        assert_eq!(m[0].formulas["C"], a("d"));
        assert_eq!(m[0].contexts["Γ"], vec![a("c")]);
    }

    #[test]
    fn lone_context_absorbs_left() {
        // Γ ⊢ A against a, b ⊢ a
        let p = SequentPattern::new(
            vec![Item::Ctx("Γ".into())],
            vec![Item::Formula { pattern: P::meta("A"), marked: false }],
        );
        let s = Sequent::new(vec![a("a"), a("b")], vec![a("a")]);
        let m = match_sequent(&p, &s);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].contexts["Γ"], vec![a("a"), a("b")]);
    }

    #[test]
    fn repeated_occurrences_collapse() {
        // Γ, A ⊢ Δ against a, a ⊢ b
        let p = SequentPattern::new(
            vec![Item::Ctx("Γ".into()), Item::marked(P::meta("A"))],
            vec![Item::Ctx("Δ".into())],
        );
        let s = Sequent::new(vec![a("a"), a("a")], vec![a("b")]);
        let m = match_sequent(&p, &s);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].contexts["Γ"], vec![a("a")]);
        assert_eq!(m[0].contexts["Δ"], vec![a("b")]);
    }

    #[test]
    fn no_context_requires_exact_fit() {
        let p = SequentPattern::new(vec![Item::marked(P::meta("A"))], vec![Item::marked(P::meta("A"))]);
        assert_eq!(match_sequent(&p, &Sequent::new(vec![a("a")], vec![a("a")])).len(), 1);
        assert!(match_sequent(&p, &Sequent::new(vec![a("a")], vec![a("b")])).is_empty());
        assert!(match_sequent(&p, &Sequent::new(vec![a("a"), a("c")], vec![a("a")])).is_empty());
    }
}
