//! Permutation graphs, their cliques and focusable bipartitions.

use std::collections::{BTreeMap, BTreeSet};

use crate::kernel::{CalculusSpec, ContextMode, RuleSchema};
use crate::permcheck::{permutes_up, CheckOptions, PermResult, Verdict};

/// Needed (upper, lower) edges: all of them, or the missing ones.
pub type Hierarchy = Result<Vec<(String, String)>, Vec<(String, String)>>;

pub type RuleSet = BTreeSet<String>;

#[derive(Clone, Debug)]
pub struct PermutationGraph {
    pub calculus: String,
    /// Logical rule names, sorted.
    pub vertices: Vec<String>,
    /// `(a, b)` when `a` permutes up `b`. Includes loops.
    pub edges: BTreeSet<(String, String)>,
    pub verdicts: BTreeMap<(String, String), PermResult>,
}

impl PermutationGraph {
    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&(a.to_string(), b.to_string()))
    }

    pub fn unknown_pairs(&self) -> Vec<(String, String)> {
        self.verdicts
            .iter()
            .filter(|(_, r)| matches!(r.verdict, Verdict::Unknown(_)))
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Banner for any output derived from a graph with undecided pairs.
    pub fn warning(&self) -> Option<String> {
        let u = self.unknown_pairs();
        if u.is_empty() {
            return None;
        }
        let list: Vec<String> = u.iter().map(|(a, b)| format!("{}/{}", a, b)).collect();
        Some(format!("WARNING: {} undecided pair(s) treated as non-edges: {}", u.len(), list.join(", ")))
    }

    pub fn verdict(&self, a: &str, b: &str) -> Option<&PermResult> {
        self.verdicts.get(&(a.to_string(), b.to_string()))
    }
}

/// Checks every ordered pair of logical rules, loops included. Pairs are
/// spread over threads; the result does not depend on scheduling.
pub fn build_permutation_graph(calc: &CalculusSpec, opts: &CheckOptions) -> PermutationGraph {
    let vertices = calc.logical_names();
    let rules: BTreeMap<&str, &RuleSchema> = calc.logical.iter().map(|r| (r.name.as_str(), r)).collect();
    let pairs: Vec<(String, String)> = vertices
        .iter()
        .flat_map(|a| vertices.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).clamp(1, 8);
    let chunk = pairs.len().div_ceil(threads).max(1);
    let results: Vec<((String, String), PermResult)> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                let rules = &rules;
                s.spawn(move || {
                    part.iter()
                        .map(|(a, b)| ((a.clone(), b.clone()), permutes_up(calc, rules[a.as_str()], rules[b.as_str()], opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("permutation check panicked")).collect()
    });
    let verdicts: BTreeMap<_, _> = results.into_iter().collect();
    let edges = verdicts.iter().filter(|(_, r)| r.verdict.holds()).map(|(k, _)| k.clone()).collect();
    PermutationGraph { calculus: calc.name.clone(), vertices, edges, verdicts }
}

/// Undirected graph without loops; edges stored as `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    pub vertices: Vec<String>,
    pub edges: BTreeSet<(String, String)>,
}

impl UndirectedGraph {
    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        let k = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.edges.contains(&k)
    }

    /// Each edge in both directions.
    pub fn directed_edges(&self) -> BTreeSet<(String, String)> {
        self.edges.iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())]).collect()
    }

    fn neighbours(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut n: BTreeMap<&str, BTreeSet<&str>> = self.vertices.iter().map(|v| (v.as_str(), BTreeSet::new())).collect();
        for (a, b) in &self.edges {
            n.entry(a).or_default().insert(b);
            n.entry(b).or_default().insert(a);
        }
        n
    }
}

/// Keeps the pairs present in both directions.
pub fn mutual_pairs(vertices: &[String], edges: &BTreeSet<(String, String)>) -> UndirectedGraph {
    let kept = edges
        .iter()
        .filter(|(a, b)| a < b && edges.contains(&(b.clone(), a.clone())))
        .cloned()
        .collect();
    UndirectedGraph { vertices: vertices.to_vec(), edges: kept }
}

pub fn symmetrize(g: &PermutationGraph) -> UndirectedGraph {
    mutual_pairs(&g.vertices, &g.edges)
}

/// All maximal cliques (Bron-Kerbosch with pivoting), each sorted, the
/// list in lexicographic order.
pub fn maximal_cliques(u: &UndirectedGraph) -> Vec<RuleSet> {
    let n = u.neighbours();
    let mut out = Vec::new();
    let p: BTreeSet<&str> = u.vertices.iter().map(String::as_str).collect();
    bron_kerbosch(&n, BTreeSet::new(), p, BTreeSet::new(), &mut out);
    let mut sorted: Vec<Vec<String>> = out.into_iter().map(|c| c.into_iter().collect()).collect();
    sorted.sort();
    sorted.into_iter().map(|c| c.into_iter().collect()).collect()
}

fn bron_kerbosch<'a>(
    n: &BTreeMap<&'a str, BTreeSet<&'a str>>,
    r: BTreeSet<&'a str>,
    mut p: BTreeSet<&'a str>,
    mut x: BTreeSet<&'a str>,
    out: &mut Vec<BTreeSet<String>>,
) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            out.push(r.iter().map(|s| s.to_string()).collect());
        }
        return;
    }
    let pivot = *p.union(&x).max_by_key(|v| (n[*v].intersection(&p).count(), std::cmp::Reverse(**v))).unwrap();
    let candidates: Vec<&str> = p.difference(&n[pivot]).copied().collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.insert(v);
        let p2 = p.intersection(&n[v]).copied().collect();
        let x2 = x.intersection(&n[v]).copied().collect();
        bron_kerbosch(n, r2, p2, x2, out);
        p.remove(v);
        x.insert(v);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PermutationPartition {
    pub components: Vec<RuleSet>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PartitionOptions {
    /// Also emit partitions that complete a clique pair with singleton
    /// components for rules neither clique covers.
    pub singletons: bool,
}

/// Ordered bipartitions built from two cliques that together cover every
/// rule, each shared rule assigned to exactly one side; both sides must
/// stay nonempty.
pub fn enumerate_partitions(
    vertices: &[String],
    cliques: &[RuleSet],
    opts: PartitionOptions,
) -> Vec<PermutationPartition> {
    let all: RuleSet = vertices.iter().cloned().collect();
    let mut out = BTreeSet::new();
    for (i, a) in cliques.iter().enumerate() {
        for (j, b) in cliques.iter().enumerate() {
            if i == j {
                continue;
            }
            let covered: RuleSet = a.union(b).cloned().collect();
            let rest: Vec<String> = all.difference(&covered).cloned().collect();
            if !rest.is_empty() && !opts.singletons {
                continue;
            }
            let shared: Vec<&String> = a.intersection(b).collect();
            for mask in 0u64..(1u64 << shared.len()) {
                let (mut c1, mut c2) = (a.clone(), b.clone());
                for (k, v) in shared.iter().enumerate() {
                    if mask & (1 << k) == 0 {
                        c2.remove(*v);
                    } else {
                        c1.remove(*v);
                    }
                }
                if c1.is_empty() || c2.is_empty() {
                    continue;
                }
                let mut components = vec![c1, c2];
                components.extend(rest.iter().map(|r| std::iter::once(r.clone()).collect()));
                out.insert(PermutationPartition { components });
            }
        }
    }
    out.into_iter().collect()
}

/// Does `lower` sit below `upper` in the hierarchy: every rule of `upper`
/// permutes up every rule of `lower`? On success, the edges used.
pub fn hierarchy_edges(g: &PermutationGraph, lower: &RuleSet, upper: &RuleSet) -> Hierarchy {
    let needed: Vec<(String, String)> =
        upper.iter().flat_map(|u| lower.iter().map(move |l| (u.clone(), l.clone()))).collect();
    let missing: Vec<_> = needed.iter().filter(|e| !g.edges.contains(e)).cloned().collect();
    if missing.is_empty() {
        Ok(needed)
    } else {
        Err(missing)
    }
}

/// Ordered component index pairs `(i, j)` with component `i` below `j`.
pub fn hierarchy(p: &PermutationPartition, g: &PermutationGraph) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, a) in p.components.iter().enumerate() {
        for (j, b) in p.components.iter().enumerate() {
            if hierarchy_edges(g, a, b).is_ok() {
                out.insert((i, j));
            }
        }
    }
    out
}

/// How one positive rule fares against the shape conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleConditions {
    pub rule: String,
    pub max_aux_per_premise: usize,
    pub mode: ContextMode,
}

impl RuleConditions {
    pub fn single_aux(&self) -> bool {
        self.max_aux_per_premise <= 1
    }

    pub fn splits_context(&self) -> bool {
        self.mode != ContextMode::Additive
    }

    pub fn ok(&self) -> bool {
        self.single_aux() && self.splits_context()
    }
}

/// Full breakdown of the focusability conditions for `(negative, positive)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusableCheck {
    pub negative: RuleSet,
    pub positive: RuleSet,
    pub hierarchy: Hierarchy,
    pub rules: Vec<RuleConditions>,
}

impl FocusableCheck {
    pub fn ok(&self) -> bool {
        self.hierarchy.is_ok() && self.rules.iter().all(RuleConditions::ok)
    }

    pub fn single_aux_ok(&self) -> bool {
        self.rules.iter().all(RuleConditions::single_aux)
    }

    pub fn splits_ok(&self) -> bool {
        self.rules.iter().all(RuleConditions::splits_context)
    }
}

pub fn check_focusable(calc: &CalculusSpec, g: &PermutationGraph, negative: &RuleSet, positive: &RuleSet) -> FocusableCheck {
    let rules = positive
        .iter()
        .filter_map(|n| calc.logical.iter().find(|r| &r.name == n))
        .map(|r| RuleConditions { rule: r.name.clone(), max_aux_per_premise: r.max_aux_per_premise(), mode: r.context_mode() })
        .collect();
    FocusableCheck {
        negative: negative.clone(),
        positive: positive.clone(),
        hierarchy: hierarchy_edges(g, negative, positive),
        rules,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusableBipartition {
    pub negative: RuleSet,
    pub positive: RuleSet,
    /// Edges `(positive, negative)` confirming the hierarchy.
    pub hierarchy_witness: Vec<(String, String)>,
    pub conditions: Vec<RuleConditions>,
}

impl FocusableBipartition {
    /// Builds the bipartition if it passes every condition.
    pub fn new(calc: &CalculusSpec, g: &PermutationGraph, negative: &RuleSet, positive: &RuleSet) -> Result<Self, FocusableCheck> {
        let all: RuleSet = g.vertices.iter().cloned().collect();
        let covered: RuleSet = negative.union(positive).cloned().collect();
        let check = check_focusable(calc, g, negative, positive);
        if !check.ok() || covered != all || !negative.is_disjoint(positive) {
            return Err(check);
        }
        let FocusableCheck { negative, positive, hierarchy, rules } = check;
        Ok(FocusableBipartition { negative, positive, hierarchy_witness: hierarchy.unwrap(), conditions: rules })
    }
}

/// Every candidate bipartition with its breakdown, passing or not.
pub fn candidate_bipartitions(calc: &CalculusSpec, g: &PermutationGraph) -> Vec<FocusableCheck> {
    let cliques = maximal_cliques(&symmetrize(g));
    enumerate_partitions(&g.vertices, &cliques, PartitionOptions::default())
        .into_iter()
        .filter(|p| p.components.len() == 2)
        .map(|p| check_focusable(calc, g, &p.components[0], &p.components[1]))
        .collect()
}

pub fn focusable_partitions(calc: &CalculusSpec, g: &PermutationGraph) -> Vec<FocusableBipartition> {
    candidate_bipartitions(calc, g)
        .into_iter()
        .filter_map(|c| FocusableBipartition::new(calc, g, &c.negative, &c.positive).ok())
        .collect()
}

/// Graphviz rendering: mutual pairs as one double-headed edge, edges that
/// hold only vacuously dashed.
pub fn to_dot(g: &PermutationGraph) -> String {
    to_dot_partitioned(g, None)
}

/// As [`to_dot`], labelling each vertex with its component when a
/// bipartition is given.
pub fn to_dot_partitioned(g: &PermutationGraph, bp: Option<&FocusableBipartition>) -> String {
    let vac = |a: &str, b: &str| g.verdict(a, b).is_some_and(|r| r.verdict == Verdict::HoldsVacuously);
    let mut out = format!("digraph \"{}\" {{\n", g.calculus);
    for v in &g.vertices {
        let comp = bp.and_then(|bp| {
            if bp.negative.contains(v) {
                Some("negative")
            } else if bp.positive.contains(v) {
                Some("positive")
            } else {
                None
            }
        });
        match comp {
            Some(c) => out.push_str(&format!("  \"{v}\" [xlabel=\"{c}\", class=\"{c}\"];\n")),
            None => out.push_str(&format!("  \"{}\";\n", v)),
        }
    }
    for (a, b) in &g.edges {
        let back = g.has_edge(b, a);
        if back && b < a {
            continue;
        }
        let mut attrs = Vec::new();
        if back && a != b {
            attrs.push("dir=both");
        }
        if vac(a, b) && (!back || vac(b, a)) {
            attrs.push("style=dashed");
        }
        let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
        out.push_str(&format!("  \"{}\" -> \"{}\"{};\n", a, b, attrs));
    }
    out.push_str("}\n");
    out
}
