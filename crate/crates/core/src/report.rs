//! Line-oriented `key: value` reports with a version header.
//!
//! Every builder here walks sorted collections only, so equal inputs give
//! byte-identical text.

use crate::focusgen::{ContractionReport, FocusedCalculus, Phase};
use crate::graph::{FocusableCheck, PermutationGraph, RuleSet};
use crate::kernel::{CalculusSpec, Printer};
use crate::permcheck::{PermResult, Verdict};
use crate::search::{OutcomeKind, Proof, SearchOutcome, ValidationReport};

pub const HEADER: &str = "focal-report v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { lines: vec![("command".into(), command.into())] }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn all(&self, key: &str) -> Vec<&str> {
        self.lines.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

fn words(s: &RuleSet) -> String {
    s.iter().cloned().collect::<Vec<_>>().join(" ")
}

pub fn verdict_report(calc: &CalculusSpec, lower: &str, upper: &str, r: &PermResult) -> Report {
    let p = calc.printer();
    let mut rep = Report::new("check");
    rep.field("calculus", &calc.name).field("lower", lower).field("upper", upper);
    rep.field("verdict", r.verdict.label()).field("relaxed", r.relaxed).field("budget-used", r.budget_used);
    match &r.verdict {
        Verdict::Holds(ws) => {
            rep.field("witnesses", ws.len());
            for w in ws {
                rep.field("witness.end", w.template.end_sequent().show(p));
                rep.field("witness.template", w.template.derivation.rule_names().join(" "));
                rep.field("witness.reordered", w.reordered.rule_names().join(" "));
            }
        }
        Verdict::Fails(t) => {
            rep.field("counter.end", t.end_sequent().show(p));
            rep.field("counter.position", &t.position);
            for l in t.open_leaves() {
                rep.field("counter.leaf", l.show(p));
            }
        }
        Verdict::Unknown(why) => {
            rep.field("reason", why);
        }
        Verdict::HoldsVacuously => {}
    }
    rep
}

pub fn graph_report(g: &PermutationGraph) -> Report {
    let mut rep = Report::new("graph");
    rep.field("calculus", &g.calculus).field("vertices", g.vertices.join(" "));
    rep.field("edges", g.edges.len());
    for ((a, b), r) in &g.verdicts {
        let tag = if g.edges.contains(&(a.clone(), b.clone())) { "edge" } else { "no-edge" };
        rep.field(tag, format!("{a} {b} {}{}", r.verdict.label(), if r.relaxed { " relaxed" } else { "" }));
    }
    if let Some(w) = g.warning() {
        rep.field("warning", w);
    }
    rep
}

pub fn cliques_report(g: &PermutationGraph, cliques: &[RuleSet]) -> Report {
    let mut rep = Report::new("cliques");
    rep.field("calculus", &g.calculus).field("count", cliques.len());
    for c in cliques {
        rep.field("clique", words(c));
    }
    if let Some(w) = g.warning() {
        rep.field("warning", w);
    }
    rep
}

/// `checks` in enumeration order; the index is what `--partition` takes.
pub fn partitions_report(calc: &CalculusSpec, checks: &[FocusableCheck], all: bool) -> Report {
    let mut rep = Report::new("partitions");
    rep.field("calculus", &calc.name);
    rep.field("focusable", checks.iter().filter(|c| c.ok()).count());
    for (i, c) in checks.iter().enumerate() {
        if !all && !c.ok() {
            continue;
        }
        let key = |k: &str| format!("partition.{i}.{k}");
        rep.field(key("negative"), words(&c.negative)).field(key("positive"), words(&c.positive));
        match &c.hierarchy {
            Ok(_) => rep.field(key("hierarchy"), "ok"),
            Err(missing) => {
                let m: Vec<String> = missing.iter().map(|(u, l)| format!("{u}/{l}")).collect();
                rep.field(key("hierarchy"), format!("missing {}", m.join(" ")))
            }
        };
        rep.field(key("single-auxiliary"), c.single_aux_ok()).field(key("splits-context"), c.splits_ok());
        rep.field(key("focusable"), c.ok());
    }
    rep
}

/// One line per phase, e.g. `positive phase: NOT admissible (and_a_l, or_a_r)`.
pub fn phase_summary(report: &ContractionReport, phase: Phase) -> String {
    if report.admissible(phase) {
        format!("{} phase: admissible", phase.as_str())
    } else {
        format!("{} phase: NOT admissible ({})", phase.as_str(), report.failing(phase).join(", "))
    }
}

pub fn contraction_report(calc: &CalculusSpec, report: &ContractionReport) -> Report {
    let mut rep = Report::new("contraction");
    rep.field("calculus", &calc.name);
    for phase in Phase::BOTH {
        rep.field(format!("{}.admissible", phase.as_str()), report.admissible(phase));
        rep.field(format!("{}.failing", phase.as_str()), report.failing(phase).join(" "));
    }
    for e in &report.entries {
        for (rule, up, up_c) in &e.failures {
            rep.field("failure", format!("{} {} {rule} up={up} up-c={up_c}", e.phase.as_str(), e.contraction));
        }
    }
    for phase in Phase::BOTH {
        rep.field("summary", phase_summary(report, phase));
    }
    rep
}

pub fn prove_report(system: &str, sequent: &str, out: &SearchOutcome, p: Printer<'_>) -> Report {
    let mut rep = Report::new("prove");
    let st = out.stats();
    rep.field("system", system).field("sequent", sequent).field("outcome", out.kind());
    rep.field("nodes", st.nodes).field("max-depth", st.max_depth);
    match out {
        SearchOutcome::Proved(Proof::Base(d), _) => {
            rep.field("size", d.size());
            for line in d.show(p).lines() {
                rep.field("proof", line);
            }
        }
        SearchOutcome::Proved(Proof::Focused(d), _) => {
            rep.field("size", d.size());
            for line in d.show(p).lines() {
                rep.field("proof", line);
            }
        }
        _ => {}
    }
    rep
}

pub fn validation_report(fc: &FocusedCalculus, r: &ValidationReport) -> Report {
    let mut rep = Report::new("validate");
    rep.field("calculus", &fc.base.name).field("focused", &fc.name);
    rep.field("negative", words(&fc.bipartition.negative)).field("positive", words(&fc.bipartition.positive));
    rep.field("sequents", r.rows.len());
    for (name, focused) in [("base", false), ("focused", true)] {
        for k in [OutcomeKind::Proved, OutcomeKind::Refuted, OutcomeKind::BoundHit] {
            rep.field(format!("{name}.{k}"), r.count(focused, k));
        }
    }
    let (bn, fnodes) = r.total_nodes();
    rep.field("nodes.base", bn).field("nodes.focused", fnodes);
    rep.field("focused-no-larger", format!("{}/{}", r.focused_no_larger(), r.rows.len()));
    rep.field("focused-proofs", r.focused_proofs());
    rep.field("erasure-failures", r.erasure_failures().len());
    rep.field("base-proof-failures", r.base_proof_failures().len());
    rep.field("bound-hits", r.bound_hits().len());
    rep.field("mismatches", r.mismatches().len());
    for i in r.mismatches() {
        let row = &r.rows[i];
        rep.field("mismatch", format!("{} base={} focused={}", row.sequent, row.base, row.focused));
    }
    for i in r.bound_hits() {
        let row = &r.rows[i];
        rep.field("bound-hit", format!("{} base={} focused={}", row.sequent, row.base, row.focused));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_has_header_and_order() {
        let mut r = Report::new("x");
        r.field("b", 2).field("a", "one");
        assert_eq!(r.render(), "focal-report v1\ncommand: x\nb: 2\na: one\n");
        assert_eq!(r.get("a"), Some("one"));
        assert_eq!(r.all("missing"), Vec::<&str>::new());
    }
}
