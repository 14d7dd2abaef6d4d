use super::*;
use crate::dsl::{builtin, parse_sequent};
use crate::focusgen::{contraction_phase_admissibility, erase_focus, generate_focused, validate_focused};
use crate::graph::{build_permutation_graph, FocusableBipartition};
use crate::kernel::validate_derivation;
use crate::permcheck::CheckOptions;

fn seq(calc: &CalculusSpec, s: &str) -> Sequent {
    parse_sequent(calc, s).unwrap()
}

fn focused(calc: &CalculusSpec, neg: &[&str], pos: &[&str]) -> FocusedCalculus {
    let opts = CheckOptions::default();
    let g = build_permutation_graph(calc, &opts);
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    let bp = FocusableBipartition::new(calc, &g, &set(neg), &set(pos)).unwrap();
    generate_focused(calc, &bp, &contraction_phase_admissibility(calc, &bp, &opts)).unwrap()
}

fn mallf(calc: &CalculusSpec) -> FocusedCalculus {
    focused(calc, &["par_r", "tensor_l", "with_r", "plus_l"], &["tensor_r", "par_l", "plus_r", "with_l"])
}

#[test]
fn identity_is_initial() {
    let mall = builtin("mall").unwrap();
    let SearchOutcome::Proved(Proof::Base(d), _) = prove(&mall, &seq(&mall, "a ⊢ a"), &SearchBounds::default()) else { panic!() };
    assert_eq!(d.rule_names(), vec!["init"]);
}

#[test]
fn tensor_both_sides() {
    let mall = builtin("mall").unwrap();
    let b = SearchBounds { max_depth: 4, ..Default::default() };
    let SearchOutcome::Proved(Proof::Base(d), _) = prove(&mall, &seq(&mall, "a ⊗ b ⊢ a ⊗ b"), &b) else { panic!() };
    validate_derivation(&mall, &d).unwrap();
    let mut names = d.rule_names();
    names.sort();
    assert_eq!(names, vec!["init", "init", "tensor_l", "tensor_r"]);
}

#[test]
fn plus_without_premises_refuted() {
    let mall = builtin("mall").unwrap();
    assert!(matches!(prove(&mall, &seq(&mall, "⊢ a ⊕ b"), &SearchBounds::default()), SearchOutcome::Refuted(_)));
    let fc = mallf(&mall);
    assert!(matches!(prove_focused(&fc, &seq(&mall, "⊢ a ⊕ b"), &SearchBounds::default()), SearchOutcome::Refuted(_)));
    assert!(matches!(prove_focused(&fc, &seq(&mall, "a ⊢ b"), &SearchBounds::default()), SearchOutcome::Refuted(_)));
}

#[test]
fn focused_proof_erases() {
    let mall = builtin("mall").unwrap();
    let fc = mallf(&mall);
    let s = seq(&mall, "a ⊗ b ⊢ a ⊗ b");
    let SearchOutcome::Proved(Proof::Focused(d), _) = prove_focused(&fc, &s, &SearchBounds::default()) else { panic!() };
    validate_focused(&fc, &d).unwrap();
    assert_eq!(erase_focus(&fc, &d).unwrap().sequent, s);
}

#[test]
fn depth_cut_is_never_refuted() {
    let mall = builtin("mall").unwrap();
    let b = SearchBounds { max_depth: 1, ..Default::default() };
    let out = prove(&mall, &seq(&mall, "a ⊗ b ⊢ b ⊗ a ⊗ a"), &b);
    assert!(matches!(out, SearchOutcome::BoundHit(_)), "{out:?}");
    let b = SearchBounds { max_nodes: 2, ..Default::default() };
    assert!(matches!(prove(&mall, &seq(&mall, "a ⊗ b ⊢ b ⊗ c"), &b), SearchOutcome::BoundHit(_)));
}

#[test]
fn copy_cap_counts_as_bound() {
    // Needs the left atom twice.
    let ljm = builtin("ljm").unwrap();
    let s = seq(&ljm, "a, a → a → b ⊢ b");
    assert!(matches!(prove(&ljm, &s, &SearchBounds::default()), SearchOutcome::Proved(..)));
    let b = SearchBounds { allow_contraction_copies: 0, ..Default::default() };
    assert!(matches!(prove(&ljm, &s, &b), SearchOutcome::BoundHit(_)));
}

#[test]
fn ljm_focused_proofs() {
    let ljm = builtin("ljm").unwrap();
    let fc = focused(&ljm, &["and_l", "or_l", "imp_r", "or_r"], &["and_r", "imp_l"]);
    for goal in ["a, a → a → b ⊢ b", "a ∧ b ⊢ b ∧ a", "a ∨ b ⊢ b ∨ a", "⊢ a → a", "(a → b) → a ⊢ (a → b) → a"] {
        let s = seq(&ljm, goal);
        let SearchOutcome::Proved(Proof::Focused(d), _) = prove_focused(&fc, &s, &SearchBounds::default()) else {
            panic!("{goal}")
        };
        erase_focus(&fc, &d).unwrap();
    }
}

#[test]
fn corpus_shape() {
    let ljm = builtin("ljm").unwrap();
    let p = CorpusParams::new(42, 50, 2);
    let a = gen_corpus(&ljm, &p);
    assert_eq!(a, gen_corpus(&ljm, &p));
    assert_eq!(a.len(), 50);
    assert!(a.iter().all(|s| ljm.respects_arity(s)));
    let flat = gen_corpus(&ljm, &CorpusParams { max_depth: 0, ..p });
    assert!(flat.iter().all(|s| s.left().iter().chain(s.right()).all(Formula::is_atom)));
}

#[test]
fn empty_corpus_empty_report() {
    let mall = builtin("mall").unwrap();
    let r = cross_validate(&mall, &mallf(&mall), &[], &SearchBounds::default());
    assert!(r.rows.is_empty());
    assert_eq!(r.to_csv(), "sequent,base,focused,base_nodes,focused_nodes\n");
}

#[test]
fn small_mall_corpus_agrees() {
    let mall = builtin("mall").unwrap();
    let fc = mallf(&mall);
    let corpus = gen_corpus(&mall, &CorpusParams::new(7, 30, 2));
    let r = cross_validate(&mall, &fc, &corpus, &SearchBounds::default());
    assert!(r.mismatches().is_empty());
    assert!(r.bound_hits().is_empty());
    assert!(r.erasure_failures().is_empty() && r.base_proof_failures().is_empty());
}
