use super::*;
use crate::dsl::{builtin, parse_formula, parse_sequent};
use crate::graph::build_permutation_graph;

fn set(names: &[&str]) -> RuleSet {
    names.iter().map(|s| s.to_string()).collect()
}

fn focused(name: &str, neg: &[&str], pos: &[&str]) -> FocusedCalculus {
    let calc = builtin(name).unwrap();
    let opts = CheckOptions::default();
    let g = build_permutation_graph(&calc, &opts);
    let bp = FocusableBipartition::new(&calc, &g, &set(neg), &set(pos)).expect("focusable");
    let report = contraction_phase_admissibility(&calc, &bp, &opts);
    generate_focused(&calc, &bp, &report).unwrap()
}

fn mallf() -> FocusedCalculus {
    focused("mall", &["par_r", "tensor_l", "with_r", "plus_l"], &["tensor_r", "par_l", "plus_r", "with_l"])
}

fn lkf() -> FocusedCalculus {
    focused("lk", &["and_a_r", "and_m_l", "or_a_l", "or_m_r"], &["and_a_l", "and_m_r", "or_a_r", "or_m_l"])
}

fn ljf() -> FocusedCalculus {
    focused("lj", &["and_a_r", "and_m_l", "imp_r", "or_l"], &["and_a_l", "and_m_r", "imp_l", "or_r"])
}

fn fml(fc: &FocusedCalculus, s: &str) -> Formula {
    parse_formula(&fc.base, s).unwrap()
}

#[test]
fn polarities_follow_components() {
    let fc = mallf();
    assert_eq!(fc.polarity(&fml(&fc, "a ⅋ b"), Side::Right), Polarity::Negative);
    assert_eq!(fc.polarity(&fml(&fc, "a ⊗ b"), Side::Right), Polarity::Positive);
    assert_eq!(fc.polarity(&fml(&fc, "a ⊗ b"), Side::Left), Polarity::Negative);
    assert_eq!(fc.polarity(&fml(&fc, "a"), Side::Left), Polarity::Neutral);
    assert_eq!(fc.name, "mallf");
}

#[test]
fn ambiguous_bipartition_rejected() {
    let calc = builtin("mall").unwrap();
    let bp = FocusableBipartition {
        negative: set(&["par_r", "tensor_l", "with_r", "plus_l", "tensor_r"]),
        positive: set(&["par_l", "plus_r", "with_l"]),
        hierarchy_witness: Vec::new(),
        conditions: Vec::new(),
    };
    assert!(generate_focused(&calc, &bp, &ContractionReport::default()).is_err());
}

#[test]
fn mall_has_no_contraction_entries() {
    let fc = mallf();
    assert!(fc.contraction.entries.is_empty());
    assert!(fc.contraction.admissible(Phase::Negative) && fc.contraction.admissible(Phase::Positive));
    assert!(fc.copy_sides(Phase::Positive).is_empty());
}

#[test]
fn lk_contraction_policy() {
    let fc = lkf();
    assert!(fc.contraction.admissible(Phase::Negative));
    assert!(!fc.contraction.admissible(Phase::Positive));
    assert!(fc.contraction.failing(Phase::Positive).contains(&"and_a_l".to_string()));
    assert_eq!(fc.copy_sides(Phase::Positive), vec![Side::Left, Side::Right]);
    assert!(fc.contractible(&fml(&fc, "a ∧ᵃ b"), Side::Left));
    assert!(!fc.contractible(&fml(&fc, "a ∧ᵃ b"), Side::Right));
}

#[test]
fn lj_contraction_policy() {
    let fc = ljf();
    assert!(!fc.contraction.admissible(Phase::Positive));
    assert!(fc.copy_sides(Phase::Positive).contains(&Side::Left));
    assert!(!fc.copy_sides(Phase::Positive).contains(&Side::Right));
}

#[test]
fn init_leaf_validates_and_erases() {
    let fc = mallf();
    let s = parse_sequent(&fc.base, "a ⊢ a").unwrap();
    let d = FocusedDerivation { sequent: FocusedSequent::neutral(s.clone()), step: Some(FocusedStep::Init), children: vec![] };
    validate_focused(&fc, &d).unwrap();
    assert_eq!(d.sequent.show(fc.printer()), "a ; · ⊢⁰ a ; ·");
    let e = erase_focus(&fc, &d).unwrap();
    assert_eq!(e.sequent, s);
    assert!(e.children.is_empty());
}

#[test]
fn bad_step_rejected() {
    let fc = mallf();
    let s = parse_sequent(&fc.base, "a ⊢ b").unwrap();
    let d = FocusedDerivation { sequent: FocusedSequent::neutral(s), step: Some(FocusedStep::Init), children: vec![] };
    assert!(validate_focused(&fc, &d).is_err());
}

/// Follows the first move everywhere; enough for small theorems.
fn greedy(fc: &FocusedCalculus, s: FocusedSequent, depth: usize) -> Option<FocusedDerivation> {
    if depth == 0 {
        return None;
    }
    for (step, prems) in fc.moves(&s) {
        let kids: Option<Vec<_>> = prems.into_iter().map(|p| greedy(fc, p, depth - 1)).collect();
        if let Some(children) = kids {
            return Some(FocusedDerivation { sequent: s, step: Some(step), children });
        }
    }
    None
}

#[test]
fn strategy_proofs_validate_and_erase() {
    for (fc, goal) in [
        (mallf(), "a ⊗ b ⊢ b ⊗ a"),
        (mallf(), "a ⅋ b ⊢ b ⅋ a"),
        (lkf(), "a ∨ᵃ b ⊢ b ∨ᵐ a"),
        (lkf(), "a ∧ᵃ b ⊢ b ∧ᵐ a"),
        (ljf(), "a ∧ᵐ b ⊢ b ∧ᵃ a"),
        (ljf(), "a, a → b ⊢ b"),
    ] {
        let s = parse_sequent(&fc.base, goal).unwrap();
        let d = greedy(&fc, FocusedSequent::neutral(s.clone()), 30).unwrap_or_else(|| panic!("no proof of {goal}"));
        validate_focused(&fc, &d).unwrap();
        let e = erase_focus(&fc, &d).unwrap();
        assert_eq!(e.sequent, s);
    }
}

#[test]
fn text_round_trip() {
    let opts = CheckOptions::default();
    for fc in [mallf(), lkf()] {
        let t = print_focused(&fc);
        assert!(t.contains("--- listing"));
        assert_eq!(parse_focused(&t, &opts).unwrap(), fc);
        let tampered = t.replacen("initial neutral", "initial strange", 1);
        assert!(parse_focused(&tampered, &opts).is_err());
    }
}
