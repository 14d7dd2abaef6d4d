use super::*;
use crate::dsl::builtin;

fn rule(calc: &CalculusSpec, name: &str) -> RuleSchema {
    calc.rule(name).unwrap_or_else(|| panic!("no rule {}", name))
}

fn check(calc: &str, lower: &str, upper: &str) -> PermResult {
    let c = builtin(calc).unwrap();
    permutes_up(&c, &rule(&c, lower), &rule(&c, upper), &CheckOptions::default())
}

fn c_check(calc: &str, c: &str, alpha: &str) -> Result<PermResult, PermError> {
    let k = builtin(calc).unwrap();
    contraction_permutes_up_c(&k, &rule(&k, c), &rule(&k, alpha), &CheckOptions::default())
}

fn template_count(calc: &str, lower: &str, upper: &str) -> usize {
    let c = builtin(calc).unwrap();
    interference_templates(&c, &rule(&c, lower), &rule(&c, upper)).len()
}

#[test]
fn template_counts() {
    assert_eq!(template_count("ljm", "and_r", "or_r"), 0);
    assert_eq!(template_count("ljm", "and_l", "or_l"), 1);
    assert_eq!(template_count("mall", "tensor_r", "with_r"), 2);
}

#[test]
fn upper_main_never_auxiliary_of_lower() {
    let c = builtin("mall").unwrap();
    for t in interference_templates(&c, &rule(&c, "tensor_r"), &rule(&c, "with_r")) {
        let root = t.derivation.step.as_ref().unwrap();
        let r = rule(&c, &t.lower);
        let prems = &r.variants[root.variant];
        for (i, p) in prems.iter().enumerate() {
            for (s, pat) in p.marked() {
                let aux = pat.instantiate(&root.subst.formulas).unwrap();
                assert!(!(s == t.upper_main.0 && aux == t.upper_main.1), "premise {}", i);
            }
        }
    }
}

#[test]
fn implication_left_over_conjunction_left_holds() {
    let c = builtin("ljm").unwrap();
    let r = check("ljm", "imp_l", "and_l");
    let Verdict::Holds(ws) = &r.verdict else { panic!("{:?}", r.verdict) };
    assert!(!ws.is_empty());
    for w in ws {
        validate_witness(&c, w).unwrap();
    }
}

#[test]
fn disjunction_right_over_conjunction_right_is_vacuous() {
    assert_eq!(check("ljm", "or_r", "and_r").verdict, Verdict::HoldsVacuously);
}

#[test]
fn conjunction_left_over_implication_left_fails() {
    let r = check("ljm", "and_l", "imp_l");
    let Verdict::Fails(t) = &r.verdict else { panic!("{:?}", r.verdict) };
    // the counter-template splits the two conjuncts between the branches
    let a = Formula::atom("l0");
    let b = Formula::atom("l1");
    let up = &t.derivation.children[0];
    let together = up.children.iter().any(|k| k.sequent.contains(Side::Left, &a) && k.sequent.contains(Side::Left, &b));
    assert!(!together);
}

#[test]
fn contraction_examples() {
    assert!(matches!(c_check("lk", "c_l", "and_m_l").unwrap().verdict, Verdict::Holds(_)));
    assert!(matches!(c_check("lk", "c_l", "and_a_l").unwrap().verdict, Verdict::Fails(_)));
    assert!(matches!(c_check("lk", "c_l", "or_a_l").unwrap().verdict, Verdict::Holds(_)));
    assert!(matches!(c_check("lk", "c_r", "and_a_r").unwrap().verdict, Verdict::Holds(_)));
    assert!(matches!(c_check("lk", "c_r", "and_m_r").unwrap().verdict, Verdict::Fails(_)));
    assert!(matches!(c_check("lk", "c_l", "or_m_l").unwrap().verdict, Verdict::Fails(_)));
    assert_eq!(c_check("lk", "c_l", "and_a_r").unwrap().verdict, Verdict::HoldsVacuously);
}

#[test]
fn contraction_in_linear_calculus_not_applicable() {
    let m = builtin("mall").unwrap();
    let r = contraction_permutes_up_c(&m, &RuleSchema::contraction(Side::Left), &rule(&m, "tensor_l"), &CheckOptions::default());
    assert!(matches!(r, Err(PermError::NotApplicable(_))));
}

#[test]
fn corrupted_witness_rejected() {
    let c = builtin("ljm").unwrap();
    let Verdict::Holds(ws) = check("ljm", "imp_l", "and_l").verdict else { panic!() };
    let mut w = ws.into_iter().find(|w| w.reordered.children.iter().any(|k| k.children.len() == 2)).unwrap();
    let k = w.reordered.children.iter_mut().find(|k| k.children.len() == 2).unwrap();
    k.children.swap(0, 1);
    assert!(validate_witness(&c, &w).is_err());
}

#[test]
fn witnesses_survive_instantiation() {
    let c = builtin("lk").unwrap();
    let Verdict::Holds(ws) = check("lk", "or_a_l", "and_m_l").verdict else { panic!() };
    let p = |s: &str| Formula::atom(s);
    let map: BTreeMap<String, Vec<Formula>> = [
        ("l0".to_string(), vec![Formula::compound("and_a", vec![p("x"), p("y")])]),
        ("u1".to_string(), vec![p("x")]),
        ("g0".to_string(), vec![p("x"), p("z"), p("z")]),
        ("d0".to_string(), vec![]),
    ]
    .into_iter()
    .collect();
    for w in &ws {
        validate_witness(&c, &instantiate_witness(w, &map)).unwrap();
    }
}

#[test]
fn relaxation_adds_shared_right_contexts() {
    let c = builtin("ljm").unwrap();
    let p = c.printer();
    assert_eq!(relax_rule(&rule(&c, "imp_l")).show(p), rule(&relax(&c), "imp_l").show(p));
    let r = relax_rule(&rule(&c, "and_r"));
    assert_eq!(r.context_mode(), crate::kernel::ContextMode::Multiplicative);
    assert_eq!(r.conclusion.context_vars(Side::Right).count(), 2);
    let r = relax_rule(&rule(&c, "or_r"));
    assert_eq!(r.variants[0][0].context_vars(Side::Right).collect::<Vec<_>>(), r.variants[1][0].context_vars(Side::Right).collect::<Vec<_>>());
    let r = relax_rule(&rule(&c, "imp_l"));
    assert_eq!(r.context_mode(), crate::kernel::ContextMode::Multiplicative);
}

#[test]
fn relaxation_off_keeps_right_pairs_vacuous() {
    let c = builtin("ljm").unwrap();
    let opts = CheckOptions { relax_single_succedent: false, ..Default::default() };
    let r = permutes_up(&c, &rule(&c, "imp_r"), &rule(&c, "and_r"), &opts);
    assert_eq!(r.verdict, Verdict::HoldsVacuously);
    let r = permutes_up(&c, &rule(&c, "imp_r"), &rule(&c, "and_r"), &CheckOptions::default());
    assert!(matches!(r.verdict, Verdict::Fails(_)) && r.relaxed);
}

#[test]
fn tiny_budget_gives_unknown() {
    let c = builtin("mall").unwrap();
    let opts = CheckOptions { budget: Budget { max_splits: 3, ..Default::default() }, ..Default::default() };
    let r = permutes_up(&c, &rule(&c, "with_r"), &rule(&c, "tensor_r"), &opts);
    assert!(matches!(r.verdict, Verdict::Unknown(_)));
}

#[test]
fn budget_parse() {
    let b = Budget::parse("max_splits=10, max_candidate_depth=5").unwrap();
    assert_eq!((b.max_splits, b.max_candidate_depth, b.max_templates), (10, 5, Budget::default().max_templates));
    assert!(Budget::parse("max_splits=0").is_err());
    assert!(Budget::parse("depth=2").is_err());
}

use std::collections::BTreeMap;
