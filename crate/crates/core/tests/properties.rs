use std::collections::BTreeMap;

use proptest::prelude::*;

use focal_core::dsl::{builtin, parse_calculus, parse_formula, parse_sequent, print_calculus, BUILTIN_NAMES};
use focal_core::focusgen::{contraction_phase_admissibility, erase_focus, generate_focused, validate_focused, FocusedCalculus};
use focal_core::graph::{build_permutation_graph, FocusableBipartition};
use focal_core::kernel::{distribute, validate_derivation, CalculusSpec, Formula, Sequent, Side};
use focal_core::permcheck::{permutes_up, Budget, CheckOptions, Verdict};
use focal_core::search::{gen_corpus, prove, prove_focused, CorpusParams, Proof, SearchBounds, SearchOutcome};

fn calc_strategy() -> impl Strategy<Value = CalculusSpec> {
    prop::sample::select(BUILTIN_NAMES.to_vec()).prop_map(|n| builtin(n).unwrap())
}

fn formula_in(calc: &CalculusSpec) -> impl Strategy<Value = Formula> {
    let conns: Vec<(String, usize)> = calc.connectives.iter().map(|d| (d.name.clone(), d.arity)).collect();
    let leaf = prop::sample::select(vec!["a", "b", "c", "p1"]).prop_map(Formula::atom);
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let conns = conns.clone();
        (prop::sample::select(conns), prop::collection::vec(inner, 2))
            .prop_map(|((name, arity), args)| Formula::compound(name, args.into_iter().take(arity).collect()))
    })
}

fn calc_and_formulas() -> impl Strategy<Value = (CalculusSpec, Vec<Formula>)> {
    calc_strategy().prop_flat_map(|c| {
        let f = prop::collection::vec(formula_in(&c), 1..5);
        (Just(c), f)
    })
}

/// Drops some rules of a built-in and flips its structural flags.
fn fuzzed_calculus() -> impl Strategy<Value = CalculusSpec> {
    (calc_strategy(), prop::collection::vec(any::<bool>(), 12), any::<[bool; 4]>()).prop_map(|(mut c, keep, flags)| {
        let mut i = 0;
        c.logical.retain(|_| {
            i += 1;
            keep[(i - 1) % keep.len()] || i == 1
        });
        c.structural.contraction_left = flags[0];
        c.structural.weakening_left = flags[1] || flags[0];
        c.structural.contraction_right = flags[2] && c.structural.contraction_right;
        c.structural.weakening_right = (flags[3] && c.structural.weakening_right) || c.structural.contraction_right;
        c.name = format!("{}x", c.name);
        c
    })
}

fn focused(name: &str, neg: &[&str], pos: &[&str]) -> FocusedCalculus {
    let calc = builtin(name).unwrap();
    let opts = CheckOptions::default();
    let g = build_permutation_graph(&calc, &opts);
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    let bp = FocusableBipartition::new(&calc, &g, &set(neg), &set(pos)).unwrap();
    generate_focused(&calc, &bp, &contraction_phase_admissibility(&calc, &bp, &opts)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn formula_text_round_trip((c, fs) in calc_and_formulas()) {
        let p = c.printer();
        for f in fs {
            prop_assert_eq!(parse_formula(&c, &p.formula(&f)).unwrap(), f);
        }
    }

    #[test]
    fn sequent_text_round_trip((c, fs) in calc_and_formulas(), cut in 0usize..5) {
        let cut = cut.min(fs.len());
        let (l, r) = fs.split_at(cut);
        let r = if c.succedent == focal_core::kernel::Succedent::Single { &fs[fs.len() - 1..] } else { r };
        let s = Sequent::new(l.to_vec(), r.to_vec());
        prop_assert_eq!(parse_sequent(&c, &s.show(c.printer())).unwrap(), s);
    }

    #[test]
    fn calculus_text_round_trip(c in fuzzed_calculus()) {
        let text = print_calculus(&c);
        let back = parse_calculus(&text).unwrap();
        prop_assert_eq!(print_calculus(&back), text);
        prop_assert_eq!(back, c);
    }

    #[test]
    fn distribute_partitions_the_multiset(items in prop::collection::vec(0u8..4, 0..6), k in 1usize..4) {
        let mut sorted = items.clone();
        sorted.sort();
        let splits = distribute(&sorted, k);
        prop_assert!(!splits.is_empty());
        let mut seen = std::collections::BTreeSet::new();
        for s in &splits {
            prop_assert_eq!(s.len(), k);
            let mut all: Vec<u8> = s.iter().flatten().copied().collect();
            all.sort();
            prop_assert_eq!(&all, &sorted);
            prop_assert!(seen.insert(s.clone()), "duplicate split");
        }
    }

    #[test]
    fn add_then_remove_is_identity((c, fs) in calc_and_formulas(), right in any::<bool>()) {
        let _ = c;
        let side = if right { Side::Right } else { Side::Left };
        let s = Sequent::new(fs[1..].to_vec(), vec![]);
        let t = s.with_added(side, fs[0].clone());
        prop_assert!(s.is_sub_multiset_of(&t));
        prop_assert_eq!(t.with_removed(side, &fs[0]).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// A verdict decided under a small budget is unchanged under a larger one.
    #[test]
    fn larger_budget_keeps_decided_verdicts(c in calc_strategy(), i in 0usize..64, j in 0usize..64, d in 1usize..3) {
        let rules = &c.logical;
        let (lower, upper) = (&rules[i % rules.len()], &rules[j % rules.len()]);
        let small = CheckOptions { budget: Budget { max_candidate_depth: d, ..Budget::default() }, ..CheckOptions::default() };
        let large = CheckOptions { budget: Budget { max_candidate_depth: d + 2, ..Budget::default() }, ..CheckOptions::default() };
        let a = permutes_up(&c, lower, upper, &small).verdict;
        let b = permutes_up(&c, lower, upper, &large).verdict;
        if !matches!(a, Verdict::Unknown(_)) {
            prop_assert_eq!(a.label(), b.label());
        }
    }

    /// Tight bounds may lose answers but never contradict loose ones.
    #[test]
    fn bounds_never_flip_outcomes(seed in 0u64..1000, nodes in 1usize..60) {
        for name in ["mall", "ljm"] {
            let c = builtin(name).unwrap();
            let s = gen_corpus(&c, &CorpusParams::new(seed, 1, 2)).remove(0);
            let tight = prove(&c, &s, &SearchBounds { max_nodes: nodes, ..SearchBounds::default() });
            let loose = prove(&c, &s, &SearchBounds { max_nodes: 20_000, ..SearchBounds::default() });
            match (tight.kind(), loose.kind()) {
                (focal_core::search::OutcomeKind::BoundHit, _) => {}
                (t, l) => prop_assert!(t == l || l == focal_core::search::OutcomeKind::BoundHit, "{:?} vs {:?}", t, l),
            }
        }
    }
}

fn base_proofs(c: &CalculusSpec, seed: u64, count: usize, b: &SearchBounds) -> Vec<(Sequent, focal_core::kernel::Derivation)> {
    let mut p = CorpusParams::new(seed, count, 2);
    p.atoms = 2;
    gen_corpus(c, &p)
        .into_iter()
        .filter_map(|s| match prove(c, &s, b) {
            SearchOutcome::Proved(Proof::Base(d), _) => Some((s, d)),
            _ => None,
        })
        .collect()
}

#[test]
fn search_proofs_replay() {
    let b = SearchBounds { max_nodes: 5_000, ..SearchBounds::default() };
    let mut n = 0;
    for name in ["lj", "ljm", "lk"] {
        let c = builtin(name).unwrap();
        for (s, d) in base_proofs(&c, 3, 120, &b) {
            validate_derivation(&c, &d).unwrap();
            assert_eq!(d.sequent, s);
            n += 1;
        }
    }
    assert!(n >= 100, "only {n} proofs");
}

#[test]
fn focused_proofs_erase_in_every_calculus() {
    let b = SearchBounds { max_nodes: 5_000, ..SearchBounds::default() };
    let systems = [
        focused("lk", &["and_a_r", "and_m_l", "or_a_l", "or_m_r"], &["and_a_l", "and_m_r", "or_a_r", "or_m_l"]),
        focused("lj", &["and_a_r", "and_m_l", "imp_r", "or_l"], &["and_a_l", "and_m_r", "imp_l", "or_r"]),
        focused("ljm", &["and_l", "or_l", "imp_r", "or_r"], &["and_r", "imp_l"]),
    ];
    let mut n = 0;
    for fc in &systems {
        let mut p = CorpusParams::new(11, 60, 2);
        p.atoms = 2;
        for s in gen_corpus(&fc.base, &p) {
            if let SearchOutcome::Proved(Proof::Focused(d), _) = prove_focused(fc, &s, &b) {
                validate_focused(fc, &d).unwrap();
                assert_eq!(erase_focus(fc, &d).unwrap().sequent, s);
                n += 1;
            }
        }
    }
    assert!(n >= 50, "only {n} focused proofs");
}

#[test]
fn mall_theorems_and_non_theorems() {
    let fc = focused("mall", &["par_r", "tensor_l", "with_r", "plus_l"], &["tensor_r", "par_l", "plus_r", "with_l"]);
    let c = &fc.base;
    let b = SearchBounds::default();
    let cases: BTreeMap<&str, bool> = [
        ("a ⊗ b ⊢ b ⊗ a", true),
        ("a ⊗ (b ⊗ c) ⊢ (a ⊗ b) ⊗ c", true),
        ("a ⊗ (b ⊕ c) ⊢ (a ⊗ b) ⊕ (a ⊗ c)", true),
        ("(a ⊗ b) ⊕ (a ⊗ c) ⊢ a ⊗ (b ⊕ c)", true),
        ("a & b ⊢ b & a", true),
        ("a ⊢ a ⊕ b", true),
        ("a & b ⊢ a", true),
        ("a ⅋ b ⊢ a, b", true),
        ("a, b ⊢ a ⊗ b", true),
        ("⊢ a ⊕ b", false),
        ("a ⊢ a ⊗ a", false),
        ("a ⊕ b ⊢ a", false),
        ("a ⊗ b ⊢ a", false),
        ("a, b ⊢ a & b", false),
    ]
    .into_iter()
    .collect();
    for (goal, provable) in cases {
        let s = parse_sequent(c, goal).unwrap();
        let want = if provable { focal_core::search::OutcomeKind::Proved } else { focal_core::search::OutcomeKind::Refuted };
        assert_eq!(prove(c, &s, &b).kind(), want, "base {goal}");
        assert_eq!(prove_focused(&fc, &s, &b).kind(), want, "focused {goal}");
    }
}
