//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion that all passed. Run with `--nocapture` to see the lines.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use focal_cli::{partition_alias, run};
use focal_core::dsl::builtin;
use focal_core::focusgen::{contraction_phase_admissibility, generate_focused};
use focal_core::graph::{build_permutation_graph, hierarchy_edges, maximal_cliques, symmetrize, FocusableBipartition};
use focal_core::kernel::{CalculusSpec, Formula, Side};
use focal_core::permcheck::{
    contraction_permutes_up_c, instantiate_witness, permutes_up, validate_witness, CheckOptions, Verdict, Witness,
};
use focal_core::search::{gen_corpus, CorpusParams};

type Set = BTreeSet<String>;

fn set(xs: &[&str]) -> Set {
    xs.iter().map(|s| s.to_string()).collect()
}

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    took: Duration,
}

/// Runs the CLI in-process; the stdout is recorded for the determinism check.
fn cli(args: &[&str], log: &mut Vec<String>) -> (i32, String) {
    let out = run(args.iter().copied());
    log.push(format!("$ focal {}\n{}", args.join(" "), out.stdout));
    (out.code, out.stdout)
}

fn values<'a>(report: &'a str, key: &str) -> Vec<&'a str> {
    let prefix = format!("{key}: ");
    report.lines().filter_map(|l| l.strip_prefix(prefix.as_str())).collect()
}

fn words(s: &str) -> Set {
    s.split_whitespace().map(String::from).collect()
}

fn cliques_of(name: &str, log: &mut Vec<String>) -> BTreeSet<Set> {
    let (code, out) = cli(&["cliques", &format!("builtin:{name}")], log);
    if code != 0 || out.contains("warning:") {
        return BTreeSet::new();
    }
    values(&out, "clique").into_iter().map(words).collect()
}

/// The two expected cliques of each built-in, first the one drawn lower.
fn expected_cliques(name: &str) -> (Set, Set) {
    match name {
        "mall" => (
            set(&["tensor_l", "plus_l", "par_r", "with_r", "with_l", "plus_r"]),
            set(&["tensor_r", "plus_r", "par_l", "with_l"]),
        ),
        "lk" => (
            set(&["and_a_r", "and_m_l", "or_m_r", "or_a_l", "and_a_l", "or_a_r"]),
            set(&["and_m_r", "and_a_l", "or_a_r", "or_m_l"]),
        ),
        "lj" => (
            set(&["and_m_l", "and_a_r", "or_l", "imp_r", "and_a_l", "or_r"]),
            set(&["and_a_l", "and_m_r", "or_r", "imp_l"]),
        ),
        "ljm" => (set(&["and_l", "or_l", "imp_r", "or_r"]), set(&["and_r", "or_r", "imp_l"])),
        _ => unreachable!(),
    }
}

fn clique_check(names: &[&str], log: &mut Vec<String>) -> (bool, String) {
    let mut bad = Vec::new();
    for n in names {
        let (a, b) = expected_cliques(n);
        if cliques_of(n, log) != [a, b].into_iter().collect() {
            bad.push(*n);
        }
    }
    (bad.is_empty(), if bad.is_empty() { "exact".into() } else { format!("differs: {}", bad.join(", ")) })
}

fn c1(log: &mut Vec<String>) -> (bool, String) {
    clique_check(&["mall"], log)
}

fn c2(log: &mut Vec<String>) -> (bool, String) {
    clique_check(&["lk", "lj", "ljm"], log)
}

fn c3(log: &mut Vec<String>) -> (bool, String) {
    let mut bad = Vec::new();
    for n in ["mall", "lk", "lj", "ljm"] {
        let c = builtin(n).unwrap();
        let g = build_permutation_graph(&c, &CheckOptions::default());
        let (lower, upper) = expected_cliques(n);
        let found: BTreeSet<Set> = maximal_cliques(&symmetrize(&g)).into_iter().collect();
        let ok = found.contains(&lower) && found.contains(&upper) && hierarchy_edges(&g, &lower, &upper).is_ok();
        log.push(format!("hierarchy {n}: {ok}"));
        if !ok {
            bad.push(n);
        }
    }
    (bad.is_empty(), if bad.is_empty() { "CL1 ↓ CL2 in all four".into() } else { format!("fails: {}", bad.join(", ")) })
}

fn listed_partitions(name: &str, log: &mut Vec<String>) -> BTreeSet<(Set, Set)> {
    let (_, out) = cli(&["partitions", &format!("builtin:{name}")], log);
    let mut by_index: BTreeMap<String, (Option<Set>, Option<Set>, bool)> = BTreeMap::new();
    for l in out.lines() {
        let Some(rest) = l.strip_prefix("partition.") else { continue };
        let Some((idx, kv)) = rest.split_once('.') else { continue };
        let Some((k, v)) = kv.split_once(": ") else { continue };
        let e = by_index.entry(idx.to_string()).or_default();
        match k {
            "negative" => e.0 = Some(words(v)),
            "positive" => e.1 = Some(words(v)),
            "focusable" => e.2 = v == "true",
            _ => {}
        }
    }
    by_index.into_values().filter(|e| e.2).filter_map(|(n, p, _)| n.zip(p)).collect()
}

fn c4(log: &mut Vec<String>) -> (bool, String) {
    let wanted = [
        ("mall", partition_alias("mall", "mallf").unwrap()),
        ("lk", partition_alias("lk", "lkf").unwrap()),
        ("lj", partition_alias("lj", "ljf").unwrap()),
        ("ljm", (set(&["and_l", "or_l", "imp_r", "or_r"]), set(&["and_r", "imp_l"]))),
        ("ljm", (set(&["and_l", "or_l", "imp_r"]), set(&["and_r", "imp_l", "or_r"]))),
    ];
    let mut missing = Vec::new();
    for (n, p) in &wanted {
        if !listed_partitions(n, log).contains(p) {
            missing.push(*n);
        }
    }
    let ok = missing.is_empty();
    (ok, if ok { "MALLF, LKF, LJF and both ljm partitions listed".into() } else { format!("missing in {}", missing.join(", ")) })
}

fn c5(log: &mut Vec<String>) -> (bool, String) {
    let (code, out) = cli(&["check", "builtin:ljm", "--pair", "or_r", "and_r"], log);
    let v = values(&out, "verdict");
    (code == 0 && v == ["holds-vacuously"], format!("verdict {}", v.join("")))
}

fn c6(log: &mut Vec<String>) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, alias) in [("lk", "lkf"), ("lj", "ljf")] {
        let (code, out) = cli(&["contraction", &format!("builtin:{n}"), "--partition", alias], log);
        let neg = values(&out, "negative.admissible") == ["true"];
        let pos = values(&out, "positive.admissible") == ["false"];
        let failing = values(&out, "positive.failing").first().map(|s| words(s)).unwrap_or_default();
        let this = code == 0 && neg && pos && failing.contains("and_a_l");
        ok &= this;
        detail.push(format!("{n}: positive failures {}", failing.into_iter().collect::<Vec<_>>().join(" ")));
    }
    (ok, detail.join("; "))
}

/// Formulas for instantiating schematic atoms, drawn from a seeded corpus.
fn pool(calc: &CalculusSpec) -> Vec<Formula> {
    let p = CorpusParams { left: 3..=3, right: 1..=1, ..CorpusParams::new(7, 40, 2) };
    gen_corpus(calc, &p).into_iter().flat_map(|s| s.left().to_vec()).collect()
}

fn atoms_of(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(a) => {
            out.insert(a.clone());
        }
        Formula::Compound(_, args) => args.iter().for_each(|g| atoms_of(g, out)),
    }
}

/// Checks `w` and `rounds` concrete instantiations of it.
fn check_witness(calc: &CalculusSpec, w: &Witness, pool: &[Formula], rounds: usize, salt: &mut usize) -> bool {
    if validate_witness(calc, w).is_err() {
        return false;
    }
    let end = w.template.end_sequent();
    let mut names = BTreeSet::new();
    for s in Side::BOTH {
        end.side(s).iter().for_each(|f| atoms_of(f, &mut names));
    }
    let single = calc.succedent == focal_core::kernel::Succedent::Single;
    for _ in 0..rounds {
        let mut map = BTreeMap::new();
        for n in &names {
            *salt = salt.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let pick = |k: usize| pool[(*salt >> 17).wrapping_add(k) % pool.len()].clone();
            let v = match n.chars().next() {
                Some('g') => (0..(*salt >> 40) % 3).map(pick).collect(),
                Some('d') if single => vec![pick(0)],
                Some('d') => (0..(*salt >> 40) % 3).map(pick).collect(),
                _ => vec![pick(0)],
            };
            map.insert(n.clone(), v);
        }
        if validate_witness(calc, &instantiate_witness(w, &map)).is_err() {
            return false;
        }
    }
    true
}

fn c7(log: &mut Vec<String>) -> (bool, String) {
    let opts = CheckOptions::default();
    let (mut checked, mut failed) = (0usize, Vec::new());
    let mut salt = 42usize;
    for n in ["mall", "lk", "lj", "ljm"] {
        let calc = builtin(n).unwrap();
        let pool = pool(&calc);
        let mut rules: Vec<_> = calc.logical.clone();
        rules.extend(calc.structural_rules().into_iter().filter(|r| r.name.starts_with("c_")));
        for lower in &rules {
            for upper in &rules {
                let mut verdicts = vec![permutes_up(&calc, lower, upper, &opts).verdict];
                if lower.name.starts_with("c_") && !upper.name.starts_with("c_") {
                    if let Ok(r) = contraction_permutes_up_c(&calc, lower, upper, &opts) {
                        verdicts.push(r.verdict);
                    }
                }
                for v in verdicts {
                    if let Verdict::Holds(ws) = v {
                        for w in &ws {
                            checked += 1;
                            if !check_witness(&calc, w, &pool, 3, &mut salt) {
                                failed.push(format!("{n}:{}/{}", lower.name, upper.name));
                            }
                        }
                    }
                }
            }
        }
    }
    log.push(format!("witnesses checked {checked}, failed {}", failed.len()));
    (checked > 0 && failed.is_empty(), format!("{checked} witnesses, {} failures {}", failed.len(), failed.join(" ")))
}

struct Validation {
    mall_ok: bool,
    ljm_ok: bool,
    erasure_ok: bool,
    detail8: String,
    detail9: String,
}

fn validation(log: &mut Vec<String>) -> Validation {
    let (mcode, mall) = cli(&["validate", "builtin:mall", "--partition", "mallf", "--seed", "42", "--count", "200", "--depth", "3"], log);
    let (jcode, ljm) = cli(
        &["validate", "builtin:ljm", "--partition", "ljf", "--seed", "42", "--count", "100", "--depth", "3", "--max-nodes", "50000"],
        log,
    );
    let num = |r: &str, k: &str| values(r, k).first().and_then(|v| v.parse::<usize>().ok()).unwrap_or(usize::MAX);
    let mall_ok = mcode == 0 && num(&mall, "sequents") == 200 && num(&mall, "mismatches") == 0 && num(&mall, "bound-hits") == 0;
    let ljm_ok = jcode == 0 && num(&ljm, "sequents") == 100 && num(&ljm, "mismatches") == 0;
    let erasure_ok = [&mall, &ljm].iter().all(|r| num(r, "erasure-failures") == 0 && num(r, "focused-proofs") != usize::MAX)
        && num(&mall, "focused-proofs") > 0;
    let summary = |r: &str| {
        format!(
            "proved {}/{}, bound hits {}, mismatches {}, focused ≤ base on {}",
            num(r, "focused.proved"),
            num(r, "sequents"),
            num(r, "bound-hits"),
            num(r, "mismatches"),
            values(r, "focused-no-larger").join("")
        )
    };
    Validation {
        mall_ok,
        ljm_ok,
        erasure_ok,
        detail8: format!("mall [{}]; ljm [{}]", summary(&mall), summary(&ljm)),
        detail9: format!(
            "{} + {} focused proofs erased and replayed",
            num(&mall, "focused-proofs"),
            num(&ljm, "focused-proofs")
        ),
    }
}

fn criteria(log: &mut Vec<String>) -> Vec<Line> {
    let mut lines = Vec::new();
    let mut timed = |id: usize, name: &'static str, limit: Option<Duration>, f: &mut dyn FnMut() -> (bool, String)| {
        let t = Instant::now();
        let (pass, detail) = f();
        let took = t.elapsed();
        let pass = pass && limit.is_none_or(|l| took < l);
        lines.push(Line { id, name, pass, detail, took });
    };
    timed(1, "MALL cliques", Some(Duration::from_secs(10)), &mut || c1(log));
    timed(2, "LK, LJ and ljm cliques", Some(Duration::from_secs(30)), &mut || c2(log));
    timed(3, "clique hierarchy", None, &mut || c3(log));
    timed(4, "focusable partitions", None, &mut || c4(log));
    timed(5, "vacuous permutation", None, &mut || c5(log));
    timed(6, "contraction by phase", None, &mut || c6(log));
    timed(7, "witness soundness", Some(Duration::from_secs(120)), &mut || c7(log));
    let t = Instant::now();
    let v = validation(log);
    let took = t.elapsed();
    lines.push(Line {
        id: 8,
        name: "base vs focused provability",
        pass: v.mall_ok && v.ljm_ok && took < Duration::from_secs(300),
        detail: v.detail8,
        took,
    });
    lines.push(Line { id: 9, name: "erasure soundness", pass: v.erasure_ok, detail: v.detail9, took: Duration::ZERO });
    lines
}

#[test]
fn acceptance() {
    let mut first = Vec::new();
    let mut lines = criteria(&mut first);
    let t = Instant::now();
    let mut second = Vec::new();
    criteria(&mut second);
    let same = first == second;
    lines.push(Line {
        id: 10,
        name: "determinism",
        pass: same,
        detail: format!("{} recorded outputs {}", first.len(), if same { "identical" } else { "differ" }),
        took: t.elapsed(),
    });
    for l in &lines {
        println!(
            "[{}] criterion {:>2}: {} ({:.2?}) {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.took,
            l.detail
        );
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(["cliques", "builtin:nope"]).code, 2);
    assert_eq!(run(["frobnicate"]).code, 2);
    assert_eq!(run(["prove", "builtin:mall", "a ⊢ ⊢"]).code, 2);
    assert_eq!(run(["focus", "builtin:mall", "--partition", "lkf"]).code, 2);
    assert_eq!(run(["check", "builtin:mall", "--pair", "tensor_l", "nope"]).code, 2);
    assert_eq!(run(["builtin", "mall"]).code, 0);
}

#[test]
fn focused_pipeline_through_files() {
    let dir = std::env::temp_dir().join(format!("focal-acc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("mallf.focused");
    let out = run(["focus", "builtin:mall", "--partition", "mallf", "-o", f.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let p = run(["prove", f.to_str().unwrap(), "a ⊗ b ⊢ b ⊗ a"]);
    assert_eq!(p.code, 0, "{}", p.stderr);
    assert!(p.stdout.contains("system: mallf") && p.stdout.contains("outcome: proved"));
    let calc = dir.join("mall.calc");
    assert_eq!(run(["builtin", "mall", "-o", calc.to_str().unwrap()]).code, 0);
    let c = run(["cliques", calc.to_str().unwrap()]);
    assert_eq!(c.stdout.matches("clique: ").count(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generated_focused_calculi_exist_for_aliases() {
    let opts = CheckOptions::default();
    for (n, a) in [("mall", "mallf"), ("lk", "lkf"), ("lj", "ljf"), ("ljm", "ljf")] {
        let calc = builtin(n).unwrap();
        let g = build_permutation_graph(&calc, &opts);
        let (neg, pos) = partition_alias(n, a).unwrap();
        let bp = FocusableBipartition::new(&calc, &g, &neg, &pos).unwrap();
        generate_focused(&calc, &bp, &contraction_phase_admissibility(&calc, &bp, &opts)).unwrap();
    }
}
