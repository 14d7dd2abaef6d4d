//! The `focal` command line, callable in-process through [`run`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use focal_core::dsl::{builtin, parse_calculus, parse_sequent, print_calculus};
use focal_core::focusgen::{contraction_phase_admissibility, generate_focused, parse_focused, print_focused, FocusedCalculus};
use focal_core::graph::{
    build_permutation_graph, candidate_bipartitions, maximal_cliques, symmetrize, to_dot_partitioned,
    FocusableBipartition, PermutationGraph, RuleSet,
};
use focal_core::kernel::CalculusSpec;
use focal_core::permcheck::{contraction_permutes_up_c, permutes_up, Budget, CheckOptions};
use focal_core::report::{self, Report};
use focal_core::search::{cross_validate, gen_corpus, prove, prove_focused, CorpusParams, SearchBounds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "focal", version, about = "Rule permutations, focusable partitions and generated focused calculi")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether one rule permutes up over another.
    Check {
        calc: String,
        #[arg(long, num_args = 2, value_names = ["LOWER", "UPPER"], required = true)]
        pair: Vec<String>,
        /// Check contraction LOWER against rule UPPER on a contracted formula.
        #[arg(long)]
        contracted: bool,
        #[arg(long)]
        structural_in_witness: bool,
        #[arg(long)]
        no_relax: bool,
    },
    /// Permutation graph of a calculus.
    Graph {
        calc: String,
        #[arg(long, conflicts_with = "json_like")]
        dot: bool,
        #[arg(long)]
        json_like: bool,
        /// Annotate vertices with the components of this partition (DOT only).
        #[arg(long)]
        partition: Option<String>,
    },
    /// Maximal cliques of the mutual-permutation graph.
    Cliques { calc: String },
    /// Focusable bipartitions with their condition breakdown.
    Partitions {
        calc: String,
        /// Also list candidates that fail a condition.
        #[arg(long)]
        all: bool,
    },
    /// Emit the focused calculus for a partition.
    Focus {
        calc: String,
        #[arg(long)]
        partition: String,
        #[command(flatten)]
        out: Output,
    },
    /// Contraction admissibility per phase.
    Contraction {
        calc: String,
        #[arg(long)]
        partition: String,
    },
    /// Bounded proof search, in the base calculus or a focused one.
    Prove {
        /// Base calculus, or a focused calculus file.
        calc: String,
        sequent: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Search the focused calculus of this partition instead.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Cross-validate a calculus against its focused version on a random corpus.
    Validate {
        calc: String,
        #[arg(long)]
        partition: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Maximum formula depth in the corpus.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        atoms: usize,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Also write per-sequent rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a built-in calculus in the text format.
    Builtin {
        name: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(short = 'o', long = "output")]
    pub path: Option<PathBuf>,
}

/// Result of one invocation: exit code, stdout and stderr text.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Fail {
    Usage(String),
    Finding(String, String),
}

type Res = Result<String, Fail>;

fn usage(m: impl Into<String>) -> Fail {
    Fail::Usage(m.into())
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("focal")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome { code: EXIT_OK, stdout, stderr: String::new() },
        Err(Fail::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Fail::Finding(stdout, m)) => Outcome { code: EXIT_FINDING, stdout, stderr: format!("check failed: {m}\n") },
    }
}

fn options() -> Result<CheckOptions, Fail> {
    let mut o = CheckOptions::default();
    if let Ok(b) = std::env::var("FOCAL_BUDGET") {
        o.budget = Budget::parse(&b).map_err(|e| usage(format!("FOCAL_BUDGET: {e}")))?;
    }
    Ok(o)
}

/// `builtin:NAME` or a path to a calculus file.
pub fn load_calculus(r: &str) -> Result<CalculusSpec, String> {
    if let Some(name) = r.strip_prefix("builtin:") {
        return builtin(name).map_err(|e| e.to_string());
    }
    let text = fs::read_to_string(r).map_err(|e| format!("{r}: {e}"))?;
    parse_calculus(&text).map_err(|e| format!("{r}: {e}"))
}

fn calc_arg(r: &str) -> Result<CalculusSpec, Fail> {
    load_calculus(r).map_err(usage)
}

/// Named partitions of the built-in calculi.
pub fn partition_alias(calc: &str, alias: &str) -> Option<(RuleSet, RuleSet)> {
    let (neg, pos): (&[&str], &[&str]) = match (alias, calc) {
        ("mallf", "mall") => (&["par_r", "tensor_l", "with_r", "plus_l"], &["tensor_r", "par_l", "plus_r", "with_l"]),
        ("lkf", "lk") => (&["and_a_r", "and_m_l", "or_a_l", "or_m_r"], &["and_a_l", "and_m_r", "or_a_r", "or_m_l"]),
        ("ljf", "lj") => (&["and_a_r", "and_m_l", "imp_r", "or_l"], &["and_a_l", "and_m_r", "imp_l", "or_r"]),
        ("ljf", "ljm") => (&["and_l", "or_l", "imp_r"], &["and_r", "imp_l", "or_r"]),
        _ => return None,
    };
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    Some((set(neg), set(pos)))
}

/// Resolves an alias, an index into the `partitions --all` listing, or a
/// file with `negative ...` and `positive ...` lines.
pub fn resolve_partition(calc: &CalculusSpec, g: &PermutationGraph, r: &str) -> Result<FocusableBipartition, String> {
    let (neg, pos) = if let Some(p) = partition_alias(&calc.name, r) {
        p
    } else if let Ok(i) = r.parse::<usize>() {
        let cands = candidate_bipartitions(calc, g);
        let c = cands.get(i).ok_or_else(|| format!("partition index {i} out of range ({} candidates)", cands.len()))?;
        (c.negative.clone(), c.positive.clone())
    } else if Path::new(r).is_file() {
        let text = fs::read_to_string(r).map_err(|e| format!("{r}: {e}"))?;
        let mut neg = None;
        let mut pos = None;
        for line in text.lines() {
            let mut w = line.split_whitespace();
            match w.next() {
                Some("negative") => neg = Some(w.map(String::from).collect()),
                Some("positive") => pos = Some(w.map(String::from).collect()),
                _ => {}
            }
        }
        neg.zip(pos).ok_or_else(|| format!("{r}: needs a negative and a positive line"))?
    } else {
        return Err(format!("unknown partition '{r}' for {}", calc.name));
    };
    FocusableBipartition::new(calc, g, &neg, &pos).map_err(|c| {
        let mut why = Vec::new();
        if c.hierarchy.is_err() {
            why.push("hierarchy");
        }
        if !c.single_aux_ok() {
            why.push("single auxiliary");
        }
        if !c.splits_ok() {
            why.push("context splitting");
        }
        if why.is_empty() {
            why.push("coverage");
        }
        format!("partition '{r}' is not focusable ({})", why.join(", "))
    })
}

fn focused_for(calc: &CalculusSpec, part: &str, opts: &CheckOptions) -> Result<(FocusedCalculus, PermutationGraph), Fail> {
    let g = build_permutation_graph(calc, opts);
    let bp = resolve_partition(calc, &g, part).map_err(usage)?;
    let report = contraction_phase_admissibility(calc, &bp, opts);
    let fc = generate_focused(calc, &bp, &report).map_err(|e| usage(e.to_string()))?;
    Ok((fc, g))
}

fn emit(text: String, out: &Output) -> Res {
    match &out.path {
        Some(p) => {
            fs::write(p, &text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn dispatch(cmd: Command) -> Res {
    let mut opts = options()?;
    match cmd {
        Command::Check { calc, pair, contracted, structural_in_witness, no_relax } => {
            let c = calc_arg(&calc)?;
            opts.structural_in_witness = structural_in_witness;
            opts.relax_single_succedent = !no_relax;
            let rule = |n: &str| c.rule(n).ok_or_else(|| usage(format!("unknown rule '{n}' in {}", c.name)));
            let (lower, upper) = (rule(&pair[0])?, rule(&pair[1])?);
            let r = if contracted {
                contraction_permutes_up_c(&c, &lower, &upper, &opts).map_err(|e| usage(e.to_string()))?
            } else {
                permutes_up(&c, &lower, &upper, &opts)
            };
            Ok(report::verdict_report(&c, &pair[0], &pair[1], &r).render())
        }
        Command::Graph { calc, dot, json_like, partition } => {
            let c = calc_arg(&calc)?;
            let g = build_permutation_graph(&c, &opts);
            if dot {
                let bp = partition.map(|p| resolve_partition(&c, &g, &p)).transpose().map_err(usage)?;
                Ok(to_dot_partitioned(&g, bp.as_ref()))
            } else if json_like {
                Ok(json_graph(&g))
            } else {
                Ok(report::graph_report(&g).render())
            }
        }
        Command::Cliques { calc } => {
            let c = calc_arg(&calc)?;
            let g = build_permutation_graph(&c, &opts);
            let cl = maximal_cliques(&symmetrize(&g));
            Ok(report::cliques_report(&g, &cl).render())
        }
        Command::Partitions { calc, all } => {
            let c = calc_arg(&calc)?;
            let g = build_permutation_graph(&c, &opts);
            let checks = candidate_bipartitions(&c, &g);
            let text = report::partitions_report(&c, &checks, all).render();
            if checks.iter().any(|c| c.ok()) {
                Ok(text)
            } else {
                Err(Fail::Finding(text, "no focusable bipartition".into()))
            }
        }
        Command::Focus { calc, partition, out } => {
            let c = calc_arg(&calc)?;
            let (fc, _) = focused_for(&c, &partition, &opts)?;
            emit(print_focused(&fc), &out)
        }
        Command::Contraction { calc, partition } => {
            let c = calc_arg(&calc)?;
            let (fc, _) = focused_for(&c, &partition, &opts)?;
            Ok(report::contraction_report(&c, &fc.contraction).render())
        }
        Command::Prove { calc, sequent, depth, max_nodes, partition } => {
            let mut b = SearchBounds { max_depth: depth, ..Default::default() };
            if let Some(n) = max_nodes {
                b.max_nodes = n;
            }
            let focused_file = !calc.starts_with("builtin:")
                && fs::read_to_string(&calc).is_ok_and(|t| t.starts_with("focused "));
            let (base, fc) = if focused_file {
                let text = fs::read_to_string(&calc).map_err(|e| usage(e.to_string()))?;
                let fc = parse_focused(&text, &opts).map_err(|e| usage(format!("{calc}: {e}")))?;
                (fc.base.clone(), Some(fc))
            } else {
                let c = calc_arg(&calc)?;
                let fc = match &partition {
                    Some(p) => Some(focused_for(&c, p, &opts)?.0),
                    None => None,
                };
                (c, fc)
            };
            let s = parse_sequent(&base, &sequent).map_err(|e| usage(e.to_string()))?;
            let p = base.printer();
            let shown = s.show(p);
            let rep = match &fc {
                Some(fc) => report::prove_report(&fc.name, &shown, &prove_focused(fc, &s, &b), p),
                None => report::prove_report(&base.name, &shown, &prove(&base, &s, &b), p),
            };
            Ok(rep.render())
        }
        Command::Validate { calc, partition, seed, count, depth, atoms, max_nodes, csv } => {
            let c = calc_arg(&calc)?;
            let (fc, _) = focused_for(&c, &partition, &opts)?;
            let mut params = CorpusParams::new(seed, count, depth);
            params.atoms = atoms;
            let corpus = gen_corpus(&c, &params);
            let mut b = SearchBounds::default();
            if let Some(n) = max_nodes {
                b.max_nodes = n;
            }
            let r = cross_validate(&c, &fc, &corpus, &b);
            if let Some(path) = csv {
                fs::write(&path, r.to_csv()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            let mut rep: Report = report::validation_report(&fc, &r);
            rep.field("seed", seed).field("depth", depth).field("atoms", atoms);
            let text = rep.render();
            let bad = r.mismatches().len() + r.erasure_failures().len() + r.base_proof_failures().len();
            if bad > 0 {
                Err(Fail::Finding(text, format!("{bad} mismatching or unreplayable results")))
            } else {
                Ok(text)
            }
        }
        Command::Builtin { name, out } => {
            let c = builtin(&name).map_err(|e| usage(e.to_string()))?;
            emit(print_calculus(&c), &out)
        }
    }
}

fn json_graph(g: &PermutationGraph) -> String {
    let pairs: Vec<serde_json::Value> = g
        .verdicts
        .iter()
        .map(|((a, b), r)| {
            serde_json::json!({
                "lower": a,
                "upper": b,
                "edge": g.has_edge(a, b),
                "verdict": r.verdict.label(),
                "relaxed": r.relaxed,
            })
        })
        .collect();
    let v = serde_json::json!({
        "calculus": g.calculus,
        "vertices": g.vertices,
        "pairs": pairs,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}
