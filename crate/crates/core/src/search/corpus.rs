use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::focusgen::{erase_focus, validate_focused, FocusedCalculus};
use crate::kernel::{validate_derivation, CalculusSpec, Formula, Sequent, Succedent};

use super::{prove, prove_focused, Proof, SearchBounds, SearchOutcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusParams {
    /// Connective names to draw from; empty means every declared one.
    pub connectives: Vec<String>,
    pub atoms: usize,
    pub max_depth: usize,
    pub left: RangeInclusive<usize>,
    pub right: RangeInclusive<usize>,
    pub count: usize,
    pub seed: u64,
}

impl CorpusParams {
    pub fn new(seed: u64, count: usize, max_depth: usize) -> Self {
        CorpusParams { connectives: Vec::new(), atoms: 3, max_depth, left: 0..=2, right: 1..=2, count, seed }
    }
}

/// Random sequents over `calc`'s connectives. Each formula node picks
/// uniformly among the connectives and atoms, atoms only at the depth
/// limit. Right sides of single-succedent calculi get exactly one formula.
pub fn gen_corpus(calc: &CalculusSpec, p: &CorpusParams) -> Vec<Sequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let conns: Vec<(String, usize)> = calc
        .connectives
        .iter()
        .filter(|d| p.connectives.is_empty() || p.connectives.contains(&d.name))
        .map(|d| (d.name.clone(), d.arity))
        .collect();
    let atoms: Vec<String> = (0..p.atoms.max(1)).map(atom_name).collect();
    let right = match calc.succedent {
        Succedent::Single => 1..=1,
        Succedent::Multi => p.right.clone(),
    };
    (0..p.count)
        .map(|_| {
            let nl = rng.gen_range(p.left.clone());
            let nr = rng.gen_range(right.clone());
            let l = (0..nl).map(|_| formula(&mut rng, &conns, &atoms, p.max_depth)).collect();
            let r = (0..nr).map(|_| formula(&mut rng, &conns, &atoms, p.max_depth)).collect();
            Sequent::new(l, r)
        })
        .collect()
}

fn atom_name(i: usize) -> String {
    let base = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        base.to_string()
    } else {
        format!("{base}{}", i / 26)
    }
}

fn formula(rng: &mut ChaCha8Rng, conns: &[(String, usize)], atoms: &[String], depth: usize) -> Formula {
    let n = if depth == 0 { 0 } else { conns.len() };
    let k = rng.gen_range(0..n + atoms.len());
    if k >= n {
        return Formula::atom(atoms[k - n].clone());
    }
    let (name, arity) = &conns[k];
    Formula::compound(name.clone(), (0..*arity).map(|_| formula(rng, conns, atoms, depth - 1)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeKind {
    Proved,
    Refuted,
    BoundHit,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeKind::Proved => "proved",
            OutcomeKind::Refuted => "refuted",
            OutcomeKind::BoundHit => "bound-hit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationRow {
    pub sequent: String,
    pub base: OutcomeKind,
    pub focused: OutcomeKind,
    pub base_nodes: usize,
    pub focused_nodes: usize,
    /// For proofs found: did they replay (focused: validate, erase, replay)?
    pub base_proof_ok: Option<bool>,
    pub erasure_ok: Option<bool>,
}

impl ValidationRow {
    pub fn mismatch(&self) -> bool {
        matches!(
            (self.base, self.focused),
            (OutcomeKind::Proved, OutcomeKind::Refuted) | (OutcomeKind::Refuted, OutcomeKind::Proved)
        )
    }

    pub fn bound_hit(&self) -> bool {
        self.base == OutcomeKind::BoundHit || self.focused == OutcomeKind::BoundHit
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    /// Indices of rows where one search proved and the other refuted.
    pub fn mismatches(&self) -> Vec<usize> {
        self.rows.iter().enumerate().filter(|(_, r)| r.mismatch()).map(|(i, _)| i).collect()
    }

    pub fn bound_hits(&self) -> Vec<usize> {
        self.rows.iter().enumerate().filter(|(_, r)| r.bound_hit()).map(|(i, _)| i).collect()
    }

    pub fn count(&self, focused: bool, kind: OutcomeKind) -> usize {
        self.rows.iter().filter(|r| if focused { r.focused == kind } else { r.base == kind }).count()
    }

    pub fn focused_proofs(&self) -> usize {
        self.rows.iter().filter(|r| r.erasure_ok.is_some()).count()
    }

    /// Focused proofs that failed validation or erasure.
    pub fn erasure_failures(&self) -> Vec<usize> {
        self.rows.iter().enumerate().filter(|(_, r)| r.erasure_ok == Some(false)).map(|(i, _)| i).collect()
    }

    pub fn base_proof_failures(&self) -> Vec<usize> {
        self.rows.iter().enumerate().filter(|(_, r)| r.base_proof_ok == Some(false)).map(|(i, _)| i).collect()
    }

    /// Rows where the focused search expanded no more nodes than the base one.
    pub fn focused_no_larger(&self) -> usize {
        self.rows.iter().filter(|r| r.focused_nodes <= r.base_nodes).count()
    }

    pub fn total_nodes(&self) -> (usize, usize) {
        self.rows.iter().fold((0, 0), |(b, f), r| (b + r.base_nodes, f + r.focused_nodes))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["sequent", "base", "focused", "base_nodes", "focused_nodes"]).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.sequent.clone(),
                r.base.to_string(),
                r.focused.to_string(),
                r.base_nodes.to_string(),
                r.focused_nodes.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Runs both searches on every sequent. Proofs are replayed: base proofs
/// with the base checker, focused ones with the focused checker and then
/// erased and replayed in the base calculus. Sequents run in parallel; the
/// report keeps corpus order.
pub fn cross_validate(calc: &CalculusSpec, fc: &FocusedCalculus, corpus: &[Sequent], b: &SearchBounds) -> ValidationReport {
    let row = |s: &Sequent| -> ValidationRow {
        let base = prove(calc, s, b);
        let focused = prove_focused(fc, s, b);
        let base_proof_ok = match &base {
            SearchOutcome::Proved(Proof::Base(d), _) => Some(validate_derivation(calc, d).is_ok()),
            _ => None,
        };
        let erasure_ok = match &focused {
            SearchOutcome::Proved(Proof::Focused(d), _) => {
                Some(validate_focused(fc, d).is_ok() && erase_focus(fc, d).is_ok_and(|e| e.sequent == *s))
            }
            _ => None,
        };
        ValidationRow {
            sequent: s.show(calc.printer()),
            base: base.kind(),
            focused: focused.kind(),
            base_nodes: base.stats().nodes,
            focused_nodes: focused.stats().nodes,
            base_proof_ok,
            erasure_ok,
        }
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(workers).max(1);
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus.chunks(chunk).map(|part| scope.spawn(move || part.iter().map(row).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("validation worker panicked")).collect()
    });
    ValidationReport { rows }
}
