//! The `.fcl` calculus format.
//!
//! ```text
//! calculus mall
//! succedent multi
//! connective tensor 2 infix "⊗"
//! structural initial
//! rule tensor_r multiplicative:
//!   Γ ⊢ Δ, [A] ; Γ' ⊢ Δ', [B]
//!   / Γ, Γ' ⊢ Δ, Δ', [A ⊗ B]
//! ```
//!
//! A statement starts on an unindented line; indented lines continue it.
//! In a rule, `;` separates premises, `|` separates alternative premise
//! lists, `[..]` marks the main formula of the conclusion and the
//! auxiliary formulas of the premises. Context variables are uppercase
//! Greek names (Γ, Δ', Σ1), metavariables uppercase Latin names, atoms
//! lowercase names.

mod builtins;
mod lexer;
mod parser;
mod validate;

pub use builtins::NAMES as BUILTIN_NAMES;
pub use parser::{parse_calculus, parse_formula, parse_sequent};
pub use validate::validate_calculus;

use crate::kernel::{CalculusSpec, ContextMode, Notation, Succedent};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("unknown built-in calculus {0:?} (expected one of mall, lk, lj, ljm)")]
    UnknownBuiltin(String),
}

impl DslError {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        DslError::Syntax { line, col, msg: msg.into() }
    }
}

/// One of the built-in calculi: `mall`, `lk`, `lj` or `ljm`.
pub fn builtin(name: &str) -> Result<CalculusSpec, DslError> {
    let src = match name {
        "mall" => builtins::MALL,
        "lk" => builtins::LK,
        "lj" => builtins::LJ,
        "ljm" => builtins::LJM,
        other => return Err(DslError::UnknownBuiltin(other.to_string())),
    };
    parse_calculus(src)
}

/// Canonical text: header, connectives in declaration order, structural
/// declarations, then rule blocks sorted by name with two-space indented
/// continuation lines.
pub fn print_calculus(c: &CalculusSpec) -> String {
    let p = c.printer();
    let mut out = format!("calculus {}\n", c.name);
    out.push_str(match c.succedent {
        Succedent::Multi => "succedent multi\n",
        Succedent::Single => "succedent single\n",
    });
    for d in &c.connectives {
        out.push_str(&format!("connective {} {}", d.name, d.arity));
        match &d.notation {
            Notation::Functional => {}
            Notation::Infix(s) => out.push_str(&format!(" infix \"{}\"", s)),
            Notation::Prefix(s) => out.push_str(&format!(" prefix \"{}\"", s)),
        }
        out.push('\n');
    }
    let s = &c.structural;
    for (on, line) in [
        (s.contraction_left, "structural contraction left"),
        (s.contraction_right, "structural contraction right"),
        (s.weakening_left, "structural weakening left"),
        (s.weakening_right, "structural weakening right"),
        (s.initial, "structural initial"),
    ] {
        if on {
            out.push_str(line);
            out.push('\n');
        }
    }
    let mut rules: Vec<_> = c.logical.iter().collect();
    rules.sort_by(|a, b| a.name.cmp(&b.name));
    for r in rules {
        out.push('\n');
        let mode = match r.context_mode() {
            ContextMode::Unary => String::new(),
            m => format!(" {}", m.as_str()),
        };
        out.push_str(&format!("rule {}{}:\n", r.name, mode));
        let prems: Vec<String> = r
            .variants
            .iter()
            .map(|v| v.iter().map(|sp| sp.show(p)).collect::<Vec<_>>().join(" ; "))
            .filter(|s| !s.is_empty())
            .collect();
        for (i, v) in prems.iter().enumerate() {
            out.push_str(if i == 0 { "  " } else { "  | " });
            out.push_str(v);
            out.push('\n');
        }
        out.push_str(&format!("  / {}\n", r.conclusion.show(p)));
    }
    out
}
