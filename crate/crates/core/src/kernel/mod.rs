//! Formulas, sequents, rule schemas and derivations, plus multiset
//! matching of sequent patterns against concrete sequents.

mod derivation;
mod formula;
mod matching;
mod rule;
mod sequent;

pub use derivation::{validate_derivation, validate_partial, Derivation, ValidationError};
pub use formula::{ConnectiveDecl, Formula, Notation, Pattern, Printer};
pub use matching::{distribute, match_sequent};
pub use rule::{
    apply_rule, instances, instances_on, CalculusSpec, ContextMode, Instance, RuleKind, RuleSchema, Structural,
    Succedent,
};
pub use sequent::{Item, Sequent, SequentPattern, Side, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("rule {rule} does not match {goal}")]
    NoMatch { rule: String, goal: String },
    #[error("rule {rule} has no premise variant {variant}")]
    BadVariant { rule: String, variant: usize },
}
