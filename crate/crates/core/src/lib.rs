//! Permutation graphs of sequent calculi and the focused calculi they induce.
//!
//! The pipeline: parse or load a calculus ([`dsl`]), decide pairwise rule
//! permutability ([`permcheck`]), build the permutation graph and its
//! cliques and focusable bipartitions ([`graph`]), generate a focused
//! calculus with a contraction policy ([`focusgen`]) and cross-check it
//! against the original by bounded proof search ([`search`]).

pub mod dsl;
pub mod focusgen;
pub mod graph;
pub mod kernel;
pub mod permcheck;
pub mod report;
pub mod search;
