//! Sources of the built-in calculi.
//!
//! `lj` is reconstructed from its permutation cliques and from the LK
//! figure: additive and multiplicative conjunction on both sides, additive
//! disjunction, multiplicative implication left. `ljm` keeps only the
//! multiplicative conjunction.
//!
//! In `lk` and `lj` the additive and multiplicative conjunctions (and, for
//! `lk`, disjunctions) are distinct connectives, so every connective and
//! side has a single introduction rule and polarity is well defined.

pub const MALL: &str = r#"
calculus mall
succedent multi
connective tensor 2 infix "⊗"
connective par 2 infix "⅋"
connective plus 2 infix "⊕"
connective with 2 infix "&"
structural initial
rule with_l: Γ, [A] ⊢ Δ | Γ, [B] ⊢ Δ / Γ, [A & B] ⊢ Δ
rule tensor_l: Γ, [A], [B] ⊢ Δ / Γ, [A ⊗ B] ⊢ Δ
rule plus_l: Γ, [A] ⊢ Δ ; Γ, [B] ⊢ Δ / Γ, [A ⊕ B] ⊢ Δ
rule par_l: Γ, [A] ⊢ Δ ; Γ', [B] ⊢ Δ' / Γ, Γ', [A ⅋ B] ⊢ Δ, Δ'
rule with_r: Γ ⊢ Δ, [A] ; Γ ⊢ Δ, [B] / Γ ⊢ Δ, [A & B]
rule tensor_r: Γ ⊢ Δ, [A] ; Γ' ⊢ Δ', [B] / Γ, Γ' ⊢ Δ, Δ', [A ⊗ B]
rule plus_r: Γ ⊢ Δ, [A] | Γ ⊢ Δ, [B] / Γ ⊢ Δ, [A ⊕ B]
rule par_r: Γ ⊢ Δ, [A], [B] / Γ ⊢ Δ, [A ⅋ B]
"#;

pub const LK: &str = r#"
calculus lk
succedent multi
connective and_a 2 infix "∧ᵃ"
connective and_m 2 infix "∧ᵐ"
connective or_a 2 infix "∨ᵃ"
connective or_m 2 infix "∨ᵐ"
structural contraction left
structural contraction right
structural weakening left
structural weakening right
structural initial
rule and_a_l: Γ, [A] ⊢ Δ | Γ, [B] ⊢ Δ / Γ, [A ∧ᵃ B] ⊢ Δ
rule and_m_l: Γ, [A], [B] ⊢ Δ / Γ, [A ∧ᵐ B] ⊢ Δ
rule or_a_l: Γ, [A] ⊢ Δ ; Γ, [B] ⊢ Δ / Γ, [A ∨ᵃ B] ⊢ Δ
rule or_m_l: Γ, [A] ⊢ Δ ; Γ', [B] ⊢ Δ' / Γ, Γ', [A ∨ᵐ B] ⊢ Δ, Δ'
rule and_a_r: Γ ⊢ Δ, [A] ; Γ ⊢ Δ, [B] / Γ ⊢ Δ, [A ∧ᵃ B]
rule and_m_r: Γ ⊢ Δ, [A] ; Γ' ⊢ Δ', [B] / Γ, Γ' ⊢ Δ, Δ', [A ∧ᵐ B]
rule or_a_r: Γ ⊢ Δ, [A] | Γ ⊢ Δ, [B] / Γ ⊢ Δ, [A ∨ᵃ B]
rule or_m_r: Γ ⊢ Δ, [A], [B] / Γ ⊢ Δ, [A ∨ᵐ B]
"#;

pub const LJ: &str = r#"
calculus lj
succedent single
connective and_a 2 infix "∧ᵃ"
connective and_m 2 infix "∧ᵐ"
connective or 2 infix "∨"
connective imp 2 infix "→"
structural contraction left
structural weakening left
structural initial
rule and_a_l: Γ, [A] ⊢ Δ | Γ, [B] ⊢ Δ / Γ, [A ∧ᵃ B] ⊢ Δ
rule and_m_l: Γ, [A], [B] ⊢ Δ / Γ, [A ∧ᵐ B] ⊢ Δ
rule or_l: Γ, [A] ⊢ Δ ; Γ, [B] ⊢ Δ / Γ, [A ∨ B] ⊢ Δ
rule imp_l: Γ ⊢ [A] ; Γ', [B] ⊢ Δ / Γ, Γ', [A → B] ⊢ Δ
rule and_a_r: Γ ⊢ [A] ; Γ ⊢ [B] / Γ ⊢ [A ∧ᵃ B]
rule and_m_r: Γ ⊢ [A] ; Γ' ⊢ [B] / Γ, Γ' ⊢ [A ∧ᵐ B]
rule or_r: Γ ⊢ [A] | Γ ⊢ [B] / Γ ⊢ [A ∨ B]
rule imp_r: Γ, [A] ⊢ [B] / Γ ⊢ [A → B]
"#;

pub const LJM: &str = r#"
calculus ljm
succedent single
connective and 2 infix "∧"
connective or 2 infix "∨"
connective imp 2 infix "→"
structural contraction left
structural weakening left
structural initial
rule and_l: Γ, [A], [B] ⊢ Δ / Γ, [A ∧ B] ⊢ Δ
rule or_l: Γ, [A] ⊢ Δ ; Γ, [B] ⊢ Δ / Γ, [A ∨ B] ⊢ Δ
rule imp_l: Γ ⊢ [A] ; Γ', [B] ⊢ Δ / Γ, Γ', [A → B] ⊢ Δ
rule and_r: Γ ⊢ [A] ; Γ' ⊢ [B] / Γ, Γ' ⊢ [A ∧ B]
rule or_r: Γ ⊢ [A] | Γ ⊢ [B] / Γ ⊢ [A ∨ B]
rule imp_r: Γ, [A] ⊢ [B] / Γ ⊢ [A → B]
"#;

pub const NAMES: [&str; 4] = ["mall", "lk", "lj", "ljm"];
