//! Text form of a focused calculus.
//!
//! The header fixes the bipartition and records the derived contraction
//! policy; the base calculus follows verbatim, then a listing of the
//! structural moves and the lifted phase rules. Parsing rebuilds everything
//! from the base and the bipartition and accepts the text only if printing
//! the result reproduces it exactly.

use crate::dsl::{parse_calculus, print_calculus};
use crate::graph::{build_permutation_graph, FocusableBipartition, RuleSet};
use crate::kernel::{Item, Printer, SequentPattern, Side};
use crate::permcheck::CheckOptions;

use super::{contraction_phase_admissibility, generate_focused, FocusError, FocusedCalculus, Phase};

const BASE: &str = "--- base";
const LISTING: &str = "--- listing";

pub fn print_focused(fc: &FocusedCalculus) -> String {
    let p = fc.printer();
    let mut out = String::new();
    out.push_str(&format!("focused {}\nbase {}\n", fc.name, fc.base.name));
    out.push_str(&format!("negative {}\n", join(&fc.bipartition.negative)));
    out.push_str(&format!("positive {}\n", join(&fc.bipartition.positive)));
    for e in &fc.contraction.entries {
        let status = if e.admissible {
            "admissible".to_string()
        } else {
            let names: Vec<&str> = e.failures.iter().map(|f| f.0.as_str()).collect();
            format!("fails {}", names.join(" "))
        };
        out.push_str(&format!("contraction {} {} {}\n", e.phase.as_str(), e.contraction, status));
    }
    for phase in Phase::BOTH {
        let sides: Vec<&str> = fc.copy_sides(phase).iter().map(|s| s.as_str()).collect();
        let sides = if sides.is_empty() { "none".to_string() } else { sides.join(" ") };
        out.push_str(&format!("copy {} {}\n", phase.as_str(), sides));
    }
    out.push_str("initial neutral positive-atom\n");
    out.push_str(BASE);
    out.push('\n');
    out.push_str(&print_calculus(&fc.base));
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out.push_str(LISTING);
    out.push('\n');
    for (side, x) in [(Side::Left, "Γ, F ; · ⊢⁰ Δ ; ·"), (Side::Right, "Γ ; · ⊢⁰ Δ, F ; ·")] {
        let prem = match side {
            Side::Left => "Γ ; F ⊢ᵖ Δ ; ·",
            Side::Right => "Γ ; · ⊢ᵖ Δ ; F",
        };
        out.push_str(&format!("sel_{}: {} / {}\n", side.suffix(), prem, x));
    }
    out.push_str("st_l: Γ, F ; Γ* ⊢ᵖ Δ ; Δ* / Γ ; Γ*, F ⊢ᵖ Δ ; Δ*\n");
    out.push_str("st_r: Γ ; Γ* ⊢ᵖ Δ, F ; Δ* / Γ ; Γ* ⊢ᵖ Δ ; Δ*, F\n");
    out.push_str("end: Γ ; · ⊢⁰ Δ ; · / Γ ; · ⊢ᵖ Δ ; ·\n");
    let mut rules: Vec<_> = fc.base.logical.iter().collect();
    rules.sort_by(|a, b| a.name.cmp(&b.name));
    for r in rules {
        let Some(phase) = fc.phase_of_rule(&r.name) else { continue };
        let sym = phase.label().symbol();
        let prems: Vec<String> = r
            .variants
            .iter()
            .map(|v| v.iter().map(|s| lifted(s, sym, p)).collect::<Vec<_>>().join(" ; "))
            .collect();
        out.push_str(&format!("{}{}: {} / {}\n", r.name, sym, prems.join(" | "), lifted(&r.conclusion, sym, p)));
    }
    out
}

fn join(s: &RuleSet) -> String {
    s.iter().cloned().collect::<Vec<_>>().join(" ")
}

fn lifted(s: &SequentPattern, sym: &str, p: Printer<'_>) -> String {
    let part = |side: Side| -> (String, String) {
        let mut passive = Vec::new();
        let mut active = Vec::new();
        for i in s.side(side) {
            match i {
                Item::Ctx(c) => {
                    passive.push(c.clone());
                    active.push(format!("{c}*"));
                }
                Item::Formula { pattern, .. } => active.push(p.pattern(pattern)),
            }
        }
        let show = |v: Vec<String>| if v.is_empty() { "·".to_string() } else { v.join(", ") };
        (show(passive), show(active))
    };
    let (pl, al) = part(Side::Left);
    let (pr, ar) = part(Side::Right);
    format!("{pl} ; {al} ⊢{sym} {pr} ; {ar}")
}

/// Reads a focused calculus printed by [`print_focused`].
pub fn parse_focused(text: &str, opts: &CheckOptions) -> Result<FocusedCalculus, FocusError> {
    let err = |m: &str| FocusError::Text(m.to_string());
    let (header, rest) = text.split_once(&format!("\n{BASE}\n")).ok_or_else(|| err("missing base section"))?;
    let (base_text, _) = rest.split_once(&format!("{LISTING}\n")).ok_or_else(|| err("missing listing section"))?;
    let mut negative = None;
    let mut positive = None;
    for line in header.lines() {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("negative") => negative = Some(words.map(String::from).collect::<RuleSet>()),
            Some("positive") => positive = Some(words.map(String::from).collect::<RuleSet>()),
            _ => {}
        }
    }
    let (negative, positive) = negative.zip(positive).ok_or_else(|| err("missing negative or positive line"))?;
    let base = parse_calculus(base_text).map_err(|e| FocusError::Text(format!("base calculus: {e}")))?;
    let g = build_permutation_graph(&base, opts);
    let bp = FocusableBipartition::new(&base, &g, &negative, &positive)
        .map_err(|_| err("bipartition is not focusable for the base calculus"))?;
    let report = contraction_phase_admissibility(&base, &bp, opts);
    let fc = generate_focused(&base, &bp, &report)?;
    if print_focused(&fc) != text {
        return Err(err("text differs from the regenerated focused calculus"));
    }
    Ok(fc)
}
