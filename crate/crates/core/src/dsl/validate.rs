use std::collections::{BTreeMap, BTreeSet};

use crate::kernel::{CalculusSpec, ContextMode, Formula, Item, Notation, Pattern, Side, Succedent};

use super::DslError;

fn sem(msg: String) -> DslError {
    DslError::Semantic(msg)
}

fn check_pattern(calc: &CalculusSpec, p: &Pattern, rule: &str) -> Result<(), DslError> {
    if let Pattern::Compound(c, args) = p {
        let decl = calc
            .connectives
            .iter()
            .find(|d| &d.name == c)
            .ok_or_else(|| sem(format!("rule {}: unknown connective {}", rule, c)))?;
        if decl.arity != args.len() {
            return Err(sem(format!(
                "rule {}: connective {} has arity {} but is applied to {} arguments",
                rule,
                c,
                decl.arity,
                args.len()
            )));
        }
        args.iter().try_for_each(|a| check_pattern(calc, a, rule))?;
    }
    Ok(())
}

pub(crate) fn check_formula(calc: &CalculusSpec, f: &Formula) -> Result<(), DslError> {
    if let Formula::Compound(c, args) = f {
        let decl = calc
            .connectives
            .iter()
            .find(|d| &d.name == c)
            .ok_or_else(|| sem(format!("unknown connective {}", c)))?;
        if decl.arity != args.len() {
            return Err(sem(format!("connective {} has arity {}", c, decl.arity)));
        }
        args.iter().try_for_each(|a| check_formula(calc, a))?;
    }
    Ok(())
}

/// Enforces the calculus invariants that parsing alone cannot.
pub fn validate_calculus(calc: &CalculusSpec, modes: &[(String, ContextMode)]) -> Result<(), DslError> {
    let mut names = BTreeSet::new();
    for c in &calc.connectives {
        if !names.insert(&c.name) {
            return Err(sem(format!("duplicate connective {}", c.name)));
        }
        match (&c.notation, c.arity) {
            (Notation::Infix(_), 2) | (Notation::Prefix(_), 1) | (Notation::Functional, _) => {}
            _ => return Err(sem(format!("connective {}: notation does not fit arity {}", c.name, c.arity))),
        }
    }
    let s = &calc.structural;
    for side in Side::BOTH {
        if s.contraction(side) && !s.weakening(side) {
            return Err(sem(format!(
                "contraction on the {} requires weakening on the {}",
                side.as_str(),
                side.as_str()
            )));
        }
    }
    if calc.succedent == Succedent::Single && s.contraction_right {
        return Err(sem("single-succedent calculi cannot declare right contraction".into()));
    }
    if !s.initial {
        return Err(sem("missing initial rule (structural initial)".into()));
    }
    let mut rule_names: BTreeSet<&str> = ["c_l", "c_r", "w_l", "w_r", "init"].into_iter().collect();
    for r in &calc.logical {
        if !rule_names.insert(&r.name) {
            return Err(sem(format!("duplicate or reserved rule name {}", r.name)));
        }
        let concl_formulas: Vec<_> = Side::BOTH
            .iter()
            .flat_map(|&sd| r.conclusion.side(sd).iter().filter(|i| matches!(i, Item::Formula { .. })))
            .collect();
        let marked = r.conclusion.marked();
        if marked.len() != 1 || concl_formulas.len() != 1 {
            return Err(sem(format!("rule {}: conclusion needs exactly one formula, marked [..] as main", r.name)));
        }
        if matches!(marked[0].1, Pattern::Meta(_)) {
            return Err(sem(format!("rule {}: main formula must have a top connective", r.name)));
        }
        if r.variants.is_empty() {
            return Err(sem(format!("rule {}: no premises variant", r.name)));
        }
        let n = r.variants[0].len();
        if r.variants.iter().any(|v| v.len() != n) {
            return Err(sem(format!("rule {}: variants differ in premise count", r.name)));
        }
        // every pattern's connectives
        let all = std::iter::once(&r.conclusion).chain(r.variants.iter().flatten());
        let mut ctx_side: BTreeMap<&str, Side> = BTreeMap::new();
        for sp in all.clone() {
            let mut seen = BTreeSet::new();
            for side in Side::BOTH {
                for i in sp.side(side) {
                    match i {
                        Item::Formula { pattern, .. } => check_pattern(calc, pattern, &r.name)?,
                        Item::Ctx(v) => {
                            if !seen.insert(v.as_str()) {
                                return Err(sem(format!("rule {}: context variable {} repeated", r.name, v)));
                            }
                            if *ctx_side.entry(v).or_insert(side) != side {
                                return Err(sem(format!("rule {}: context variable {} used on both sides", r.name, v)));
                            }
                        }
                    }
                }
            }
            if calc.succedent == Succedent::Single && sp.right.len() != 1 {
                return Err(sem(format!(
                    "rule {}: single-succedent sequents need exactly one right item in {}",
                    r.name,
                    sp.show(calc.printer())
                )));
            }
        }
        let concl_meta: BTreeSet<String> = r.conclusion.metavars().into_iter().collect();
        let concl_ctx: BTreeSet<&str> = r.conclusion.all_context_vars().into_iter().collect();
        for v in &r.variants {
            let mut used = BTreeSet::new();
            for p in v {
                for m in p.metavars() {
                    if !concl_meta.contains(&m) {
                        return Err(sem(format!("rule {}: premise metavariable {} not in conclusion", r.name, m)));
                    }
                }
                for c in p.all_context_vars() {
                    if !concl_ctx.contains(c) {
                        return Err(sem(format!("rule {}: premise context {} not in conclusion", r.name, c)));
                    }
                    used.insert(c);
                }
            }
            if n > 0 && used != concl_ctx {
                return Err(sem(format!("rule {}: conclusion context variables must all reach a premise", r.name)));
            }
        }
        if let Some((_, m)) = modes.iter().find(|(name, _)| name == &r.name) {
            if *m != r.context_mode() {
                return Err(sem(format!(
                    "rule {}: annotated {} but contexts make it {}",
                    r.name,
                    m.as_str(),
                    r.context_mode().as_str()
                )));
            }
        }
    }
    Ok(())
}
