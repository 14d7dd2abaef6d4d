use crate::kernel::{
    apply_rule, instances, instances_on, validate_derivation, Derivation, Formula, Instance, RuleSchema, Sequent,
    Side, Substitution,
};

use super::{FocusedCalculus, FocusedDerivation, FocusedStep, FocusedValidationError};

/// Forgets the focusing structure: selection, store and end steps vanish,
/// contexts merge, labels go. A selection that keeps a copy and a shared
/// formula become base contraction steps. The result is checked with
/// [`validate_derivation`].
pub fn erase_focus(fc: &FocusedCalculus, d: &FocusedDerivation) -> Result<Derivation, FocusedValidationError> {
    let out = erase(fc, d, &mut Vec::new())?;
    validate_derivation(&fc.base, &out).map_err(|e| FocusedValidationError {
        path: e.path,
        reason: format!("erased derivation rejected: {}", e.reason),
    })?;
    Ok(out)
}

fn erase(fc: &FocusedCalculus, d: &FocusedDerivation, path: &mut Vec<usize>) -> Result<Derivation, FocusedValidationError> {
    let fail = |path: &Vec<usize>, reason: String| FocusedValidationError { path: path.clone(), reason };
    let merged = d.sequent.merged();
    let Some(step) = &d.step else { return Err(fail(path, "open leaf".into())) };
    let mut kids = Vec::new();
    for (i, c) in d.children.iter().enumerate() {
        path.push(i);
        kids.push(erase(fc, c, path)?);
        path.pop();
    }
    match step {
        FocusedStep::Select { copy: false, .. } | FocusedStep::Store { .. } | FocusedStep::End => {
            kids.pop().ok_or_else(|| fail(path, "structural step without premise".into()))
        }
        FocusedStep::Select { side, formula, copy: true } => {
            let child = kids.pop().ok_or_else(|| fail(path, "selection without premise".into()))?;
            contract_chain(fc, &merged, &[(*side, formula.clone())], child).ok_or_else(|| fail(path, "no contraction instance".into()))
        }
        FocusedStep::Init => {
            let init = fc.base.rule("init").ok_or_else(|| fail(path, "calculus has no initial rule".into()))?;
            let inst = instances(&fc.base, &init, &merged)
                .into_iter()
                .next()
                .ok_or_else(|| fail(path, "initial does not apply to the erased sequent".into()))?;
            Ok(Derivation::node(merged, inst, Vec::new()))
        }
        FocusedStep::Phase(li) => {
            let rule = fc.base.logical.iter().find(|r| r.name == li.rule).ok_or_else(|| fail(path, "unknown rule".into()))?;
            let mut subst = Substitution { formulas: li.formulas.clone(), ..Default::default() };
            let mut extra = Vec::new();
            for s in Side::BOTH {
                let vars: Vec<&str> = rule.conclusion.context_vars(s).collect();
                let shared: Vec<Formula> = li.shared.iter().filter(|(t, _)| *t == s).map(|(_, f)| f.clone()).collect();
                for v in &vars {
                    let mut c = li.passive.get(*v).cloned().unwrap_or_default();
                    c.extend(li.active.get(*v).cloned().unwrap_or_default());
                    c.extend(shared.iter().cloned());
                    subst.bind_context(v, c);
                }
                for f in &shared {
                    for _ in 1..vars.len() {
                        extra.push((s, f.clone()));
                    }
                }
            }
            let inst = Instance { rule: rule.name.clone(), variant: li.variant, subst };
            let top = expanded(rule, &inst).ok_or_else(|| fail(path, "lifted instance does not instantiate".into()))?;
            let prems = apply_rule(rule, &top, &inst).map_err(|e| fail(path, e.to_string()))?;
            if prems.len() != kids.len() || prems.iter().zip(&kids).any(|(p, k)| p != &k.sequent) {
                return Err(fail(path, format!("erased premises of {} do not match", rule.name)));
            }
            let node = Derivation::node(top, inst, kids);
            contract_chain(fc, &merged, &extra, node).ok_or_else(|| fail(path, "no contraction instance".into()))
        }
    }
}

fn expanded(rule: &RuleSchema, inst: &Instance) -> Option<Sequent> {
    inst.subst.apply(&rule.conclusion)
}

/// Contraction steps from `goal` adding each formula of `copies` once,
/// ending in `top`.
fn contract_chain(fc: &FocusedCalculus, goal: &Sequent, copies: &[(Side, Formula)], top: Derivation) -> Option<Derivation> {
    let mut goals = vec![goal.clone()];
    for (s, f) in copies {
        let next = goals.last().unwrap().with_added(*s, f.clone());
        goals.push(next);
    }
    if goals.last() != Some(&top.sequent) {
        return None;
    }
    let mut d = top;
    for (i, (s, f)) in copies.iter().enumerate().rev() {
        let c = RuleSchema::contraction(*s);
        let g = &goals[i];
        let inst = instances_on(&fc.base, &c, g, *s, f).into_iter().next()?;
        d = Derivation::node(g.clone(), inst, vec![d]);
    }
    Some(d)
}
