use std::collections::BTreeMap;

use crate::kernel::{
    apply_rule, instances_on, CalculusSpec, Derivation, Formula, Instance, RuleKind, RuleSchema, Sequent, Side,
    Substitution, Succedent,
};

use super::{Exhausted, InterferenceTemplate, Meter};

fn metavars(rule: &RuleSchema) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for p in std::iter::once(&rule.conclusion).chain(rule.variants.iter().flatten()) {
        for m in p.metavars() {
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    out
}

fn generic_formulas(rule: &RuleSchema, prefix: &str) -> BTreeMap<String, Formula> {
    metavars(rule)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, Formula::atom(format!("{}{}", prefix, i))))
        .collect()
}

fn generic_main(rule: &RuleSchema, prefix: &str) -> Option<(Side, Formula)> {
    let (side, p) = rule.main()?;
    Some((side, p.instantiate(&generic_formulas(rule, prefix))?))
}

/// Main formula of a rule in lower position.
pub(crate) fn lower_main(rule: &RuleSchema) -> Option<(Side, Formula)> {
    generic_main(rule, "l")
}

/// Distinct auxiliary formulas of a rule in lower position.
pub(crate) fn auxiliaries(rule: &RuleSchema) -> Vec<(Side, Formula)> {
    let fs = generic_formulas(rule, "l");
    let mut out = Vec::new();
    for prem in rule.variants.iter().flatten() {
        for (s, p) in prem.marked() {
            if let Some(f) = p.instantiate(&fs) {
                if !out.contains(&(s, f.clone())) {
                    out.push((s, f));
                }
            }
        }
    }
    out
}

fn token_contexts(rule: &RuleSchema) -> BTreeMap<String, Vec<Formula>> {
    let mut out = BTreeMap::new();
    for (side, prefix) in [(Side::Left, "g"), (Side::Right, "d")] {
        for (i, v) in rule.conclusion.context_vars(side).enumerate() {
            out.insert(v.to_string(), vec![Formula::atom(format!("{}{}", prefix, i))]);
        }
    }
    out
}

fn expand(rule: &RuleSchema, goal: &Sequent, inst: Instance) -> Option<Derivation> {
    let prems = apply_rule(rule, goal, &inst).ok()?;
    Some(Derivation::node(goal.clone(), inst, prems.into_iter().map(Derivation::open).collect()))
}

/// Every combination picking one element from each list, first list
/// varying slowest.
fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for l in lists {
        out = out
            .into_iter()
            .flat_map(|pre| {
                l.iter().map(move |x| {
                    let mut v = pre.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Applies `rule` on `main` in each of `hit`, all choices independent
/// except that `variant`, when given, is fixed.
#[allow(clippy::too_many_arguments)]
fn layer(
    calc: &CalculusSpec,
    rule: &RuleSchema,
    premises: &[Sequent],
    hit: &[usize],
    side: Side,
    main: &Formula,
    variant: Option<usize>,
    meter: &mut Meter,
) -> Result<Vec<Vec<Derivation>>, Exhausted> {
    let mut options = Vec::new();
    for &i in hit {
        let mut opts = Vec::new();
        for inst in instances_on(calc, rule, &premises[i], side, main) {
            if variant.is_some_and(|v| v != inst.variant) {
                continue;
            }
            meter.tick()?;
            opts.extend(expand(rule, &premises[i], inst));
        }
        if opts.is_empty() {
            return Ok(Vec::new());
        }
        options.push(opts);
    }
    Ok(product(&options))
}

fn fill(premises: &[Sequent], hit: &[usize], choice: Vec<Derivation>) -> Vec<Derivation> {
    let mut choice = choice.into_iter();
    premises
        .iter()
        .enumerate()
        .map(|(i, p)| if hit.contains(&i) { choice.next().unwrap() } else { Derivation::open(p.clone()) })
        .collect()
}

pub(crate) fn build(
    calc: &CalculusSpec,
    lower: &RuleSchema,
    upper: &RuleSchema,
    meter: &mut Meter,
) -> Result<Vec<InterferenceTemplate>, Exhausted> {
    let mut out = Vec::new();
    let (Some((uside, umain)), Some(lmain)) = (generic_main(upper, "u"), lower_main(lower)) else {
        return Ok(out);
    };
    let base = Substitution { formulas: generic_formulas(lower, "l"), contexts: token_contexts(lower) };
    let replace_token = calc.succedent == Succedent::Single && uside == Side::Right;
    let positions: Vec<String> = lower.conclusion.context_vars(uside).map(String::from).collect();
    for pos in positions {
        let mut subst = base.clone();
        let mut contents = if replace_token { Vec::new() } else { subst.contexts[&pos].clone() };
        contents.push(umain.clone());
        subst.bind_context(&pos, contents);
        let Some(end) = subst.apply(&lower.conclusion) else { continue };
        if !calc.respects_arity(&end) {
            continue;
        }
        for v in 0..lower.variants.len() {
            let inst = Instance { rule: lower.name.clone(), variant: v, subst: subst.clone() };
            meter.tick()?;
            let Ok(premises) = apply_rule(lower, &end, &inst) else { continue };
            if !premises.iter().all(|p| calc.respects_arity(p)) {
                continue;
            }
            let hit: Vec<usize> = (0..premises.len()).filter(|&i| premises[i].contains(uside, &umain)).collect();
            if hit.is_empty() {
                continue;
            }
            for bv in 0..upper.variants.len() {
                for choice in layer(calc, upper, &premises, &hit, uside, &umain, Some(bv), meter)? {
                    out.push(InterferenceTemplate {
                        lower: lower.name.clone(),
                        upper: upper.name.clone(),
                        position: pos.clone(),
                        lower_main: lmain.clone(),
                        upper_main: (uside, umain.clone()),
                        derivation: Derivation::node(end.clone(), inst.clone(), fill(&premises, &hit, choice)),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Contraction on the main formula of `alpha`, `alpha` on one copy, then
/// `alpha` on the other copy in every premise where it landed.
pub(crate) fn build_contraction(
    calc: &CalculusSpec,
    c: &RuleSchema,
    alpha: &RuleSchema,
    meter: &mut Meter,
) -> Result<Vec<InterferenceTemplate>, Exhausted> {
    let mut out = Vec::new();
    let (RuleKind::Contraction(side), Some((aside, fa))) = (c.kind, lower_main(alpha)) else {
        return Ok(out);
    };
    if side != aside {
        return Ok(out);
    }
    let (mut left, mut right) = (vec![Formula::atom("g0")], vec![Formula::atom("d0")]);
    match side {
        Side::Left => left.push(fa.clone()),
        Side::Right => right.push(fa.clone()),
    }
    let end = Sequent::new(left, right);
    let Some(c_inst) = instances_on(calc, c, &end, side, &fa).into_iter().next() else {
        return Ok(out);
    };
    meter.tick()?;
    let Ok(cp) = apply_rule(c, &end, &c_inst) else { return Ok(out) };
    let copied = &cp[0];
    for first in instances_on(calc, alpha, copied, side, &fa) {
        meter.tick()?;
        let Ok(premises) = apply_rule(alpha, copied, &first) else { continue };
        let hit: Vec<usize> = (0..premises.len()).filter(|&i| premises[i].contains(side, &fa)).collect();
        let label = if hit.len() > 1 { "across" } else { "along" };
        for choice in layer(calc, alpha, &premises, &hit, side, &fa, None, meter)? {
            let upper = Derivation::node(copied.clone(), first.clone(), fill(&premises, &hit, choice));
            out.push(InterferenceTemplate {
                lower: c.name.clone(),
                upper: alpha.name.clone(),
                position: label.into(),
                lower_main: (side, fa.clone()),
                upper_main: (side, fa.clone()),
                derivation: Derivation::node(end.clone(), c_inst.clone(), vec![upper]),
            });
        }
    }
    Ok(out)
}

/// All interference templates of `upper` over `lower`, in order of
/// position, lower variant, upper variant and context split.
pub fn interference_templates(calc: &CalculusSpec, lower: &RuleSchema, upper: &RuleSchema) -> Vec<InterferenceTemplate> {
    build(calc, lower, upper, &mut Meter::new(usize::MAX)).unwrap_or_default()
}

/// Templates for contraction `c` below repeated applications of `alpha`.
pub fn contraction_templates(calc: &CalculusSpec, c: &RuleSchema, alpha: &RuleSchema) -> Vec<InterferenceTemplate> {
    build_contraction(calc, c, alpha, &mut Meter::new(usize::MAX)).unwrap_or_default()
}
