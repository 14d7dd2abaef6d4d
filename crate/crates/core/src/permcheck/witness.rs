use std::collections::{BTreeMap, BTreeSet};

use crate::kernel::{validate_partial, CalculusSpec, Derivation, Formula, Sequent, Substitution, ValidationError};

use super::{InterferenceTemplate, Witness};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("template does not replay: {0}")]
    Template(ValidationError),
    #[error("reordering does not replay: {0}")]
    Reordered(ValidationError),
    #[error("end sequents differ: {template} vs {reordered}")]
    EndMismatch { template: Sequent, reordered: Sequent },
    #[error("reordering must start with {expected} on its main formula")]
    FirstStep { expected: String },
    #[error("leaf {leaf} of the reordering is not a template leaf")]
    Leaf { leaf: Sequent },
}

/// Replays template and reordering in `calc` and checks that they share
/// the end sequent and that every open leaf of the reordering is an open
/// leaf of the template.
pub fn validate_witness(calc: &CalculusSpec, w: &Witness) -> Result<(), WitnessError> {
    let t = &w.template;
    validate_partial(calc, &t.derivation).map_err(WitnessError::Template)?;
    validate_partial(calc, &w.reordered).map_err(WitnessError::Reordered)?;
    if t.end_sequent() != &w.reordered.sequent {
        return Err(WitnessError::EndMismatch { template: t.end_sequent().clone(), reordered: w.reordered.sequent.clone() });
    }
    let first_ok = w.reordered.step.as_ref().is_some_and(|s| {
        s.rule == t.upper && calc.rule(&s.rule).and_then(|r| s.main_formula(&r)).as_ref() == Some(&t.upper_main)
    });
    if !first_ok {
        return Err(WitnessError::FirstStep { expected: t.upper.clone() });
    }
    let leaves: BTreeSet<&Sequent> = t.open_leaves().into_iter().collect();
    for l in w.reordered.open_leaves() {
        if !leaves.contains(l) {
            return Err(WitnessError::Leaf { leaf: l.clone() });
        }
    }
    Ok(())
}

/// Replaces schematic atoms throughout a witness. An atom mapped to one
/// formula is replaced everywhere; an atom mapped to several formulas (or
/// none) must only occur as a whole context member, as the token atoms do.
pub fn instantiate_witness(w: &Witness, map: &BTreeMap<String, Vec<Formula>>) -> Witness {
    let t = &w.template;
    let f = |x: &Formula| formula(x, map);
    Witness {
        template: InterferenceTemplate {
            lower: t.lower.clone(),
            upper: t.upper.clone(),
            position: t.position.clone(),
            lower_main: (t.lower_main.0, f(&t.lower_main.1)),
            upper_main: (t.upper_main.0, f(&t.upper_main.1)),
            derivation: derivation(&t.derivation, map),
        },
        reordered: derivation(&w.reordered, map),
    }
}

fn formula(f: &Formula, map: &BTreeMap<String, Vec<Formula>>) -> Formula {
    match f {
        Formula::Atom(a) => match map.get(a) {
            Some(v) if v.len() == 1 => v[0].clone(),
            _ => f.clone(),
        },
        Formula::Compound(c, args) => Formula::Compound(c.clone(), args.iter().map(|a| formula(a, map)).collect()),
    }
}

fn members(fs: &[Formula], map: &BTreeMap<String, Vec<Formula>>) -> Vec<Formula> {
    fs.iter()
        .flat_map(|f| match f {
            Formula::Atom(a) if map.contains_key(a) => map[a].clone(),
            _ => vec![formula(f, map)],
        })
        .collect()
}

fn derivation(d: &Derivation, map: &BTreeMap<String, Vec<Formula>>) -> Derivation {
    let sequent = Sequent::new(members(d.sequent.left(), map), members(d.sequent.right(), map));
    let step = d.step.as_ref().map(|s| {
        let mut subst = Substitution::default();
        for (k, v) in &s.subst.formulas {
            subst.formulas.insert(k.clone(), formula(v, map));
        }
        for (k, v) in &s.subst.contexts {
            subst.bind_context(k, members(v, map));
        }
        crate::kernel::Instance { rule: s.rule.clone(), variant: s.variant, subst }
    });
    Derivation { sequent, step, children: d.children.iter().map(|c| derivation(c, map)).collect() }
}
