use std::collections::BTreeMap;
use std::fmt;

use super::formula::{Formula, Pattern, Printer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Side::Left => "l",
            Side::Right => "r",
        }
    }
}

/// A two-sided sequent over multisets. Both sides are kept sorted, so
/// structural equality is multiset equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    left: Vec<Formula>,
    right: Vec<Formula>,
}

impl Sequent {
    pub fn new(mut left: Vec<Formula>, mut right: Vec<Formula>) -> Self {
        left.sort();
        right.sort();
        Sequent { left, right }
    }

    pub fn left(&self) -> &[Formula] {
        &self.left
    }

    pub fn right(&self) -> &[Formula] {
        &self.right
    }

    pub fn side(&self, side: Side) -> &[Formula] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn with_added(&self, side: Side, f: Formula) -> Sequent {
        let mut s = self.clone();
        let v = match side {
            Side::Left => &mut s.left,
            Side::Right => &mut s.right,
        };
        let pos = v.binary_search(&f).unwrap_or_else(|p| p);
        v.insert(pos, f);
        s
    }

    /// Removes one occurrence of `f`; `None` if absent.
    pub fn with_removed(&self, side: Side, f: &Formula) -> Option<Sequent> {
        let mut s = self.clone();
        let v = match side {
            Side::Left => &mut s.left,
            Side::Right => &mut s.right,
        };
        let pos = v.binary_search(f).ok()?;
        v.remove(pos);
        Some(s)
    }

    pub fn contains(&self, side: Side, f: &Formula) -> bool {
        self.side(side).binary_search(f).is_ok()
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True if every formula of `self` occurs in `other` with at least the
    /// same multiplicity on the same side.
    pub fn is_sub_multiset_of(&self, other: &Sequent) -> bool {
        sub_multiset(&self.left, &other.left) && sub_multiset(&self.right, &other.right)
    }

    pub fn show(&self, p: Printer<'_>) -> String {
        let l: Vec<_> = self.left.iter().map(|f| p.formula(f)).collect();
        let r: Vec<_> = self.right.iter().map(|f| p.formula(f)).collect();
        match (l.is_empty(), r.is_empty()) {
            (true, true) => "⊢".into(),
            (true, false) => format!("⊢ {}", r.join(", ")),
            (false, true) => format!("{} ⊢", l.join(", ")),
            (false, false) => format!("{} ⊢ {}", l.join(", "), r.join(", ")),
        }
    }
}

pub(crate) fn sub_multiset(small: &[Formula], big: &[Formula]) -> bool {
    // both sorted
    let mut j = 0;
    for f in small {
        while j < big.len() && &big[j] < f {
            j += 1;
        }
        if j == big.len() || &big[j] != f {
            return false;
        }
        j += 1;
    }
    true
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show(Printer::new(&[])))
    }
}

/// One element of a sequent pattern side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    /// A context variable such as Γ or Δ'.
    Ctx(String),
    /// A formula schema. `marked` flags the main formula in a conclusion
    /// and auxiliary formulas in premises.
    Formula { pattern: Pattern, marked: bool },
}

impl Item {
    pub fn marked(p: Pattern) -> Self {
        Item::Formula { pattern: p, marked: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequentPattern {
    pub left: Vec<Item>,
    pub right: Vec<Item>,
}

impl SequentPattern {
    pub fn new(left: Vec<Item>, right: Vec<Item>) -> Self {
        SequentPattern { left, right }
    }

    pub fn side(&self, side: Side) -> &[Item] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<Item> {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    pub fn context_vars(&self, side: Side) -> impl Iterator<Item = &str> {
        self.side(side).iter().filter_map(|i| match i {
            Item::Ctx(c) => Some(c.as_str()),
            _ => None,
        })
    }

    pub fn all_context_vars(&self) -> Vec<&str> {
        self.context_vars(Side::Left).chain(self.context_vars(Side::Right)).collect()
    }

    /// Marked formula schemas with their sides.
    pub fn marked(&self) -> Vec<(Side, &Pattern)> {
        Side::BOTH
            .iter()
            .flat_map(|&s| {
                self.side(s).iter().filter_map(move |i| match i {
                    Item::Formula { pattern, marked: true } => Some((s, pattern)),
                    _ => None,
                })
            })
            .collect()
    }

    pub fn metavars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in Side::BOTH {
            for i in self.side(s) {
                if let Item::Formula { pattern, .. } = i {
                    pattern.metavars(&mut out);
                }
            }
        }
        out
    }

    pub fn show(&self, p: Printer<'_>) -> String {
        let render = |items: &[Item]| -> Vec<String> {
            items
                .iter()
                .map(|i| match i {
                    Item::Ctx(c) => c.clone(),
                    Item::Formula { pattern, marked: true } => format!("[{}]", p.pattern(pattern)),
                    Item::Formula { pattern, marked: false } => p.pattern(pattern),
                })
                .collect()
        };
        let (l, r) = (render(&self.left), render(&self.right));
        match (l.is_empty(), r.is_empty()) {
            (true, true) => "⊢".into(),
            (true, false) => format!("⊢ {}", r.join(", ")),
            (false, true) => format!("{} ⊢", l.join(", ")),
            (false, false) => format!("{} ⊢ {}", l.join(", "), r.join(", ")),
        }
    }
}

/// Bindings for formula metavariables and context variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    pub formulas: BTreeMap<String, Formula>,
    /// Context contents, each kept sorted.
    pub contexts: BTreeMap<String, Vec<Formula>>,
}

impl Substitution {
    pub fn bind_context(&mut self, var: &str, mut contents: Vec<Formula>) {
        contents.sort();
        self.contexts.insert(var.to_string(), contents);
    }

    /// Instantiates a sequent pattern; `None` if a variable is unbound.
    pub fn apply(&self, p: &SequentPattern) -> Option<Sequent> {
        let side = |items: &[Item]| -> Option<Vec<Formula>> {
            let mut out = Vec::new();
            for i in items {
                match i {
                    Item::Ctx(c) => out.extend(self.contexts.get(c)?.iter().cloned()),
                    Item::Formula { pattern, .. } => out.push(pattern.instantiate(&self.formulas)?),
                }
            }
            Some(out)
        };
        Some(Sequent::new(side(&p.left)?, side(&p.right)?))
    }
}
