use std::collections::BTreeMap;
use std::fmt;

/// A propositional formula: an atom or a connective applied to arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Compound(String, Vec<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn compound(conn: impl Into<String>, args: Vec<Formula>) -> Self {
        Formula::Compound(conn.into(), args)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn connective(&self) -> Option<&str> {
        match self {
            Formula::Atom(_) => None,
            Formula::Compound(c, _) => Some(c),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Compound(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    /// Number of connective occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Compound(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }
}

/// Connective display information.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notation {
    /// `name(A, B)`
    Functional,
    /// `A sym B`, binary only
    Infix(String),
    /// `sym A`, unary only
    Prefix(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectiveDecl {
    pub name: String,
    pub arity: usize,
    pub notation: Notation,
}

impl ConnectiveDecl {
    pub fn infix(name: &str, sym: &str) -> Self {
        ConnectiveDecl { name: name.into(), arity: 2, notation: Notation::Infix(sym.into()) }
    }
}

/// A formula schema. Metavariables match any formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Meta(String),
    Atom(String),
    Compound(String, Vec<Pattern>),
}

impl Pattern {
    pub fn meta(name: &str) -> Self {
        Pattern::Meta(name.into())
    }

    pub fn compound(conn: &str, args: Vec<Pattern>) -> Self {
        Pattern::Compound(conn.into(), args)
    }

    pub fn metavars(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Meta(m) => {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
            Pattern::Atom(_) => {}
            Pattern::Compound(_, args) => args.iter().for_each(|a| a.metavars(out)),
        }
    }

    pub fn connective(&self) -> Option<&str> {
        match self {
            Pattern::Compound(c, _) => Some(c),
            _ => None,
        }
    }

    /// Extends `bindings` so that the pattern instantiates to `f`.
    pub fn unify(&self, f: &Formula, bindings: &mut BTreeMap<String, Formula>) -> bool {
        match (self, f) {
            (Pattern::Meta(m), _) => match bindings.get(m) {
                Some(bound) => bound == f,
                None => {
                    bindings.insert(m.clone(), f.clone());
                    true
                }
            },
            (Pattern::Atom(a), Formula::Atom(b)) => a == b,
            (Pattern::Compound(c, ps), Formula::Compound(d, fs)) => {
                c == d
                    && ps.len() == fs.len()
                    && ps.iter().zip(fs).all(|(p, f)| p.unify(f, bindings))
            }
            _ => false,
        }
    }

    pub fn instantiate(&self, bindings: &BTreeMap<String, Formula>) -> Option<Formula> {
        Some(match self {
            Pattern::Meta(m) => bindings.get(m)?.clone(),
            Pattern::Atom(a) => Formula::Atom(a.clone()),
            Pattern::Compound(c, ps) => Formula::Compound(
                c.clone(),
                ps.iter().map(|p| p.instantiate(bindings)).collect::<Option<_>>()?,
            ),
        })
    }
}

/// Renders formulas and patterns with a calculus's connective notation.
#[derive(Clone, Copy)]
pub struct Printer<'a> {
    pub connectives: &'a [ConnectiveDecl],
}

impl<'a> Printer<'a> {
    pub fn new(connectives: &'a [ConnectiveDecl]) -> Self {
        Printer { connectives }
    }

    fn notation(&self, name: &str) -> &Notation {
        self.connectives
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.notation)
            .unwrap_or(&Notation::Functional)
    }

    pub fn formula(&self, f: &Formula) -> String {
        let mut s = String::new();
        self.write_formula(f, false, &mut s);
        s
    }

    fn write_formula(&self, f: &Formula, nested: bool, out: &mut String) {
        match f {
            Formula::Atom(a) => out.push_str(a),
            Formula::Compound(c, args) => self.write_compound(c, args, nested, out, |p, a, n, o| {
                p.write_formula(a, n, o)
            }),
        }
    }

    pub fn pattern(&self, p: &Pattern) -> String {
        let mut s = String::new();
        self.write_pattern(p, false, &mut s);
        s
    }

    fn write_pattern(&self, p: &Pattern, nested: bool, out: &mut String) {
        match p {
            Pattern::Meta(m) | Pattern::Atom(m) => out.push_str(m),
            Pattern::Compound(c, args) => self.write_compound(c, args, nested, out, |p, a, n, o| {
                p.write_pattern(a, n, o)
            }),
        }
    }

    fn write_compound<T>(
        &self,
        conn: &str,
        args: &[T],
        nested: bool,
        out: &mut String,
        write: impl Fn(&Self, &T, bool, &mut String),
    ) {
        match self.notation(conn) {
            Notation::Infix(sym) if args.len() == 2 => {
                if nested {
                    out.push('(');
                }
                write(self, &args[0], true, out);
                out.push(' ');
                out.push_str(sym);
                out.push(' ');
                write(self, &args[1], true, out);
                if nested {
                    out.push(')');
                }
            }
            Notation::Prefix(sym) if args.len() == 1 => {
                out.push_str(sym);
                write(self, &args[0], true, out);
            }
            _ => {
                out.push_str(conn);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write(self, a, false, out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::new(&[]).formula(self))
    }
}
