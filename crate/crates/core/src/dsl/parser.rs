use crate::kernel::{
    CalculusSpec, ConnectiveDecl, ContextMode, Formula, Item, Notation, Pattern, RuleKind, RuleSchema, Sequent,
    SequentPattern, Side, Structural, Succedent,
};

use super::lexer::{lex, Spanned, Tok};
use super::validate::validate_calculus;
use super::DslError;

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Spanned], line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn err(&self, msg: impl Into<String>) -> DslError {
        match self.toks.get(self.pos) {
            Some(t) => DslError::syntax(t.line, t.col, msg),
            None => {
                let (l, c) = self.toks.last().map_or((self.line, 1), |t| (t.line, t.col + 1));
                DslError::syntax(l, c, format!("{} (at end of statement)", msg.into()))
            }
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DslError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {}", what)))
        }
    }

    fn lower(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Lower(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(format!("expected {}", what))),
        }
    }

    fn finish(&self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing tokens"))
        }
    }
}

fn conn_by_symbol<'c>(conns: &'c [ConnectiveDecl], sym: &str) -> Option<&'c ConnectiveDecl> {
    conns.iter().find(|c| match &c.notation {
        Notation::Infix(s) | Notation::Prefix(s) => s == sym,
        Notation::Functional => false,
    })
}

/// Formula-schema grammar. Infix connectives share one precedence level and
/// associate to the right; parentheses group.
struct FormulaParser<'c> {
    conns: &'c [ConnectiveDecl],
    allow_meta: bool,
}

impl FormulaParser<'_> {
    fn expr(&self, cur: &mut Cursor<'_>) -> Result<Pattern, DslError> {
        let lhs = self.unary(cur)?;
        if let Some(Tok::Op(sym)) = cur.peek() {
            let Some(c) = conn_by_symbol(self.conns, sym).filter(|c| matches!(c.notation, Notation::Infix(_))) else {
                return Err(cur.err(format!("{} is not an infix connective", sym)));
            };
            cur.next();
            let rhs = self.expr(cur)?;
            return Ok(Pattern::Compound(c.name.clone(), vec![lhs, rhs]));
        }
        Ok(lhs)
    }

    fn unary(&self, cur: &mut Cursor<'_>) -> Result<Pattern, DslError> {
        match cur.peek() {
            Some(Tok::Op(sym)) => {
                let Some(c) = conn_by_symbol(self.conns, sym).filter(|c| matches!(c.notation, Notation::Prefix(_)))
                else {
                    return Err(cur.err(format!("{} is not a prefix connective", sym)));
                };
                cur.next();
                let arg = self.unary(cur)?;
                Ok(Pattern::Compound(c.name.clone(), vec![arg]))
            }
            Some(Tok::LParen) => {
                cur.next();
                let e = self.expr(cur)?;
                cur.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Lower(name)) => {
                cur.next();
                if cur.peek() == Some(&Tok::LParen) {
                    if !self.conns.iter().any(|c| &c.name == name) {
                        return Err(cur.err(format!("unknown connective {}", name)));
                    }
                    cur.next();
                    let mut args = Vec::new();
                    if cur.peek() != Some(&Tok::RParen) {
                        loop {
                            args.push(self.expr(cur)?);
                            if cur.peek() == Some(&Tok::Comma) {
                                cur.next();
                            } else {
                                break;
                            }
                        }
                    }
                    cur.expect(Tok::RParen, "')'")?;
                    Ok(Pattern::Compound(name.clone(), args))
                } else {
                    Ok(Pattern::Atom(name.clone()))
                }
            }
            Some(Tok::Upper(name)) if self.allow_meta => {
                cur.next();
                Ok(Pattern::Meta(name.clone()))
            }
            Some(Tok::Upper(name)) => Err(cur.err(format!("metavariable {} not allowed in a concrete formula", name))),
            _ => Err(cur.err("expected a formula")),
        }
    }
}

fn is_item_end(t: Option<&Tok>) -> bool {
    matches!(t, None | Some(Tok::Turnstile | Tok::Semi | Tok::Slash | Tok::Bar))
}

fn items(cur: &mut Cursor<'_>, fp: &FormulaParser<'_>) -> Result<Vec<Item>, DslError> {
    let mut out = Vec::new();
    if is_item_end(cur.peek()) {
        return Ok(out);
    }
    loop {
        match cur.peek() {
            Some(Tok::Greek(g)) => {
                cur.next();
                out.push(Item::Ctx(g.clone()));
            }
            Some(Tok::LBrack) => {
                cur.next();
                let p = fp.expr(cur)?;
                cur.expect(Tok::RBrack, "']'")?;
                out.push(Item::Formula { pattern: p, marked: true });
            }
            _ => out.push(Item::Formula { pattern: fp.expr(cur)?, marked: false }),
        }
        if cur.peek() == Some(&Tok::Comma) {
            cur.next();
        } else {
            return Ok(out);
        }
    }
}

fn sequent_pattern(cur: &mut Cursor<'_>, fp: &FormulaParser<'_>) -> Result<SequentPattern, DslError> {
    let left = items(cur, fp)?;
    cur.expect(Tok::Turnstile, "'⊢'")?;
    let right = items(cur, fp)?;
    Ok(SequentPattern::new(left, right))
}

fn rule(cur: &mut Cursor<'_>, conns: &[ConnectiveDecl]) -> Result<(RuleSchema, Option<ContextMode>), DslError> {
    let name = cur.lower("rule name")?;
    let mode = match cur.peek() {
        Some(Tok::Lower(m)) if m == "additive" => Some(ContextMode::Additive),
        Some(Tok::Lower(m)) if m == "multiplicative" => Some(ContextMode::Multiplicative),
        _ => None,
    };
    if mode.is_some() {
        cur.next();
    }
    cur.expect(Tok::Colon, "':'")?;
    let fp = FormulaParser { conns, allow_meta: true };
    let mut variants = vec![Vec::new()];
    if cur.peek() != Some(&Tok::Slash) {
        loop {
            variants.last_mut().unwrap().push(sequent_pattern(cur, &fp)?);
            match cur.peek() {
                Some(Tok::Semi) => {
                    cur.next();
                }
                Some(Tok::Bar) => {
                    cur.next();
                    variants.push(Vec::new());
                }
                _ => break,
            }
        }
    }
    cur.expect(Tok::Slash, "'/' before the conclusion")?;
    let conclusion = sequent_pattern(cur, &fp)?;
    cur.finish()?;
    Ok((RuleSchema { name, kind: RuleKind::Logical, conclusion, variants }, mode))
}

/// Splits source into statements: a statement starts on an unindented line
/// and continues over indented lines. Returns (first line number, text).
fn statements(src: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            if let Some(last) = out.last_mut() {
                last.1.push('\n');
            }
            continue;
        }
        if line.starts_with(char::is_whitespace) && !out.is_empty() {
            let last = out.last_mut().unwrap();
            last.1.push('\n');
            last.1.push_str(line);
        } else {
            out.push((i + 1, line.to_string()));
        }
    }
    out
}

fn ops_of(conns: &[ConnectiveDecl]) -> Vec<String> {
    conns
        .iter()
        .filter_map(|c| match &c.notation {
            Notation::Infix(s) | Notation::Prefix(s) => Some(s.clone()),
            Notation::Functional => None,
        })
        .collect()
}

pub(crate) struct Parsed {
    pub calc: CalculusSpec,
    pub modes: Vec<(String, ContextMode)>,
}

pub(crate) fn parse_unvalidated(src: &str) -> Result<Parsed, DslError> {
    let mut name = None;
    let mut succedent = None;
    let mut conns: Vec<ConnectiveDecl> = Vec::new();
    let mut rules = Vec::new();
    let mut modes = Vec::new();
    let mut structural = Structural::default();
    for (line, text) in statements(src) {
        let toks = lex(&text, line, &ops_of(&conns))?;
        let mut cur = Cursor::new(&toks, line);
        let kw = cur.lower("a keyword")?;
        match kw.as_str() {
            "calculus" => {
                if name.is_some() {
                    return Err(DslError::syntax(line, 1, "duplicate calculus header"));
                }
                name = Some(cur.lower("calculus name")?);
                cur.finish()?;
            }
            "succedent" => {
                succedent = Some(match cur.lower("single or multi")?.as_str() {
                    "single" => Succedent::Single,
                    "multi" => Succedent::Multi,
                    _ => return Err(DslError::syntax(line, 11, "expected single or multi")),
                });
                cur.finish()?;
            }
            "connective" => {
                let cname = cur.lower("connective name")?;
                let arity = match cur.next() {
                    Some(Tok::Num(n)) => *n,
                    _ => return Err(cur.err("expected arity")),
                };
                let notation = match cur.peek() {
                    None => Notation::Functional,
                    Some(Tok::Lower(k)) if k == "infix" || k == "prefix" => {
                        let infix = k == "infix";
                        cur.next();
                        let sym = match cur.next() {
                            Some(Tok::Str(s)) => s.clone(),
                            _ => return Err(cur.err("expected quoted symbol")),
                        };
                        if infix {
                            Notation::Infix(sym)
                        } else {
                            Notation::Prefix(sym)
                        }
                    }
                    _ => return Err(cur.err("expected infix or prefix")),
                };
                cur.finish()?;
                conns.push(ConnectiveDecl { name: cname, arity, notation });
            }
            "structural" => {
                let what = cur.lower("contraction, weakening or initial")?;
                let side = |cur: &mut Cursor<'_>| -> Result<Side, DslError> {
                    match cur.lower("left or right")?.as_str() {
                        "left" => Ok(Side::Left),
                        "right" => Ok(Side::Right),
                        _ => Err(DslError::syntax(line, 1, "expected left or right")),
                    }
                };
                match what.as_str() {
                    "contraction" => match side(&mut cur)? {
                        Side::Left => structural.contraction_left = true,
                        Side::Right => structural.contraction_right = true,
                    },
                    "weakening" => match side(&mut cur)? {
                        Side::Left => structural.weakening_left = true,
                        Side::Right => structural.weakening_right = true,
                    },
                    "initial" => structural.initial = true,
                    other => return Err(DslError::syntax(line, 12, format!("unknown structural rule {}", other))),
                }
                cur.finish()?;
            }
            "rule" => {
                let (r, mode) = rule(&mut cur, &conns)?;
                if let Some(m) = mode {
                    modes.push((r.name.clone(), m));
                }
                rules.push(r);
            }
            other => return Err(DslError::syntax(line, 1, format!("unknown statement {}", other))),
        }
    }
    let name = name.ok_or_else(|| DslError::syntax(1, 1, "missing calculus header"))?;
    rules.sort_by(|a: &RuleSchema, b| a.name.cmp(&b.name));
    Ok(Parsed {
        calc: CalculusSpec {
            name,
            succedent: succedent.unwrap_or(Succedent::Multi),
            connectives: conns,
            logical: rules,
            structural,
        },
        modes,
    })
}

/// Parses and validates a `.fcl` calculus. Logical rules come back sorted
/// by name.
pub fn parse_calculus(src: &str) -> Result<CalculusSpec, DslError> {
    let parsed = parse_unvalidated(src)?;
    validate_calculus(&parsed.calc, &parsed.modes)?;
    Ok(parsed.calc)
}

fn one_line(calc: &CalculusSpec, text: &str) -> Result<Vec<Spanned>, DslError> {
    lex(text, 1, &ops_of(&calc.connectives))
}

/// Parses a concrete formula in the notation of `calc`.
pub fn parse_formula(calc: &CalculusSpec, text: &str) -> Result<Formula, DslError> {
    let toks = one_line(calc, text)?;
    let mut cur = Cursor::new(&toks, 1);
    let fp = FormulaParser { conns: &calc.connectives, allow_meta: false };
    let p = fp.expr(&mut cur)?;
    cur.finish()?;
    let f = p.instantiate(&Default::default()).ok_or_else(|| DslError::Semantic("formula has metavariables".into()))?;
    super::validate::check_formula(calc, &f)?;
    Ok(f)
}

/// Parses a concrete sequent such as `a ⊗ b ⊢ b ⊗ a` (`|-` also accepted).
pub fn parse_sequent(calc: &CalculusSpec, text: &str) -> Result<Sequent, DslError> {
    let toks = one_line(calc, text)?;
    let mut cur = Cursor::new(&toks, 1);
    let fp = FormulaParser { conns: &calc.connectives, allow_meta: false };
    let p = sequent_pattern(&mut cur, &fp)?;
    cur.finish()?;
    let concrete = |items: &[Item]| -> Result<Vec<Formula>, DslError> {
        items
            .iter()
            .map(|i| match i {
                Item::Formula { pattern, marked: false } => {
                    let f = pattern.instantiate(&Default::default()).expect("no metavariables");
                    super::validate::check_formula(calc, &f)?;
                    Ok(f)
                }
                _ => Err(DslError::Semantic("context variables and markers are not allowed in a sequent".into())),
            })
            .collect()
    };
    let s = Sequent::new(concrete(&p.left)?, concrete(&p.right)?);
    if !calc.respects_arity(&s) {
        return Err(DslError::Semantic(format!("{} needs exactly one formula on the right", calc.name)));
    }
    Ok(s)
}
