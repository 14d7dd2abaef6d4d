use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial identifier: atom, connective or keyword.
    Lower(String),
    /// Uppercase Latin identifier: formula metavariable.
    Upper(String),
    /// Uppercase Greek identifier: context variable.
    Greek(String),
    Str(String),
    Num(usize),
    /// A declared connective symbol.
    Op(String),
    Turnstile,
    Comma,
    Semi,
    Slash,
    Bar,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Colon,
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_greek_upper(c: char) -> bool {
    ('\u{0391}'..='\u{03A9}').contains(&c)
}

/// Splits one statement into tokens. `ops` are the connective symbols
/// declared so far; the longest matching symbol wins.
pub fn lex(text: &str, line0: usize, ops: &[String]) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, line0, 1);
    let mut sorted_ops: Vec<Vec<char>> = ops.iter().map(|o| o.chars().collect()).collect();
    sorted_ops.sort_by_key(|o| std::cmp::Reverse(o.len()));
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: tl, col: tc });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if let Some(op) = sorted_ops.iter().find(|o| chars[i..].starts_with(o)) {
            push(&mut out, Tok::Op(op.iter().collect()));
            i += op.len();
            col += op.len();
            continue;
        }
        if c == '|' && chars.get(i + 1) == Some(&'-') {
            push(&mut out, Tok::Turnstile);
            i += 2;
            col += 2;
            continue;
        }
        let single = match c {
            '⊢' => Some(Tok::Turnstile),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '/' => Some(Tok::Slash),
            '|' => Some(Tok::Bar),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(t) = single {
            push(&mut out, t);
            i += 1;
            col += 1;
            continue;
        }
        if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j == chars.len() || chars[j] != '"' {
                return Err(DslError::syntax(tl, tc, "unterminated string"));
            }
            push(&mut out, Tok::Str(chars[start..j].iter().collect()));
            col += j + 1 - i;
            i = j + 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let n = s.parse().map_err(|_| DslError::syntax(tl, tc, "number too large"))?;
            push(&mut out, Tok::Num(n));
            col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' || is_greek_upper(c) {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let tok = if is_greek_upper(c) {
                Tok::Greek(s)
            } else if c.is_ascii_uppercase() {
                Tok::Upper(s)
            } else {
                Tok::Lower(s)
            };
            push(&mut out, tok);
            col += j - i;
            i = j;
            continue;
        }
        return Err(DslError::syntax(tl, tc, format!("unexpected character {:?}", c)));
    }
    Ok(out)
}
