//! Text notation for block structures, e.g. `(2 3)^5 7 (3 4)^2`.
//!
//! ```text
//! structure := term { ws term } [ "^" "inf" ]
//! term      := atom [ "^" int ] | "(" structure ")" [ "^" int ]
//! atom      := positive decimal integer
//! ```
//!
//! A trailing `^inf` on the whole input is accepted and ignored; repetition in
//! both directions is always implied. A group exponent counts repetitions of
//! the whole group, so `(2 3)^5` is ten blocks.

use std::fmt;

use thiserror::Error;

use crate::periodic::BlockStructure;

/// Largest atom or exponent accepted by the parser.
pub const MAX_VALUE: u64 = 1_000_000;

/// Default limit on the number of blocks produced by [`flatten`].
pub const DEFAULT_BLOCK_CAP: usize = 1_000_000;

/// Parse and expansion failures. Positions are byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("empty block structure")]
    Empty,
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("block size 0 at position {pos}")]
    ZeroAtom { pos: usize },
    #[error("exponent 0 at position {pos}")]
    ZeroExponent { pos: usize },
    #[error("unbalanced parenthesis at position {pos}")]
    Unbalanced { pos: usize },
    #[error("`^inf` at position {pos} is only allowed at the end of the whole structure")]
    NestedInf { pos: usize },
    #[error("value at position {pos} exceeds {max}")]
    ValueTooLarge { pos: usize, max: u64 },
    #[error("structure expands to {len} blocks, above the cap of {cap}")]
    SizeCap { len: u128, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Atom { size: u64, exp: u64 },
    Group { terms: Vec<Term>, exp: u64 },
}

impl Term {
    fn flat_len(&self) -> u128 {
        match self {
            Term::Atom { exp, .. } => *exp as u128,
            Term::Group { terms, exp } => {
                let inner = terms
                    .iter()
                    .fold(0u128, |acc, t| acc.saturating_add(t.flat_len()));
                inner.saturating_mul(*exp as u128)
            }
        }
    }

    fn expand_into(&self, out: &mut Vec<u64>) {
        match self {
            Term::Atom { size, exp } => out.extend(std::iter::repeat_n(*size, *exp as usize)),
            Term::Group { terms, exp } => {
                for _ in 0..*exp {
                    for t in terms {
                        t.expand_into(out);
                    }
                }
            }
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockExpr {
    pub terms: Vec<Term>,
}

impl BlockExpr {
    /// Number of blocks the expression expands to (saturating).
    pub fn flat_len(&self) -> u128 {
        self.terms
            .iter()
            .fold(0u128, |acc, t| acc.saturating_add(t.flat_len()))
    }
}

impl fmt::Display for BlockExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                match t {
                    Term::Atom { size, .. } => write!(f, "{size}")?,
                    Term::Group { terms, .. } => {
                        f.write_str("(")?;
                        write_terms(f, terms)?;
                        f.write_str(")")?;
                    }
                }
                let exp = match t {
                    Term::Atom { exp, .. } | Term::Group { exp, .. } => *exp,
                };
                if exp != 1 {
                    write!(f, "^{exp}")?;
                }
            }
            Ok(())
        }
        write_terms(f, &self.terms)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, pos: usize, message: &str) -> DslError {
        DslError::Syntax {
            pos,
            message: message.to_string(),
        }
    }

    fn number(&mut self) -> Result<(u64, usize), DslError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax(start, "expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u64>() {
            Ok(v) if v <= MAX_VALUE => Ok((v, start)),
            _ => Err(DslError::ValueTooLarge {
                pos: start,
                max: MAX_VALUE,
            }),
        }
    }

    fn at_inf(&self) -> bool {
        self.src[self.pos..].starts_with(b"inf")
    }

    /// Parses `^ int` if present, defaulting to 1. A caret that introduces
    /// `^inf` is left unconsumed for the caller.
    fn exponent(&mut self) -> Result<u64, DslError> {
        let save = self.pos;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            self.pos = save;
            return Ok(1);
        }
        let caret = self.pos;
        self.pos += 1;
        self.skip_ws();
        if self.at_inf() {
            self.pos = caret;
            return Ok(1);
        }
        let (v, at) = self.number()?;
        if v == 0 {
            return Err(DslError::ZeroExponent { pos: at });
        }
        Ok(v)
    }

    fn structure(&mut self, top: bool) -> Result<Vec<Term>, DslError> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            let Some(ch) = self.peek() else { break };
            match ch {
                b')' => {
                    if top {
                        return Err(DslError::Unbalanced { pos: self.pos });
                    }
                    break;
                }
                b'(' => {
                    let open = self.pos;
                    self.pos += 1;
                    let inner = self.structure(false)?;
                    if self.peek() != Some(b')') {
                        return Err(DslError::Unbalanced { pos: open });
                    }
                    if inner.is_empty() {
                        return Err(self.syntax(open, "empty group"));
                    }
                    self.pos += 1;
                    let exp = self.exponent()?;
                    terms.push(Term::Group { terms: inner, exp });
                }
                b'0'..=b'9' => {
                    let (size, at) = self.number()?;
                    if size == 0 {
                        return Err(DslError::ZeroAtom { pos: at });
                    }
                    let exp = self.exponent()?;
                    terms.push(Term::Atom { size, exp });
                }
                b'^' => {
                    let caret = self.pos;
                    self.pos += 1;
                    self.skip_ws();
                    if !self.at_inf() {
                        return Err(self.syntax(caret, "exponent without a base"));
                    }
                    if !top {
                        return Err(DslError::NestedInf { pos: caret });
                    }
                    if terms.is_empty() {
                        return Err(self.syntax(caret, "`^inf` without a structure"));
                    }
                    self.pos += 3;
                    self.skip_ws();
                    if self.pos != self.src.len() {
                        return Err(self.syntax(self.pos, "`^inf` must end the input"));
                    }
                    break;
                }
                _ => return Err(self.syntax(self.pos, "unexpected character")),
            }
        }
        Ok(terms)
    }
}

/// Parses block notation into an expression tree.
pub fn parse(text: &str) -> Result<BlockExpr, DslError> {
    if text.trim().is_empty() {
        return Err(DslError::Empty);
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let terms = p.structure(true)?;
    if terms.is_empty() {
        return Err(DslError::Empty);
    }
    Ok(BlockExpr { terms })
}

/// Expands every exponent, refusing to produce more than `cap` blocks.
pub fn flatten(expr: &BlockExpr, cap: usize) -> Result<BlockStructure, DslError> {
    let len = expr.flat_len();
    if len > cap as u128 {
        return Err(DslError::SizeCap { len, cap });
    }
    let mut sizes = Vec::with_capacity(len as usize);
    for t in &expr.terms {
        t.expand_into(&mut sizes);
    }
    Ok(BlockStructure::new(sizes).expect("parser guarantees positive blocks"))
}

/// `flatten(parse(text))` with the default cap.
pub fn parse_blocks(text: &str) -> Result<BlockStructure, DslError> {
    flatten(&parse(text)?, DEFAULT_BLOCK_CAP)
}

/// Renders sizes in block notation, writing maximal runs as `a^k` and a
/// sequence that repeats a shorter one `k` times as `(…)^k`.
pub fn render(bs: &BlockStructure) -> String {
    let sizes = bs.sizes();
    let n = sizes.len();
    let unit = (1..=n)
        .find(|&d| n.is_multiple_of(d) && sizes.iter().enumerate().all(|(i, &s)| s == sizes[i % d]))
        .unwrap_or(n);
    let body = render_runs(&sizes[..unit]);
    match n / unit {
        1 => body,
        k if unit == 1 => format!("{body}^{k}"),
        k => format!("({body})^{k}"),
    }
}

fn render_runs(sizes: &[u64]) -> String {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sizes.len() {
        let mut j = i;
        while j < sizes.len() && sizes[j] == sizes[i] {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            out.push(sizes[i].to_string());
        } else {
            out.push(format!("{}^{}", sizes[i], run));
        }
        i = j;
    }
    out.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(text: &str) -> Vec<u64> {
        parse_blocks(text).unwrap().sizes().to_vec()
    }

    #[test]
    fn notation_examples() {
        let v = flat("(2 3)^5 7 (3 4)^2");
        assert_eq!(v, [2, 3, 2, 3, 2, 3, 2, 3, 2, 3, 7, 3, 4, 3, 4]);
        assert_eq!(v.iter().sum::<u64>(), 46);
        assert_eq!(flat("3^2 1"), [3, 3, 1]);
        assert_eq!(flat("(3^1 2)"), [3, 2]);
        assert_eq!(flat("(3 4 3 1)"), [3, 4, 3, 1]);
        assert_eq!(flat("5"), [5]);
        assert_eq!(flat("(2)^3"), [2, 2, 2]);
    }

    #[test]
    fn trailing_inf_is_ignored() {
        assert_eq!(flat("(3 2)^inf"), [3, 2]);
        assert_eq!(flat("3 2^inf"), [3, 2]);
        assert_eq!(flat("((3^2 2)^2 1) ^ inf "), [3, 3, 2, 3, 3, 2, 1]);
    }

    #[test]
    fn nested_groups() {
        assert_eq!(flat("((1 2)^2 3)^2"), [1, 2, 1, 2, 3, 1, 2, 1, 2, 3]);
        assert_eq!(flat("(4)(5)"), [4, 5]);
    }

    #[test]
    fn error_kinds_are_distinct() {
        assert_eq!(parse(""), Err(DslError::Empty));
        assert_eq!(parse("   "), Err(DslError::Empty));
        assert_eq!(parse("0"), Err(DslError::ZeroAtom { pos: 0 }));
        assert_eq!(parse("3^0"), Err(DslError::ZeroExponent { pos: 2 }));
        assert_eq!(parse("(3 2"), Err(DslError::Unbalanced { pos: 0 }));
        assert_eq!(parse("3 2)"), Err(DslError::Unbalanced { pos: 3 }));
        assert_eq!(parse("((3 2)^inf 1)"), Err(DslError::NestedInf { pos: 6 }));
        assert!(matches!(parse("3 x"), Err(DslError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("()"), Err(DslError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("^2"), Err(DslError::Syntax { .. })));
        assert!(matches!(parse("3^inf 2"), Err(DslError::Syntax { .. })));
        assert!(matches!(parse("3,2"), Err(DslError::Syntax { pos: 1, .. })));
        assert!(matches!(
            parse("1000001"),
            Err(DslError::ValueTooLarge { .. })
        ));
    }

    #[test]
    fn size_cap() {
        let e = parse("(1^1000 2)^1000").unwrap();
        assert_eq!(e.flat_len(), 1_001_000);
        assert!(matches!(
            flatten(&e, DEFAULT_BLOCK_CAP),
            Err(DslError::SizeCap { .. })
        ));
        assert_eq!(flatten(&e, 2_000_000).unwrap().len(), 1_001_000);
    }

    #[test]
    fn render_examples() {
        let b = |v: &[u64]| BlockStructure::new(v.to_vec()).unwrap();
        assert_eq!(render(&b(&[3, 3, 2])), "3^2 2");
        assert_eq!(render(&b(&[3, 2])), "3 2");
        assert_eq!(render(&b(&[1, 1, 1, 1])), "1^4");
        assert_eq!(render(&b(&[3, 2, 3, 2])), "(3 2)^2");
        assert_eq!(render(&b(&[3, 3, 2, 3, 3, 2])), "(3^2 2)^2");
        assert_eq!(render(&b(&[3, 2, 3])), "3 2 3");
        let x = "(2 3)^5 7 (3 4)^2";
        let once = parse_blocks(x).unwrap();
        let again = parse_blocks(&render(&once)).unwrap();
        assert_eq!(once.sizes(), again.sizes());
    }

    #[test]
    fn expr_display_reparses() {
        let e = parse("(2 3)^5 7 (3^2 4)^2").unwrap();
        assert_eq!(e.to_string(), "(2 3)^5 7 (3^2 4)^2");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }
}
