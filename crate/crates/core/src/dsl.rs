//! Text syntax for roots, root sets and characters.
//!
//! A root is written as bracketed ε-coordinates `[1,0,-1]`, or as a signed
//! sum of terms. A term is an optional integer coefficient (with optional
//! `*`) followed by one of `aI` (simple root), `eI` (ε_I), `gamma(i,k)`,
//! `mu(k)` or `eta(i,k)`. Every form except brackets needs the rank.
//!
//! ```
//! use sympcap::dsl::parse_root;
//!
//! let g = parse_root("gamma(1,2)", Some(3))?;
//! assert_eq!(g.coords(), &[1, 0, -1]);
//! assert_eq!(parse_root("2*a1+2*a2+a3", Some(3))?.coords(), &[2, 0, 0]);
//! assert_eq!(parse_root("-[0,2]", None)?.coords(), &[0, -2]);
//! assert!(parse_root("a1+a3", Some(3)).is_err());
//! # Ok::<(), sympcap::dsl::ParseError>(())
//! ```
//!
//! Sets are brace-delimited comma lists, `{a1, a2, a1+a2, 2*e1}`, and are
//! validated as closed nilpotent root sets. Characters are `root: coeff`
//! entries separated by newlines or `;`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exact::{parse_rational, Rational};
use crate::rootsys::{eta, gamma, mu, simple_root, Root};

/// A syntax or invariant error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
        }
    }

    /// The input with a caret under the error position.
    pub fn annotate(&self, input: &str) -> String {
        let line_start = input[..self.position.min(input.len())].rfind('\n').map_or(0, |i| i + 1);
        let line_end = input[line_start..].find('\n').map_or(input.len(), |i| line_start + i);
        let col = input[line_start..self.position.min(input.len())].chars().count();
        format!(
            "{}\n{}^ {}",
            &input[line_start..line_end],
            " ".repeat(col),
            self.message
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = std::result::Result<T, ParseError>;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, base: usize) -> Cursor<'a> {
        Cursor { text, pos: 0, base }
    }

    fn at(&self) -> usize {
        self.base + self.pos
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(self.at(), message))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn integer(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| ParseError::new(self.base + start, "expected an integer"))
    }

    fn unsigned(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos].parse().ok()
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }
}

fn need_rank(c: &Cursor<'_>, rank: Option<usize>, what: &str) -> PResult<usize> {
    rank.ok_or_else(|| ParseError::new(c.at(), format!("{what} needs an explicit rank")))
}

fn index_args(c: &mut Cursor<'_>, count: usize) -> PResult<Vec<usize>> {
    c.expect('(')?;
    let mut out = Vec::new();
    for k in 0..count {
        if k > 0 {
            c.expect(',')?;
        }
        let at = c.at();
        let v = c.integer()?;
        out.push(usize::try_from(v).map_err(|_| ParseError::new(at, "index must be nonnegative"))?);
    }
    c.expect(')')?;
    Ok(out)
}

/// One atom as an ε-vector; `rank` is fixed by the first bracketed atom if absent.
fn atom(c: &mut Cursor<'_>, rank: &mut Option<usize>) -> PResult<Vec<i64>> {
    c.skip_ws();
    let start = c.at();
    if c.eat('[') {
        let mut v = Vec::new();
        if !c.eat(']') {
            loop {
                v.push(c.integer()?);
                if c.eat(']') {
                    break;
                }
                c.expect(',')?;
            }
        }
        match *rank {
            Some(r) if r != v.len() => {
                return Err(ParseError::new(
                    start,
                    format!("vector has length {}, rank is {r}", v.len()),
                ))
            }
            _ => *rank = Some(v.len()),
        }
        return Ok(v);
    }
    let name = c.ident();
    let named = |res: crate::Result<Root>| {
        res.map(|a| a.coords().to_vec())
            .map_err(|e| ParseError::new(start, e.to_string()))
    };
    match name {
        "a" | "e" => {
            let r = need_rank(c, *rank, name)?;
            let Some(i) = c.unsigned() else {
                return c.err("expected an index");
            };
            if name == "a" {
                named(simple_root(i, r))
            } else {
                if i == 0 || i > r {
                    return Err(ParseError::new(start, format!("e{i} out of range for rank {r}")));
                }
                let mut v = vec![0; r];
                v[i - 1] = 1;
                Ok(v)
            }
        }
        "gamma" | "eta" => {
            let r = need_rank(c, *rank, name)?;
            let a = index_args(c, 2)?;
            named(if name == "gamma" {
                gamma(a[0], a[1], r)
            } else {
                eta(a[0], a[1], r)
            })
        }
        "mu" => {
            let r = need_rank(c, *rank, name)?;
            let a = index_args(c, 1)?;
            named(mu(a[0], r))
        }
        "" => c.err("expected a root"),
        other => Err(ParseError::new(start, format!("unknown root form '{other}'"))),
    }
}

fn root_expr(c: &mut Cursor<'_>, rank: Option<usize>) -> PResult<Root> {
    let mut rank = rank;
    let start = c.at();
    let mut acc: Option<Vec<i64>> = None;
    let mut first = true;
    loop {
        c.skip_ws();
        let mut sign = 1;
        if c.eat('-') {
            sign = -1;
        } else if !c.eat('+') && !first {
            break;
        }
        first = false;
        c.skip_ws();
        let mut coef = 1;
        if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
            coef = c.integer()?;
            c.eat('*');
        }
        let v = atom(c, &mut rank)?;
        let acc = acc.get_or_insert_with(|| vec![0; v.len()]);
        if acc.len() != v.len() {
            return c.err("terms have different ranks");
        }
        for (a, b) in acc.iter_mut().zip(&v) {
            *a += sign * coef * b;
        }
    }
    let v = acc.unwrap_or_default();
    Root::new(v).map_err(|e| ParseError::new(start, e.to_string()))
}

/// Parses a single root. Bracketed input fixes the rank when `rank` is `None`.
pub fn parse_root(text: &str, rank: Option<usize>) -> PResult<Root> {
    let mut c = Cursor::new(text, 0);
    let root = root_expr(&mut c, rank)?;
    if !c.at_end() {
        return c.err("unexpected trailing input");
    }
    Ok(root)
}

/// Splits on `sep` outside brackets and parentheses, returning (offset, piece).
fn split_top<'a>(text: &'a str, seps: &[char]) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if depth == 0 && seps.contains(&c) => {
                out.push((start, &text[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Parses `{r1, r2, …}` into a list of roots without checking set invariants.
pub fn parse_root_list(text: &str, rank: Option<usize>) -> PResult<Vec<Root>> {
    let trimmed_start = text.len() - text.trim_start().len();
    let t = text.trim();
    if !t.starts_with('{') || !t.ends_with('}') {
        return Err(ParseError::new(trimmed_start, "a root set is written {r1, r2, ...}"));
    }
    let inner = &t[1..t.len() - 1];
    let base = trimmed_start + 1;
    let mut rank = rank;
    let mut out = Vec::new();
    if inner.trim().is_empty() {
        return Ok(out);
    }
    for (off, piece) in split_top(inner, &[',']) {
        let mut c = Cursor::new(piece, base + off);
        let root = root_expr(&mut c, rank)?;
        if !c.at_end() {
            return c.err("unexpected input in set element");
        }
        rank.get_or_insert(root.rank());
        if root.rank() != rank.unwrap_or(root.rank()) {
            return Err(ParseError::new(base + off, "set elements have different ranks"));
        }
        out.push(root);
    }
    Ok(out)
}

/// Parses a root set and validates closure and nilpotence.
pub fn parse_root_set(text: &str, rank: Option<usize>) -> crate::Result<crate::exchange::RootGroupSet> {
    let roots = parse_root_list(text, rank)?;
    let r = rank
        .or_else(|| roots.first().map(Root::rank))
        .ok_or(crate::Error::ZeroRank)?;
    crate::exchange::RootGroupSet::new(r, roots)
}

/// Parses `root: coeff` entries into a support map.
pub fn parse_support(text: &str, rank: Option<usize>) -> PResult<BTreeMap<Root, Rational>> {
    let mut rank = rank;
    let mut out = BTreeMap::new();
    for (off, line) in split_top(text, &['\n', ';']) {
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.rfind(':') else {
            return Err(ParseError::new(off, "expected 'root: coefficient'"));
        };
        let mut c = Cursor::new(&line[..colon], off);
        let root = root_expr(&mut c, rank)?;
        if !c.at_end() {
            return c.err("unexpected input before ':'");
        }
        rank.get_or_insert(root.rank());
        let coef_text = &line[colon + 1..];
        let Some(coef) = parse_rational(coef_text) else {
            let lead = coef_text.len() - coef_text.trim_start().len();
            return Err(ParseError::new(
                off + colon + 1 + lead,
                "expected a rational coefficient",
            ));
        };
        if out.insert(root, coef).is_some() {
            return Err(ParseError::new(off, "root listed twice"));
        }
    }
    Ok(out)
}

/// Parses a character. Without a carrier the support itself is the carrier.
pub fn parse_character(
    text: &str,
    rank: Option<usize>,
    carrier: Option<BTreeSet<Root>>,
) -> crate::Result<crate::filtration::RootCharacter> {
    let support = parse_support(text, rank)?;
    let r = rank
        .or_else(|| support.keys().next().map(Root::rank))
        .or_else(|| carrier.as_ref().and_then(|c| c.iter().next().map(Root::rank)))
        .ok_or(crate::Error::ZeroRank)?;
    let carrier = carrier.unwrap_or_else(|| support.keys().cloned().collect());
    crate::filtration::RootCharacter::new(r, carrier, support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn root_forms() {
        assert_eq!(parse_root("[1,0,-1]", None).unwrap().coords(), &[1, 0, -1]);
        assert_eq!(parse_root("gamma(1,2)", Some(3)).unwrap().coords(), &[1, 0, -1]);
        assert_eq!(parse_root("mu(3)", Some(3)).unwrap().coords(), &[0, 0, 2]);
        assert_eq!(parse_root("eta(1,2)", Some(3)).unwrap().coords(), &[1, 0, 1]);
        assert_eq!(parse_root("e1 - e2", Some(2)).unwrap().coords(), &[1, -1]);
        assert_eq!(parse_root("2e2", Some(2)).unwrap().coords(), &[0, 2]);
        assert_eq!(parse_root("-gamma(1,1)", Some(3)).unwrap().coords(), &[-1, 1, 0]);
        assert_eq!(parse_root("a1+a2", Some(2)).unwrap().coords(), &[1, 1]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_root("[1,0,2]", None).unwrap_err();
        assert_eq!(e.position, 0);
        let e = parse_root("a1 + zz", Some(2)).unwrap_err();
        assert_eq!(e.position, 5);
        assert!(e.annotate("a1 + zz").contains("     ^"));
        assert!(parse_root("gamma(1,2)", None).is_err());
        assert!(parse_root("gamma(1,3)", Some(3)).is_err());
        assert!(parse_root("[1,-1] x", None).is_err());
        assert!(parse_root("", Some(2)).is_err());
    }

    #[test]
    fn lists_and_supports() {
        let l = parse_root_list("{a1, [0,2], gamma(1,1)}", Some(2)).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(parse_root_list("{}", Some(2)).unwrap(), vec![]);
        let s = parse_support("mu(1): 1\nmu(2): -1", Some(2)).unwrap();
        assert_eq!(s[&parse_root("mu(2)", Some(2)).unwrap()], int(-1));
        let e = parse_support("mu(1): 1; mu(2): x", Some(2)).unwrap_err();
        assert_eq!(e.position, 17);
    }
}
