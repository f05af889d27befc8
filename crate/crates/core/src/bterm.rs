//! Surface syntax of B-terms.
//!
//! Text grammar (application is left-associative, whitespace separates atoms):
//!
//! ```text
//! term := atom+
//! atom := 'B' | '(' term ')' | 'B^' nat atom
//! ```
//!
//! `B^n e` is sugar for `B (B (… (B e)))` with `n` copies of `B`, so
//! `B^n B` is the monomial of degree `n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BTerm {
    B,
    App(Box<BTerm>, Box<BTerm>),
}

impl BTerm {
    pub fn app(f: BTerm, a: BTerm) -> BTerm {
        BTerm::App(Box::new(f), Box::new(a))
    }

    /// `e1 ∘ e2`, i.e. `B e1 e2`.
    pub fn compose(e1: BTerm, e2: BTerm) -> BTerm {
        BTerm::app(BTerm::app(BTerm::B, e1), e2)
    }

    /// Number of `B` leaves.
    pub fn size(&self) -> usize {
        match self {
            BTerm::B => 1,
            BTerm::App(f, a) => f.size() + a.size(),
        }
    }

    /// Splits `B a1 … an` into its argument list.
    pub fn spine(&self) -> Vec<&BTerm> {
        let mut args = Vec::new();
        let mut t = self;
        while let BTerm::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        args
    }

    /// Applies `B` to the arguments in order.
    pub fn from_spine(args: impl IntoIterator<Item = BTerm>) -> BTerm {
        args.into_iter().fold(BTerm::B, BTerm::app)
    }

    /// If this term is `B^n B`, returns `n`.
    pub fn monomial_degree(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                BTerm::B => return Some(n),
                BTerm::App(f, a) if **f == BTerm::B => {
                    n += 1;
                    t = a;
                }
                BTerm::App(..) => return None,
            }
        }
    }

    /// Renders the term, optionally folding monomials of degree ≥ 2 into
    /// `B^n B`.
    pub fn to_text(&self, sugar: bool) -> String {
        let mut out = String::new();
        write_term(self, sugar, true, &mut out);
        out
    }
}

/// `X^(k)`: left-nested application of `k` copies of `e`.
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn flat(e: &BTerm, k: usize) -> BTerm {
    assert!(k >= 1, "flat power needs k >= 1");
    (1..k).fold(e.clone(), |acc, _| BTerm::app(acc, e.clone()))
}

/// `B^n B`.
pub fn monomial(n: u64) -> BTerm {
    (0..n).fold(BTerm::B, |acc, _| BTerm::app(BTerm::B, acc))
}

/// Every B-term with exactly `leaves` leaves, in a fixed order.
pub fn all_with_leaves(leaves: usize) -> Vec<BTerm> {
    let mut table: Vec<Vec<BTerm>> = vec![Vec::new(), vec![BTerm::B]];
    for n in 2..=leaves {
        let mut here = Vec::new();
        for left in 1..n {
            for f in &table[left] {
                for a in &table[n - left] {
                    here.push(BTerm::app(f.clone(), a.clone()));
                }
            }
        }
        table.push(here);
    }
    if leaves == 0 {
        return Vec::new();
    }
    table.swap_remove(leaves)
}

fn write_term(t: &BTerm, sugar: bool, top: bool, out: &mut String) {
    if sugar {
        if let Some(n) = t.monomial_degree().filter(|&n| n >= 2) {
            if top {
                out.push_str(&format!("B^{n} B"));
            } else {
                out.push_str(&format!("(B^{n} B)"));
            }
            return;
        }
    }
    match t {
        BTerm::B => out.push('B'),
        BTerm::App(f, a) => {
            write_head(f, sugar, out);
            out.push(' ');
            write_arg(a, sugar, out);
        }
    }
}

fn write_head(f: &BTerm, sugar: bool, out: &mut String) {
    match f {
        BTerm::B => out.push('B'),
        BTerm::App(g, x) if **g == BTerm::B => {
            out.push_str("B ");
            write_arg(x, sugar, out);
        }
        BTerm::App(..) => write_term(f, sugar, true, out),
    }
}

fn write_arg(a: &BTerm, sugar: bool, out: &mut String) {
    match a {
        BTerm::B => out.push('B'),
        _ if sugar && a.monomial_degree().is_some_and(|n| n >= 2) => {
            write_term(a, sugar, false, out)
        }
        _ => {
            out.push('(');
            write_term(a, sugar, true, out);
            out.push(')');
        }
    }
}

impl fmt::Display for BTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

impl fmt::Debug for BTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BTerm({})", self.to_text(true))
    }
}

impl FromStr for BTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<BTerm> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input after term"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn term(&mut self) -> Result<BTerm> {
        let mut acc = match self.atom()? {
            Some(t) => t,
            None => return Err(self.error("expected a term")),
        };
        while let Some(a) = self.atom()? {
            acc = BTerm::app(acc, a);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Option<BTerm>> {
        match self.peek() {
            Some(b'B') => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    let n = self.nat()?;
                    match self.atom()? {
                        Some(inner) => {
                            Ok(Some((0..n).fold(inner, |acc, _| BTerm::app(BTerm::B, acc))))
                        }
                        None => Err(self.error("expected an operand after B^n")),
                    }
                } else {
                    Ok(Some(BTerm::B))
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(Some(t))
            }
            Some(b')') | None => Ok(None),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number after '^'"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Syntax {
                pos: start,
                msg: "exponent out of range".into(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> BTerm {
        BTerm::B
    }

    fn app(f: BTerm, a: BTerm) -> BTerm {
        BTerm::app(f, a)
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(parse("B (B B)").unwrap(), app(b(), app(b(), b())));
        assert_eq!(parse("B^2 B").unwrap(), app(b(), app(b(), b())));
        assert_eq!(parse("B B B").unwrap(), app(app(b(), b()), b()));
        assert_eq!(parse("B^0 B").unwrap(), b());
        assert_eq!(parse("  ( B )  ").unwrap(), b());
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse("B )"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(B B"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("B^ B"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("B^3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("B x"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("()"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(app(app(b(), b()), b()).to_string(), "B B B");
        assert_eq!(app(b(), app(b(), b())).to_string(), "B (B B)");
        assert_eq!(monomial(4).to_text(true), "B^4 B");
        assert_eq!(monomial(4).to_text(false), "B (B (B (B B)))");
        assert_eq!(
            BTerm::compose(monomial(4), monomial(2)).to_text(true),
            "B (B^4 B) (B^2 B)"
        );
        assert_eq!(app(monomial(3), b()).to_text(true), "B (B^2 B) B");
    }

    #[test]
    fn flat_and_monomial() {
        assert_eq!(flat(&b(), 1), b());
        assert_eq!(flat(&b(), 3), app(app(b(), b()), b()));
        assert_eq!(monomial(0), b());
        assert_eq!(monomial(1), app(b(), b()));
        assert_eq!(monomial(2), app(b(), app(b(), b())));
        assert_eq!(monomial(7).size(), 8);
        assert_eq!(monomial(7).monomial_degree(), Some(7));
        assert_eq!(flat(&b(), 3).monomial_degree(), None);
    }

    #[test]
    fn flat_size_and_unfolding() {
        let e = parse("B (B B) B").unwrap();
        for k in 1..=20 {
            assert_eq!(flat(&e, k).size(), k * e.size());
            assert_eq!(flat(&e, k + 1), app(flat(&e, k), e.clone()));
        }
    }

    #[test]
    fn enumeration_follows_catalan_numbers() {
        let counts: Vec<usize> = (1..=8).map(|n| all_with_leaves(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn print_parse_roundtrip_exhaustive() {
        for n in 1..=10 {
            for e in all_with_leaves(n) {
                assert_eq!(parse(&e.to_text(false)).unwrap(), e);
                assert_eq!(parse(&e.to_text(true)).unwrap(), e);
            }
        }
    }
}
