//! Expression language for elements of the four algebras.
//!
//! The grammar lives in `book/src/grammar.ebnf`. In brief: `+` and `-` bind
//! loosest, then the noncommutative `*`, then unary minus, then `^` with an
//! integer exponent. Products need an explicit `*`; writing two operands
//! side by side is an error.
//!
//! In star mode a `*` written directly after a generator, with no space, is
//! the adjoint: `z1*` is one lexeme. So `z1* * z2` is `z₁* z₂`, while
//! `z1 * z2` is `z₁ z₂`. Negative exponents are accepted only on generators
//! and only in torus mode.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_series::FreeSeries;
use crate::quantum_algebra::OrderedSeries;
use crate::scalar::{parse_rational, Scalar};
use crate::star::{StarExpr, StarLetter};
use crate::words::{Flavor, MultiIndex};

/// Which algebra an expression denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraMode {
    Free,
    Affine,
    Torus,
    Star,
}

impl fmt::Display for AlgebraMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraMode::Free => "free",
            AlgebraMode::Affine => "affine",
            AlgebraMode::Torus => "torus",
            AlgebraMode::Star => "star",
        })
    }
}

impl std::str::FromStr for AlgebraMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(AlgebraMode::Free),
            "affine" => Ok(AlgebraMode::Affine),
            "torus" => Ok(AlgebraMode::Torus),
            "star" => Ok(AlgebraMode::Star),
            other => Err(Error::Config(format!("unknown mode {other:?}; expected free, affine, torus or star"))),
        }
    }
}

/// Generator spelling. `z` and `x` name the same generator; the letter is
/// kept so that printing reproduces the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenLetter {
    Z,
    X,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// A nonnegative real literal.
    Real(BigRational),
    /// A nonnegative multiple of `i`.
    Imag(BigRational),
    /// The deformation parameter.
    Q,
    Gen { letter: GenLetter, index: usize, starred: bool },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: BigRational, imag: bool, integer: Option<i64> },
    Gen { letter: GenLetter, index: usize, starred: bool },
    Q,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn lex(src: &str, n: usize, mode: AlgebraMode) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let value = parse_rational(text).map_err(|_| parse_err(start, format!("bad number {text:?}")))?;
                let integer = if text.bytes().all(|c| c.is_ascii_digit()) { text.parse::<i64>().ok() } else { None };
                let imag = i < bytes.len() && bytes[i] == b'i';
                if imag {
                    i += 1;
                }
                out.push((start, Tok::Num { value, imag, integer: if imag { None } else { integer } }));
            }
            b'i' => {
                i += 1;
                out.push((start, Tok::Num { value: BigRational::one(), imag: true, integer: None }));
            }
            b'z' | b'x' => {
                let letter = if b == b'z' { GenLetter::Z } else { GenLetter::X };
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits_start == i {
                    return Err(parse_err(start, "generator needs an index, as in z1"));
                }
                let index: usize = src[digits_start..i]
                    .parse()
                    .map_err(|_| parse_err(start, "generator index too large"))?;
                if index == 0 || index > n {
                    return Err(parse_err(start, format!("generator index {index} outside 1..={n}")));
                }
                let starred = mode == AlgebraMode::Star && i < bytes.len() && bytes[i] == b'*';
                if starred {
                    i += 1;
                }
                out.push((start, Tok::Gen { letter, index, starred }));
            }
            b'q' => {
                i += 1;
                out.push((start, Tok::Q));
            }
            b'+' | b'-' | b'*' | b'^' | b'(' | b')' => {
                i += 1;
                out.push((
                    start,
                    match b {
                        b'+' => Tok::Plus,
                        b'-' => Tok::Minus,
                        b'*' => Tok::Star,
                        b'^' => Tok::Caret,
                        b'(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                ));
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(parse_err(start, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    mode: AlgebraMode,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Num { .. } | Tok::Gen { .. } | Tok::Q | Tok::LParen) => {
                    return Err(parse_err(self.here(), "missing '*': juxtaposition is not multiplication"));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.bump();
        }
        let at = self.here();
        let k = match self.bump() {
            Some(Tok::Num { integer: Some(k), .. }) => k,
            _ => return Err(parse_err(at, "exponent must be a nonnegative integer literal")),
        };
        if self.peek() == Some(&Tok::Caret) {
            return Err(parse_err(self.here(), "chained '^' needs parentheses"));
        }
        if negative {
            if self.mode != AlgebraMode::Torus {
                return Err(parse_err(at, "negative exponents are only allowed in torus mode"));
            }
            if !matches!(base, Expr::Gen { .. }) {
                return Err(parse_err(at, "negative exponents apply to generators only"));
            }
            return Ok(Expr::Pow(Box::new(base), -k));
        }
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num { value, imag: false, .. }) => Ok(Expr::Real(value)),
            Some(Tok::Num { value, imag: true, .. }) => Ok(Expr::Imag(value)),
            Some(Tok::Q) => Ok(Expr::Q),
            Some(Tok::Gen { letter, index, starred }) => Ok(Expr::Gen { letter, index, starred }),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(parse_err(close, "expected ')'")),
                }
            }
            Some(_) => Err(parse_err(at, "expected a number, generator, q or '('")),
            None => Err(parse_err(at, "unexpected end of input")),
        }
    }
}

/// Parses `src` as an element of the `n`-generator algebra selected by `mode`.
pub fn parse(src: &str, n: usize, mode: AlgebraMode) -> Result<Expr> {
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let toks = lex(src, n, mode)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), mode };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let msg = match p.peek() {
            Some(Tok::RParen) => "unbalanced ')'",
            Some(Tok::Caret) => "unexpected '^'",
            _ => "unexpected token",
        };
        return Err(parse_err(p.here(), msg));
    }
    Ok(e)
}

// Binding levels used by the printer: sums 1, products 2, negation 3,
// powers 4, atoms 5.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, v: &BigRational) -> fmt::Result {
    if v.is_integer() {
        write!(f, "{}", v.numer())
    } else {
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

impl Expr {
    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if level(self) < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Real(v) if v.is_negative() => {
                f.write_str("(-")?;
                write_rational(f, &-v.clone())?;
                f.write_str(")")
            }
            Expr::Real(v) => write_rational(f, v),
            Expr::Imag(v) => {
                write_rational(f, v)?;
                f.write_str("i")
            }
            Expr::Q => f.write_str("q"),
            Expr::Gen { letter, index, starred } => {
                let l = match letter {
                    GenLetter::Z => 'z',
                    GenLetter::X => 'x',
                };
                write!(f, "{l}{index}{}", if *starred { "*" } else { "" })
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" * ")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, k) => {
                a.write_at(f, 5)?;
                write!(f, "^{k}")
            }
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree, given
/// nonnegative literals (which is all the parser produces).
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// An algebra in which expressions can be evaluated.
trait Interp<S: Scalar> {
    type Value: Clone;
    fn scalar(&self, c: S) -> Result<Self::Value>;
    fn generator(&self, index: usize, starred: bool) -> Result<Self::Value>;
    fn inverse(&self, _index: usize) -> Result<Self::Value> {
        Err(Error::Malformed("generator inverses exist only in torus mode".into()))
    }
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn scale(&self, a: &Self::Value, c: &S) -> Result<Self::Value>;
}

fn interpret<S: Scalar, I: Interp<S>>(e: &Expr, it: &I, q: Option<&S>) -> Result<I::Value> {
    match e {
        Expr::Real(v) => it.scalar(S::from_rational(v)),
        Expr::Imag(v) => it.scalar(S::from_rational(v) * S::imaginary_unit()),
        Expr::Q => it.scalar(q.cloned().ok_or_else(|| Error::Malformed("'q' used without a q value".into()))?),
        Expr::Gen { index, starred, .. } => it.generator(*index, *starred),
        Expr::Neg(a) => it.scale(&interpret(a, it, q)?, &-S::one()),
        Expr::Add(a, b) => it.add(&interpret(a, it, q)?, &interpret(b, it, q)?),
        Expr::Sub(a, b) => it.add(&interpret(a, it, q)?, &it.scale(&interpret(b, it, q)?, &-S::one())?),
        Expr::Mul(a, b) => it.mul(&interpret(a, it, q)?, &interpret(b, it, q)?),
        Expr::Pow(a, k) => {
            let base = match (a.as_ref(), *k < 0) {
                (Expr::Gen { index, .. }, true) => it.inverse(*index)?,
                (_, true) => return Err(Error::Malformed("negative power of a non-generator".into())),
                _ => interpret(a, it, q)?,
            };
            let mut acc = it.scalar(S::one())?;
            for _ in 0..k.unsigned_abs() {
                acc = it.mul(&acc, &base)?;
            }
            Ok(acc)
        }
    }
}

struct FreeInterp {
    n: usize,
}

impl<S: Scalar> Interp<S> for FreeInterp {
    type Value = FreeSeries<S>;

    fn scalar(&self, c: S) -> Result<FreeSeries<S>> {
        Ok(FreeSeries::one(self.n).scale(&c))
    }

    fn generator(&self, index: usize, starred: bool) -> Result<FreeSeries<S>> {
        if starred {
            return Err(Error::Malformed("adjoints exist only in star mode".into()));
        }
        FreeSeries::generator(self.n, index)
    }

    fn add(&self, a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<FreeSeries<S>> {
        a.add(b)
    }

    fn mul(&self, a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<FreeSeries<S>> {
        a.concat_product(b)
    }

    fn scale(&self, a: &FreeSeries<S>, c: &S) -> Result<FreeSeries<S>> {
        Ok(a.scale(c))
    }
}

struct OrderedInterp<S> {
    n: usize,
    q: S,
    flavor: Flavor,
}

impl<S: Scalar> OrderedInterp<S> {
    fn unit(&self, index: usize, exponent: i64) -> Result<OrderedSeries<S>> {
        let mut e = vec![0i64; self.n];
        e[index - 1] = exponent;
        OrderedSeries::monomial(MultiIndex::new(e, self.flavor)?, S::one(), self.q.clone())
    }
}

impl<S: Scalar> Interp<S> for OrderedInterp<S> {
    type Value = OrderedSeries<S>;

    fn scalar(&self, c: S) -> Result<OrderedSeries<S>> {
        Ok(OrderedSeries::one(self.n, self.q.clone(), self.flavor)?.scale(&c))
    }

    fn generator(&self, index: usize, starred: bool) -> Result<OrderedSeries<S>> {
        if starred {
            return Err(Error::Malformed("adjoints exist only in star mode".into()));
        }
        self.unit(index, 1)
    }

    fn inverse(&self, index: usize) -> Result<OrderedSeries<S>> {
        if self.flavor != Flavor::Torus {
            return Err(Error::Malformed("generator inverses exist only in torus mode".into()));
        }
        self.unit(index, -1)
    }

    fn add(&self, a: &OrderedSeries<S>, b: &OrderedSeries<S>) -> Result<OrderedSeries<S>> {
        a.add(b)
    }

    fn mul(&self, a: &OrderedSeries<S>, b: &OrderedSeries<S>) -> Result<OrderedSeries<S>> {
        a.product(b)
    }

    fn scale(&self, a: &OrderedSeries<S>, c: &S) -> Result<OrderedSeries<S>> {
        Ok(a.scale(c))
    }
}

struct StarInterp {
    n: usize,
}

impl<S: Scalar> Interp<S> for StarInterp {
    type Value = StarExpr<S>;

    fn scalar(&self, c: S) -> Result<StarExpr<S>> {
        StarExpr::new(self.n)?.with_term(Vec::new(), c)
    }

    fn generator(&self, index: usize, starred: bool) -> Result<StarExpr<S>> {
        StarExpr::new(self.n)?.with_term(vec![StarLetter { index, starred }], S::one())
    }

    fn add(&self, a: &StarExpr<S>, b: &StarExpr<S>) -> Result<StarExpr<S>> {
        let mut out = a.clone();
        for (w, c) in b.terms() {
            out.push(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    fn mul(&self, a: &StarExpr<S>, b: &StarExpr<S>) -> Result<StarExpr<S>> {
        let mut out = StarExpr::new(self.n)?;
        for (u, c) in a.terms() {
            for (v, d) in b.terms() {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.push(w, c.clone() * d.clone())?;
            }
        }
        Ok(out)
    }

    fn scale(&self, a: &StarExpr<S>, c: &S) -> Result<StarExpr<S>> {
        let mut out = StarExpr::new(self.n)?;
        for (w, d) in a.terms() {
            out.push(w.clone(), d.clone() * c.clone())?;
        }
        Ok(out)
    }
}

/// Evaluates in the free algebra. `q` is only needed if the expression
/// mentions it.
pub fn to_free<S: Scalar>(e: &Expr, n: usize, q: Option<&S>) -> Result<FreeSeries<S>> {
    interpret(e, &FreeInterp { n }, q)
}

/// Evaluates in the quantum affine space or the quantum torus.
pub fn to_ordered<S: Scalar>(e: &Expr, n: usize, q: &S, flavor: Flavor) -> Result<OrderedSeries<S>> {
    interpret(e, &OrderedInterp { n, q: q.clone(), flavor }, Some(q))
}

/// Expands into a linear combination of star-words, before any relation is
/// applied.
pub fn to_star_expr<S: Scalar>(e: &Expr, n: usize, q: Option<&S>) -> Result<StarExpr<S>> {
    interpret(e, &StarInterp { n }, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, C64};
    use crate::star::star_normal_order;
    use crate::words::Word;

    fn exact(s: &str) -> ExactComplex {
        ExactComplex::from_rational(&parse_rational(s).unwrap())
    }

    fn gen(index: usize, starred: bool) -> Expr {
        Expr::Gen { letter: GenLetter::Z, index, starred }
    }

    #[test]
    fn star_binds_to_the_generator() {
        let e = parse("z1* * z2", 2, AlgebraMode::Star).unwrap();
        assert_eq!(e, Expr::Mul(Box::new(gen(1, true)), Box::new(gen(2, false))));
        let e = parse("z1 * z2", 2, AlgebraMode::Star).unwrap();
        assert_eq!(e, Expr::Mul(Box::new(gen(1, false)), Box::new(gen(2, false))));
        // `z1*z2` in star mode is the adjoint followed by a bare operand.
        let err = parse("z1*z2", 2, AlgebraMode::Star).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 3, .. }), "{err}");
        // outside star mode the same text is a product
        assert!(parse("z1*z2", 2, AlgebraMode::Free).is_ok());
    }

    #[test]
    fn power_expands_to_a_word() {
        let e = parse("x1^2*x2", 2, AlgebraMode::Free).unwrap();
        let f = to_free::<ExactComplex>(&e, 2, None).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff(&Word::new(2, vec![1, 1, 2]).unwrap()), Some(&ExactComplex::one()));
    }

    #[test]
    fn square_of_a_sum_has_four_terms() {
        let e = parse("(x1 + 2*x2)^2", 2, AlgebraMode::Free).unwrap();
        let f = to_free::<ExactComplex>(&e, 2, None).unwrap();
        let w = |l: &[usize]| Word::new(2, l.to_vec()).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.coeff(&w(&[1, 2])), Some(&exact("2")));
        assert_eq!(f.coeff(&w(&[2, 1])), Some(&exact("2")));
        assert_eq!(f.coeff(&w(&[2, 2])), Some(&exact("4")));
    }

    #[test]
    fn precedence() {
        // -x^2 is -(x^2); -a*b is (-a)*b; a - b - c is (a - b) - c
        let e = parse("-x1^2", 1, AlgebraMode::Free).unwrap();
        assert!(matches!(e, Expr::Neg(ref inner) if matches!(**inner, Expr::Pow(_, 2))));
        let e = parse("-x1*x1", 1, AlgebraMode::Free).unwrap();
        assert!(matches!(e, Expr::Mul(ref l, _) if matches!(**l, Expr::Neg(_))));
        let e = parse("x1 - x1 - 1", 1, AlgebraMode::Free).unwrap();
        assert!(matches!(e, Expr::Sub(ref l, _) if matches!(**l, Expr::Sub(..))));
        assert_eq!(e.to_string(), "x1 - x1 - 1");
        let e = parse("x1 - (x1 - 1)", 1, AlgebraMode::Free).unwrap();
        assert_eq!(e.to_string(), "x1 - (x1 - 1)");
    }

    #[test]
    fn literals() {
        let e = parse("3/4 + 0.5i - i", 1, AlgebraMode::Free).unwrap();
        let f = to_free::<ExactComplex>(&e, 1, None).unwrap();
        let c = f.coeff(&Word::empty(1)).unwrap();
        assert_eq!(c, &ExactComplex::new(parse_rational("3/4").unwrap(), parse_rational("-1/2").unwrap()));
        assert_eq!(e.to_string(), "3/4 + 1/2i - 1i");
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("x3", 2, AlgebraMode::Free, 0),
            ("x1 + $", 2, AlgebraMode::Free, 5),
            ("x1^-1", 2, AlgebraMode::Affine, 4),
            ("(x1 + x2)^-1", 2, AlgebraMode::Torus, 11),
            ("x1 x2", 2, AlgebraMode::Free, 3),
            ("(x1", 2, AlgebraMode::Free, 3),
            ("x1)", 2, AlgebraMode::Free, 2),
            ("x1^2^2", 2, AlgebraMode::Free, 4),
            ("x1^1.5", 2, AlgebraMode::Free, 3),
            ("", 2, AlgebraMode::Free, 0),
        ];
        for (src, n, mode, at) in cases {
            match parse(src, n, mode) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, at, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn torus_inverses() {
        let q = C64::new(0.5, 0.0);
        let e = parse("x1 * x1^-1", 1, AlgebraMode::Torus).unwrap();
        assert!(to_ordered(&e, 1, &q, Flavor::Torus).unwrap().is_one());
        assert_eq!(e.to_string(), "x1 * x1^-1");
    }

    #[test]
    fn q_relation_vanishes_after_normal_ordering() {
        let q = exact("1/2");
        let e = parse("x2*x1 - q^-1*x1*x2", 2, AlgebraMode::Affine);
        assert!(e.is_err(), "q^-1 is not a generator");
        let e = parse("x1*x2 - q*x2*x1", 2, AlgebraMode::Affine).unwrap();
        assert!(to_ordered(&e, 2, &q, Flavor::Affine).unwrap().is_zero());
    }

    #[test]
    fn star_expression_normal_orders() {
        let q = exact("1/2");
        let e = parse("z1* * z1 - q^2 * z1 * z1*", 1, AlgebraMode::Star).unwrap();
        let p = star_normal_order(&to_star_expr(&e, 1, Some(&q)).unwrap(), &q).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.to_string(), "(3/4,0)*[1]");
    }
}
