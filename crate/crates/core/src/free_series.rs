//! Finitely supported free noncommutative series `Σ c_α ζ_α` and their
//! seminorm families.
//!
//! The four families implemented here are
//!
//! | family    | value                                         | parameters          |
//! |-----------|-----------------------------------------------|---------------------|
//! | entire    | `Σ |c_α| ρ^{|α|}`                              | `ρ > 0`             |
//! | taylor    | same sum, restricted to `ρ < r`               | `0 < ρ < r ≤ ∞`     |
//! | polydisk  | `Σ |c_α| ρ₁^{|α|} ρ₂^{d(α)+1}`                 | `0 < ρ₁ < r, ρ₂ > 0`|
//! | popescu   | `Σ_k (Σ_{|α|=k} |c_α|²)^{1/2} r^k`             | `0 < r < 1`         |
//!
//! A series may carry a degree cap. Products of capped series drop the terms
//! above the cap and mark the result as truncated; seminorms of a truncated
//! series are lower bounds for the untruncated product.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Mode, NumberRepr, Scalar};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq)]
pub struct FreeSeries<S> {
    n: usize,
    terms: BTreeMap<Word, S>,
    degree_cap: Option<usize>,
    truncated: bool,
}

impl<S: Scalar> FreeSeries<S> {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "alphabet size must be positive");
        FreeSeries { n, terms: BTreeMap::new(), degree_cap: None, truncated: false }
    }

    pub fn one(n: usize) -> Self {
        FreeSeries::monomial(Word::empty(n), S::one())
    }

    pub fn generator(n: usize, i: usize) -> Result<Self> {
        Ok(FreeSeries::monomial(Word::letter(n, i)?, S::one()))
    }

    pub fn monomial(word: Word, coeff: S) -> Self {
        let mut s = FreeSeries::zero(word.alphabet());
        s.accumulate(word, coeff);
        s
    }

    /// Builds a series from `(word, coefficient)` pairs, summing repeated words.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, S)>) -> Result<Self> {
        let mut s = FreeSeries::zero(n);
        for (word, c) in terms {
            if word.alphabet() != n {
                return Err(Error::AlphabetMismatch { left: n, right: word.alphabet() });
            }
            s.accumulate(word, c);
        }
        Ok(s)
    }

    pub(crate) fn accumulate(&mut self, word: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Drops all terms longer than `cap` and records the cap.
    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        let before = self.terms.len();
        self.terms.retain(|w, _| w.len() <= cap);
        self.truncated |= self.terms.len() != before;
        self.degree_cap = Some(self.degree_cap.map_or(cap, |c| c.min(cap)));
        self
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn degree_cap(&self) -> Option<usize> {
        self.degree_cap
    }

    /// Whether terms were dropped by a degree cap at some point.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length present, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn coeff(&self, word: &Word) -> Option<&S> {
        self.terms.get(word)
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    fn combined_cap(&self, other: &Self) -> Option<usize> {
        match (self.degree_cap, other.degree_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c.clone());
        }
        out.truncated |= other.truncated;
        out.degree_cap = self.combined_cap(other);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, lambda: &S) -> Self {
        let mut out = FreeSeries { terms: BTreeMap::new(), ..self.clone() };
        for (w, c) in &self.terms {
            out.accumulate(w.clone(), c.clone() * lambda.clone());
        }
        out
    }

    /// Concatenation product: the coefficient of `γ` is the sum over all
    /// splits `γ = αβ` of `c_α(f)·c_β(g)`.
    pub fn concat_product(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let cap = self.combined_cap(other);
        let mut out = FreeSeries::zero(self.n);
        out.degree_cap = cap;
        out.truncated = self.truncated || other.truncated;
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if cap.is_some_and(|c| u.len() + v.len() > c) {
                    out.truncated = true;
                    continue;
                }
                out.accumulate(u.concat(v)?, a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = FreeSeries::one(self.n);
        acc.degree_cap = self.degree_cap;
        for _ in 0..k {
            acc = acc.concat_product(self)?;
        }
        Ok(acc)
    }

    /// `(Σ_{|α|=k} |c_α|²)^{1/2}`.
    pub fn level_l2(&self, k: usize) -> f64 {
        self.terms
            .iter()
            .filter(|(w, _)| w.len() == k)
            .map(|(_, c)| {
                let m = c.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn entire_seminorm(&self, rho: f64) -> Result<SeminormValue> {
        positive("rho", rho)?;
        Ok(self.value(weighted_l1(self, rho), SeminormKind::Entire { rho }))
    }

    /// The seminorm of Taylor's free power series algebra of radius `radius`
    /// (`f64::INFINITY` allowed); requires `rho < radius`.
    pub fn taylor_seminorm(&self, rho: f64, radius: f64) -> Result<SeminormValue> {
        positive("rho", rho)?;
        if radius.is_nan() || rho >= radius {
            return Err(Error::param(format!("taylor seminorm needs rho < r, got rho={rho}, r={radius}")));
        }
        Ok(self.value(weighted_l1(self, rho), SeminormKind::Taylor { rho, radius }))
    }

    /// Free polydisk seminorm `Σ |c_α| ρ₁^{|α|} ρ₂^{d(α)+1}`.
    pub fn polydisk_seminorm(&self, rho1: f64, rho2: f64, radius: f64) -> Result<SeminormValue> {
        positive("rho1", rho1)?;
        positive("rho2", rho2)?;
        if radius.is_nan() || rho1 >= radius {
            return Err(Error::param(format!("polydisk seminorm needs rho1 < r, got rho1={rho1}, r={radius}")));
        }
        let mut sum = 0.0;
        for (w, c) in &self.terms {
            let alternation = (w.alternation_degree() + 1) as i32;
            sum += c.modulus() * rho1.powi(w.len() as i32) * rho2.powi(alternation);
        }
        Ok(self.value(sum, SeminormKind::Polydisk { rho1, rho2, radius }))
    }

    /// Free-ball seminorm `Σ_k level_l2(k)·r^k`.
    pub fn popescu_seminorm(&self, r: f64) -> Result<SeminormValue> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::param(format!("popescu seminorm needs 0 < r < 1, got {r}")));
        }
        let top = self.degree().unwrap_or(0);
        let mut sum = 0.0;
        for k in 0..=top {
            sum += self.level_l2(k) * r.powi(k as i32);
        }
        Ok(self.value(sum, SeminormKind::Popescu { r }))
    }

    fn value(&self, value: f64, kind: SeminormKind) -> SeminormValue {
        SeminormValue { value, kind, lower_bound: self.truncated }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive, got {v}")))
    }
}

fn weighted_l1<S: Scalar>(f: &FreeSeries<S>, rho: f64) -> f64 {
    f.terms.iter().map(|(w, c)| c.modulus() * rho.powi(w.len() as i32)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SeminormKind {
    Entire { rho: f64 },
    Taylor { rho: f64, radius: f64 },
    Polydisk { rho1: f64, rho2: f64, radius: f64 },
    Popescu { r: f64 },
}

/// A seminorm value together with the family and parameters that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue {
    pub value: f64,
    pub kind: SeminormKind,
    /// Set when the series was truncated, so `value` only bounds the true
    /// seminorm from below.
    pub lower_bound: bool,
}

impl<S: Scalar> fmt::Display for FreeSeries<S> {
    /// Canonical text form: `(re,im)*w<word>` terms joined by `" + "`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let (re, im) = c.text_parts();
            write!(f, "({re},{im})*w{w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreeSeriesJson {
    pub n: usize,
    pub mode: Mode,
    pub terms: Vec<FreeTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreeTermJson {
    pub word: Vec<usize>,
    pub re: NumberRepr,
    pub im: NumberRepr,
}

impl<S: Scalar> FreeSeries<S> {
    pub fn to_json(&self) -> FreeSeriesJson {
        FreeSeriesJson {
            n: self.n,
            mode: S::MODE,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let (re, im) = c.json_parts();
                    FreeTermJson { word: w.letters().to_vec(), re, im }
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &FreeSeriesJson) -> Result<Self> {
        if doc.mode != S::MODE {
            return Err(Error::ParameterMismatch(format!(
                "series is in {} mode, expected {}",
                doc.mode,
                S::MODE
            )));
        }
        let terms = doc
            .terms
            .iter()
            .map(|t| Ok((Word::new(doc.n, t.word.clone())?, S::from_json_parts(&t.re, &t.im)?)))
            .collect::<Result<Vec<_>>>()?;
        FreeSeries::from_terms(doc.n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, C64};
    use num_traits::One;

    type F = FreeSeries<C64>;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn word(n: usize, l: &[usize]) -> Word {
        Word::new(n, l.to_vec()).unwrap()
    }

    fn z(i: usize) -> F {
        F::generator(2, i).unwrap()
    }

    #[test]
    fn concat_examples() {
        let p = z(1).concat_product(&z(2)).unwrap();
        assert_eq!(p, F::monomial(word(2, &[1, 2]), C64::one()));

        let s = z(1).add(&z(2)).unwrap();
        let sq = s.concat_product(&s).unwrap();
        // distributivity over all splits of length-2 words
        let mut expected = F::zero(2);
        for a in 1..=2 {
            for b in 1..=2 {
                expected.accumulate(word(2, &[a, b]), C64::one());
            }
        }
        assert_eq!(sq, expected);
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let s = z(1).sub(&z(1)).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.to_string(), "0");
    }

    #[test]
    fn entire_examples() {
        let s = z(1).add(&z(2)).unwrap();
        assert_eq!(s.entire_seminorm(3.0).unwrap().value, 6.0);
        assert_eq!(F::one(2).entire_seminorm(0.1).unwrap().value, 1.0);
        let f = F::from_terms(2, [(word(2, &[1, 2]), c(2.0, 0.0)), (Word::empty(2), c(-1.0, 0.0))]).unwrap();
        assert_eq!(f.entire_seminorm(0.5).unwrap().value, 1.5);
        assert!(f.entire_seminorm(0.0).is_err());
        assert!(f.entire_seminorm(-1.0).is_err());
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(z(1).taylor_seminorm(0.9, 1.0).unwrap().value, 0.9);
        assert!(z(1).taylor_seminorm(1.0, 1.0).is_err());
        let f = z(1).add(&z(2).scale(&c(0.0, 3.0))).unwrap();
        assert_eq!(
            f.taylor_seminorm(2.5, f64::INFINITY).unwrap().value,
            f.entire_seminorm(2.5).unwrap().value
        );
    }

    #[test]
    fn polydisk_examples() {
        let f = F::monomial(word(2, &[1, 2]), C64::one());
        assert_eq!(f.polydisk_seminorm(0.5, 2.0, 1.0).unwrap().value, 1.0);
        assert_eq!(F::one(2).polydisk_seminorm(0.3, 7.0, 1.0).unwrap().value, 1.0);
        let g = F::monomial(word(2, &[1, 1, 2]), C64::one());
        assert_eq!(g.polydisk_seminorm(1.0, 3.0, 2.0).unwrap().value, 9.0);
        assert!(g.polydisk_seminorm(1.0, 3.0, 1.0).is_err());
        assert!(g.polydisk_seminorm(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn popescu_examples() {
        let s = z(1).add(&z(2)).unwrap();
        assert!((s.popescu_seminorm(0.5).unwrap().value - 0.707_106_78).abs() < 1e-8);
        assert_eq!(F::one(2).popescu_seminorm(0.5).unwrap().value, 1.0);
        let f = F::from_terms(2, [(word(2, &[1, 1]), c(3.0, 0.0)), (word(2, &[2, 1]), c(4.0, 0.0))]).unwrap();
        assert!((f.popescu_seminorm(0.1).unwrap().value - 0.05).abs() < 1e-15);
        assert!(f.popescu_seminorm(1.0).is_err());
        assert!(f.popescu_seminorm(0.0).is_err());
    }

    #[test]
    fn level_l2_examples() {
        let s = z(1).add(&z(2)).unwrap();
        assert_eq!(s.level_l2(1), 2f64.sqrt());
        assert_eq!(s.level_l2(4), 0.0);
        let f = F::from_terms(2, [(word(2, &[1, 2]), c(1.0, 0.0)), (word(2, &[2, 1]), c(0.0, -1.0))]).unwrap();
        assert_eq!(f.level_l2(2), 2f64.sqrt());
    }

    #[test]
    fn degree_cap_truncates_and_flags() {
        let s = z(1).add(&z(2)).unwrap().with_degree_cap(3);
        assert!(!s.is_truncated());
        let p = s.pow(2).unwrap();
        assert!(!p.is_truncated());
        let cube = p.concat_product(&s).unwrap();
        assert!(!cube.is_truncated());
        let fourth = cube.concat_product(&s).unwrap();
        assert!(fourth.is_truncated());
        assert!(fourth.is_zero());
        assert!(fourth.entire_seminorm(1.0).unwrap().lower_bound);
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let a = F::generator(2, 1).unwrap();
        let b = F::generator(3, 1).unwrap();
        assert!(matches!(a.concat_product(&b), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn canonical_text_form() {
        let f = F::from_terms(2, [(Word::empty(2), c(1.0, 0.0)), (word(2, &[1, 2]), c(2.0, 0.0))]).unwrap();
        assert_eq!(f.to_string(), "(1,0)*we + (2,0)*w1,2");
        let e = FreeSeries::<ExactComplex>::generator(2, 2).unwrap().scale(&ExactComplex::from_i64(-3));
        assert_eq!(e.to_string(), "(-3,0)*w2");
    }

    #[test]
    fn json_round_trip_and_mode_check() {
        let f = F::from_terms(2, [(word(2, &[2, 1]), c(0.5, -2.0)), (Word::empty(2), c(1.0, 0.0))]).unwrap();
        let doc = f.to_json();
        let text = serde_json::to_string(&doc).unwrap();
        let back: FreeSeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(F::from_json(&back).unwrap(), f);
        assert!(FreeSeries::<ExactComplex>::from_json(&back).is_err());
    }
}
