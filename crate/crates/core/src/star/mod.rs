//! The *-algebra `Pol_q(ℂⁿ)` and its Fock representation.
//!
//! Generators `z_1, …, z_n` and their adjoints obey, for real `0 < q < 1`,
//!
//! ```text
//! z_i z_j   = q z_j z_i                                   (i < j)
//! z_i* z_j  = q z_j z_i*                                  (i ≠ j)
//! z_i* z_i  = q² z_i z_i* + (1 − q²)(1 − Σ_{k>i} z_k z_k*)
//! ```
//!
//! and, taking adjoints of the first line, `z_j* z_i* = q z_i* z_j*` for
//! `i < j`. The normal form of a monomial is `z^α (z*)^β`: all unstarred
//! letters first, each block in ascending index order.

mod fock;
mod rewrite;

pub use fock::{
    ball_seminorm, build_rep, embed, euler_product_lower, fock_dimension, qint, relation_residuals, rep_apply,
    scale_automorphism, truncated_norm, vacuum_lower_bound, RelationFamily, RelationResidual, TruncatedRep,
};
pub use rewrite::{star_normal_order, star_normal_order_with, RewriteStrategy};

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum_algebra::{q_to_json, QJson};
use crate::scalar::{Mode, NumberRepr, Scalar};
use crate::words::MultiIndex;

/// `z_i` or `z_i*`, with a 1-based generator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarLetter {
    pub index: usize,
    pub starred: bool,
}

impl StarLetter {
    pub fn z(index: usize) -> Self {
        StarLetter { index, starred: false }
    }

    pub fn zstar(index: usize) -> Self {
        StarLetter { index, starred: true }
    }
}

impl fmt::Display for StarLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}{}", self.index, if self.starred { "*" } else { "" })
    }
}

/// A linear combination of free words in the letters `z_i`, `z_i*`, before
/// any relation is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct StarExpr<S> {
    n: usize,
    terms: Vec<(Vec<StarLetter>, S)>,
}

impl<S: Scalar> StarExpr<S> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(StarExpr { n, terms: Vec::new() })
    }

    pub fn push(&mut self, word: Vec<StarLetter>, coeff: S) -> Result<()> {
        if let Some(bad) = word.iter().find(|l| l.index == 0 || l.index > self.n) {
            return Err(Error::LetterOutOfRange { letter: bad.index, n: self.n });
        }
        self.terms.push((word, coeff));
        Ok(())
    }

    pub fn with_term(mut self, word: Vec<StarLetter>, coeff: S) -> Result<Self> {
        self.push(word, coeff)?;
        Ok(self)
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<StarLetter>, S)] {
        &self.terms
    }
}

/// The normally ordered monomial `z^α (z*)^β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarMonomial {
    pub z: MultiIndex,
    pub zstar: MultiIndex,
}

impl StarMonomial {
    pub fn new(z: MultiIndex, zstar: MultiIndex) -> Result<Self> {
        if z.len() != zstar.len() {
            return Err(Error::AlphabetMismatch { left: z.len(), right: zstar.len() });
        }
        if z.flavor() != crate::words::Flavor::Affine || zstar.flavor() != crate::words::Flavor::Affine {
            return Err(Error::FlavorMismatch);
        }
        Ok(StarMonomial { z, zstar })
    }

    pub fn degree(&self) -> u64 {
        self.z.degree() + self.zstar.degree()
    }
}

impl Ord for StarMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.z.cmp(&other.z))
            .then_with(|| self.zstar.cmp(&other.zstar))
    }
}

impl PartialOrd for StarMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StarMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let blocks = [(self.z.exponents(), ""), (self.zstar.exponents(), "*")];
        for (exps, star) in blocks {
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    if !first {
                        f.write_str(" * ")?;
                    }
                    write!(f, "z{}{}", i + 1, star)?;
                    first = false;
                }
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// An element of `Pol_q(ℂⁿ)` in normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct StarPolynomial<S> {
    n: usize,
    q: S,
    terms: BTreeMap<StarMonomial, S>,
}

impl<S: Scalar> StarPolynomial<S> {
    pub fn zero(n: usize, q: S) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        validate_star_q(&q)?;
        Ok(StarPolynomial { n, q, terms: BTreeMap::new() })
    }

    pub fn from_terms(n: usize, q: S, terms: impl IntoIterator<Item = (StarMonomial, S)>) -> Result<Self> {
        let mut p = StarPolynomial::zero(n, q)?;
        for (m, c) in terms {
            if m.z.len() != n {
                return Err(Error::AlphabetMismatch { left: n, right: m.z.len() });
            }
            p.accumulate(m, c);
        }
        Ok(p)
    }

    pub(crate) fn accumulate(&mut self, m: StarMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &S {
        &self.q
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

    pub fn terms(&self) -> impl Iterator<Item = (&StarMonomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &StarMonomial) -> Option<&S> {
        self.terms.get(m)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(StarMonomial::degree).max()
    }
}

/// `q` must be real with `0 < q < 1`; exact mode also admits `q = 1`.
pub(crate) fn validate_star_q<S: Scalar>(q: &S) -> Result<()> {
    let v = q.to_c64();
    let exact_one = S::MODE == Mode::Exact && q.is_one();
    if !q.is_real() || !(v.re > 0.0 && (v.re < 1.0 || exact_one)) {
        return Err(Error::param(format!(
            "star algebra needs real 0 < q < 1 (q = 1 only in exact mode), got {v}"
        )));
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for StarPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let (re, im) = c.text_parts();
            write!(f, "({re},{im})*[{m}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarPolynomialJson {
    pub n: usize,
    pub q: QJson,
    pub terms: Vec<StarTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarTermJson {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub re: NumberRepr,
    pub im: NumberRepr,
}

impl<S: Scalar> StarPolynomial<S> {
    pub fn to_json(&self) -> StarPolynomialJson {
        StarPolynomialJson {
            n: self.n,
            q: q_to_json(&self.q),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let (re, im) = c.json_parts();
                    StarTermJson { alpha: m.z.exponents().to_vec(), beta: m.zstar.exponents().to_vec(), re, im }
                })
                .collect(),
        }
    }
}
