//! Free-monoid words and multi-indices.
//!
//! A [`Word`] indexes the coefficients of a free series, a [`MultiIndex`]
//! indexes ordered monomials `x^α`. Both carry their alphabet size; combining
//! values over different alphabets is an error rather than a silent
//! truncation.
//!
//! Words are totally ordered graded-lexicographically (shorter first, then
//! lexicographically by letters). Every map in the crate is keyed by this
//! order, which fixes the order of floating-point reductions.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    n: usize,
    letters: Vec<usize>,
}

impl Word {
    /// Letters are 1-based: every letter must lie in `1..=n`.
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::LetterOutOfRange { letter, n });
        }
        Ok(Word { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "alphabet size must be positive");
        Word { n, letters: Vec::new() }
    }

    pub fn letter(n: usize, i: usize) -> Result<Self> {
        Word::new(n, vec![i])
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    /// Number of adjacent unequal letter pairs, with the convention
    /// `d(∅) = -1` and `d(i) = 0` for single letters.
    pub fn alternation_degree(&self) -> i64 {
        if self.letters.len() < 2 {
            return self.letters.len() as i64 - 1;
        }
        self.letters.windows(2).filter(|w| w[0] != w[1]).count() as i64
    }

    /// Pairs of positions `p < s` with `letters[p] > letters[s]`.
    pub fn inversion_count(&self) -> u64 {
        // Counting sort over the alphabet: for each letter, add how many
        // strictly larger letters were already seen.
        let mut seen = vec![0u64; self.n + 1];
        let mut inversions = 0u64;
        for &l in &self.letters {
            inversions += seen[l + 1..].iter().sum::<u64>();
            seen[l] += 1;
        }
        inversions
    }

    pub fn abelianize(&self) -> MultiIndex {
        let mut exponents = vec![0i64; self.n];
        for &l in &self.letters {
            exponents[l - 1] += 1;
        }
        MultiIndex { exponents, flavor: Flavor::Affine }
    }

    /// Parses the comma-separated form (`"1,2,1"`, or `"e"` for the empty word).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "e" {
            return Word::new(n, Vec::new());
        }
        let letters = text
            .split(',')
            .map(|s| {
                s.trim().parse::<usize>().map_err(|_| Error::Parse {
                    position: 0,
                    message: format!("bad letter {s:?} in word {text:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(n, letters)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Exponents in `ℤ₊ⁿ`.
    Affine,
    /// Exponents in `ℤⁿ` (Laurent monomials).
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<i64>,
    flavor: Flavor,
}

impl MultiIndex {
    pub fn affine(exponents: Vec<i64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if let Some((position, &exponent)) = exponents.iter().enumerate().find(|(_, &e)| e < 0) {
            return Err(Error::NegativeExponent { position, exponent });
        }
        Ok(MultiIndex { exponents, flavor: Flavor::Affine })
    }

    pub fn torus(exponents: Vec<i64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(MultiIndex { exponents, flavor: Flavor::Torus })
    }

    pub fn new(exponents: Vec<i64>, flavor: Flavor) -> Result<Self> {
        match flavor {
            Flavor::Affine => MultiIndex::affine(exponents),
            Flavor::Torus => MultiIndex::torus(exponents),
        }
    }

    pub fn zero(n: usize, flavor: Flavor) -> Self {
        assert!(n > 0, "alphabet size must be positive");
        MultiIndex { exponents: vec![0; n], flavor }
    }

    pub fn unit(n: usize, i: usize, flavor: Flavor) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::LetterOutOfRange { letter: i, n });
        }
        let mut m = MultiIndex::zero(n, flavor);
        m.exponents[i - 1] = 1;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `|α|`: the coordinate sum for affine indices, the ℓ¹ norm for torus ones.
    pub fn degree(&self) -> u64 {
        match self.flavor {
            Flavor::Affine => self.exponents.iter().map(|&e| e as u64).sum(),
            Flavor::Torus => self.l1_norm(),
        }
    }

    pub fn l1_norm(&self) -> u64 {
        self.exponents.iter().map(|e| e.unsigned_abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &MultiIndex) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::AlphabetMismatch { left: self.len(), right: other.len() });
        }
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_compatible(other)?;
        let exponents = self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect();
        Ok(MultiIndex { exponents, flavor: self.flavor })
    }

    /// `Σ_{i<j} α_i α_j`, the exponent of `|q|` in the weight `w_q(α)`.
    pub fn pair_product_sum(&self) -> i128 {
        let mut suffix: i128 = 0;
        let mut total: i128 = 0;
        for &e in self.exponents.iter().rev() {
            total += e as i128 * suffix;
            suffix += e as i128;
        }
        total
    }

    /// The sorted word `1^{α_1} 2^{α_2} … n^{α_n}`; affine indices only.
    pub fn sorted_word(&self) -> Result<Word> {
        if self.flavor != Flavor::Affine {
            return Err(Error::FlavorMismatch);
        }
        let letters = self
            .exponents
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i + 1).take(e as usize))
            .collect();
        Word::new(self.len(), letters)
    }

    /// Parses the bracketed form `"[2,0,1]"`.
    pub fn parse(text: &str, flavor: Flavor) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse { position: 0, message: format!("expected [..], got {t:?}") })?;
        let exponents = inner
            .split(',')
            .map(|s| {
                s.trim().parse::<i64>().map_err(|_| Error::Parse {
                    position: 0,
                    message: format!("bad exponent {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::new(exponents, flavor)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
            .then_with(|| self.flavor.cmp(&other.flavor))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.exponents.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// `w_q(α)`: `1` when `|q| ≥ 1`, otherwise `|q|^{Σ_{i<j} α_i α_j}`.
pub fn weight_wq<S: Scalar>(alpha: &MultiIndex, q: &S) -> Result<f64> {
    if q.is_zero() {
        return Err(Error::ZeroQ);
    }
    if alpha.flavor() != Flavor::Affine {
        return Err(Error::FlavorMismatch);
    }
    Ok(weight_from_modulus(alpha, q.modulus()))
}

pub(crate) fn weight_from_modulus(alpha: &MultiIndex, q_abs: f64) -> f64 {
    if q_abs >= 1.0 {
        return 1.0;
    }
    let exponent = alpha.pair_product_sum();
    if exponent <= i32::MAX as i128 {
        q_abs.powi(exponent as i32)
    } else {
        (exponent as f64 * q_abs.ln()).exp()
    }
}
