//! Quantum affine space and quantum torus.
//!
//! Both algebras have generators `x_1, …, x_n` with `x_i x_j = q x_j x_i`
//! for `i < j`; the torus additionally inverts every generator. Elements are
//! stored in the ordered monomial basis `x^α = x_1^{α_1} ⋯ x_n^{α_n}`.
//!
//! Moving a descending pair `x_j x_i` (`j > i`) into ascending order costs a
//! factor `q^{-1}`. Consequently a free word `w` normal-orders to
//! `q^{-inv(w)} x^{ab(w)}` and
//!
//! ```text
//! x^α ⋆ x^β = q^{-κ(α,β)} x^{α+β},   κ(α,β) = Σ_{i<j} α_j β_i.
//! ```
//!
//! For torus exponents the same bilinear `κ` applies, because
//! `x_j^s x_i^t = q^{-st} x_i^t x_j^s` for `i < j` and all signs `s, t`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_series::FreeSeries;
use crate::scalar::{Mode, NumberRepr, Scalar};
use crate::words::{weight_from_modulus, Flavor, MultiIndex};

/// An element of `O_q^reg(ℂⁿ)` (affine flavor) or `O_q^reg((ℂ^×)ⁿ)` (torus flavor).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSeries<S> {
    n: usize,
    q: S,
    flavor: Flavor,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> OrderedSeries<S> {
    pub fn zero(n: usize, q: S, flavor: Flavor) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        Ok(OrderedSeries { n, q, flavor, terms: BTreeMap::new() })
    }

    pub fn one(n: usize, q: S, flavor: Flavor) -> Result<Self> {
        let mut s = OrderedSeries::zero(n, q, flavor)?;
        s.accumulate(MultiIndex::zero(n, flavor), S::one());
        Ok(s)
    }

    pub fn monomial(alpha: MultiIndex, coeff: S, q: S) -> Result<Self> {
        let mut s = OrderedSeries::zero(alpha.len(), q, alpha.flavor())?;
        s.accumulate(alpha, coeff);
        Ok(s)
    }

    pub fn from_terms(
        n: usize,
        q: S,
        flavor: Flavor,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Result<Self> {
        let mut s = OrderedSeries::zero(n, q, flavor)?;
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::AlphabetMismatch { left: n, right: alpha.len() });
            }
            if alpha.flavor() != flavor {
                return Err(Error::FlavorMismatch);
            }
            s.accumulate(alpha, c);
        }
        Ok(s)
    }

    pub(crate) fn accumulate(&mut self, alpha: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
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

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn mode(&self) -> Mode {
        S::MODE
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

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&S> {
        self.terms.get(alpha)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    /// Largest `|α|` present (ℓ¹ norm on the torus).
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub(crate) fn map_coeffs(&self, f: impl Fn(&MultiIndex, &S) -> S) -> Self {
        let mut out = OrderedSeries { terms: BTreeMap::new(), ..self.clone() };
        for (alpha, c) in &self.terms {
            out.accumulate(alpha.clone(), f(alpha, c));
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        if self.q != other.q {
            return Err(Error::ParameterMismatch("operands use different q".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.accumulate(alpha.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, lambda: &S) -> Self {
        self.map_coeffs(|_, c| c.clone() * lambda.clone())
    }

    /// Product in `O_q^reg(ℂⁿ)`; both operands must be affine.
    pub fn twisted_product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.flavor != Flavor::Affine {
            return Err(Error::FlavorMismatch);
        }
        self.bilinear_product(other)
    }

    /// Product in the quantum torus; both operands must have torus flavor.
    pub fn torus_product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.flavor != Flavor::Torus {
            return Err(Error::FlavorMismatch);
        }
        self.bilinear_product(other)
    }

    /// Product with the flavor-appropriate rule.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.bilinear_product(other)
    }

    fn bilinear_product(&self, other: &Self) -> Result<Self> {
        let mut powers = QPowers::new(&self.q);
        let mut out = OrderedSeries { terms: BTreeMap::new(), ..self.clone() };
        for (alpha, a) in &self.terms {
            for (beta, b) in &other.terms {
                let factor = powers.get(-kappa(alpha, beta))?;
                out.accumulate(alpha.checked_add(beta)?, a.clone() * b.clone() * factor);
            }
        }
        Ok(out)
    }

    /// The affine seminorms `‖·‖_ρ^{(1)}`, `‖·‖_ρ^{(2)}`, `‖·‖_ρ^{(∞)}`, all
    /// weighted by `w_q(α) ρ^{|α|}`.
    pub fn affine_seminorm(&self, rho: f64, variant: AffineVariant) -> Result<f64> {
        if self.flavor != Flavor::Affine {
            return Err(Error::FlavorMismatch);
        }
        if !(rho > 0.0) {
            return Err(Error::param(format!("rho must be positive, got {rho}")));
        }
        let q_abs = self.q.modulus();
        let weighted = self
            .terms
            .iter()
            .map(|(alpha, c)| c.modulus() * weight_from_modulus(alpha, q_abs) * rho.powi(alpha.degree() as i32));
        Ok(match variant {
            AffineVariant::L1 => weighted.sum(),
            AffineVariant::L2 => weighted.map(|v| v * v).sum::<f64>().sqrt(),
            AffineVariant::Sup => weighted.fold(0.0, f64::max),
        })
    }

    /// `Σ_{α∈ℤⁿ} |c_α| ρ^{‖α‖₁}`; only defined for `|q| = 1`.
    pub fn torus_seminorm(&self, rho: f64) -> Result<f64> {
        if self.flavor != Flavor::Torus {
            return Err(Error::FlavorMismatch);
        }
        if !(rho > 0.0) {
            return Err(Error::param(format!("rho must be positive, got {rho}")));
        }
        if !has_unit_modulus(&self.q) {
            return Err(Error::param("torus seminorms require |q| = 1"));
        }
        Ok(self
            .terms
            .iter()
            .map(|(alpha, c)| c.modulus() * rho.powi(alpha.l1_norm() as i32))
            .sum())
    }
}

fn has_unit_modulus<S: Scalar>(q: &S) -> bool {
    let norm_sqr = (q.conj() * q.clone()).to_c64().re;
    match S::MODE {
        Mode::Exact => q.conj() * q.clone() == S::one(),
        Mode::Float => (norm_sqr - 1.0).abs() <= 1e-12,
    }
}

/// Cached integer powers of `q`.
pub(crate) struct QPowers<'a, S> {
    q: &'a S,
    cache: HashMap<i64, S>,
}

impl<'a, S: Scalar> QPowers<'a, S> {
    pub(crate) fn new(q: &'a S) -> Self {
        QPowers { q, cache: HashMap::new() }
    }

    pub(crate) fn get(&mut self, k: i64) -> Result<S> {
        if let Some(v) = self.cache.get(&k) {
            return Ok(v.clone());
        }
        let v = self.q.powi(k).ok_or(Error::ZeroQ)?;
        self.cache.insert(k, v.clone());
        Ok(v)
    }
}

/// `κ(α,β) = Σ_{i<j} α_j β_i`: the number of transpositions needed to sort
/// the concatenation of the sorted words of `α` and `β`.
pub fn kappa(alpha: &MultiIndex, beta: &MultiIndex) -> i64 {
    let a = alpha.exponents();
    let b = beta.exponents();
    let mut suffix = 0i64;
    let mut total = 0i64;
    for i in (0..a.len()).rev() {
        total += b[i] * suffix;
        suffix += a[i];
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineVariant {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    Sup,
}

impl std::str::FromStr for AffineVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(AffineVariant::L1),
            "2" => Ok(AffineVariant::L2),
            "inf" | "sup" | "∞" => Ok(AffineVariant::Sup),
            _ => Err(Error::param(format!("unknown seminorm variant {s:?}"))),
        }
    }
}

/// Quotient map from the free algebra: `w ↦ q^{-inv(w)} x^{ab(w)}`.
pub fn normal_order<S: Scalar>(f: &FreeSeries<S>, q: &S) -> Result<OrderedSeries<S>> {
    let mut out = OrderedSeries::zero(f.alphabet(), q.clone(), Flavor::Affine)?;
    let mut powers = QPowers::new(q);
    for (w, c) in f.terms() {
        let factor = powers.get(-(w.inversion_count() as i64))?;
        out.accumulate(w.abelianize(), c.clone() * factor);
    }
    Ok(out)
}

/// Normal form of a word in `x_i^{±1}` letters in the quantum torus.
/// Each letter is `(generator, power)` with 1-based generators.
pub fn torus_word<S: Scalar>(n: usize, q: &S, letters: &[(usize, i64)]) -> Result<OrderedSeries<S>> {
    let mut acc = OrderedSeries::one(n, q.clone(), Flavor::Torus)?;
    for &(i, p) in letters {
        if i == 0 || i > n {
            return Err(Error::LetterOutOfRange { letter: i, n });
        }
        let mut e = vec![0; n];
        e[i - 1] = p;
        let alpha = MultiIndex::torus(e)?;
        acc = acc.torus_product(&OrderedSeries::monomial(alpha, S::one(), q.clone())?)?;
    }
    Ok(acc)
}

/// Comparison constants between the affine seminorm families at radii
/// `ρ < r`: `‖a‖^{(∞)}_ρ ≤ ‖a‖^{(2)}_ρ ≤ ‖a‖^{(1)}_ρ` with constant
/// [`chain`](Self::chain) and `‖a‖^{(1)}_ρ ≤ upper · ‖a‖^{(2)}_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyConstants {
    pub chain: f64,
    pub upper: f64,
}

pub fn family_equivalence_constants(rho: f64, r: f64, n: usize) -> Result<FamilyConstants> {
    if !(rho > 0.0 && rho < r) {
        return Err(Error::param(format!("need 0 < rho < r, got rho={rho}, r={r}")));
    }
    // Cauchy–Schwarz against Σ_{α∈ℤ₊ⁿ} (ρ/r)^{2|α|} = (1 - ρ²/r²)^{-n}.
    let ratio = (rho / r) * (rho / r);
    let upper = (1.0 / (1.0 - ratio)).powf(n as f64 / 2.0);
    Ok(FamilyConstants { chain: 1.0, upper })
}

impl<S: Scalar> fmt::Display for OrderedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (alpha, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let (re, im) = c.text_parts();
            write!(f, "({re},{im})*x{alpha}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QJson {
    Rational { num: String, den: String },
    Complex { re: NumberRepr, im: NumberRepr },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderedSeriesJson {
    pub n: usize,
    pub q: QJson,
    pub flavor: Flavor,
    pub terms: Vec<OrderedTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderedTermJson {
    pub alpha: Vec<i64>,
    pub re: NumberRepr,
    pub im: NumberRepr,
}

pub(crate) fn q_to_json<S: Scalar>(q: &S) -> QJson {
    let (re, im) = q.text_parts();
    if S::MODE == Mode::Exact && q.is_real() {
        let (num, den) = re.split_once('/').unwrap_or((re.as_str(), "1"));
        QJson::Rational { num: num.to_string(), den: den.to_string() }
    } else if S::MODE == Mode::Exact {
        QJson::Complex { re: NumberRepr::Text(re), im: NumberRepr::Text(im) }
    } else {
        let (re, im) = q.json_parts();
        QJson::Complex { re, im }
    }
}

pub(crate) fn q_from_json<S: Scalar>(q: &QJson) -> Result<S> {
    match q {
        QJson::Rational { num, den } => {
            let r = crate::scalar::parse_rational(&format!("{num}/{den}"))?;
            Ok(S::from_rational(&r))
        }
        QJson::Complex { re, im } => S::from_json_parts(re, im),
    }
}

impl<S: Scalar> OrderedSeries<S> {
    pub fn to_json(&self) -> OrderedSeriesJson {
        OrderedSeriesJson {
            n: self.n,
            q: q_to_json(&self.q),
            flavor: self.flavor,
            terms: self
                .terms
                .iter()
                .map(|(alpha, c)| {
                    let (re, im) = c.json_parts();
                    OrderedTermJson { alpha: alpha.exponents().to_vec(), re, im }
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &OrderedSeriesJson) -> Result<Self> {
        let q = q_from_json::<S>(&doc.q)?;
        let terms = doc
            .terms
            .iter()
            .map(|t| Ok((MultiIndex::new(t.alpha.clone(), doc.flavor)?, S::from_json_parts(&t.re, &t.im)?)))
            .collect::<Result<Vec<_>>>()?;
        OrderedSeries::from_terms(doc.n, q, doc.flavor, terms)
    }
}

impl<S: Scalar> OrderedSeries<S> {
    /// `true` when the constant term is the only term and equals one.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(alpha, c)| alpha.is_zero() && c.is_one())
    }
}
