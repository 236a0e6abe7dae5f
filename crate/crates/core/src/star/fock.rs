//! Truncated Fock representation of `Pol_q(ℂⁿ)` and the norm estimates
//! built on it.
//!
//! The Hilbert space is cut down to `span{e_α : |α| ≤ N}` with the basis in
//! graded-lex order (by `|α|`, then lexicographically by exponent vector).
//! `π_N(z_j)` raises `e_α` to a multiple of `e_{α+δ_j}` and annihilates the
//! top layer `|α| = N`, so `π_N(a)` is the compression of `π(a)` for every
//! `a` in the subalgebra generated by the `z_j`, and `‖π_N(a)‖` increases to
//! `‖π(a)‖` as `N` grows. Adjoint generators are conjugate transposes.

use std::collections::HashMap;

use num_traits::Zero;

use super::{StarMonomial, StarPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{op_norm, OpNormOptions, SparseOperator};
use crate::quantum_algebra::OrderedSeries;
use crate::scalar::{Scalar, C64};
use crate::words::{Flavor, MultiIndex};

/// `[k]_q = Σ_{i=0}^{k-1} q^{2i}`.
pub fn qint(k: u64, q: f64) -> f64 {
    let q2 = q * q;
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..k {
        sum += term;
        term *= q2;
    }
    sum
}

/// `C(N + n, n)`, the number of multi-indices of degree at most `N`;
/// saturates instead of overflowing.
pub fn fock_dimension(n: usize, cutoff: usize) -> u128 {
    let top = (cutoff + n) as u128;
    (1..=n as u128).fold(1u128, |acc, i| acc.saturating_mul(top + 1 - i) / i)
}

/// The representation `π_N` on `span{e_α : |α| ≤ N}`.
#[derive(Debug, Clone)]
pub struct TruncatedRep {
    n: usize,
    q: f64,
    cutoff: usize,
    basis: Vec<MultiIndex>,
    index: HashMap<Vec<i64>, usize>,
    raising: Vec<SparseOperator>,
    lowering: Vec<SparseOperator>,
}

impl TruncatedRep {
    pub fn new(n: usize, q: f64, cutoff: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::param(format!("Fock representation needs 0 < q < 1, got {q}")));
        }
        let basis = graded_lex_basis(n, cutoff);
        let index = basis.iter().enumerate().map(|(k, a)| (a.exponents().to_vec(), k)).collect();
        let mut rep = TruncatedRep { n, q, cutoff, basis, index, raising: Vec::new(), lowering: Vec::new() };
        rep.raising = (1..=n).map(|j| rep.raising_operator(j)).collect();
        rep.lowering = rep.raising.iter().map(SparseOperator::adjoint).collect();
        Ok(rep)
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index.get(alpha.exponents()).copied()
    }

    fn raising_operator(&self, j: usize) -> SparseOperator {
        let q = self.q;
        let scale = (1.0 - q * q).sqrt();
        let mut op = SparseOperator::zero(self.dim());
        for (col, alpha) in self.basis.iter().enumerate() {
            if alpha.degree() as usize >= self.cutoff {
                continue;
            }
            let e = alpha.exponents();
            let tail: i64 = e[j..].iter().sum();
            let mut target = e.to_vec();
            target[j - 1] += 1;
            let row = self.index[&target];
            let v = scale * qint(e[j - 1] as u64 + 1, q).sqrt() * q.powi(tail as i32);
            op.add_entry(row, col, C64::new(v, 0.0));
        }
        op
    }

    /// `π_N(z_j)` for 1-based `j`.
    pub fn generator(&self, j: usize) -> Result<&SparseOperator> {
        self.raising.get(j.wrapping_sub(1)).ok_or(Error::LetterOutOfRange { letter: j, n: self.n })
    }

    /// `π_N(z_j*)`, the conjugate transpose of [`generator`](Self::generator).
    pub fn adjoint_generator(&self, j: usize) -> Result<&SparseOperator> {
        self.lowering.get(j.wrapping_sub(1)).ok_or(Error::LetterOutOfRange { letter: j, n: self.n })
    }

    fn check_q<S: Scalar>(&self, q: &S) -> Result<()> {
        if q.to_c64() != C64::new(self.q, 0.0) {
            return Err(Error::ParameterMismatch(format!(
                "element has q = {}, representation has q = {}",
                q.to_c64(),
                self.q
            )));
        }
        Ok(())
    }

    fn monomial_operator(&self, m: &StarMonomial) -> Result<SparseOperator> {
        let factors = m
            .z
            .exponents()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(&self.raising[i]).take(e as usize))
            .chain(
                m.zstar
                    .exponents()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat(&self.lowering[i]).take(e as usize)),
            );
        let mut acc: Option<SparseOperator> = None;
        for f in factors {
            acc = Some(match acc {
                None => f.clone(),
                Some(m) => m.matmul(f)?,
            });
        }
        Ok(acc.unwrap_or_else(|| SparseOperator::identity(self.dim())))
    }
}

fn graded_lex_basis(n: usize, cutoff: usize) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<i64>, remaining: i64, slots: usize, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex::affine(prefix.clone()).expect("nonnegative"));
            prefix.pop();
            return;
        }
        for first in 0..=remaining {
            prefix.push(first);
            fill(prefix, remaining - first, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=cutoff as i64 {
        fill(&mut Vec::with_capacity(n), d, n, &mut out);
    }
    out
}

/// The matrices `π_N(z_1), …, π_N(z_n)`.
pub fn build_rep(rep: &TruncatedRep) -> Vec<SparseOperator> {
    rep.raising.clone()
}

/// `π_N(a)`, each monomial `z^α (z*)^β` multiplied out left to right.
pub fn rep_apply<S: Scalar>(a: &StarPolynomial<S>, rep: &TruncatedRep) -> Result<SparseOperator> {
    if a.alphabet() != rep.n {
        return Err(Error::AlphabetMismatch { left: a.alphabet(), right: rep.n });
    }
    rep.check_q(a.q())?;
    let mut out = SparseOperator::zero(rep.dim());
    for (m, c) in a.terms() {
        let term = rep.monomial_operator(m)?.scale(c.to_c64());
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Views an element of `O_q^reg(ℂⁿ)` inside `Pol_q(ℂⁿ)` via `x_i ↦ z_i`.
pub fn embed<S: Scalar>(a: &OrderedSeries<S>) -> Result<StarPolynomial<S>> {
    if a.flavor() != Flavor::Affine {
        return Err(Error::FlavorMismatch);
    }
    let n = a.alphabet();
    let terms = a
        .terms()
        .map(|(alpha, c)| Ok((StarMonomial::new(alpha.clone(), MultiIndex::zero(n, Flavor::Affine))?, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    StarPolynomial::from_terms(n, a.q().clone(), terms)
}

/// `γ_r`: multiplies the coefficient of `x^α` by `r^{|α|}`.
pub fn scale_automorphism<S: Scalar>(a: &OrderedSeries<S>, r: f64) -> Result<OrderedSeries<S>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!("scale automorphism needs 0 < r < 1, got {r}")));
    }
    if a.flavor() != Flavor::Affine {
        return Err(Error::FlavorMismatch);
    }
    let r = S::from_f64(r);
    Ok(a.map_coeffs(|alpha, c| c.clone() * r.powi(alpha.degree() as i64).expect("r > 0")))
}

/// `‖π(a) e₀‖`, exact once the cutoff reaches `deg(a)`.
pub fn vacuum_lower_bound<S: Scalar>(a: &OrderedSeries<S>, rep: &TruncatedRep) -> Result<f64> {
    if a.flavor() != Flavor::Affine {
        return Err(Error::FlavorMismatch);
    }
    if a.alphabet() != rep.n {
        return Err(Error::AlphabetMismatch { left: a.alphabet(), right: rep.n });
    }
    rep.check_q(a.q())?;
    let deg = a.degree().unwrap_or(0) as usize;
    if deg > rep.cutoff {
        return Err(Error::param(format!("cutoff {} below degree {deg}", rep.cutoff)));
    }
    let mut total = vec![C64::zero(); rep.dim()];
    for (alpha, c) in a.terms() {
        let mut v = vec![C64::zero(); rep.dim()];
        v[0] = C64::new(1.0, 0.0);
        // z^α e₀ = z_1^{α_1}( … (z_n^{α_n} e₀)): rightmost factor first.
        for (i, &e) in alpha.exponents().iter().enumerate().rev() {
            for _ in 0..e {
                v = rep.raising[i].apply(&v)?;
            }
        }
        let c = c.to_c64();
        for (t, x) in total.iter_mut().zip(v) {
            *t += c * x;
        }
    }
    Ok(total.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// `‖π_N(a)‖` for `a` in the subalgebra generated by the `z_j`.
pub fn truncated_norm<S: Scalar>(a: &OrderedSeries<S>, rep: &TruncatedRep, opts: &OpNormOptions) -> Result<f64> {
    op_norm(&rep_apply(&embed(a)?, rep)?, opts)
}

/// `‖π_N(γ_r(a))‖`: a lower bound for the quantum-ball seminorm `‖a‖_r`,
/// nondecreasing in the cutoff.
pub fn ball_seminorm<S: Scalar>(a: &OrderedSeries<S>, r: f64, rep: &TruncatedRep, opts: &OpNormOptions) -> Result<f64> {
    truncated_norm(&scale_automorphism(a, r)?, rep, opts)
}

/// Which defining relation a residual measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationFamily {
    /// `z_i z_j − q z_j z_i` for `i < j`.
    Commute,
    /// `z_i* z_j − q z_j z_i*` for `i ≠ j`.
    Cross,
    /// `z_i* z_i − q² z_i z_i* − (1 − q²)(1 − Σ_{k>i} z_k z_k*)`.
    Diagonal,
}

impl RelationFamily {
    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::Commute => "commute",
            RelationFamily::Cross => "cross",
            RelationFamily::Diagonal => "diagonal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationResidual {
    pub family: RelationFamily,
    pub i: usize,
    pub j: usize,
    /// Largest entry modulus of the relation matrix over the columns `e_α`
    /// with `|α| ≤ N − 2`.
    pub residual: f64,
}

/// Residuals of every defining relation under `π_N`, restricted to the
/// interior subspace where truncation cannot interfere.
pub fn relation_residuals(rep: &TruncatedRep) -> Result<Vec<RelationResidual>> {
    let n = rep.n;
    let q = C64::new(rep.q, 0.0);
    let one_minus = C64::new(1.0 - rep.q * rep.q, 0.0);
    let z = |i: usize| &rep.raising[i - 1];
    let zs = |i: usize| &rep.lowering[i - 1];
    let interior = |op: &SparseOperator| -> f64 {
        op.entries()
            .filter(|&(_, c, _)| rep.basis[c].degree() as usize + 2 <= rep.cutoff)
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    };
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < j {
                let m = z(i).matmul(z(j))?.sub(&z(j).matmul(z(i))?.scale(q))?;
                out.push(RelationResidual { family: RelationFamily::Commute, i, j, residual: interior(&m) });
            }
            if i != j {
                let m = zs(i).matmul(z(j))?.sub(&z(j).matmul(zs(i))?.scale(q))?;
                out.push(RelationResidual { family: RelationFamily::Cross, i, j, residual: interior(&m) });
            }
        }
        let mut rhs = SparseOperator::identity(rep.dim());
        for k in i + 1..=n {
            rhs = rhs.sub(&z(k).matmul(zs(k))?)?;
        }
        let rhs = rhs.scale(one_minus).add(&z(i).matmul(zs(i))?.scale(q * q))?;
        let m = zs(i).matmul(z(i))?.sub(&rhs)?;
        out.push(RelationResidual { family: RelationFamily::Diagonal, i, j: i, residual: interior(&m) });
    }
    Ok(out)
}

/// Certified lower bound for `Π_{j≥1}(1 − q^{2j})`.
///
/// The partial product up to `J` is multiplied by `1 − q^{2(J+1)}/(1 − q²)`,
/// a lower bound for the tail `Π_{j>J}(1 − q^{2j})`, with `J` the first index
/// at which that correction drops below `tol`. A final factor
/// `1 − (J+2)·ε` absorbs the rounding of the `J` floating-point products.
pub fn euler_product_lower(q: f64, tol: f64) -> Result<f64> {
    const MAX_TERMS: usize = 10_000_000;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::param(format!("euler product needs 0 < q < 1, got {q}")));
    }
    if !(tol > 0.0) {
        return Err(Error::param(format!("tolerance must be positive, got {tol}")));
    }
    let q2 = q * q;
    let denom = 1.0 - q2;
    let mut partial = 1.0;
    let mut power = q2; // q^{2j} for the next factor j
    let mut terms = 0usize;
    loop {
        let tail = power / denom;
        if tail < tol {
            let correction = 1.0 - tail;
            if correction <= 0.0 {
                break;
            }
            let rounding = 1.0 - (terms as f64 + 2.0) * f64::EPSILON;
            return Ok(partial * correction * rounding);
        }
        if terms >= MAX_TERMS {
            break;
        }
        partial *= 1.0 - power;
        power *= q2;
        terms += 1;
    }
    Err(Error::param(format!(
        "tail bound nonpositive: q = {q} too close to 1 for tol = {tol}; raise the term limit"
    )))
}
