//! Functional calculus on tuples of matrices.
//!
//! A free series `f = Σ c_α ζ_α` is evaluated at a tuple `a = (a_1, …, a_n)`
//! by substituting `a_α = a_{α_1} ⋯ a_{α_k}`. For commuting tuples the
//! ordered monomials `x^α` are evaluated as `a_1^{α_1} ⋯ a_n^{α_n}`. The
//! module also estimates the joint spectral radius
//! `r_∞(a) = limsup_k (max_{|α|=k} ‖a_α‖)^{1/k}` and the row norm
//! `‖Σ T_i T_i*‖^{1/2}`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_series::FreeSeries;
use crate::linalg::{hermitian_max_eigenvalue, spectral_norm, spectral_radius};
use crate::quantum_algebra::OrderedSeries;
use crate::scalar::{Scalar, C64};
use crate::words::Flavor;

/// `n` complex `d × d` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    d: usize,
    matrices: Vec<DMatrix<C64>>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<DMatrix<C64>>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyAlphabet)?;
        let d = first.nrows();
        if let Some(bad) = matrices.iter().find(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::param(format!(
                "tuple matrices must all be {d}×{d}, found {}×{}",
                bad.nrows(),
                bad.ncols()
            )));
        }
        Ok(MatrixTuple { d, matrices })
    }

    pub fn zero(n: usize, d: usize) -> Result<Self> {
        MatrixTuple::new(vec![DMatrix::zeros(d, d); n])
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrices(&self) -> &[DMatrix<C64>] {
        &self.matrices
    }

    /// The matrix `a_i` for 1-based `i`.
    pub fn get(&self, i: usize) -> Result<&DMatrix<C64>> {
        self.matrices.get(i.wrapping_sub(1)).ok_or(Error::LetterOutOfRange { letter: i, n: self.len() })
    }

    pub fn scale(&self, lambda: C64) -> MatrixTuple {
        MatrixTuple { d: self.d, matrices: self.matrices.iter().map(|m| m * lambda).collect() }
    }

    pub fn to_json(&self) -> MatrixTupleJson {
        MatrixTupleJson {
            n: self.len(),
            d: self.d,
            matrices: self
                .matrices
                .iter()
                .map(|m| {
                    let mut flat = Vec::with_capacity(self.d * self.d);
                    for r in 0..self.d {
                        for c in 0..self.d {
                            flat.push([m[(r, c)].re, m[(r, c)].im]);
                        }
                    }
                    flat
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MatrixTupleJson) -> Result<Self> {
        if json.matrices.len() != json.n {
            return Err(Error::Malformed(format!("n = {} but {} matrices given", json.n, json.matrices.len())));
        }
        let d = json.d;
        let matrices = json
            .matrices
            .iter()
            .map(|flat| {
                if flat.len() != d * d {
                    return Err(Error::Malformed(format!("expected {} entries, found {}", d * d, flat.len())));
                }
                Ok(DMatrix::from_row_iterator(d, d, flat.iter().map(|[re, im]| C64::new(*re, *im))))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixTuple::new(matrices)
    }
}

/// Interchange form: each matrix is a flat row-major list of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixTupleJson {
    pub n: usize,
    pub d: usize,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

/// `Σ_α c_α a_α`, words taken in graded-lex order and each product built from
/// its memoized prefix.
pub fn free_eval<S: Scalar>(f: &FreeSeries<S>, a: &MatrixTuple) -> Result<DMatrix<C64>> {
    if f.alphabet() != a.len() {
        return Err(Error::AlphabetMismatch { left: f.alphabet(), right: a.len() });
    }
    let d = a.dim();
    let mut memo: HashMap<Vec<usize>, DMatrix<C64>> = HashMap::new();
    memo.insert(Vec::new(), DMatrix::identity(d, d));
    let mut out = DMatrix::zeros(d, d);
    for (word, c) in f.terms() {
        let letters = word.letters();
        // Extend the longest cached prefix one letter at a time.
        let mut known = letters.len();
        while !memo.contains_key(&letters[..known]) {
            known -= 1;
        }
        for end in known + 1..=letters.len() {
            let next = &memo[&letters[..end - 1]] * &a.matrices[letters[end - 1] - 1];
            memo.insert(letters[..end].to_vec(), next);
        }
        out += &memo[letters] * c.to_c64();
    }
    Ok(out)
}

/// Largest entry modulus among the commutators `[a_i, a_j]`.
pub fn commutator_residual(a: &MatrixTuple) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (x, y) = (&a.matrices[i], &a.matrices[j]);
            let c = x * y - y * x;
            worst = c.iter().map(|z| z.norm()).fold(worst, f64::max);
        }
    }
    worst
}

/// Tolerance on the commutator residual accepted by [`commutative_eval`].
pub const COMMUTATOR_TOL: f64 = 1e-12;

/// `Σ_α c_α a_1^{α_1} ⋯ a_n^{α_n}` for a commuting tuple.
pub fn commutative_eval<S: Scalar>(f: &OrderedSeries<S>, a: &MatrixTuple) -> Result<DMatrix<C64>> {
    if f.flavor() != Flavor::Affine {
        return Err(Error::FlavorMismatch);
    }
    if f.alphabet() != a.len() {
        return Err(Error::AlphabetMismatch { left: f.alphabet(), right: a.len() });
    }
    let residual = commutator_residual(a);
    if residual > COMMUTATOR_TOL {
        return Err(Error::NonCommuting { residual });
    }
    let d = a.dim();
    let mut powers: Vec<Vec<DMatrix<C64>>> = vec![vec![DMatrix::identity(d, d)]; a.len()];
    let mut out = DMatrix::zeros(d, d);
    for (alpha, c) in f.terms() {
        let mut term = DMatrix::identity(d, d);
        for (i, &e) in alpha.exponents().iter().enumerate() {
            let e = e as usize;
            while powers[i].len() <= e {
                let next = powers[i].last().expect("identity seeded") * &a.matrices[i];
                powers[i].push(next);
            }
            term *= &powers[i][e];
        }
        out += term * c.to_c64();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsrOptions {
    /// Refuse when `n^{k_max}` words would have to be enumerated.
    pub budget: u128,
    /// Longest word whose spectral radius enters the certified lower bound.
    pub spectral_len: usize,
    /// Safety margin for a "yes" contractivity verdict.
    pub margin: f64,
}

impl Default for JsrOptions {
    fn default() -> Self {
        JsrOptions { budget: 1 << 22, spectral_len: 8, margin: 1e-9 }
    }
}

/// Joint spectral radius estimate with the per-level data behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsrEstimate {
    /// `max_{1 ≤ |α| ≤ L} ρ(a_α)^{1/|α|}`, a lower bound for `r_∞(a)`.
    /// Words whose Schur iteration does not converge are left out, which
    /// keeps the bound valid.
    pub value: f64,
    /// `min_k s_k^{1/k}`, an upper bound for `r_∞(a)`.
    pub upper: f64,
    /// Maximum of `s_k^{1/k}` over `k ∈ [⌈k_max/2⌉, k_max]`.
    pub window_max: f64,
    pub k_window: (usize, usize),
    /// `s_k^{1/k}` for `k = 1, …, k_max`, where `s_k = max_{|α|=k} ‖a_α‖`.
    pub per_level: Vec<f64>,
}

fn check_budget(n: usize, k_max: usize, budget: u128) -> Result<()> {
    let required = u32::try_from(k_max)
        .ok()
        .and_then(|k| (n as u128).checked_pow(k))
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Enumerates every word up to length `k_max`, level by level.
///
/// For a single matrix, `ρ(a^k)^{1/k} = ρ(a)`, so the lower bound is exact.
pub fn joint_spectral_radius(a: &MatrixTuple, k_max: usize, opts: &JsrOptions) -> Result<JsrEstimate> {
    if k_max < 2 {
        return Err(Error::param(format!("k_max must be at least 2, got {k_max}")));
    }
    check_budget(a.len(), k_max, opts.budget)?;
    let mut level: Vec<DMatrix<C64>> = a.matrices.clone();
    let mut per_level = Vec::with_capacity(k_max);
    let mut lower: f64 = 0.0;
    for k in 1..=k_max {
        if k > 1 {
            level = level.iter().flat_map(|w| a.matrices.iter().map(move |g| w * g)).collect();
        }
        let s_k = level.iter().map(spectral_norm).fold(0.0, f64::max);
        per_level.push(s_k.powf(1.0 / k as f64));
        if k <= opts.spectral_len {
            let rho = level.iter().filter_map(spectral_radius).fold(0.0, f64::max);
            lower = lower.max(rho.powf(1.0 / k as f64));
        }
    }
    let start = k_max.div_ceil(2);
    let window_max = per_level[start - 1..].iter().copied().fold(0.0, f64::max);
    let upper = per_level.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(JsrEstimate { value: lower, upper, window_max, k_window: (start, k_max), per_level })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

/// Reads a verdict off an estimate: "no" when the certified lower bound
/// reaches `r`, "yes" when the upper bound plus `margin` stays below `r`.
pub fn contractivity_verdict(est: &JsrEstimate, r: f64, margin: f64) -> Verdict {
    if est.value >= r {
        Verdict::No
    } else if est.upper + margin < r {
        Verdict::Yes
    } else {
        Verdict::Inconclusive
    }
}

/// Whether `r_∞(a) < r`. A "yes" is relative to this tuple only.
pub fn is_strictly_r_contractive(a: &MatrixTuple, r: f64, k_max: usize, opts: &JsrOptions) -> Result<Verdict> {
    if !(r > 0.0) {
        return Err(Error::param(format!("radius must be positive, got {r}")));
    }
    let est = joint_spectral_radius(a, k_max, opts)?;
    Ok(contractivity_verdict(&est, r, opts.margin))
}

/// `‖Σ_i T_i T_i*‖^{1/2}`.
pub fn row_norm(t: &MatrixTuple) -> f64 {
    let d = t.dim();
    let mut sum = DMatrix::<C64>::zeros(d, d);
    for m in &t.matrices {
        sum += m * m.adjoint();
    }
    if sum.iter().all(|z| z.is_zero()) {
        return 0.0;
    }
    hermitian_max_eigenvalue(&sum).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopescuBound {
    /// `‖f(T)‖`.
    pub lhs: f64,
    /// `Σ_k ‖f_k‖₂ ‖T‖_row^k`.
    pub rhs: f64,
    pub row_norm: f64,
}

impl PopescuBound {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

/// Both sides of `‖f(T)‖ ≤ Σ_k ‖f_k‖₂ ‖T‖_row^k` for a strict row contraction.
pub fn popescu_eval_bound_check<S: Scalar>(f: &FreeSeries<S>, t: &MatrixTuple) -> Result<PopescuBound> {
    let rn = row_norm(t);
    if rn >= 1.0 {
        return Err(Error::param(format!("row norm {rn} is not below 1")));
    }
    let lhs = spectral_norm(&free_eval(f, t)?);
    let rhs = f.popescu_seminorm(rn)?.value;
    Ok(PopescuBound { lhs, rhs, row_norm: rn })
}
