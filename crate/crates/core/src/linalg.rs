//! Sparse operators and the spectral-norm kernel shared by the Fock
//! representation and the functional calculus.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::C64;

/// Complex square matrix stored as a row-major coordinate map.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), C64>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = SparseOperator::zero(dim);
        for i in 0..dim {
            op.entries.insert((i, i), C64::new(1.0, 0.0));
        }
        op
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = ((usize, usize), C64)>) -> Result<Self> {
        let mut op = SparseOperator::zero(dim);
        for ((r, c), v) in entries {
            if r >= dim || c >= dim {
                return Err(Error::param(format!("entry ({r},{c}) outside dimension {dim}")));
            }
            op.add_entry(r, c, v);
        }
        Ok(op)
    }

    pub(crate) fn add_entry(&mut self, row: usize, col: usize, v: C64) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_insert(C64::zero());
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    fn check_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ParameterMismatch(format!("dimensions {} and {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> SparseOperator {
        SparseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.conj())).collect(),
        }
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&(r, c), &v) in &other.entries {
            out.add_entry(r, c, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, lambda: C64) -> SparseOperator {
        let mut out = SparseOperator::zero(self.dim);
        for (&(r, c), &v) in &self.entries {
            out.add_entry(r, c, v * lambda);
        }
        out
    }

    /// `self · other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(other)?;
        let mut rows_of_other: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.dim];
        for (&(r, c), &v) in &other.entries {
            rows_of_other[r].push((c, v));
        }
        let mut out = SparseOperator::zero(self.dim);
        for (&(r, k), &a) in &self.entries {
            for &(c, b) in &rows_of_other[k] {
                out.add_entry(r, c, a * b);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(Error::ParameterMismatch(format!("vector of length {} for dimension {}", x.len(), self.dim)));
        }
        let mut y = vec![C64::zero(); self.dim];
        for (&(r, c), &v) in &self.entries {
            y[r] += v * x[c];
        }
        Ok(y)
    }

    fn apply_adjoint(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::zero(); self.dim];
        for (&(r, c), &v) in &self.entries {
            y[c] += v.conj() * x[r];
        }
        y
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (&(r, c), &v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Coordinate triplets, one `row col re im` line per nonzero entry,
    /// sorted row-major.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for (&(r, c), v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {} {}", v.re, v.im);
        }
        out
    }

    pub fn op_norm(&self, opts: &OpNormOptions) -> Result<f64> {
        op_norm(self, opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpNormMethod {
    /// Dense SVD up to `dense_limit`, power iteration above it.
    Auto,
    PowerIteration,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpNormOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub dense_limit: usize,
    pub method: OpNormMethod,
}

impl Default for OpNormOptions {
    fn default() -> Self {
        OpNormOptions { tol: 1e-12, max_iter: 100_000, dense_limit: 512, method: OpNormMethod::Auto }
    }
}

/// Largest singular value of `a`.
///
/// Power iteration on `A†A` converges at the rate of the ratio between the
/// two largest squared singular values, which is within `10⁻⁴` of one for the
/// truncated Fock operators. [`OpNormMethod::Auto`] therefore answers small
/// operators with a dense SVD and keeps power iteration for large ones.
pub fn op_norm(a: &SparseOperator, opts: &OpNormOptions) -> Result<f64> {
    if !(opts.tol > 0.0) {
        return Err(Error::param(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if a.nnz() == 0 {
        return Ok(0.0);
    }
    let dense = match opts.method {
        OpNormMethod::Auto => a.dim() <= opts.dense_limit,
        OpNormMethod::Dense => true,
        OpNormMethod::PowerIteration => false,
    };
    if dense {
        Ok(spectral_norm(&a.to_dense()))
    } else {
        power_iteration_norm(a, opts.tol, opts.max_iter)
    }
}

/// Power iteration on `A†A` from the normalized all-ones vector. Stops when
/// successive Rayleigh quotients differ by less than `tol`.
pub fn power_iteration_norm(a: &SparseOperator, tol: f64, max_iter: usize) -> Result<f64> {
    let dim = a.dim();
    if dim == 0 || a.nnz() == 0 {
        return Ok(0.0);
    }
    let mut v = vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    let mut previous = f64::NAN;
    for _ in 0..max_iter {
        let av = a.apply(&v)?;
        let rayleigh: f64 = av.iter().map(|z| z.norm_sqr()).sum();
        let w = a.apply_adjoint(&av);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        if (rayleigh - previous).abs() < tol {
            return Ok(rayleigh.sqrt());
        }
        previous = rayleigh;
        v = w.into_iter().map(|z| z / norm).collect();
    }
    Err(Error::NotConverged { iterations: max_iter })
}

/// Largest singular value of a dense matrix.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Iteration cap for the Schur decomposition behind [`spectral_radius`].
pub const SCHUR_MAX_ITER: usize = 10_000;

/// Largest eigenvalue modulus of a dense square matrix, from its complex
/// Schur form. `None` when the QR iteration does not converge within
/// [`SCHUR_MAX_ITER`] steps, which happens for some nilpotent matrices.
pub fn spectral_radius(m: &DMatrix<C64>) -> Option<f64> {
    if m.is_empty() {
        return Some(0.0);
    }
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)?;
    let (_, t) = schur.unpack();
    Some((0..t.nrows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max))
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn hermitian_max_eigenvalue(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    nalgebra::SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
