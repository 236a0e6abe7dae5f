//! Seeded random elements for the property suites.
//!
//! All draws come from ChaCha8 streams, so a given seed and stream produce
//! the same element on every platform. Each term of a random series gets a
//! degree drawn uniformly from `0..=deg`, then a word or multi-index drawn
//! uniformly among those of that degree.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::MatrixTuple;
use crate::error::Result;
use crate::expr::{AlgebraMode, Expr, GenLetter};
use crate::free_series::FreeSeries;
use crate::quantum_algebra::OrderedSeries;
use crate::scalar::{Mode, Scalar, C64};
use crate::star::{StarExpr, StarLetter, StarMonomial, StarPolynomial};
use crate::words::{Flavor, MultiIndex, Word};

/// The generator for sample `stream` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Shape of random series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub n: usize,
    /// Largest degree of a term.
    pub deg: usize,
    /// Number of terms drawn, before equal words merge.
    pub terms: usize,
    /// Float coefficients are uniform on the disk of this radius.
    pub radius: f64,
    /// Exact coefficients have parts `a/b` with `|a| ≤ D` and `1 ≤ b ≤ D`.
    pub denominator: i64,
}

impl SampleSpec {
    pub fn new(n: usize, deg: usize) -> Self {
        SampleSpec { n, deg, terms: 6, radius: 1.0, denominator: 8 }
    }
}

fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A coefficient: uniform on a disk in float mode, a complex rational with
/// bounded parts in exact mode.
pub fn random_coeff<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec) -> S {
    match S::MODE {
        Mode::Float => {
            let rad = spec.radius * rng.gen::<f64>().sqrt();
            let theta = 2.0 * PI * rng.gen::<f64>();
            S::from_f64(rad * theta.cos()) + S::from_f64(rad * theta.sin()) * S::imaginary_unit()
        }
        Mode::Exact => {
            let re = random_rational(rng, spec.denominator);
            let im = random_rational(rng, spec.denominator);
            S::from_rational(&re) + S::from_rational(&im) * S::imaginary_unit()
        }
    }
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> Word {
    Word::new(n, (0..len).map(|_| rng.gen_range(1..=n)).collect()).expect("letters in range")
}

/// Uniform among the affine multi-indices of degree `k`, by choosing the
/// `n − 1` bar positions among `k + n − 1` slots.
pub fn random_multi_index<R: Rng>(rng: &mut R, n: usize, k: usize) -> MultiIndex {
    let mut bars = sample(rng, k + n - 1, n - 1).into_vec();
    bars.sort_unstable();
    let mut exps = Vec::with_capacity(n);
    let mut prev = 0usize;
    for b in bars {
        exps.push((b - prev) as i64);
        prev = b + 1;
    }
    exps.push((k + n - 1 - prev) as i64);
    MultiIndex::affine(exps).expect("nonnegative")
}

pub fn random_free<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec) -> FreeSeries<S> {
    let terms: Vec<_> = (0..spec.terms)
        .map(|_| {
            let k = rng.gen_range(0..=spec.deg);
            (random_word(rng, spec.n, k), random_coeff(rng, spec))
        })
        .collect();
    FreeSeries::from_terms(spec.n, terms).expect("alphabet matches")
}

pub fn random_affine<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec, q: &S) -> Result<OrderedSeries<S>> {
    let terms: Vec<_> = (0..spec.terms)
        .map(|_| {
            let k = rng.gen_range(0..=spec.deg);
            (random_multi_index(rng, spec.n, k), random_coeff(rng, spec))
        })
        .collect();
    OrderedSeries::from_terms(spec.n, q.clone(), Flavor::Affine, terms)
}

/// A random normally ordered element; the degree bound applies to `|α| + |β|`.
pub fn random_star<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec, q: &S) -> Result<StarPolynomial<S>> {
    let mut terms = Vec::with_capacity(spec.terms);
    for _ in 0..spec.terms {
        let k = rng.gen_range(0..=spec.deg);
        let split = rng.gen_range(0..=k);
        let z = random_multi_index(rng, spec.n, split);
        let zs = random_multi_index(rng, spec.n, k - split);
        terms.push((StarMonomial::new(z, zs)?, random_coeff(rng, spec)));
    }
    StarPolynomial::from_terms(spec.n, q.clone(), terms)
}

pub fn random_star_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<StarLetter> {
    (0..len)
        .map(|_| StarLetter { index: rng.gen_range(1..=n), starred: rng.gen_bool(0.5) })
        .collect()
}

/// A single free star-word of length up to `spec.deg` with a random
/// coefficient.
pub fn random_star_expr<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec) -> Result<StarExpr<S>> {
    let len = rng.gen_range(0..=spec.deg);
    let word = random_star_word(rng, spec.n, len);
    StarExpr::new(spec.n)?.with_term(word, random_coeff(rng, spec))
}

/// The three shapes a random series can take.
#[derive(Debug, Clone, PartialEq)]
pub enum RandomSeries<S> {
    Free(FreeSeries<S>),
    Affine(OrderedSeries<S>),
    Star(StarPolynomial<S>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Free,
    Affine,
    Star,
}

pub fn random_series<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec, shape: Shape, q: &S) -> Result<RandomSeries<S>> {
    Ok(match shape {
        Shape::Free => RandomSeries::Free(random_free(rng, spec)),
        Shape::Affine => RandomSeries::Affine(random_affine(rng, spec, q)?),
        Shape::Star => RandomSeries::Star(random_star(rng, spec, q)?),
    })
}

/// `n` matrices of size `d` with entries uniform on the unit disk.
pub fn random_tuple<R: Rng>(rng: &mut R, n: usize, d: usize) -> MatrixTuple {
    let spec = SampleSpec { radius: 1.0, ..SampleSpec::new(n, 0) };
    let matrices = (0..n)
        .map(|_| DMatrix::from_fn(d, d, |_, _| random_coeff::<C64, _>(rng, &spec)))
        .collect();
    MatrixTuple::new(matrices).expect("square matrices of one size")
}

/// A random expression tree of depth at most `depth`, with nonnegative
/// literals, valid in `mode`.
pub fn random_expr<R: Rng>(rng: &mut R, n: usize, mode: AlgebraMode, depth: usize) -> Expr {
    let leaf = |rng: &mut R| -> Expr {
        match rng.gen_range(0..6) {
            0 => Expr::Real(BigRational::new(rng.gen_range(0..20).into(), rng.gen_range(1..5).into())),
            1 => Expr::Imag(BigRational::new(rng.gen_range(0..20).into(), rng.gen_range(1..5).into())),
            2 if mode != AlgebraMode::Free => Expr::Q,
            _ => Expr::Gen {
                letter: if mode == AlgebraMode::Star || rng.gen_bool(0.5) { GenLetter::Z } else { GenLetter::X },
                index: rng.gen_range(1..=n),
                starred: mode == AlgebraMode::Star && rng.gen_bool(0.5),
            },
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, n, mode, depth - 1));
    match rng.gen_range(0..7) {
        0 => leaf(rng),
        1 => Expr::Neg(sub(rng)),
        2 => Expr::Add(sub(rng), sub(rng)),
        3 => Expr::Sub(sub(rng), sub(rng)),
        4 | 5 => Expr::Mul(sub(rng), sub(rng)),
        _ => {
            let base = sub(rng);
            if mode == AlgebraMode::Torus && matches!(*base, Expr::Gen { .. }) && rng.gen_bool(0.5) {
                Expr::Pow(base, -rng.gen_range(1..4))
            } else {
                Expr::Pow(base, rng.gen_range(0..4))
            }
        }
    }
}
