//! The verification suites behind `qfunc verify`.
//!
//! Each suite draws seeded samples, evaluates both sides of an inequality or
//! identity and returns one [`CheckRecord`] per comparison. Sample `s` draws
//! from ChaCha stream `s`, so a record does not depend on the order in which
//! samples are visited.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::calculus::{joint_spectral_radius, popescu_eval_bound_check, row_norm, JsrOptions, MatrixTuple};
use crate::config::{RunConfig, Suite};
use crate::error::{Error, Result};
use crate::free_series::FreeSeries;
use crate::linalg::{op_norm, spectral_norm, OpNormOptions};
use crate::quantum_algebra::{family_equivalence_constants, normal_order, AffineVariant, OrderedSeries};
use crate::report::{params, CheckRecord, Report};
use crate::sampling::{random_affine, random_free, random_star_word, random_tuple, sample_rng, SampleSpec};
use crate::scalar::{ExactComplex, C64};
use crate::star::{
    ball_seminorm, euler_product_lower, fock_dimension, relation_residuals, star_normal_order_with, truncated_norm,
    vacuum_lower_bound, RewriteStrategy, StarExpr, TruncatedRep,
};
use crate::words::Word;

/// Tolerance used when certifying the product constant `Π(1 − q^{2j})`.
pub const EULER_TOL: f64 = 1e-12;

/// Runs a suite and wraps the records in a report.
pub fn run_report(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let records = run_suite(suite, cfg)?;
    Ok(Report::new(suite.name(), serde_json::to_value(cfg)?, records))
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    cfg.validate(suite)?;
    match suite {
        Suite::KeyEst => key_est(cfg),
        Suite::Key2 => key2(cfg),
        Suite::Families => families(cfg),
        Suite::Submult => submult(cfg),
        Suite::Relations => relations(cfg),
        Suite::Ideal => ideal(cfg),
        Suite::ShiftNorm => shift_norm(cfg),
        Suite::JsrSanity => jsr_sanity(cfg),
        Suite::Confluence => confluence(cfg),
        Suite::PopescuBound => popescu_bound(cfg),
    }
}

fn base_params(cfg: &RunConfig) -> BTreeMap<String, String> {
    params([("n", cfg.n.to_string()), ("q", cfg.q.to_string()), ("seed", cfg.seed.to_string())])
}

fn with(mut p: BTreeMap<String, String>, extra: &[(&str, String)]) -> BTreeMap<String, String> {
    for (k, v) in extra {
        p.insert(k.to_string(), v.clone());
    }
    p
}

/// Builds `π_N`, refusing when its dimension exceeds the budget.
fn fock(cfg: &RunConfig, cutoff: usize) -> Result<TruncatedRep> {
    let dim = fock_dimension(cfg.n, cutoff);
    if dim > cfg.budget {
        return Err(Error::BudgetExceeded { required: dim, budget: cfg.budget });
    }
    TruncatedRep::new(cfg.n, cfg.q.as_f64(), cutoff)
}

fn key_est(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let q = cfg.q.to_c64();
    let c = euler_product_lower(q.re, EULER_TOL)?;
    let factor = c.powf(cfg.n as f64 / 2.0);
    let cutoff = cfg.truncation();
    let rep = fock(cfg, cutoff)?;
    let opts = OpNormOptions::default();
    let spec = SampleSpec::new(cfg.n, cfg.deg);
    let p = with(base_params(cfg), &[("N", cutoff.to_string()), ("deg", cfg.deg.to_string())]);
    let mut out = Vec::with_capacity(3 * cfg.samples);
    for s in 0..cfg.samples {
        let a = random_affine::<C64, _>(&mut sample_rng(cfg.seed, s as u64), &spec, &q)?;
        let l2 = a.affine_seminorm(1.0, AffineVariant::L2)?;
        let l1 = a.affine_seminorm(1.0, AffineVariant::L1)?;
        let vacuum = vacuum_lower_bound(&a, &rep)?;
        let trunc = truncated_norm(&a, &rep, &opts)?;
        out.push(CheckRecord::inequality("key-est/lower", s, p.clone(), factor * l2, vacuum, cfg.tol));
        out.push(CheckRecord::inequality("key-est/vacuum", s, p.clone(), vacuum, trunc, cfg.tol));
        out.push(CheckRecord::inequality("key-est/upper", s, p.clone(), trunc, l1, cfg.tol));
    }
    Ok(out)
}

fn key2(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let q = cfg.q.to_c64();
    let c = euler_product_lower(q.re, EULER_TOL)?;
    let cutoff = cfg.truncation();
    let rep = fock(cfg, cutoff)?;
    let opts = OpNormOptions::default();
    let spec = SampleSpec::new(cfg.n, cfg.deg);
    let mut out = Vec::new();
    for (g, (&rho, &r)) in cfg.rho.iter().zip(&cfg.r).enumerate() {
        let factor = ((r * r - rho * rho) / (r * r) * c).powf(cfg.n as f64 / 2.0);
        let p = with(base_params(cfg), &[("N", cutoff.to_string()), ("rho", rho.to_string()), ("r", r.to_string())]);
        for s in 0..cfg.samples {
            let index = g * cfg.samples + s;
            let a = random_affine::<C64, _>(&mut sample_rng(cfg.seed, index as u64), &spec, &q)?;
            let ball = ball_seminorm(&a, r, &rep, &opts)?;
            let lower = factor * a.affine_seminorm(rho, AffineVariant::L1)?;
            let upper = a.affine_seminorm(r, AffineVariant::L1)?;
            out.push(CheckRecord::inequality("key2/lower", index, p.clone(), lower, ball, cfg.tol));
            out.push(CheckRecord::inequality("key2/upper", index, p.clone(), ball, upper, cfg.tol));
        }
    }
    Ok(out)
}

fn families(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let q = cfg.q.to_c64();
    let spec = SampleSpec::new(cfg.n, cfg.deg);
    let mut out = Vec::new();
    for (g, (&rho, &r)) in cfg.rho.iter().zip(&cfg.r).enumerate() {
        let k = family_equivalence_constants(rho, r, cfg.n)?;
        let p = with(base_params(cfg), &[("rho", rho.to_string()), ("r", r.to_string())]);
        for s in 0..cfg.samples {
            let index = g * cfg.samples + s;
            let a = random_affine::<C64, _>(&mut sample_rng(cfg.seed, index as u64), &spec, &q)?;
            let sup = a.affine_seminorm(rho, AffineVariant::Sup)?;
            let l2 = a.affine_seminorm(rho, AffineVariant::L2)?;
            let l1 = a.affine_seminorm(rho, AffineVariant::L1)?;
            let l2r = a.affine_seminorm(r, AffineVariant::L2)?;
            out.push(CheckRecord::inequality("families/sup-l2", index, p.clone(), sup, k.chain * l2, cfg.tol));
            out.push(CheckRecord::inequality("families/l2-l1", index, p.clone(), l2, k.chain * l1, cfg.tol));
            out.push(CheckRecord::inequality("families/l1-l2r", index, p.clone(), l1, k.upper * l2r, cfg.tol));
        }
    }
    Ok(out)
}

/// Submultiplicativity checks carry a relative tolerance: `tol · max(1, rhs)`.
fn submult(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let q = cfg.q.to_c64();
    let spec = SampleSpec::new(cfg.n, cfg.deg);
    let rel = |rhs: f64| cfg.tol * rhs.max(1.0);
    let pick = |v: &[f64], s: usize| v[s % v.len()];
    let mut out = Vec::with_capacity(4 * cfg.samples);
    for s in 0..cfg.samples {
        let mut rng = sample_rng(cfg.seed, s as u64);
        let f: FreeSeries<C64> = random_free(&mut rng, &spec);
        let g: FreeSeries<C64> = random_free(&mut rng, &spec);
        let fg = f.concat_product(&g)?;

        let rho = pick(&cfg.rho, s);
        let (lhs, rhs) = (fg.entire_seminorm(rho)?.value, f.entire_seminorm(rho)?.value * g.entire_seminorm(rho)?.value);
        let p = with(base_params(cfg), &[("rho", rho.to_string())]);
        out.push(CheckRecord::inequality("submult/entire", s, p, lhs, rhs, rel(rhs)));

        let rho2 = pick(&cfg.rho2, s);
        let pd = |x: &FreeSeries<C64>| x.polydisk_seminorm(rho, rho2, f64::INFINITY).map(|v| v.value);
        let (lhs, rhs) = (pd(&fg)?, pd(&f)? * pd(&g)?);
        let p = with(base_params(cfg), &[("rho1", rho.to_string()), ("rho2", rho2.to_string())]);
        out.push(CheckRecord::inequality("submult/polydisk", s, p, lhs, rhs, rel(rhs)));

        let r = pick(&cfg.r, s);
        let pp = |x: &FreeSeries<C64>| x.popescu_seminorm(r).map(|v| v.value);
        let (lhs, rhs) = (pp(&fg)?, pp(&f)? * pp(&g)?);
        let p = with(base_params(cfg), &[("r", r.to_string())]);
        out.push(CheckRecord::inequality("submult/popescu", s, p, lhs, rhs, rel(rhs)));

        let a = random_affine::<C64, _>(&mut rng, &spec, &q)?;
        let b = random_affine::<C64, _>(&mut rng, &spec, &q)?;
        let norm = |x: &OrderedSeries<C64>| x.affine_seminorm(rho, AffineVariant::L1);
        let (lhs, rhs) = (norm(&a.product(&b)?)?, norm(&a)? * norm(&b)?);
        let p = with(base_params(cfg), &[("rho", rho.to_string())]);
        out.push(CheckRecord::inequality("submult/affine-l1", s, p, lhs, rhs, rel(rhs)));
    }
    Ok(out)
}

fn relations(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let cutoff = cfg.truncation();
    let rep = fock(cfg, cutoff)?;
    let p = with(base_params(cfg), &[("N", cutoff.to_string())]);
    Ok(relation_residuals(&rep)?
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            let p = with(p.clone(), &[("i", r.i.to_string()), ("j", r.j.to_string())]);
            CheckRecord::equality(&format!("relations/{}", r.family.name()), k, p, r.residual, 0.0, cfg.tol)
        })
        .collect())
}

/// `Σ (|Re c| + |Im c|)` over the coefficients, computed exactly.
fn exact_l1(a: &OrderedSeries<ExactComplex>) -> BigRational {
    a.terms().fold(BigRational::zero(), |acc, (_, c)| acc + c.re.abs() + c.im.abs())
}

/// Each record covers two exact identities for one sample: the relator
/// `u (ζ_i ζ_j − q ζ_j ζ_i) v` normal-orders to zero, and normal ordering
/// maps the free product `fg` to the twisted product of the images. The
/// left side is the sum of both residual ℓ¹ norms.
fn ideal(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let q = cfg.q.to_exact()?;
    let n = cfg.n;
    let spec = SampleSpec { terms: 3, ..SampleSpec::new(n, cfg.deg) };
    let p = with(base_params(cfg), &[("deg", cfg.deg.to_string())]);
    let mut out = Vec::with_capacity(cfg.samples);
    for s in 0..cfg.samples {
        let mut rng = sample_rng(cfg.seed, s as u64);
        let i = rng.gen_range(1..n);
        let j = rng.gen_range(i + 1..=n);
        let relator = FreeSeries::from_terms(
            n,
            [(Word::new(n, vec![i, j])?, ExactComplex::one()), (Word::new(n, vec![j, i])?, -q.clone())],
        )?;
        let u: FreeSeries<ExactComplex> = random_free(&mut rng, &spec);
        let v: FreeSeries<ExactComplex> = random_free(&mut rng, &spec);
        let in_ideal = u.concat_product(&relator)?.concat_product(&v)?;
        let annihilated = exact_l1(&normal_order(&in_ideal, &q)?);

        let f: FreeSeries<ExactComplex> = random_free(&mut rng, &spec);
        let g: FreeSeries<ExactComplex> = random_free(&mut rng, &spec);
        let lhs = normal_order(&f.concat_product(&g)?, &q)?;
        let rhs = normal_order(&f, &q)?.product(&normal_order(&g, &q)?)?;
        let multiplicative = exact_l1(&lhs.sub(&rhs)?);

        let residual = (annihilated + multiplicative).to_f64().unwrap_or(f64::NAN);
        let p = with(p.clone(), &[("i", i.to_string()), ("j", j.to_string())]);
        out.push(CheckRecord::equality("ideal", s, p, residual, 0.0, cfg.tol));
    }
    Ok(out)
}

fn shift_norm(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let cutoff = cfg.truncation();
    let rep = fock(cfg, cutoff)?;
    let q = cfg.q.as_f64();
    let norm = op_norm(rep.generator(1)?, &OpNormOptions::default())?;
    let closed = (1.0 - q.powi(2 * cutoff as i32)).sqrt();
    let p = with(base_params(cfg), &[("N", cutoff.to_string())]);
    Ok(vec![CheckRecord::equality("shift-norm", 0, p, norm, closed, cfg.tol)])
}

/// `lim ‖A^{2^m}‖^{2^{-m}}` by repeated squaring with renormalization,
/// accumulated in the log domain.
pub(crate) fn gelfand_radius(a: &DMatrix<C64>) -> f64 {
    let s0 = spectral_norm(a);
    if s0 == 0.0 {
        return 0.0;
    }
    let mut b = a / C64::new(s0, 0.0);
    let mut log = s0.ln();
    let mut weight = 0.5;
    for _ in 0..60 {
        let sq = &b * &b;
        let s = spectral_norm(&sq);
        if s == 0.0 {
            return 0.0;
        }
        log += weight * s.ln();
        b = sq / C64::new(s, 0.0);
        weight *= 0.5;
    }
    log.exp()
}

/// Relative error of the single-matrix estimate against repeated squaring
/// (bounded by `tol`), the zero tuple (exactly 0), and the weighted shift
/// (window maximum at most its norm, slack 1e-9).
fn jsr_sanity(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    const DIM: usize = 4;
    const SHIFT_SLACK: f64 = 1e-9;
    let opts = JsrOptions { budget: cfg.budget, ..JsrOptions::default() };
    let p = with(base_params(cfg), &[("kmax", cfg.kmax.to_string()), ("d", DIM.to_string())]);
    let mut out = Vec::with_capacity(cfg.samples + 2);
    for s in 0..cfg.samples {
        let t = random_tuple(&mut sample_rng(cfg.seed, s as u64), 1, DIM);
        let est = joint_spectral_radius(&t, cfg.kmax, &opts)?;
        let oracle = gelfand_radius(&t.matrices()[0]);
        let rel = (est.value - oracle).abs() / oracle;
        out.push(CheckRecord::inequality("jsr-sanity/single", s, p.clone(), rel, cfg.tol, 0.0));
    }
    let zero = joint_spectral_radius(&MatrixTuple::zero(2, DIM)?, cfg.kmax, &opts)?;
    out.push(CheckRecord::equality("jsr-sanity/zero", 0, p.clone(), zero.value, 0.0, 0.0));

    let q = cfg.q.as_f64();
    if q > 0.0 && q < 1.0 {
        let cutoff = cfg.cutoff.unwrap_or(8);
        let rep = TruncatedRep::new(1, q, cutoff)?;
        let shift = MatrixTuple::new(vec![rep.generator(1)?.to_dense()])?;
        let est = joint_spectral_radius(&shift, cfg.kmax, &opts)?;
        let norm = (1.0 - q.powi(2 * cutoff as i32)).sqrt();
        let p = with(p, &[("N", cutoff.to_string())]);
        out.push(CheckRecord::inequality("jsr-sanity/shift", 0, p, est.window_max, norm, SHIFT_SLACK));
    }
    Ok(out)
}

fn confluence(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let q = cfg.q.to_exact()?;
    let p = with(base_params(cfg), &[("deg", cfg.deg.to_string())]);
    let mut out = Vec::with_capacity(cfg.samples);
    for s in 0..cfg.samples {
        let mut rng = sample_rng(cfg.seed, s as u64);
        let len = rng.gen_range(0..=cfg.deg);
        let word = random_star_word(&mut rng, cfg.n, len);
        let e = StarExpr::new(cfg.n)?.with_term(word, ExactComplex::one())?;
        let left = star_normal_order_with(&e, &q, RewriteStrategy::LeftmostFirst)?;
        let right = star_normal_order_with(&e, &q, RewriteStrategy::RightmostFirst)?;
        let mismatches = left
            .terms()
            .filter(|(m, c)| right.coeff(m) != Some(*c))
            .count()
            + right.terms().filter(|(m, _)| left.coeff(m).is_none()).count();
        out.push(CheckRecord::equality("confluence", s, p.clone(), mismatches as f64, 0.0, cfg.tol));
    }
    Ok(out)
}

/// Tuples of size `1..=6` rescaled to a row norm drawn from `[0.05, 0.95]`.
fn popescu_bound(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let spec = SampleSpec::new(cfg.n, cfg.deg);
    let mut out = Vec::with_capacity(cfg.samples);
    for s in 0..cfg.samples {
        let mut rng = sample_rng(cfg.seed, s as u64);
        let f: FreeSeries<C64> = random_free(&mut rng, &spec);
        let d = rng.gen_range(1..=6);
        let t = random_tuple(&mut rng, cfg.n, d);
        let target = rng.gen_range(0.05..0.95);
        let current = row_norm(&t);
        let t = if current > 0.0 { t.scale(C64::new(target / current, 0.0)) } else { t };
        let b = popescu_eval_bound_check(&f, &t)?;
        let p = with(base_params(cfg), &[("d", d.to_string()), ("row_norm", format!("{:.6}", b.row_norm))]);
        out.push(CheckRecord::inequality("popescu-bound", s, p, b.lhs, b.rhs, cfg.tol * b.rhs.max(1.0)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gelfand_radius_of_simple_matrices() {
        let c = |x: f64| C64::new(x, 0.0);
        let diag = DMatrix::from_row_slice(2, 2, &[c(0.3), c(0.0), c(0.0), c(-0.7)]);
        assert!((gelfand_radius(&diag) - 0.7).abs() < 1e-12);
        let jordan = DMatrix::from_row_slice(2, 2, &[c(0.5), c(1.0), c(0.0), c(0.5)]);
        assert!((gelfand_radius(&jordan) - 0.5).abs() < 1e-9);
        let nil = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(gelfand_radius(&nil), 0.0);
    }

    #[test]
    fn shift_norm_default_run() {
        let recs = run_suite(Suite::ShiftNorm, &RunConfig::for_suite(Suite::ShiftNorm)).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].pass && recs[0].margin.abs() <= 1e-10);
    }

    #[test]
    fn small_runs_of_every_suite_pass() {
        for suite in Suite::ALL {
            let mut cfg = RunConfig::for_suite(suite);
            cfg.samples = cfg.samples.min(5);
            let recs = run_suite(suite, &cfg).unwrap();
            assert!(!recs.is_empty(), "{suite}");
            for r in &recs {
                assert!(r.pass, "{suite}: {r:?}");
            }
        }
    }
}
