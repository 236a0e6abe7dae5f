//! Acceptance run: one PASS or FAIL line per criterion.
//!
//! Each criterion runs the library's own suite at the pinned configuration
//! and then checks it against an oracle computed here from closed forms or
//! direct constructions, without going through the code under test.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use qfunc::calculus::{joint_spectral_radius, JsrOptions, MatrixTuple};
use qfunc::config::{QParam, RunConfig, Suite};
use qfunc::expr::{parse, AlgebraMode};
use qfunc::free_series::FreeSeries;
use qfunc::linalg::OpNormOptions;
use qfunc::quantum_algebra::{normal_order, AffineVariant, OrderedSeries};
use qfunc::report::{CheckRecord, Report};
use qfunc::sampling::{random_affine, random_expr, random_tuple, random_word, sample_rng, SampleSpec};
use qfunc::scalar::{ExactComplex, Scalar, C64};
use qfunc::star::{
    ball_seminorm, euler_product_lower, star_normal_order, StarExpr, StarLetter, TruncatedRep,
};
use qfunc::suites::run_report;
use qfunc::words::{MultiIndex, Word};

const SHIFT_TOL: f64 = 1e-10;
const SHIFT_TIME: Duration = Duration::from_secs(1);
const THEOREM_SLACK: f64 = 1e-12;
const KEY_EST_TIME: Duration = Duration::from_secs(60);
const ORACLE_REL: f64 = 1e-12;
const RELATION_TOL: f64 = 1e-12;
const JSR_REL: f64 = 0.05;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(suite: Suite, cfg: &RunConfig) -> std::result::Result<Report, String> {
    run_report(suite, cfg).map_err(|e| format!("{suite} failed to run: {e}"))
}

fn all_pass(report: &Report) -> std::result::Result<(), String> {
    match report.records.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(r) => Err(format!("{} sample {} fails: lhs {} rhs {} margin {}", r.check_name, r.sample, r.lhs, r.rhs, r.margin)),
    }
}

fn records<'a>(report: &'a Report, name: &str) -> Vec<&'a CheckRecord> {
    report.records.iter().filter(|r| r.check_name == name).collect()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn exact(num: i64, den: i64) -> ExactComplex {
    ExactComplex::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `‖π(a)e₀‖` from the closed form: `π(x^α)e₀ = q^{Σ_{i<j}α_iα_j} Π_j Π_{m ≤ α_j} (1 − q^{2m})^{1/2} e_α`.
fn vacuum_oracle(a: &OrderedSeries<C64>, q: f64) -> f64 {
    a.terms()
        .map(|(alpha, c)| {
            let e = alpha.exponents();
            let mut pairs = 0;
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    pairs += e[i] * e[j];
                }
            }
            let mut w = q.powi(2 * pairs as i32);
            for &k in e {
                for m in 1..=k {
                    w *= 1.0 - q.powi(2 * m as i32);
                }
            }
            c.norm_sqr() * w
        })
        .sum::<f64>()
        .sqrt()
}

/// `Σ |c_α|^p w_q(α)^p ρ^{p|α|}` summed and rooted, or the sup for `p = ∞`.
fn weighted_oracle(a: &OrderedSeries<C64>, q: f64, rho: f64, p: f64) -> f64 {
    let vals = a.terms().map(|(alpha, c)| {
        let e = alpha.exponents();
        let pairs: i64 = (0..e.len()).flat_map(|i| (i + 1..e.len()).map(move |j| (i, j))).map(|(i, j)| e[i] * e[j]).sum();
        c.norm() * q.powi(pairs as i32) * rho.powi(alpha.degree() as i32)
    });
    if p.is_infinite() {
        vals.fold(0.0, f64::max)
    } else {
        vals.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn shift_norm() -> Check {
    let cfg = RunConfig::for_suite(Suite::ShiftNorm);
    let started = Instant::now();
    let report = run(Suite::ShiftNorm, &cfg)?;
    let elapsed = started.elapsed();
    all_pass(&report)?;
    ensure(report.records.len() == 1, || format!("expected one record, got {}", report.records.len()))?;
    let rec = &report.records[0];
    // The shift weights are √(1 − q^{2k}) for k = 1..N and the largest one is the norm.
    let weights: Vec<f64> = (1..=8).map(|k| (1.0 - 0.5f64.powi(2 * k)).sqrt()).collect();
    let oracle = weights.iter().cloned().fold(0.0, f64::max);
    ensure((rec.lhs - oracle).abs() <= SHIFT_TOL, || format!("norm {} vs oracle {oracle}", rec.lhs))?;
    ensure(rec.tolerance <= SHIFT_TOL, || format!("record tolerance {} looser than {SHIFT_TOL}", rec.tolerance))?;
    ensure(elapsed < SHIFT_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("norm {:.15} vs {oracle:.15}, |diff| {:.1e}, {elapsed:.2?}", rec.lhs, (rec.lhs - oracle).abs()))
}

fn key_est() -> Check {
    let started = Instant::now();
    let mut total = 0;
    for n in [1, 2] {
        for q in [0.3, 0.5, 0.9] {
            let mut cfg = RunConfig::for_suite(Suite::KeyEst);
            cfg.n = n;
            cfg.q = QParam::Float(q);
            cfg.samples = 200;
            cfg.deg = 5;
            cfg.cutoff = Some(5);
            cfg.tol = THEOREM_SLACK;
            let report = run(Suite::KeyEst, &cfg)?;
            all_pass(&report)?;
            ensure(report.records.len() == 600, || format!("n={n} q={q}: {} records", report.records.len()))?;
            total += report.records.len();

            let c = euler_product_lower(q, 1e-12).map_err(|e| e.to_string())?;
            let partial: f64 = (1..=20_000).map(|j| 1.0 - q.powi(2 * j)).product();
            ensure(c <= partial && partial - c <= 1e-11, || format!("euler constant {c} vs partial product {partial}"))?;

            let lower = records(&report, "key-est/lower");
            let spec = SampleSpec::new(n, 5);
            for s in 0..25 {
                let a = random_affine::<C64, _>(&mut sample_rng(cfg.seed, s as u64), &spec, &C64::new(q, 0.0))
                    .map_err(|e| e.to_string())?;
                let vac = vacuum_oracle(&a, q);
                let l2 = weighted_oracle(&a, q, 1.0, 2.0);
                let rec = lower[s];
                ensure(close(rec.rhs, vac, ORACLE_REL), || format!("vacuum {} vs oracle {vac}", rec.rhs))?;
                ensure(close(rec.lhs, c.powf(n as f64 / 2.0) * l2, ORACLE_REL), || format!("lower side {} mismatch", rec.lhs))?;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < KEY_EST_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("{total} inequalities over 6 configurations, vacuum oracle agrees, {elapsed:.2?}"))
}

fn key2() -> Check {
    let mut total = 0;
    for n in [1, 2] {
        for q in [0.3, 0.5] {
            let mut cfg = RunConfig::for_suite(Suite::Key2);
            cfg.n = n;
            cfg.q = QParam::Float(q);
            cfg.rho = vec![0.3, 0.5, 0.8];
            cfg.r = vec![0.6, 0.9, 0.9];
            cfg.samples = 100;
            cfg.tol = THEOREM_SLACK;
            let report = run(Suite::Key2, &cfg)?;
            all_pass(&report)?;
            ensure(report.records.len() == 600, || format!("{} records", report.records.len()))?;
            total += report.records.len();
        }
    }
    // For one generator, ‖π_N(γ_r(x^k))‖ = r^k Π_{i=N-k+1}^{N} √(1 − q^{2i}).
    let (q, r, cutoff) = (0.5f64, 0.9f64, 4usize);
    let rep = TruncatedRep::new(1, q, cutoff).map_err(|e| e.to_string())?;
    for k in 1..=cutoff {
        let a = OrderedSeries::monomial(MultiIndex::affine(vec![k as i64]).unwrap(), C64::new(1.0, 0.0), C64::new(q, 0.0))
            .map_err(|e| e.to_string())?;
        let got = ball_seminorm(&a, r, &rep, &OpNormOptions::default()).map_err(|e| e.to_string())?;
        let oracle = r.powi(k as i32)
            * (cutoff - k + 1..=cutoff).map(|i| (1.0 - q.powi(2 * i as i32)).sqrt()).product::<f64>();
        ensure(close(got, oracle, ORACLE_REL), || format!("x^{k}: {got} vs oracle {oracle}"))?;
    }
    Ok(format!("{total} inequalities over 4 configurations, monomial oracle agrees"))
}

fn families() -> Check {
    let mut total = 0;
    for n in [1, 2] {
        let mut cfg = RunConfig::for_suite(Suite::Families);
        cfg.n = n;
        cfg.samples = 500;
        cfg.tol = THEOREM_SLACK;
        let report = run(Suite::Families, &cfg)?;
        all_pass(&report)?;
        ensure(report.records.len() == 3 * 3 * 500, || format!("{} records", report.records.len()))?;
        total += report.records.len();
    }
    let q = 0.5;
    let spec = SampleSpec::new(2, 5);
    for s in 0..50 {
        let a = random_affine::<C64, _>(&mut sample_rng(11, s), &spec, &C64::new(q, 0.0)).map_err(|e| e.to_string())?;
        for (variant, p) in [(AffineVariant::L1, 1.0), (AffineVariant::L2, 2.0), (AffineVariant::Sup, f64::INFINITY)] {
            let got = a.affine_seminorm(0.7, variant).map_err(|e| e.to_string())?;
            let oracle = weighted_oracle(&a, q, 0.7, p);
            ensure(close(got, oracle, ORACLE_REL), || format!("{variant:?}: {got} vs oracle {oracle}"))?;
        }
    }
    Ok(format!("{total} inequalities, seminorm oracle agrees"))
}

/// Normal order of a free word from first principles: `q^{-inv(w)} x^{ab(w)}`.
fn word_oracle(w: &[usize], n: usize, q: &ExactComplex) -> (Vec<i64>, ExactComplex) {
    let mut inv = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                inv += 1;
            }
        }
    }
    let mut ab = vec![0i64; n];
    for &l in w {
        ab[l - 1] += 1;
    }
    let mut c = ExactComplex::one();
    for _ in 0..inv {
        c = c * Scalar::inv(q).unwrap();
    }
    (ab, c)
}

fn ideal() -> Check {
    let mut total = 0;
    for (num, den) in [(1, 2), (3, 5)] {
        let mut cfg = RunConfig::for_suite(Suite::Ideal);
        cfg.q = QParam::Exact(BigRational::new(num.into(), den.into()));
        cfg.samples = 500;
        let report = run(Suite::Ideal, &cfg)?;
        all_pass(&report)?;
        ensure(report.records.len() == 500, || format!("{} records", report.records.len()))?;
        ensure(report.records.iter().all(|r| r.lhs == 0.0 && r.tolerance == 0.0), || "a residual is not exactly zero".into())?;
        total += report.records.len();

        let q = exact(num, den);
        let mut rng = sample_rng(2024, num as u64);
        for _ in 0..200 {
            let len = rng.gen_range(0..=4);
            let u = random_word(&mut rng, 3, len);
            let v = random_word(&mut rng, 3, 2);
            let mut w = u.letters().to_vec();
            w.extend_from_slice(v.letters());
            let f = FreeSeries::monomial(Word::new(3, w.clone()).unwrap(), ExactComplex::one());
            let got = normal_order(&f, &q).map_err(|e| e.to_string())?;
            let (alpha, c) = word_oracle(&w, 3, &q);
            let m = MultiIndex::affine(alpha).unwrap();
            ensure(got.len() == 1 && got.coeff(&m) == Some(&c), || format!("word {w:?} normal-orders to {got}"))?;

            // u ζ_i ζ_j v − q u ζ_j ζ_i v for i < j lies in the ideal.
            let (i, j) = (rng.gen_range(1..=2), 3);
            let mut left = u.letters().to_vec();
            let mut right = left.clone();
            left.extend([i, j]);
            right.extend([j, i]);
            left.extend_from_slice(v.letters());
            right.extend_from_slice(v.letters());
            let rel = FreeSeries::monomial(Word::new(3, left).unwrap(), ExactComplex::one())
                .sub(&FreeSeries::monomial(Word::new(3, right).unwrap(), q.clone()))
                .unwrap();
            let image = normal_order(&rel, &q).map_err(|e| e.to_string())?;
            ensure(image.is_zero(), || format!("relator image {image}"))?;
        }
    }
    Ok(format!("{total} exact records plus 400 oracle words, all residuals exactly 0"))
}

/// Dense `π_N(z_j)` straight from the raising formula, on a basis indexed here.
fn dense_generators(n: usize, q: f64, cutoff: usize) -> (Vec<Vec<i64>>, Vec<DMatrix<f64>>) {
    let mut basis: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        basis = basis
            .into_iter()
            .flat_map(|p| (0..=cutoff as i64).map(move |e| [p.clone(), vec![e]].concat()))
            .filter(|a| a.iter().sum::<i64>() <= cutoff as i64)
            .collect();
    }
    let index: HashMap<Vec<i64>, usize> = basis.iter().cloned().enumerate().map(|(k, a)| (a, k)).collect();
    let d = basis.len();
    let mut gens = Vec::new();
    for j in 0..n {
        let mut m = DMatrix::zeros(d, d);
        for (col, alpha) in basis.iter().enumerate() {
            let mut beta = alpha.clone();
            beta[j] += 1;
            if let Some(&row) = index.get(&beta) {
                let qint: f64 = (0..=alpha[j]).map(|i| q.powi(2 * i as i32)).sum();
                let tail: i64 = alpha[j + 1..].iter().sum();
                m[(row, col)] = (1.0 - q * q).sqrt() * qint.sqrt() * q.powi(tail as i32);
            }
        }
        gens.push(m);
    }
    (basis, gens)
}

fn relations() -> Check {
    let mut cfg = RunConfig::for_suite(Suite::Relations);
    cfg.n = 2;
    cfg.q = QParam::Float(0.5);
    cfg.cutoff = Some(6);
    cfg.tol = RELATION_TOL;
    let report = run(Suite::Relations, &cfg)?;
    all_pass(&report)?;
    ensure(report.records.len() == 5, || format!("{} records", report.records.len()))?;
    for family in ["commute", "cross", "diagonal"] {
        let name = format!("relations/{family}");
        ensure(!records(&report, &name).is_empty(), || format!("no {name} records"))?;
    }
    let worst = report.records.iter().map(|r| r.lhs).fold(0.0, f64::max);

    let (q, cutoff) = (0.5, 6);
    let (basis, z) = dense_generators(2, q, cutoff);
    let zs: Vec<_> = z.iter().map(|m| m.transpose()).collect();
    let d = basis.len();
    let interior = |m: &DMatrix<f64>| -> f64 {
        (0..d)
            .filter(|&c| basis[c].iter().sum::<i64>() + 2 <= cutoff as i64)
            .flat_map(|c| (0..d).map(move |r| (r, c)))
            .map(|(r, c)| m[(r, c)].abs())
            .fold(0.0, f64::max)
    };
    let id = DMatrix::<f64>::identity(d, d);
    let mut oracle = 0.0f64;
    oracle = oracle.max(interior(&(&z[0] * &z[1] - q * &z[1] * &z[0])));
    oracle = oracle.max(interior(&(&zs[0] * &z[1] - q * &z[1] * &zs[0])));
    oracle = oracle.max(interior(&(&zs[1] * &z[0] - q * &z[0] * &zs[1])));
    let one_minus = 1.0 - q * q;
    oracle = oracle.max(interior(&(&zs[0] * &z[0] - (q * q * &z[0] * &zs[0] + one_minus * (&id - &z[1] * &zs[1])))));
    oracle = oracle.max(interior(&(&zs[1] * &z[1] - (q * q * &z[1] * &zs[1] + one_minus * &id))));
    ensure(oracle <= RELATION_TOL, || format!("direct construction residual {oracle}"))?;

    let rep = TruncatedRep::new(2, q, cutoff).map_err(|e| e.to_string())?;
    for j in 0..2 {
        let lib = rep.generator(j + 1).map_err(|e| e.to_string())?;
        let mut fro = 0.0f64;
        for (c, alpha) in basis.iter().enumerate() {
            for (r, beta) in basis.iter().enumerate() {
                let (lr, lc) = (
                    rep.index_of(&MultiIndex::affine(beta.clone()).unwrap()).unwrap(),
                    rep.index_of(&MultiIndex::affine(alpha.clone()).unwrap()).unwrap(),
                );
                fro = fro.max((lib.get(lr, lc).re - z[j][(r, c)]).abs());
            }
        }
        ensure(fro <= 1e-15, || format!("generator {} differs from the formula by {fro}", j + 1))?;
    }
    Ok(format!("5 relation records, max residual {worst:.1e}, direct construction {oracle:.1e}"))
}

fn submult() -> Check {
    let cfg = RunConfig { tol: THEOREM_SLACK, samples: 500, ..RunConfig::for_suite(Suite::Submult) };
    let report = run(Suite::Submult, &cfg)?;
    all_pass(&report)?;
    let mut counts = Vec::new();
    for name in ["submult/entire", "submult/polydisk", "submult/popescu", "submult/affine-l1"] {
        let k = records(&report, name).len();
        ensure(k >= 500, || format!("{name}: only {k} records"))?;
        counts.push(k);
    }
    // The entire seminorm is multiplicative on monomials.
    let mut rng = sample_rng(5, 0);
    for _ in 0..100 {
        let u = FreeSeries::monomial(random_word(&mut rng, 2, 3), C64::new(0.5, 1.0));
        let v = FreeSeries::monomial(random_word(&mut rng, 2, 2), C64::new(-2.0, 0.25));
        let uv = u.concat_product(&v).unwrap();
        let (a, b, c) = (
            u.entire_seminorm(1.3).unwrap().value,
            v.entire_seminorm(1.3).unwrap().value,
            uv.entire_seminorm(1.3).unwrap().value,
        );
        ensure(close(c, a * b, ORACLE_REL), || format!("monomial product {c} vs {}", a * b))?;
    }
    Ok(format!("product pairs per family {counts:?}, monomial oracle agrees"))
}

fn confluence() -> Check {
    let cfg = RunConfig::for_suite(Suite::Confluence);
    let report = run(Suite::Confluence, &cfg)?;
    all_pass(&report)?;
    ensure(report.records.len() == 200, || format!("{} records", report.records.len()))?;
    let mismatches: f64 = report.records.iter().map(|r| r.lhs).sum();
    ensure(mismatches == 0.0, || format!("{mismatches} mismatches"))?;

    // z1* z1 = q² z1 z1* + (1 − q²) when n = 1.
    let q = exact(3, 5);
    let e = StarExpr::new(1).unwrap().with_term(vec![StarLetter::zstar(1), StarLetter::z(1)], ExactComplex::one()).unwrap();
    let got = star_normal_order(&e, &q).map_err(|e| e.to_string())?;
    ensure(got.to_string() == "(16/25,0)*[1] + (9/25,0)*[z1 * z1*]", || format!("z1* z1 gives {got}"))?;
    Ok("200 exact star-words, zero mismatches".into())
}

fn jsr() -> Check {
    let cfg = RunConfig::for_suite(Suite::JsrSanity);
    let report = run(Suite::JsrSanity, &cfg)?;
    all_pass(&report)?;
    let singles = records(&report, "jsr-sanity/single");
    ensure(singles.len() == 50, || format!("{} single-matrix records", singles.len()))?;
    ensure(singles.iter().all(|r| r.rhs == JSR_REL), || "tolerance is not 5%".into())?;
    let zero = records(&report, "jsr-sanity/zero");
    ensure(zero.len() == 1 && zero[0].lhs == 0.0, || "zero tuple is not exactly 0".into())?;

    // A = P D P⁻¹ with known eigenvalues D.
    let mut worst = 0.0f64;
    for s in 0..50 {
        let mut rng = sample_rng(77, s);
        let p = DMatrix::<C64>::identity(4, 4) + random_tuple(&mut rng, 1, 4).matrices()[0].scale(0.2);
        let d = random_tuple(&mut rng, 1, 4).matrices()[0].clone();
        let diag = DMatrix::from_diagonal(&d.diagonal());
        let p_inv = p.clone().try_inverse().ok_or("singular conjugator")?;
        let a = &p * &diag * p_inv;
        let rho = d.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let est = joint_spectral_radius(&MatrixTuple::new(vec![a]).unwrap(), 12, &JsrOptions::default())
            .map_err(|e| e.to_string())?;
        let rel = (est.value - rho).abs() / rho;
        worst = worst.max(rel);
        ensure(rel <= JSR_REL, || format!("sample {s}: estimate {} vs eigenvalue oracle {rho}", est.value))?;
    }
    Ok(format!("50 random matrices within 5%, eigenvalue oracle worst {worst:.1e}, zero tuple 0"))
}

fn reproducibility() -> Check {
    let mut rng = sample_rng(10, 0);
    let mut count = 0;
    for mode in [AlgebraMode::Free, AlgebraMode::Affine, AlgebraMode::Torus, AlgebraMode::Star] {
        for _ in 0..250 {
            let e = random_expr(&mut rng, 3, mode, 4);
            let printed = e.to_string();
            let back = parse(&printed, 3, mode).map_err(|err| format!("{printed:?}: {err}"))?;
            ensure(back == e, || format!("{printed:?} reparses differently"))?;
            count += 1;
        }
    }
    for suite in Suite::ALL {
        let mut cfg = RunConfig::for_suite(suite);
        cfg.samples = cfg.samples.min(20);
        let a = run(suite, &cfg)?.emit(qfunc::config::OutputFormat::Json).map_err(|e| e.to_string())?;
        let b = run(suite, &cfg)?.emit(qfunc::config::OutputFormat::Json).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{suite} reports differ"))?;
    }
    Ok(format!("{count} round trips, 10 suites byte-identical across two runs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("shift-norm golden value", shift_norm),
        ("key estimate chain", key_est),
        ("ball versus polydisk estimate", key2),
        ("seminorm family equivalence", families),
        ("normal ordering kills the ideal", ideal),
        ("twisted relations under the truncated representation", relations),
        ("submultiplicativity", submult),
        ("rewriting confluence", confluence),
        ("joint spectral radius sanity", jsr),
        ("parser and report reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
