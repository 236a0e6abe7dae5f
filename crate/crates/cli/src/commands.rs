use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::ValueEnum;
use nalgebra::DMatrix;
use qfunc::calculus::{
    commutative_eval, contractivity_verdict, free_eval, joint_spectral_radius, JsrOptions, MatrixTuple,
    MatrixTupleJson,
};
use qfunc::config::{parse_list, AlgebraMode, OutputFormat, QParam, RunConfig};
use qfunc::expr::{parse, to_free, to_ordered, to_star_expr};
use qfunc::free_series::{FreeSeries, FreeSeriesJson};
use qfunc::linalg::OpNormOptions;
use qfunc::quantum_algebra::{self, AffineVariant, OrderedSeries, OrderedSeriesJson};
use qfunc::report::Report;
use qfunc::scalar::{ExactComplex, Mode, Scalar, C64};
use qfunc::star::{
    embed, fock_dimension, rep_apply, scale_automorphism, star_normal_order_with, vacuum_lower_bound,
    RewriteStrategy, TruncatedRep,
};
use qfunc::words::Flavor;
use qfunc::{suites, Error, Result};
use serde_json::json;

use crate::{Common, Family, Format, Strategy, VerifyArgs};

/// What a command produced: the text to emit, where to put it, and whether
/// a check failed.
pub struct Outcome {
    text: String,
    out: Option<PathBuf>,
    failed: bool,
}

impl Outcome {
    pub fn ok(text: String, out: Option<PathBuf>) -> Self {
        Outcome { text, out, failed: false }
    }

    pub fn finish(self) -> Result<ExitCode> {
        match &self.out {
            Some(path) => fs::write(path, &self.text).map_err(|e| io_error(path, e))?,
            None => print!("{}", self.text),
        }
        Ok(if self.failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Config(format!("{}: {e}", path.display()))
}

/// Runs `$body` with `$s` bound to `q` as an exact or a float scalar.
macro_rules! with_scalar {
    ($q:expr, |$s:ident| $body:expr) => {
        match $q {
            QParam::Exact(r) => {
                let $s = ExactComplex::from_rational(r);
                $body
            }
            QParam::Float(v) => {
                let $s = C64::new(*v, 0.0);
                $body
            }
        }
    };
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn text_or_json(format: Format, text: impl FnOnce() -> String, doc: impl FnOnce() -> Result<String>) -> Result<String> {
    match format {
        Format::Text => Ok(text() + "\n"),
        Format::Json => doc(),
        Format::Csv => Err(Error::Config("csv output is only available for reports".into())),
    }
}

fn ordered_of<S: Scalar>(mode: AlgebraMode, src: &str, n: usize, q: &S) -> Result<OrderedSeries<S>> {
    match mode {
        AlgebraMode::Free => quantum_algebra::normal_order(&to_free(&parse(src, n, mode)?, n, Some(q))?, q),
        AlgebraMode::Affine => to_ordered(&parse(src, n, mode)?, n, q, Flavor::Affine),
        AlgebraMode::Torus => to_ordered(&parse(src, n, mode)?, n, q, Flavor::Torus),
        AlgebraMode::Star => Err(Error::Config("star expressions are handled by star-normal-order".into())),
    }
}

pub fn normal_order(mode: AlgebraMode, src: &str, c: &Common) -> Result<Outcome> {
    let text = with_scalar!(&c.q, |q| {
        let a = ordered_of(mode, src, c.n, &q)?;
        text_or_json(c.format, || a.to_string(), || pretty(&a.to_json()))?
    });
    Ok(Outcome::ok(text, c.out.clone()))
}

pub fn star_normal_order(src: &str, strategy: Strategy, c: &Common) -> Result<Outcome> {
    let strategy = match strategy {
        Strategy::Leftmost => RewriteStrategy::LeftmostFirst,
        Strategy::Rightmost => RewriteStrategy::RightmostFirst,
    };
    let text = with_scalar!(&c.q, |q| {
        let e = parse(src, c.n, AlgebraMode::Star)?;
        let p = star_normal_order_with(&to_star_expr(&e, c.n, Some(&q))?, &q, strategy)?;
        text_or_json(c.format, || p.to_string(), || pretty(&p.to_json()))?
    });
    Ok(Outcome::ok(text, c.out.clone()))
}

pub struct Radii {
    pub rho: Option<f64>,
    pub rho2: Option<f64>,
    pub r: Option<f64>,
}

fn need(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("this seminorm needs --{name}")))
}

pub fn seminorm(mode: AlgebraMode, family: Family, src: &str, radii: Radii, c: &Common) -> Result<Outcome> {
    let (value, lower_bound) = with_scalar!(&c.q, |q| {
        match (mode, family) {
            (AlgebraMode::Free, Family::Entire | Family::Taylor | Family::Polydisk | Family::Popescu) => {
                let f: FreeSeries<_> = to_free(&parse(src, c.n, mode)?, c.n, Some(&q))?;
                let radius = radii.r.unwrap_or(f64::INFINITY);
                let v = match family {
                    Family::Entire => f.entire_seminorm(need("rho", radii.rho)?)?,
                    Family::Taylor => f.taylor_seminorm(need("rho", radii.rho)?, radius)?,
                    Family::Polydisk => f.polydisk_seminorm(need("rho", radii.rho)?, need("rho2", radii.rho2)?, radius)?,
                    _ => f.popescu_seminorm(need("r", radii.r)?)?,
                };
                (v.value, v.lower_bound)
            }
            (AlgebraMode::Affine | AlgebraMode::Free, Family::L1 | Family::L2 | Family::Sup) => {
                let variant = match family {
                    Family::L1 => AffineVariant::L1,
                    Family::L2 => AffineVariant::L2,
                    _ => AffineVariant::Sup,
                };
                let a = ordered_of(mode, src, c.n, &q)?;
                (a.affine_seminorm(need("rho", radii.rho)?, variant)?, false)
            }
            (AlgebraMode::Torus, Family::Torus) => {
                let a = ordered_of(mode, src, c.n, &q)?;
                (a.torus_seminorm(need("rho", radii.rho)?)?, false)
            }
            _ => {
                return Err(Error::Config(format!(
                    "no such seminorm in {mode} mode; free takes entire, taylor, polydisk, popescu; \
                     affine takes 1, 2, inf; torus takes torus"
                )))
            }
        }
    });
    let family_name = family.to_possible_value().map(|v| v.get_name().to_string());
    let text = text_or_json(
        c.format,
        || value.to_string(),
        || {
            pretty(&json!({
                "mode": mode,
                "family": family_name,
                "q": c.q,
                "rho": radii.rho,
                "rho2": radii.rho2,
                "r": radii.r,
                "value": value,
                "lower_bound": lower_bound,
            }))
        },
    )?;
    Ok(Outcome::ok(text, c.out.clone()))
}

pub fn rep_norm(
    src: &str,
    cutoff: usize,
    r: Option<f64>,
    triplets: Option<&Path>,
    budget: u128,
    c: &Common,
) -> Result<Outcome> {
    let dim = fock_dimension(c.n, cutoff);
    if dim > budget {
        return Err(Error::BudgetExceeded { required: dim, budget });
    }
    let q = c.q.to_c64();
    let rep = TruncatedRep::new(c.n, c.q.as_f64(), cutoff)?;
    let a = ordered_of(AlgebraMode::Affine, src, c.n, &q)?;
    let a = match r {
        Some(r) => scale_automorphism(&a, r)?,
        None => a,
    };
    let op = rep_apply(&embed(&a)?, &rep)?;
    let norm = op.op_norm(&OpNormOptions::default())?;
    // The vacuum bound needs every term of `a` to fit below the truncation.
    let vacuum = vacuum_lower_bound(&a, &rep).ok();
    if let Some(path) = triplets {
        fs::write(path, op.to_triplets()).map_err(|e| io_error(path, e))?;
    }
    let text = text_or_json(
        c.format,
        || norm.to_string(),
        || {
            pretty(&json!({
                "n": c.n,
                "q": c.q,
                "N": cutoff,
                "r": r,
                "dim": rep.dim(),
                "norm": norm,
                "vacuum": vacuum,
            }))
        },
    )?;
    Ok(Outcome::ok(text, c.out.clone()))
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn read_json(arg: &str) -> Result<serde_json::Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| io_error(Path::new(arg), e))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn eval_value(series: &serde_json::Value, tuple: &MatrixTuple) -> Result<DMatrix<C64>> {
    if series.get("flavor").is_some() {
        let doc: OrderedSeriesJson = serde_json::from_value(series.clone())?;
        return match OrderedSeries::<C64>::from_json(&doc) {
            Ok(a) => commutative_eval(&a, tuple),
            Err(_) => commutative_eval(&OrderedSeries::<ExactComplex>::from_json(&doc)?, tuple),
        };
    }
    let doc: FreeSeriesJson = serde_json::from_value(series.clone())?;
    match doc.mode {
        Mode::Float => free_eval(&FreeSeries::<C64>::from_json(&doc)?, tuple),
        Mode::Exact => free_eval(&FreeSeries::<ExactComplex>::from_json(&doc)?, tuple),
    }
}

fn matrix_text(m: &DMatrix<C64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("({},{})", m[(i, j)].re, m[(i, j)].im)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn eval(series: &str, tuple: &str, format: Format) -> Result<String> {
    let tuple_doc: MatrixTupleJson = serde_json::from_value(read_json(tuple)?)?;
    let t = MatrixTuple::from_json(&tuple_doc)?;
    let m = eval_value(&read_json(series)?, &t)?;
    match format {
        Format::Text => Ok(matrix_text(&m)),
        Format::Json => {
            let entries: Vec<[f64; 2]> = (0..m.nrows())
                .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
                .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
                .collect();
            pretty(&json!({ "d": m.nrows(), "matrix": entries }))
        }
        Format::Csv => Err(Error::Config("csv output is only available for reports".into())),
    }
}

pub fn jsr(tuple: &str, kmax: usize, budget: u128, r: Option<f64>, format: Format) -> Result<String> {
    let doc: MatrixTupleJson = serde_json::from_value(read_json(tuple)?)?;
    let t = MatrixTuple::from_json(&doc)?;
    let opts = JsrOptions { budget, ..JsrOptions::default() };
    let est = joint_spectral_radius(&t, kmax, &opts)?;
    let verdict = r.map(|r| contractivity_verdict(&est, r, opts.margin));
    text_or_json(
        format,
        || {
            let mut s = format!("lower {}\nupper {}\nwindow_max {}", est.value, est.upper, est.window_max);
            if let Some(v) = verdict {
                let _ = write!(s, "\ncontractive {}", serde_json::to_value(v).unwrap_or_default().as_str().unwrap_or("?"));
            }
            s
        },
        || pretty(&json!({ "estimate": est, "r": r, "verdict": verdict })),
    )
}

fn config_for(args: &VerifyArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::for_suite(args.suite);
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(q) = &args.q {
        cfg.q = q.clone();
    }
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if args.cutoff.is_some() {
        cfg.cutoff = args.cutoff;
    }
    if let Some(rho) = &args.rho {
        cfg.rho = parse_list(rho)?;
    }
    if let Some(rho2) = &args.rho2 {
        cfg.rho2 = parse_list(rho2)?;
    }
    if let Some(r) = &args.r {
        cfg.r = parse_list(r)?;
    }
    macro_rules! copy {
        ($($field:ident),*) => { $( if let Some(v) = args.$field { cfg.$field = v; } )* };
    }
    copy!(kmax, seed, samples, deg, tol, budget);
    Ok(cfg)
}

/// One row per check name: count, passed, smallest margin.
fn summary_table(report: &Report) -> String {
    let mut rows: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for rec in &report.records {
        let row = rows.entry(rec.check_name.as_str()).or_insert((0, 0, f64::INFINITY));
        row.0 += 1;
        row.1 += usize::from(rec.pass);
        row.2 = row.2.min(rec.margin);
    }
    let mut out = format!("suite {}\n{:<24} {:>7} {:>7} {:>14}\n", report.suite, "check", "total", "passed", "min_margin");
    for (name, (total, passed, min)) in rows {
        let _ = writeln!(out, "{name:<24} {total:>7} {passed:>7} {min:>14.6e}");
    }
    let s = &report.summary;
    let _ = writeln!(out, "{:<24} {:>7} {:>7}", "all", s.total, s.passed);
    out
}

fn emit(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => report.emit(OutputFormat::Json),
        Format::Csv => report.emit(OutputFormat::Csv),
        Format::Text => Ok(summary_table(report)),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let cfg = config_for(args)?;
    let report = suites::run_report(args.suite, &cfg)?;
    Ok(Outcome { text: emit(&report, args.format)?, out: args.out.clone(), failed: !report.all_passed() })
}

pub fn report(input: &Path, format: Format, out: Option<PathBuf>) -> Result<Outcome> {
    let text = fs::read_to_string(input).map_err(|e| io_error(input, e))?;
    let report: Report = serde_json::from_str(&text)?;
    Ok(Outcome { text: emit(&report, format)?, out, failed: !report.all_passed() })
}
