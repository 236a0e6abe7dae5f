//! Run configuration for the verification suites.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, ExactComplex, Scalar, C64};

pub use crate::expr::AlgebraMode;

/// The deformation parameter as given on the command line: `"num/den"` is
/// exact, anything else is a float.
#[derive(Debug, Clone, PartialEq)]
pub enum QParam {
    Exact(BigRational),
    Float(f64),
}

impl QParam {
    pub fn as_f64(&self) -> f64 {
        match self {
            QParam::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            QParam::Float(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, QParam::Exact(_))
    }

    pub fn to_exact(&self) -> Result<ExactComplex> {
        match self {
            QParam::Exact(r) => Ok(ExactComplex::from_rational(r)),
            QParam::Float(v) => Err(Error::Config(format!(
                "exact mode needs q as \"num/den\", got the float {v}"
            ))),
        }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.as_f64(), 0.0)
    }
}

impl FromStr for QParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return parse_rational(s).map(QParam::Exact).map_err(|e| Error::Config(e.to_string()));
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(QParam::Float)
            .ok_or_else(|| Error::Config(format!("not a value for q: {s:?}")))
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QParam::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            QParam::Float(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for QParam {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}; expected json or csv"))),
        }
    }
}

/// The ten verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    KeyEst,
    Key2,
    Families,
    Submult,
    Relations,
    Ideal,
    ShiftNorm,
    JsrSanity,
    Confluence,
    PopescuBound,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::KeyEst,
        Suite::Key2,
        Suite::Families,
        Suite::Submult,
        Suite::Relations,
        Suite::Ideal,
        Suite::ShiftNorm,
        Suite::JsrSanity,
        Suite::Confluence,
        Suite::PopescuBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::KeyEst => "key-est",
            Suite::Key2 => "key2",
            Suite::Families => "families",
            Suite::Submult => "submult",
            Suite::Relations => "relations",
            Suite::Ideal => "ideal",
            Suite::ShiftNorm => "shift-norm",
            Suite::JsrSanity => "jsr-sanity",
            Suite::Confluence => "confluence",
            Suite::PopescuBound => "popescu-bound",
        }
    }

    /// Suites whose identities are checked in exact rational arithmetic.
    pub fn is_exact(self) -> bool {
        matches!(self, Suite::Ideal | Suite::Confluence)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Everything a suite run depends on. Two runs with equal configs produce
/// identical reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub q: QParam,
    pub mode: AlgebraMode,
    /// Fock truncation `N`; `None` means "use `deg`".
    #[serde(rename = "N")]
    pub cutoff: Option<usize>,
    pub rho: Vec<f64>,
    pub rho2: Vec<f64>,
    pub r: Vec<f64>,
    pub kmax: usize,
    pub seed: u64,
    pub samples: usize,
    pub deg: usize,
    pub tol: f64,
    pub budget: u128,
}

impl RunConfig {
    /// The configuration a suite runs with when no flag overrides it.
    pub fn for_suite(suite: Suite) -> Self {
        let base = RunConfig {
            n: 2,
            q: QParam::Float(0.5),
            mode: AlgebraMode::Affine,
            cutoff: None,
            rho: Vec::new(),
            rho2: Vec::new(),
            r: Vec::new(),
            kmax: 12,
            seed: 42,
            samples: 100,
            deg: 4,
            tol: 1e-12,
            budget: 1 << 22,
        };
        match suite {
            Suite::KeyEst => RunConfig { samples: 200, deg: 5, ..base },
            Suite::Key2 => RunConfig { rho: vec![0.3, 0.5, 0.8], r: vec![0.6, 0.9, 0.9], ..base },
            Suite::Families => RunConfig {
                rho: vec![0.3, 0.5, 0.8],
                r: vec![0.6, 0.9, 0.9],
                samples: 500,
                deg: 5,
                ..base
            },
            Suite::Submult => RunConfig {
                mode: AlgebraMode::Free,
                rho: vec![0.5, 1.0, 2.0],
                rho2: vec![1.0, 1.5],
                r: vec![0.3, 0.6, 0.9],
                samples: 500,
                deg: 3,
                ..base
            },
            Suite::Relations => RunConfig { mode: AlgebraMode::Star, cutoff: Some(6), samples: 1, ..base },
            Suite::Ideal => RunConfig {
                mode: AlgebraMode::Free,
                q: QParam::Exact(BigRational::new(1.into(), 2.into())),
                samples: 500,
                deg: 3,
                tol: 0.0,
                ..base
            },
            Suite::ShiftNorm => RunConfig {
                n: 1,
                mode: AlgebraMode::Star,
                cutoff: Some(8),
                samples: 1,
                tol: 1e-10,
                ..base
            },
            Suite::JsrSanity => RunConfig { n: 1, mode: AlgebraMode::Free, samples: 50, tol: 0.05, ..base },
            Suite::Confluence => RunConfig {
                mode: AlgebraMode::Star,
                q: QParam::Exact(BigRational::new(3.into(), 5.into())),
                samples: 200,
                deg: 6,
                tol: 0.0,
                ..base
            },
            Suite::PopescuBound => RunConfig { mode: AlgebraMode::Free, samples: 200, ..base },
        }
    }

    pub fn truncation(&self) -> usize {
        self.cutoff.unwrap_or(self.deg)
    }

    /// Checks that the parameters lie where the suite's statements hold.
    pub fn validate(&self, suite: Suite) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("{suite}: {msg}")));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.tol >= 0.0) {
            return bad(format!("tolerance must be nonnegative, got {}", self.tol));
        }
        if suite.is_exact() && !self.q.is_exact() {
            return bad(format!("exact-mode suite needs q as \"num/den\", got {}", self.q));
        }
        let q = self.q.as_f64();
        let needs_unit_interval = !matches!(suite, Suite::Submult | Suite::JsrSanity | Suite::PopescuBound);
        if needs_unit_interval && !(q > 0.0 && q < 1.0) {
            return bad(format!("needs 0 < q < 1, got {}", self.q));
        }
        match suite {
            Suite::Key2 | Suite::Families => {
                if self.rho.len() != self.r.len() || self.rho.is_empty() {
                    return bad("--rho and --r must list the same positive number of values".into());
                }
                for (&rho, &r) in self.rho.iter().zip(&self.r) {
                    let ok = rho > 0.0 && rho < r && (suite == Suite::Families || r < 1.0);
                    if !ok {
                        let need = if suite == Suite::Key2 { "0 < rho < r < 1" } else { "0 < rho < r" };
                        return bad(format!("needs {need}, got rho = {rho}, r = {r}"));
                    }
                }
            }
            Suite::Submult => {
                if self.rho.iter().any(|&v| !(v > 0.0)) || self.rho.is_empty() {
                    return bad("--rho must be a nonempty list of positive values".into());
                }
                if self.r.iter().any(|&v| !(v > 0.0 && v < 1.0)) || self.r.is_empty() {
                    return bad("the popescu grid needs every r in (0, 1)".into());
                }
                if self.rho2.is_empty() || self.rho2.iter().any(|&v| !(v >= 1.0)) {
                    return bad("the polydisk grid needs every rho2 >= 1".into());
                }
                if !(q.abs() <= 1.0 && q != 0.0) {
                    return bad(format!("needs 0 < |q| <= 1, got {}", self.q));
                }
            }
            Suite::ShiftNorm if self.n != 1 => return bad("the closed form is for n = 1".into()),
            Suite::Ideal if self.n < 2 => return bad("the ideal needs n >= 2".into()),
            Suite::JsrSanity if self.kmax < 2 => return bad("kmax must be at least 2".into()),
            Suite::Relations | Suite::ShiftNorm if self.cutoff.is_none() => {
                return bad("needs a truncation --N".into());
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("not a number: {p:?}")))
        })
        .collect()
}
