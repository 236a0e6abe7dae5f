//! Check records and the JSON and CSV report formats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;
use crate::error::Result;

/// One evaluated inequality or identity.
///
/// For an inequality `lhs ≤ rhs` the margin is `rhs − lhs`. For an identity
/// `lhs = rhs` it is `−|lhs − rhs|`. Either way the record passes exactly
/// when `margin ≥ −tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_name: String,
    pub sample: usize,
    pub parameters: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn inequality(name: &str, sample: usize, parameters: BTreeMap<String, String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::with_margin(name, sample, parameters, lhs, rhs, rhs - lhs, tolerance)
    }

    pub fn equality(name: &str, sample: usize, parameters: BTreeMap<String, String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::with_margin(name, sample, parameters, lhs, rhs, 0.0 - (lhs - rhs).abs(), tolerance)
    }

    fn with_margin(
        name: &str,
        sample: usize,
        parameters: BTreeMap<String, String>,
        lhs: f64,
        rhs: f64,
        margin: f64,
        tolerance: f64,
    ) -> Self {
        // NaN never passes.
        let pass = margin >= -tolerance;
        CheckRecord { check_name: name.to_string(), sample, parameters, lhs, rhs, margin, tolerance, pass }
    }

    /// `k=v` pairs joined by `;`, keys in sorted order.
    pub fn param_string(&self) -> String {
        self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

/// Builds a parameter map from `(key, value)` pairs.
pub fn params<const K: usize>(pairs: [(&str, String); K]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    /// Smallest margin over all records; `null` for an empty report.
    pub min_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: serde_json::Value,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    /// Sorts the records by check name, then sample index, and summarizes.
    pub fn new(suite: &str, config: serde_json::Value, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.check_name.cmp(&b.check_name).then(a.sample.cmp(&b.sample)));
        let summary = Summary {
            total: records.len(),
            passed: records.iter().filter(|r| r.pass).count(),
            min_margin: records.iter().map(|r| r.margin).reduce(f64::min),
        };
        Report { suite: suite.to_string(), config, records, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn emit(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => emit_csv(&self.records),
        }
    }
}

/// Columns `check_name,param_string,lhs,rhs,margin,pass`.
pub fn emit_csv(records: &[CheckRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_name", "param_string", "lhs", "rhs", "margin", "pass"])?;
    for r in records {
        w.write_record([
            r.check_name.clone(),
            r.param_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.margin.to_string(),
            r.pass.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::Error::Malformed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        let r = Report::new("x", serde_json::json!({}), Vec::new());
        assert_eq!(r.summary, Summary { total: 0, passed: 0, min_margin: None });
        assert!(r.all_passed());
    }

    #[test]
    fn single_record_sets_min_margin() {
        let rec = CheckRecord::inequality("a", 0, params([("q", "0.5".into())]), 1.0, 1.5, 0.0);
        let r = Report::new("x", serde_json::json!({}), vec![rec]);
        assert_eq!(r.summary.min_margin, Some(0.5));
        assert_eq!(r.summary.passed, 1);
    }

    #[test]
    fn pass_rule_and_ordering() {
        let p = BTreeMap::new;
        let recs = vec![
            CheckRecord::inequality("b", 1, p(), 1.0 + 1e-13, 1.0, 1e-12),
            CheckRecord::equality("a", 2, p(), 1.0, 1.1, 1e-3),
            CheckRecord::inequality("b", 0, p(), f64::NAN, 1.0, 1.0),
        ];
        assert!(recs[0].pass && !recs[1].pass && !recs[2].pass);
        let r = Report::new("x", serde_json::json!({}), recs);
        let order: Vec<_> = r.records.iter().map(|r| (r.check_name.as_str(), r.sample)).collect();
        assert_eq!(order, [("a", 2), ("b", 0), ("b", 1)]);
        assert!(!r.all_passed());
    }

    #[test]
    fn csv_columns() {
        let rec = CheckRecord::equality("shift", 0, params([("q", "0.5".into()), ("N", "8".into())]), 1.0, 1.0, 1e-10);
        let s = emit_csv(&[rec]).unwrap();
        assert_eq!(s, "check_name,param_string,lhs,rhs,margin,pass\nshift,N=8;q=0.5,1,1,0,true\n");
    }
}
