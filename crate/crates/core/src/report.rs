//! Audit outcomes, their CSV encoding, and the per-family summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use serde_json::{Map, Number, Value};

/// A named input or derived quantity attached to a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Int(i64),
    Real(f64),
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v as i64)
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Real(v)
    }
}

impl Param {
    pub fn as_f64(self) -> f64 {
        match self {
            Param::Int(v) => v as f64,
            Param::Real(v) => v,
        }
    }
}

/// One audit outcome.
///
/// A report is either pass-gated (it carries a bound and a verdict) or
/// report-only (neither). The constructors keep the two in step.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check_id: String,
    pub inputs: BTreeMap<String, Param>,
    pub residual: f64,
    bound: Option<f64>,
    pass: Option<bool>,
}

impl CheckReport {
    /// Gated report passing when `|residual| <= bound`.
    pub fn gated(id: impl Into<String>, inputs: BTreeMap<String, Param>, residual: f64, bound: f64) -> Self {
        let pass = residual.abs() <= bound;
        Self::gated_with(id, inputs, residual, bound, pass)
    }

    /// Gated report with a verdict decided by the caller.
    pub fn gated_with(
        id: impl Into<String>,
        inputs: BTreeMap<String, Param>,
        residual: f64,
        bound: f64,
        pass: bool,
    ) -> Self {
        Self { check_id: id.into(), inputs, residual, bound: Some(bound), pass: Some(pass) }
    }

    pub fn report_only(id: impl Into<String>, inputs: BTreeMap<String, Param>, residual: f64) -> Self {
        Self { check_id: id.into(), inputs, residual, bound: None, pass: None }
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn pass(&self) -> Option<bool> {
        self.pass
    }

    pub fn is_gated(&self) -> bool {
        self.pass.is_some()
    }

    /// Part of `check_id` before the first `/`.
    pub fn family(&self) -> &str {
        self.check_id.split('/').next().unwrap_or(&self.check_id)
    }

    pub fn param_json(&self) -> String {
        let map: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| {
                let value = match *v {
                    Param::Int(i) => Value::Number(i.into()),
                    Param::Real(r) => Number::from_f64(r).map_or(Value::Null, Value::Number),
                };
                (k.clone(), value)
            })
            .collect();
        Value::Object(map).to_string()
    }
}

/// Build an inputs map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, Param); N]) -> BTreeMap<String, Param> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `printf("%.17g")`: shortest of fixed or exponent form at 17 significant
/// digits, trailing zeros removed.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (16 - exp) as usize, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Quote a CSV field when it contains a delimiter, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CHECK_CSV_HEADER: &str = "check_id,param_json,residual,bound,pass";

/// Check-report CSV; `bound` and `pass` are empty for report-only rows.
pub fn write_check_csv<W: Write>(reports: &[CheckReport], mut w: W) -> io::Result<()> {
    writeln!(w, "{CHECK_CSV_HEADER}")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{}",
            csv_field(&r.check_id),
            csv_field(&r.param_json()),
            fmt_g17(r.residual),
            r.bound.map(fmt_g17).unwrap_or_default(),
            r.pass.map(|p| p.to_string()).unwrap_or_default(),
        )?;
    }
    w.flush()
}

/// Nearest-rank quantile of a sorted slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// One line per check family: pass rate for gated families, quantiles of
/// |residual| for report-only families.
pub fn summarize(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} checks", reports.len());
    if reports.is_empty() {
        return out;
    }

    let mut gated: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut reported: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in reports {
        match r.pass {
            Some(p) => {
                let e = gated.entry(r.family()).or_default();
                e.0 += 1;
                e.1 += p as usize;
            }
            None => reported.entry(r.family()).or_default().push(r.residual),
        }
    }

    if !gated.is_empty() {
        let _ = writeln!(out, "gated:");
        for (family, (n, passed)) in &gated {
            let pct = 100.0 * *passed as f64 / *n as f64;
            let _ = writeln!(out, "  {family}: {n} checks, {passed}/{n} passed ({pct:.2}%)");
        }
    }
    if !reported.is_empty() {
        let _ = writeln!(out, "report-only:");
        for (family, residuals) in &reported {
            let mut finite: Vec<f64> = residuals.iter().filter(|r| r.is_finite()).map(|r| r.abs()).collect();
            finite.sort_by(f64::total_cmp);
            let _ = write!(out, "  {family}: {} checks", residuals.len());
            if finite.is_empty() {
                let _ = writeln!(out, ", no finite residuals");
                continue;
            }
            let _ = write!(
                out,
                ", |residual| min={} median={} p90={} max={}",
                fmt_g17(finite[0]),
                fmt_g17(quantile(&finite, 0.5)),
                fmt_g17(quantile(&finite, 0.9)),
                fmt_g17(finite[finite.len() - 1]),
            );
            if finite.len() < residuals.len() {
                let _ = write!(out, " ({} non-finite)", residuals.len() - finite.len());
            }
            out.push('\n');
        }
    }
    out
}
