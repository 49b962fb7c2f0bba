//! The |M(x)| estimator, its ε-selection rule, and the catalog of classical
//! explicit bounds it is compared against.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::io::{self, Write};

use thiserror::Error;

use crate::report::fmt_g17;
use crate::sieve::{MertensTable, SieveError};

/// Tolerance on the integrality of 2x + ε.
pub const INTEGRALITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("2x = {two_x} is an integer, so no ε in (0, 1) makes 2x + ε integral")]
    EpsilonDegenerate { two_x: f64 },
    #[error("{name} = {value} is outside {range}")]
    Domain { name: &'static str, value: f64, range: &'static str },
    #[error("bound {name} is not valid at x = {x} (requires x {op} {min})")]
    OutsideValidity { name: String, x: f64, op: &'static str, min: f64 },
    #[error("bound {name}: missing parameter {param}")]
    MissingParameter { name: String, param: &'static str },
    #[error(transparent)]
    Table(#[from] SieveError),
}

fn in_open_unit(name: &'static str, v: f64) -> Result<f64, BoundsError> {
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(BoundsError::Domain { name, value: v, range: "(0, 1)" })
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64, BoundsError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(BoundsError::Domain { name, value: v, range: "(0, inf)" })
    }
}

/// An evaluation point x = n + θ/2 together with the unique ε ∈ (0, 1)
/// making 2x + ε an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonChoice {
    pub x: f64,
    pub n: u64,
    pub theta: f64,
    pub epsilon: f64,
}

impl EpsilonChoice {
    /// The integer 2x + ε.
    pub fn integer_target(&self) -> u64 {
        (2.0 * self.x + self.epsilon).round() as u64
    }
}

/// ε = ⌈2x⌉ − 2x, with n = ⌊x⌋ and θ = 2(x − n).
pub fn epsilon_for(x: f64) -> Result<EpsilonChoice, BoundsError> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(BoundsError::Domain { name: "x", value: x, range: "(1, inf)" });
    }
    let two_x = 2.0 * x;
    if (two_x - two_x.round()).abs() < INTEGRALITY_TOL {
        return Err(BoundsError::EpsilonDegenerate { two_x });
    }
    let n = x.floor();
    Ok(EpsilonChoice { x, n: n as u64, theta: 2.0 * (x - n), epsilon: two_x.ceil() - two_x })
}

/// x = n + θ/2, ε = 1 − θ.
pub fn x_from_theta(n: u64, theta: f64) -> Result<EpsilonChoice, BoundsError> {
    in_open_unit("theta", theta)?;
    if n == 0 {
        return Err(BoundsError::Domain { name: "n", value: 0.0, range: "[1, inf)" });
    }
    Ok(EpsilonChoice { x: n as f64 + theta / 2.0, n, theta, epsilon: 1.0 - theta })
}

/// √x / (π √ε (x + ε)).
///
/// Integrality of 2x + ε is not enforced here.
pub fn estimate(x: f64, epsilon: f64) -> Result<f64, BoundsError> {
    positive("x", x)?;
    positive("epsilon", epsilon)?;
    Ok(x.sqrt() / (PI * epsilon.sqrt() * (x + epsilon)))
}

/// The estimator with ε = 1 − α.
pub fn estimate_alpha(x: f64, alpha: f64) -> Result<f64, BoundsError> {
    in_open_unit("alpha", alpha)?;
    estimate(x, 1.0 - alpha)
}

/// √(6/π²) / √α · √x, the bound holding with probability 1 − α under a
/// random-sign model for μ.
pub fn probabilistic_bound(x: f64, alpha: f64) -> Result<f64, BoundsError> {
    in_open_unit("alpha", alpha)?;
    positive("x", x)?;
    Ok((6.0 / (PI * PI)).sqrt() / alpha.sqrt() * x.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// x·exp(−c (ln x)^{3/5} (ln ln x)^{−1/5}), c unspecified.
    Walfisz,
    /// (x + 1)/80 + 11/2.
    MacLeod,
    /// a·x / √(ln x).
    ElMarrakiSqrtLog,
    /// a·x / ln x.
    ElMarrakiLog,
    /// (a ln x − b)·x / (ln x)².
    Ramare,
    /// x / d.
    Linear,
    /// a·x / (ln x)^p.
    LogPower,
}

/// One explicit bound on |M(x)| with its range of validity.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpec {
    pub name: &'static str,
    pub kind: BoundKind,
    /// Smallest admissible x.
    pub validity_min: f64,
    /// Whether x = validity_min itself is admissible.
    pub inclusive: bool,
    /// Whether the bound is stated with `<` rather than `≤`.
    pub strict: bool,
    /// True when a constant was supplied by the caller rather than proven.
    pub parameterized: bool,
    pub parameters: BTreeMap<&'static str, f64>,
}

impl BoundSpec {
    pub fn admits(&self, x: f64) -> bool {
        if self.inclusive {
            x >= self.validity_min
        } else {
            x > self.validity_min
        }
    }

    fn param(&self, key: &'static str) -> Result<f64, BoundsError> {
        self.parameters
            .get(key)
            .copied()
            .ok_or_else(|| BoundsError::MissingParameter { name: self.name.to_string(), param: key })
    }

    /// Value of the bound at x; refuses points outside the validity range.
    pub fn evaluate(&self, x: f64) -> Result<f64, BoundsError> {
        if !self.admits(x) {
            return Err(BoundsError::OutsideValidity {
                name: self.name.to_string(),
                x,
                op: if self.inclusive { ">=" } else { ">" },
                min: self.validity_min,
            });
        }
        let ln = x.ln();
        let value = match self.kind {
            BoundKind::Walfisz => {
                let c = self.param("c")?;
                x * (-c * ln.powf(0.6) * ln.ln().powf(-0.2)).exp()
            }
            BoundKind::MacLeod => (x + 1.0) / self.param("denominator")? + self.param("offset")?,
            BoundKind::ElMarrakiSqrtLog => self.param("a")? * x / ln.sqrt(),
            BoundKind::ElMarrakiLog => self.param("a")? * x / ln,
            BoundKind::Ramare => (self.param("a")? * ln - self.param("b")?) * x / (ln * ln),
            BoundKind::Linear => x / self.param("denominator")?,
            BoundKind::LogPower => self.param("a")? * x / ln.powf(self.param("power")?),
        };
        Ok(value)
    }

    /// Whether `mertens_abs` satisfies this bound's inequality at `value`.
    pub fn holds(&self, mertens_abs: u64, value: f64) -> bool {
        let m = mertens_abs as f64;
        if self.strict {
            m < value
        } else {
            m <= value
        }
    }
}

/// The explicit-bound catalog; `walfisz_c` fills the unspecified constant.
pub fn bound_catalog(walfisz_c: f64) -> Vec<BoundSpec> {
    fn spec(
        name: &'static str,
        kind: BoundKind,
        validity_min: f64,
        inclusive: bool,
        strict: bool,
        parameters: &[(&'static str, f64)],
    ) -> BoundSpec {
        BoundSpec {
            name,
            kind,
            validity_min,
            inclusive,
            strict,
            parameterized: false,
            parameters: parameters.iter().copied().collect(),
        }
    }
    let mut walfisz = spec("walfisz", BoundKind::Walfisz, E, false, false, &[("c", walfisz_c)]);
    // ln ln x must be positive, hence x > e
    walfisz.parameterized = true;
    vec![
        walfisz,
        spec("macleod", BoundKind::MacLeod, 1.0, true, false, &[("denominator", 80.0), ("offset", 5.5)]),
        spec("el_marraki_sqrt_log", BoundKind::ElMarrakiSqrtLog, 142_194.0, true, false, &[("a", 0.002969)]),
        spec("el_marraki_log", BoundKind::ElMarrakiLog, 1.0, false, false, &[("a", 0.6437752)]),
        spec("ramare", BoundKind::Ramare, 464_402.0, true, false, &[("a", 0.0146), ("b", 0.1098)]),
        spec("x_over_4345", BoundKind::Linear, 2_160_535.0, false, true, &[("denominator", 4345.0)]),
        spec("log_power_11_9", BoundKind::LogPower, 685.0, false, true, &[("a", 0.58782), ("power", 11.0 / 9.0)]),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEvaluation {
    pub name: &'static str,
    pub x: f64,
    pub value: f64,
    pub parameterized: bool,
    /// Present only when |M(x)| was available.
    pub holds_for_true_m: Option<bool>,
}

/// Every catalog bound admissible at x, in catalog order.
pub fn classical_bounds(x: f64, walfisz_c: f64) -> Vec<BoundEvaluation> {
    bound_catalog(walfisz_c)
        .iter()
        .filter(|b| b.admits(x))
        .filter_map(|b| {
            let value = b.evaluate(x).ok()?;
            value.is_finite().then_some(BoundEvaluation {
                name: b.name,
                x,
                value,
                parameterized: b.parameterized,
                holds_for_true_m: None,
            })
        })
        .collect()
}

/// [`classical_bounds`] with each entry checked against |M(x)| from `table`
/// when x lies inside it.
pub fn classical_bounds_checked(x: f64, walfisz_c: f64, table: &MertensTable) -> Vec<BoundEvaluation> {
    let mertens_abs = table.mertens_at(x).ok().map(i64::unsigned_abs);
    let catalog = bound_catalog(walfisz_c);
    classical_bounds(x, walfisz_c)
        .into_iter()
        .map(|mut e| {
            if let (Some(m), Some(spec)) = (mertens_abs, catalog.iter().find(|b| b.name == e.name)) {
                e.holds_for_true_m = Some(spec.holds(m, e.value));
            }
            e
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    pub n: u64,
    pub theta: f64,
    pub x: f64,
    pub epsilon: f64,
    pub mertens: i64,
    pub mertens_abs: u64,
    pub estimate: f64,
    /// |M(x)| < estimate.
    pub satisfied: bool,
}

/// Estimator vs exact |M(x)| at x = n + θ/2 for n_lo ≤ n ≤ n_hi.
pub fn sweep_report(
    n_lo: u64,
    n_hi: u64,
    theta: f64,
    table: &MertensTable,
) -> Result<Vec<EstimateRecord>, BoundsError> {
    in_open_unit("theta", theta)?;
    if n_lo > n_hi {
        return Ok(Vec::new());
    }
    if n_lo == 0 {
        return Err(BoundsError::Domain { name: "n_lo", value: 0.0, range: "[1, limit - 1]" });
    }
    if n_hi >= table.limit() {
        return Err(SieveError::OutOfRange { x: n_hi as f64, max: (table.limit() - 1) as f64 }.into());
    }
    // M(n + θ/2) = M(n): the half-step never reaches the next integer
    let values = table.mertens_range(n_lo, n_hi)?;
    (n_lo..=n_hi)
        .zip(values)
        .map(|(n, mertens)| {
            let choice = x_from_theta(n, theta)?;
            let est = estimate(choice.x, choice.epsilon)?;
            let mertens_abs = mertens.unsigned_abs();
            Ok(EstimateRecord {
                n,
                theta,
                x: choice.x,
                epsilon: choice.epsilon,
                mertens,
                mertens_abs,
                estimate: est,
                satisfied: (mertens_abs as f64) < est,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "n,theta,x,epsilon,mertens,mertens_abs,estimate,satisfied";

pub fn write_sweep_csv<W: Write>(records: &[EstimateRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.n,
            fmt_g17(r.theta),
            fmt_g17(r.x),
            fmt_g17(r.epsilon),
            r.mertens,
            r.mertens_abs,
            fmt_g17(r.estimate),
            r.satisfied
        )?;
    }
    w.flush()
}

/// Fraction of records with `satisfied`; 0 for an empty sweep.
pub fn satisfied_fraction(records: &[EstimateRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.satisfied).count() as f64 / records.len() as f64
}
