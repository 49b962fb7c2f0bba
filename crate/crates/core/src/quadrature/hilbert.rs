use std::cell::Cell;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::pv::{pv_integral, pv_semiaxis, DensityShape, PvOptions, PvSpec, MIN_TOLERANCE};
use super::{QuadratureError, QuadratureResult};
use crate::bounds::epsilon_for;
use crate::report::{params, CheckReport, Param};
use crate::sieve::MertensTable;
use crate::summation::NeumaierSum;

/// Gate for the forward/inverse roundtrip residual.
pub const ROUNDTRIP_BOUND: f64 = 1e-4;

/// −(√x/π²)·PV∫₀^∞ t^(−1/2)/((t+ε)(t−x)) dt by quadrature.
///
/// Analytically equal to √x / (π √ε (x + ε)).
pub fn inverse_hilbert_estimate(x: f64, epsilon: f64, tolerance: f64) -> Result<f64, QuadratureError> {
    let spec = PvSpec::new(0.5, epsilon, x)?;
    // pv_integral uses (x − t); flipping to (t − x) cancels the leading minus
    let r = pv_integral(&spec, tolerance)?;
    Ok(x.sqrt() / (PI * PI) * r.value)
}

/// The reference value 1/(x + ε) the forward sums are compared against,
/// with ε from the integrality rule; falls back to 1/x where no such ε
/// exists. Returns (target, ε).
pub fn hilbert_target(x: f64) -> (f64, Option<f64>) {
    match epsilon_for(x) {
        Ok(c) => (1.0 / (x + c.epsilon), Some(c.epsilon)),
        Err(_) => (1.0 / x, None),
    }
}

/// Σ_{n=1}^{A} M(n)·ln|(n+1−x)/(n−x)| for `mertens[n-1] = M(n)`.
///
/// This is ∫₀^{A+1} M(t)/(t−x) dt for the step function M; on the interval
/// containing x the principal value pairs ln(n+1−x) with ln(x−n).
pub fn forward_hilbert_sum(x: f64, mertens: &[i64]) -> Result<f64, QuadratureError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(QuadratureError::Domain { name: "x", value: x });
    }
    if x == x.floor() {
        return Err(QuadratureError::IntegerPole(x));
    }
    let mut acc = NeumaierSum::new();
    for (i, &m) in mertens.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let d = (i + 1) as f64 - x;
        let term = if d < 0.0 && d > -1.0 {
            ((d + 1.0) / -d).ln()
        } else {
            // (d + 1)/d = 1 + 1/d, both factors share a sign
            (1.0 / d).ln_1p()
        };
        acc += m as f64 * term;
    }
    Ok(acc.value())
}

/// Forward piecewise-constant transform of M up to A, read from `table`.
pub fn forward_hilbert_step(table: &MertensTable, x: f64, upto: u64) -> Result<f64, QuadratureError> {
    if upto == 0 || upto > table.limit() {
        return Err(QuadratureError::Domain { name: "A", value: upto as f64 });
    }
    if x == x.floor() {
        return Err(QuadratureError::IntegerPole(x));
    }
    let values = table.mertens_range(1, upto)?;
    forward_hilbert_sum(x, &values)
}

/// Report-only comparison of [`forward_hilbert_step`] with 1/(x + ε).
pub fn forward_hilbert_report(table: &MertensTable, x: f64, upto: u64) -> Result<CheckReport, QuadratureError> {
    let value = forward_hilbert_step(table, x, upto)?;
    let (target, eps) = hilbert_target(x);
    let mut inputs = params([("x", x.into()), ("A", upto.into()), ("value", value.into()), ("target", target.into())]);
    if let Some(e) = eps {
        inputs.insert("epsilon".into(), Param::Real(e));
    }
    Ok(CheckReport::report_only(format!("forward_hilbert/x={x}/A={upto}"), inputs, value - target))
}

/// Decaying test functions for the transform-pair roundtrip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestDensity {
    Zero,
    /// 1/((t+1)(t+2))
    RationalProduct,
    /// t/(1+t³)
    RationalCubic,
    /// exp(−t²)
    Gaussian,
}

impl TestDensity {
    pub const ALL: [TestDensity; 4] =
        [TestDensity::Zero, TestDensity::RationalProduct, TestDensity::RationalCubic, TestDensity::Gaussian];

    pub fn name(self) -> &'static str {
        match self {
            TestDensity::Zero => "zero",
            TestDensity::RationalProduct => "rational_product",
            TestDensity::RationalCubic => "rational_cubic",
            TestDensity::Gaussian => "gaussian",
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            TestDensity::Zero => 0.0,
            TestDensity::RationalProduct => 1.0 / ((t + 1.0) * (t + 2.0)),
            TestDensity::RationalCubic => t / (1.0 + t * t * t),
            TestDensity::Gaussian => (-t * t).exp(),
        }
    }

    /// The grid each catalog entry is audited on.
    pub fn default_grid(self) -> &'static [f64] {
        match self {
            TestDensity::RationalCubic => &[1.5],
            _ => &[0.5, 2.5, 7.5],
        }
    }

    fn shape(self) -> DensityShape {
        DensityShape { origin_power: 0.0, decay: 3.0 }
    }
}

/// f(x) = PV∫₀^∞ y(t)/(t−x) dt.
pub fn semiaxis_forward(y: TestDensity, x: f64, tolerance: f64) -> Result<QuadratureResult, QuadratureError> {
    pv_semiaxis(|t| y.eval(t), x, y.shape(), &PvOptions::new(tolerance))
}

/// ŷ(x) = −(√x/π²)·PV∫₀^∞ f(t)/(√t (t−x)) dt with f from [`semiaxis_forward`].
pub fn semiaxis_inverse(y: TestDensity, x: f64, tolerance: f64) -> Result<f64, QuadratureError> {
    let inner_tol = (tolerance * 1e-3).max(MIN_TOLERANCE);
    let failure: Cell<Option<QuadratureError>> = Cell::new(None);
    let g = |t: f64| match semiaxis_forward(y, t, inner_tol) {
        Ok(r) => r.value / t.sqrt(),
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    // f(t) ~ −(∫y)/t at infinity and ~ y(0)·ln(1/t) at the origin
    let shape = DensityShape { origin_power: -0.5, decay: 2.5 };
    let outer = pv_semiaxis(g, x, shape, &PvOptions::new(tolerance));
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(-x.sqrt() / (PI * PI) * outer?.value)
}

/// Forward then inverse transform of `y`, gated on |ŷ − y| ≤ [`ROUNDTRIP_BOUND`].
pub fn hilbert_pair_roundtrip(
    y: TestDensity,
    x_grid: &[f64],
    tolerance: f64,
) -> Result<Vec<CheckReport>, QuadratureError> {
    x_grid
        .par_iter()
        .map(|&x| {
            let reconstructed = semiaxis_inverse(y, x, tolerance)?;
            let exact = y.eval(x);
            Ok(CheckReport::gated(
                format!("hilbert_pair/{}/x={x}", y.name()),
                params([
                    ("x", x.into()),
                    ("tolerance", tolerance.into()),
                    ("reconstructed", reconstructed.into()),
                    ("exact", exact.into()),
                ]),
                reconstructed - exact,
                ROUNDTRIP_BOUND,
            ))
        })
        .collect()
}
