use std::f64::consts::PI;

use super::gauss_kronrod::integrate;
use super::{QuadratureError, QuadratureResult};

/// Default evaluation budget for one principal-value integral.
pub const DEFAULT_MAX_EVALUATIONS: usize = 4_000_000;

/// Smallest accepted absolute tolerance.
pub const MIN_TOLERANCE: f64 = 1e-12;

/// An instance of PV ∫₀^∞ t^(μ−1) / ((t + ε)(x − t)) dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvSpec {
    mu: f64,
    epsilon: f64,
    x: f64,
}

impl PvSpec {
    pub fn new(mu: f64, epsilon: f64, x: f64) -> Result<Self, QuadratureError> {
        if !(mu > 0.0 && mu < 2.0) {
            return Err(QuadratureError::Domain { name: "mu", value: mu });
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(QuadratureError::Domain { name: "epsilon", value: epsilon });
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(QuadratureError::Domain { name: "x", value: x });
        }
        Ok(Self { mu, epsilon, x })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// Closed form of PV ∫₀^∞ t^(μ−1)/((t+ε)(x−t)) dt:
/// (π/(x+ε))·[ε^(μ−1)/sin(μπ) + x^(μ−1)·cot(μπ)], and ln(x/ε)/(x+ε) at μ = 1.
pub fn pv_closed_form(spec: &PvSpec) -> f64 {
    let PvSpec { mu, epsilon, x } = *spec;
    if mu == 1.0 {
        return (x / epsilon).ln() / (x + epsilon);
    }
    let s = (mu * PI).sin();
    let c = (mu * PI).cos();
    PI / (x + epsilon) * (epsilon.powf(mu - 1.0) / s + x.powf(mu - 1.0) * c / s)
}

/// Knobs for [`pv_semiaxis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvOptions {
    /// Absolute error target.
    pub tolerance: f64,
    /// Half-width of the window around the pole; `None` uses min(1, x/4).
    pub window: Option<f64>,
    pub max_evaluations: usize,
}

impl PvOptions {
    pub fn new(tolerance: f64) -> Self {
        Self { tolerance, window: None, max_evaluations: DEFAULT_MAX_EVALUATIONS }
    }
}

/// Shape information about the density g in PV ∫₀^∞ g(t)/(t − x) dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityShape {
    /// g(t) ~ t^p as t → 0; must exceed −1.
    pub origin_power: f64,
    /// |g(t)/(t − x)| ~ t^(−q) as t → ∞; must exceed 1.
    pub decay: f64,
}

/// PV ∫₀^∞ g(t)/(t − x) dt for x > 0.
///
/// The axis is split into
/// * [0, x/2], mapped by t = u^k with k = ⌈1/(p+1)⌉ to soften the origin weight t^p;
/// * [x/2, x − δ];
/// * the pole window, folded onto ∫₀^δ [g(x+s) − g(x−s)]/s ds so the odd
///   part of the kernel cancels exactly;
/// * geometric panels [b, 2b] from x + δ out to a cutoff T;
/// * the tail beyond T, replaced by its leading power-law term. T is the
///   first doubling at which that term is below tolerance/10.
///
/// Everything except the tail shares one globally adaptive Gauss–Kronrod
/// pass. `est_error` is the summed |Kronrod − Gauss| plus the tail term.
pub fn pv_semiaxis<G>(g: G, x: f64, shape: DensityShape, opts: &PvOptions) -> Result<QuadratureResult, QuadratureError>
where
    G: Fn(f64) -> f64,
{
    if !(x > 0.0 && x.is_finite()) {
        return Err(QuadratureError::Domain { name: "x", value: x });
    }
    if !(opts.tolerance >= MIN_TOLERANCE) {
        return Err(QuadratureError::Domain { name: "tolerance", value: opts.tolerance });
    }
    if !(shape.origin_power > -1.0) || !(shape.decay > 1.0) {
        return Err(QuadratureError::Domain {
            name: "density shape",
            value: if shape.origin_power > -1.0 { shape.decay } else { shape.origin_power },
        });
    }
    let delta = opts.window.unwrap_or_else(|| (x / 4.0).min(1.0));
    if !(delta > 0.0 && delta <= x / 2.0) {
        return Err(QuadratureError::Domain { name: "window", value: delta });
    }

    let tail_term = |t: f64| g(t) / (t - x) * t / (shape.decay - 1.0);
    let start = x + delta;
    let mut cutoff = (4.0 * start).max(16.0);
    let mut tail = tail_term(cutoff);
    let mut doublings = 0;
    while !(tail.abs() < opts.tolerance / 10.0) {
        cutoff *= 2.0;
        tail = tail_term(cutoff);
        doublings += 1;
        if doublings > 400 || !cutoff.is_finite() {
            return Err(QuadratureError::TailUnbounded { cutoff });
        }
    }

    let k = (1.0 / (shape.origin_power + 1.0)).ceil().max(1.0);
    let k_int = k as i32;
    let half = x / 2.0;

    const ORIGIN: usize = 0;
    const LEFT: usize = 1;
    const WINDOW: usize = 2;
    const RIGHT: usize = 3;

    let mut intervals = vec![(ORIGIN, 0.0, half.powf(1.0 / k)), (LEFT, half, x - delta), (WINDOW, 0.0, delta)];
    let mut b = start;
    while b < cutoff {
        let next = (2.0 * b).min(cutoff);
        intervals.push((RIGHT, b, next));
        b = next;
    }

    let integrand = |tag: usize, z: f64| -> f64 {
        match tag {
            ORIGIN => {
                let t = z.powi(k_int);
                if t == 0.0 {
                    return 0.0;
                }
                k * z.powi(k_int - 1) * g(t) / (t - x)
            }
            LEFT | RIGHT => g(z) / (z - x),
            _ => (g(x + z) - g(x - z)) / z,
        }
    };

    // tail already spends tolerance/10
    let budget = opts.tolerance * 0.9;
    let r = integrate(integrand, &intervals, budget, opts.max_evaluations);
    let value = r.value + tail;
    let est_error = r.err + tail.abs();
    let evaluations = r.evaluations.max(1);
    if !r.converged || !value.is_finite() {
        return Err(QuadratureError::NoConvergence { value, est_error, evaluations });
    }
    Ok(QuadratureResult { value, est_error, evaluations })
}

/// Numerical PV ∫₀^∞ t^(μ−1)/((t+ε)(x−t)) dt.
pub fn pv_integral(spec: &PvSpec, tolerance: f64) -> Result<QuadratureResult, QuadratureError> {
    pv_integral_with(spec, &PvOptions::new(tolerance))
}

/// [`pv_integral`] with explicit options (e.g. a custom pole window).
pub fn pv_integral_with(spec: &PvSpec, opts: &PvOptions) -> Result<QuadratureResult, QuadratureError> {
    let PvSpec { mu, epsilon, x } = *spec;
    // (x − t) = −(t − x): integrate the negated density against 1/(t − x)
    let g = move |t: f64| -t.powf(mu - 1.0) / (t + epsilon);
    let shape = DensityShape { origin_power: mu - 1.0, decay: 3.0 - mu };
    pv_semiaxis(g, x, shape, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_form_examples() {
        let cf = |mu, e, x| pv_closed_form(&PvSpec::new(mu, e, x).unwrap());
        assert!((cf(0.5, 1.0, 1.0) - PI / 2.0).abs() < 1e-15);
        // 50-digit references
        assert!(rel(cf(0.5, 0.2, 100.4), 0.069829172276746783232) < 1e-14);
        assert!(rel(cf(1.0, 1.0, std::f64::consts::E), 0.26894142136999512075) < 1e-15);
        assert!(rel(cf(1.5, 0.5, 10.5), -0.20194922446174392032) < 1e-14);
    }

    #[test]
    fn closed_form_matches_independent_quadrature() {
        // mpmath quadrature of the PV integral at 50 digits
        let cases = [
            (0.25, 0.1, 10.5, 2.4078071991407158667),
            (1.5, 0.5, 10.5, -0.20194922446174392032),
            (0.75, 0.9, 100.4, 0.035231945376882836769),
        ];
        for (mu, e, x, want) in cases {
            let cf = pv_closed_form(&PvSpec::new(mu, e, x).unwrap());
            assert!(rel(cf, want) < 1e-12, "mu={mu} eps={e} x={x}: {cf} vs {want}");
        }
    }

    #[test]
    fn spec_rejects_bad_mu() {
        assert!(PvSpec::new(0.0, 1.0, 1.0).is_err());
        assert!(PvSpec::new(2.0, 1.0, 1.0).is_err());
        assert!(PvSpec::new(0.5, 0.0, 1.0).is_err());
        assert!(PvSpec::new(0.5, 1.0, -1.0).is_err());
    }

    #[test]
    fn integral_examples() {
        let s = PvSpec::new(0.5, 1.0, 1.0).unwrap();
        let r = pv_integral(&s, 1e-8).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-7, "{r:?}");

        let s = PvSpec::new(0.5, 0.2, 100.4).unwrap();
        let r = pv_integral(&s, 1e-8).unwrap();
        assert!(rel(r.value, pv_closed_form(&s)) < 1e-6, "{r:?}");
        assert!(rel(r.value, 0.069829172276746783232) < 1e-6);

        let s = PvSpec::new(1.5, 0.5, 10.5).unwrap();
        let r = pv_integral(&s, 1e-8).unwrap();
        assert!(rel(r.value, pv_closed_form(&s)) < 1e-6, "{r:?}");
    }

    #[test]
    fn logarithmic_branch() {
        let s = PvSpec::new(1.0, 1.0, std::f64::consts::E).unwrap();
        let r = pv_integral(&s, 1e-8).unwrap();
        assert!((r.value - 1.0 / (std::f64::consts::E + 1.0)).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn tolerance_floor() {
        let s = PvSpec::new(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(pv_integral(&s, 1e-13), Err(QuadratureError::Domain { .. })));
    }

    #[test]
    fn budget_exhaustion_carries_best_value() {
        let s = PvSpec::new(0.5, 0.2, 100.4).unwrap();
        let opts = PvOptions { max_evaluations: 200, ..PvOptions::new(1e-12) };
        match pv_integral_with(&s, &opts) {
            Err(QuadratureError::NoConvergence { value, est_error, .. }) => {
                assert!(value.is_finite() && est_error > 0.0);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn window_halving_is_stable() {
        let s = PvSpec::new(0.5, 0.5, 10.5).unwrap();
        let full = pv_integral(&s, 1e-8).unwrap();
        let halved = pv_integral_with(&s, &PvOptions { window: Some(0.5), ..PvOptions::new(1e-8) }).unwrap();
        assert!((full.value - halved.value).abs() < full.est_error);
    }
}
