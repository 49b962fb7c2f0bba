//! Principal-value quadrature on the positive semiaxis and the semiaxis
//! Hilbert transform pair built on it.
//!
//! Sign convention: kernels are written with (t − x) throughout. The
//! closed-form family [`pv_closed_form`] is stated with (x − t), so
//! [`pv_integral`] integrates the negated density against 1/(t − x).

mod gauss_kronrod;
mod hilbert;
mod pv;

pub use hilbert::{
    forward_hilbert_report, forward_hilbert_step, forward_hilbert_sum, hilbert_pair_roundtrip, hilbert_target,
    inverse_hilbert_estimate, semiaxis_forward, semiaxis_inverse, TestDensity, ROUNDTRIP_BOUND,
};
pub use pv::{
    pv_closed_form, pv_integral, pv_integral_with, pv_semiaxis, DensityShape, PvOptions, PvSpec,
    DEFAULT_MAX_EVALUATIONS, MIN_TOLERANCE,
};

use thiserror::Error;

use crate::sieve::SieveError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// A-posteriori estimate from successive refinement, not a guarantee.
    pub est_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("{name} = {value} is outside the admissible range")]
    Domain { name: &'static str, value: f64 },
    #[error("pole at integer x = {0} falls on a knot of the step function")]
    IntegerPole(f64),
    #[error("tail did not fall below tolerance by cutoff {cutoff}")]
    TailUnbounded { cutoff: f64 },
    #[error("tolerance not reached after {evaluations} evaluations: best {value}, est. error {est_error}")]
    NoConvergence { value: f64, est_error: f64, evaluations: usize },
    #[error(transparent)]
    Table(#[from] SieveError),
}
