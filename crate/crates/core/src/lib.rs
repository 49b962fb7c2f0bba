//! Exact Mertens function tables and numerical audits of an inverse
//! Hilbert-transform estimate for |M(x)|.
//!
//! * [`sieve`]: μ, ω, segmented sieving, checkpointed M(n) tables and their
//!   file format.
//! * [`bounds`]: the estimator √x/(π√ε(x+ε)), the ε-integrality rule, the
//!   probabilistic bound and the classical explicit bounds.
//! * [`quadrature`]: principal-value integration on (0, ∞) and the
//!   semiaxis Hilbert pair.
//! * [`inversion`]: audits of the partial-sum lemma, the shifted harmonic
//!   sums, the digamma identity and the additive Möbius inversion.
//! * [`report`]: check reports, CSV output and summaries.
//! * [`suites`]: the standard audit grids.
//! * [`cli`]: the `mertens-audit` command line.

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod cli;
pub mod inversion;
pub mod quadrature;
pub mod report;
pub mod sieve;
pub mod special;
pub mod suites;
pub mod summation;

pub use report::CheckReport;
pub use sieve::MertensTable;
