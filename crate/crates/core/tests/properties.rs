use proptest::prelude::*;

use mertens_audit::bounds::{epsilon_for, estimate, estimate_alpha, x_from_theta};
use mertens_audit::inversion::harmonic_shift_sum;
use mertens_audit::quadrature::inverse_hilbert_estimate;
use mertens_audit::sieve::{mertens_scan, mobius_block_with_limit, mobius_naive};
use mertens_audit::special::digamma;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn alpha_form_matches_epsilon_form(x in 1.0f64..1e6, alpha in 0.001f64..0.999) {
        let a = estimate_alpha(x, alpha).unwrap();
        let b = estimate(x, 1.0 - alpha).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * b.abs());
    }

    #[test]
    fn theta_round_trip(n in 1u64..1_000_000, theta in 0.001f64..0.999) {
        let c = x_from_theta(n, theta).unwrap();
        let back = epsilon_for(c.x).unwrap();
        prop_assert_eq!(back.n, n);
        prop_assert!((back.epsilon - c.epsilon).abs() < 1e-9);
        prop_assert_eq!(back.integer_target(), 2 * n + 1);
    }

    #[test]
    fn estimate_decreases_in_epsilon(x in 1.0f64..1e6, e1 in 0.001f64..0.999, e2 in 0.001f64..0.999) {
        prop_assume!(e1 < e2);
        prop_assert!(estimate(x, e1).unwrap() > estimate(x, e2).unwrap());
    }

    #[test]
    fn digamma_recurrence(y in -1000.0f64..1000.0) {
        prop_assume!((y - y.round()).abs() > 1e-3 && (y + 1.0 - (y + 1.0).round()).abs() > 1e-3);
        let lhs = digamma(y + 1.0).unwrap();
        let rhs = digamma(y).unwrap() + 1.0 / y;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0), "y={} {} vs {}", y, lhs, rhs);
    }

    #[test]
    fn harmonic_recurrence(x in 0.01f64..500.0, upto in 1u64..5000) {
        prop_assume!(x != x.floor());
        let a = harmonic_shift_sum(x, upto).unwrap();
        let b = harmonic_shift_sum(x, upto + 1).unwrap();
        let step = 1.0 / ((upto + 1) as f64 - x);
        prop_assert!((b - a - step).abs() <= 1e-9 * (1.0 + a.abs() + step.abs()));
    }

    #[test]
    fn block_matches_naive(lo in 1u64..10_000_000_000, len in 1u64..2000) {
        let hi = lo + len - 1;
        let block = mobius_block_with_limit(lo, hi, len).unwrap();
        for (i, &m) in block.iter().enumerate().step_by(7) {
            prop_assert_eq!(m, mobius_naive(lo + i as u64).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scan_is_block_size_invariant(limit in 1u64..200_000, stride_frac in 0.0001f64..1.0, b1 in 1u64..70_000, b2 in 1u64..70_000) {
        let stride = ((limit as f64 * stride_frac) as u64).max(1);
        let a = mertens_scan(limit, stride, b1).unwrap();
        let b = mertens_scan(limit, stride, b2).unwrap();
        prop_assert_eq!(a.checkpoints(), b.checkpoints());
    }

    #[test]
    fn inverse_estimate_self_check(x in 0.5f64..2000.0, eps in 0.05f64..0.95) {
        let via = inverse_hilbert_estimate(x, eps, 1e-10).unwrap();
        let direct = estimate(x, eps).unwrap();
        prop_assert!(((via - direct) / direct).abs() < 1e-6, "x={} eps={} {} vs {}", x, eps, via, direct);
    }
}

proptest! {
    #[test]
    fn digamma_matches_statrs(y in 0.05f64..1e5) {
        let ours = digamma(y).unwrap();
        let theirs = statrs::function::gamma::digamma(y);
        prop_assert!((ours - theirs).abs() <= 1e-10 * ours.abs().max(1.0), "y={} {} vs {}", y, ours, theirs);
    }
}
