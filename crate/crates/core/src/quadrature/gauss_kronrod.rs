//! Globally adaptive 21-point Gauss–Kronrod integration over a set of
//! tagged intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae on [0, 1); odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_626_368_323,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub(crate) const EVALS_PER_RULE: usize = 21;

/// Kronrod estimate and |Kronrod − Gauss| on [a, b].
pub(crate) fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs = WGK[10] * fc.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err, abs * half.abs())
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    tag: usize,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Adaptive {
    pub value: f64,
    pub err: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct State {
    heap: BinaryHeap<Piece>,
    settled_value: f64,
    settled_err: f64,
    active_err: f64,
    evaluations: usize,
}

impl State {
    fn push<F: FnMut(usize, f64) -> f64>(&mut self, f: &mut F, tag: usize, a: f64, b: f64) {
        let (value, err, abs) = gk21(&mut |z| f(tag, z), a, b);
        self.evaluations += EVALS_PER_RULE;
        let floor = 50.0 * f64::EPSILON * abs;
        let exhausted = (b - a).abs() <= 1e-13 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        if err <= floor || exhausted || !err.is_finite() {
            self.settled_value += value;
            self.settled_err += err.max(floor);
        } else {
            self.active_err += err;
            self.heap.push(Piece { tag, a, b, value, err });
        }
    }

    fn resync(&mut self) {
        self.active_err = self.heap.iter().map(|p| p.err).sum();
    }
}

/// Integrate `f(tag, z)` over every `(tag, a, b)` in `intervals`, bisecting
/// the interval with the largest error until the summed error is at most
/// `tolerance` or `max_evals` is spent.
///
/// An interval whose error is already at the roundoff floor (relative to
/// its absolute integral) is not subdivided further.
pub(crate) fn integrate<F>(mut f: F, intervals: &[(usize, f64, f64)], tolerance: f64, max_evals: usize) -> Adaptive
where
    F: FnMut(usize, f64) -> f64,
{
    let mut st =
        State { heap: BinaryHeap::new(), settled_value: 0.0, settled_err: 0.0, active_err: 0.0, evaluations: 0 };
    for &(tag, a, b) in intervals {
        if a != b {
            st.push(&mut f, tag, a, b);
        }
    }

    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps.is_multiple_of(256) {
            st.resync();
        }
        let mut total_err = st.settled_err + st.active_err;
        let out_of_budget = st.evaluations + 2 * EVALS_PER_RULE > max_evals;
        if total_err <= tolerance || st.heap.is_empty() || out_of_budget {
            st.resync();
            total_err = st.settled_err + st.active_err;
            if total_err <= tolerance || st.heap.is_empty() || out_of_budget {
                let value = st.settled_value + st.heap.iter().map(|p| p.value).sum::<f64>();
                return Adaptive {
                    value,
                    err: total_err,
                    evaluations: st.evaluations,
                    converged: total_err <= tolerance || (st.heap.is_empty() && total_err.is_finite()),
                };
            }
        }
        let worst = st.heap.pop().expect("heap is non-empty");
        st.active_err -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        st.push(&mut f, worst.tag, worst.a, mid);
        st.push(&mut f, worst.tag, mid, worst.b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let (v, e, _) = gk21(&mut |x: f64| x.powi(9) - 3.0 * x * x, 0.0, 2.0);
        assert!((v - (1024.0 / 10.0 - 8.0)).abs() < 1e-11);
        assert!(e < 1e-12);
    }

    #[test]
    fn adaptive_sqrt_singularity() {
        let r = integrate(|_, x: f64| 1.0 / x.sqrt(), &[(0, 0.0, 1.0)], 1e-10, 1_000_000);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn tagged_intervals_sum() {
        let r = integrate(
            |tag, x: f64| if tag == 0 { x.sin() } else { x.exp() },
            &[(0, 0.0, std::f64::consts::PI), (1, 0.0, 1.0)],
            1e-12,
            100_000,
        );
        assert!((r.value - (2.0 + std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(|_, x: f64| (1.0 / x).sin(), &[(0, 1e-9, 1.0)], 1e-14, 500);
        assert!(!r.converged);
        assert!(r.evaluations <= 500);
    }
}
