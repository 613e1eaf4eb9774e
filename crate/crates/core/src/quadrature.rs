//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! The 21-point Kronrod rule never samples the panel endpoints, so integrands
//! with integrable endpoint singularities (`k^{-1/2}` at `k = 0`) or a hard
//! infrared cutoff are only ever evaluated strictly inside the interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Result, UdwError};

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
    0.123_491_976_262_065_851_077_841_896_053_694,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

pub const DEFAULT_MAX_PANELS: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl QuadratureConfig {
    pub fn relative(rel_tol: f64) -> Self {
        QuadratureConfig {
            rel_tol,
            abs_tol: 0.0,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }

    fn target(&self, value: f64, mass: f64) -> f64 {
        // Below ~50 ulp the error estimate is dominated by rounding; with
        // cancellation the floor is set by int |f| instead of |int f|.
        let rel = self.rel_tol.max(50.0 * f64::EPSILON);
        self.abs_tol.max(rel * value.abs()).max(100.0 * f64::EPSILON * mass)
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig::relative(1e-9)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    mass: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[10] * (fc - mean).abs();
    let mut resabs = WGK[10] * fc.abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
        resabs += WGK[j] * (fv1[j].abs() + fv2[j].abs());
    }
    let resasc = resasc * half.abs();
    let resabs = resabs * half.abs();
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Panel {
        a,
        b,
        value,
        error,
        mass: resabs,
    }
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_with_breakpoints(f, &[a, b], &QuadratureConfig::relative(rel_tol))
}

/// Integrate over `[points[0], points[last]]`, never bisecting across the
/// interior breakpoints.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    if points.len() < 2 {
        return Err(invalid("quadrature needs at least two interval endpoints"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(invalid("quadrature endpoints must be finite"));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("quadrature endpoints must be non-decreasing"));
    }
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(&f, w[0], w[1]));
            evaluations += 21;
        }
    }
    let (mut value, mut error, mut mass) = totals(&heap, &frozen);
    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(UdwError::NonConvergence {
                value,
                error,
                panels: heap.len() + frozen.len(),
            });
        }
        if error <= cfg.target(value, mass) {
            // running sums drift; confirm with an ordered resummation
            (value, error, mass) = totals(&heap, &frozen);
            if error <= cfg.target(value, mass) {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: error,
                    evaluations,
                });
            }
        }
        let panels = heap.len() + frozen.len();
        let worst = match heap.pop() {
            Some(p) if panels < cfg.max_panels => p,
            _ => {
                let (value, error, _) = totals(&heap, &frozen);
                return Err(UdwError::NonConvergence {
                    value,
                    error,
                    panels,
                });
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            if heap.is_empty() {
                let (value, error, _) = totals(&heap, &frozen);
                return Err(UdwError::NonConvergence {
                    value,
                    error,
                    panels,
                });
            }
            continue;
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        mass += left.mass + right.mass - worst.mass;
        heap.push(left);
        heap.push(right);
        evaluations += 42;
    }
}

// Summed in interval order so the result does not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>, frozen: &[Panel]) -> (f64, f64, f64) {
    let mut all: Vec<&Panel> = heap.iter().chain(frozen.iter()).collect();
    all.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = all.iter().map(|p| p.value).sum();
    let error = all.iter().map(|p| p.error).sum();
    let mass = all.iter().map(|p| p.mass).sum();
    (value, error, mass)
}

/// Integrate `f` over `[a, inf)` via `x = a + (1 - t)/t`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_semi_infinite_with(f, a, &[], &QuadratureConfig::relative(rel_tol))
}

/// Semi-infinite integral with interior breakpoints. The finite part
/// `[a, last breakpoint]` is integrated directly, the tail through the
/// algebraic substitution; both share one global error budget.
pub fn integrate_semi_infinite_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    if !a.is_finite() {
        return Err(invalid("semi-infinite lower limit must be finite"));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p.is_finite()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let start = cuts.last().copied().unwrap_or(a);
    let span = start - a;
    // u in [0, 1] covers [a, start] linearly, u in [1, 2] the tail with t = u - 1
    let combined = |u: f64| {
        if u < 1.0 {
            f(a + u * span) * span
        } else {
            let t = u - 1.0;
            let v = f(start + (1.0 - t) / t);
            if v == 0.0 {
                0.0
            } else {
                v / (t * t)
            }
        }
    };
    let mut points = vec![if span > 0.0 { 0.0 } else { 1.0 }];
    points.extend(cuts.iter().map(|&x| (x - a) / span));
    points.push(2.0);
    integrate_with_breakpoints(combined, &points, cfg)
}
