//! Adaptive Gauss–Kronrod (7/15) quadrature over periodic intervals with seeded breakpoints.

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes (the 7-point rule).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
    pub initial_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-6,
            abs_tol: 1e-300,
            max_evaluations: 1 << 22,
            initial_panels: 16,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    estimate: f64,
    error: f64,
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Perturbs nodes off singular points: `f` may return a non-finite value exactly at a
/// singularity, in which case the node is shifted by a tiny amount and re-evaluated.
fn robust_eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> f64 {
    let v = f(x);
    if v.is_finite() {
        return v;
    }
    for k in 1..=4 {
        let dx = 1e-14 * (1.0 + x.abs()) * (k as f64);
        let w = f(x + dx);
        if w.is_finite() {
            return w;
        }
        let w = f(x - dx);
        if w.is_finite() {
            return w;
        }
    }
    v
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = robust_eval(f, c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = robust_eval(f, c - dx);
        let f2 = robust_eval(f, c + dx);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Panel {
        a,
        b,
        estimate: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Integrates `f` over `[a, b]` with breakpoints at `seeds` (ignored outside the interval).
///
/// Refinement proceeds in rounds: every panel whose error exceeds its share of the
/// tolerance is bisected, so the result does not depend on the thread count.
pub fn integrate<F>(f: F, a: f64, b: f64, seeds: &[f64], config: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut cuts: Vec<f64> = (0..=config.initial_panels.max(1))
        .map(|i| a + (b - a) * i as f64 / config.initial_panels.max(1) as f64)
        .collect();
    let min_gap = 1e-13 * (b - a).abs().max(1.0);
    cuts.extend(seeds.iter().copied().filter(|&s| s > a && s < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < min_gap);
    *cuts.last_mut().unwrap() = b;
    cuts[0] = a;

    let intervals: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let mut panels = crate::par::map_slice(&intervals, |&(x, y)| gauss_kronrod(&f, x, y));
    let mut evaluations = 15 * panels.len();

    loop {
        let total: f64 = panels.iter().map(|p| p.estimate).collect::<NeumaierSum>().value();
        let error: f64 = panels.iter().map(|p| p.error).collect::<NeumaierSum>().value();
        if !total.is_finite() || !error.is_finite() {
            return Err(Error::NonConvergence {
                estimate: total,
                error_estimate: error,
                evaluations,
            });
        }
        let tol = (config.rel_tol * total.abs()).max(config.abs_tol);
        if error <= tol {
            return Ok(Integral {
                value: total,
                error_estimate: error,
                evaluations,
            });
        }
        let share = tol / panels.len() as f64;
        let mut next_intervals = Vec::new();
        let mut kept = Vec::with_capacity(panels.len());
        for p in &panels {
            let mid = 0.5 * (p.a + p.b);
            if p.error > share && mid > p.a && mid < p.b {
                next_intervals.push((p.a, mid));
                next_intervals.push((mid, p.b));
            } else {
                kept.push(*p);
            }
        }
        if next_intervals.is_empty() || evaluations + 15 * next_intervals.len() > config.max_evaluations {
            return Err(Error::NonConvergence {
                estimate: total,
                error_estimate: error,
                evaluations,
            });
        }
        evaluations += 15 * next_intervals.len();
        let refined = crate::par::map_slice(&next_intervals, |&(x, y)| gauss_kronrod(&f, x, y));
        kept.extend(refined);
        kept.sort_by(|x, y| x.a.total_cmp(&y.a));
        panels = kept;
    }
}
