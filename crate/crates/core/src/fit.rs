//! Least-squares power-law fits `F(x) ≈ A x^e` on log-log axes.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Result};

pub const DEFAULT_FLOOR_EPS: f64 = 1e-300;

/// A fitted power law.
///
/// `grid` holds the `(x, F)` pairs that entered the fit. Serialization emits only
/// `exponent`, `amplitude` and `r_squared`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GrowthFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    #[serde(default)]
    pub grid: Vec<(f64, f64)>,
    #[serde(default)]
    pub degenerate: bool,
}

impl Serialize for GrowthFit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GrowthFit", 3)?;
        st.serialize_field("exponent", &self.exponent)?;
        st.serialize_field("amplitude", &self.amplitude)?;
        st.serialize_field("r_squared", &self.r_squared)?;
        st.end()
    }
}

impl GrowthFit {
    /// The same fit with the sign of the exponent flipped, for `F ~ x^{-ρ}` reporting `ρ`.
    pub fn negated(mut self) -> Self {
        self.exponent = -self.exponent;
        if self.exponent == 0.0 {
            self.exponent = 0.0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fit serializes")
    }
}

/// Fits `log max(F, floor_eps) = log A + e log x` by ordinary least squares.
///
/// Samples with non-positive or non-finite `x`, or negative or non-finite `F`, are dropped;
/// at least four distinct `x` values must remain.
pub fn fit_exponent(samples: &[(f64, f64)], floor_eps: f64) -> Result<GrowthFit> {
    if !(floor_eps > 0.0) {
        return Err(invalid("floor_eps must be positive"));
    }
    let grid: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(x, y)| x > 0.0 && x.is_finite() && y >= 0.0 && y.is_finite())
        .collect();
    let mut xs: Vec<f64> = grid.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if grid.len() < 4 || xs.len() < 4 {
        return Err(invalid(format!(
            "fit needs at least 4 valid samples with distinct x, got {}",
            xs.len().min(grid.len())
        )));
    }
    if grid.iter().all(|&(_, y)| y <= floor_eps) {
        return Ok(GrowthFit {
            exponent: 0.0,
            amplitude: 0.0,
            r_squared: 1.0,
            grid,
            degenerate: true,
        });
    }
    let n = grid.len() as f64;
    let lx: Vec<f64> = grid.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = grid.iter().map(|p| p.1.max(floor_eps).ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let scale = ly.iter().map(|y| y.abs()).fold(1.0, f64::max);
    let r_squared = if syy <= 1e-28 * scale * scale * n {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(GrowthFit {
        exponent: slope,
        amplitude: intercept.exp(),
        r_squared,
        grid,
        degenerate: false,
    })
}

/// `r_j = 1 - 2^{-j}` for `j = j0..=j1`.
pub fn dyadic_radii(j0: u32, j1: u32) -> Vec<f64> {
    (j0..=j1).map(|j| 1.0 - (-(j as f64)).exp2()).collect()
}

/// `δ_j = 2^{-j}` for `j = j0..=j1`.
pub fn dyadic_deltas(j0: u32, j1: u32) -> Vec<f64> {
    (j0..=j1).map(|j| (-(j as f64)).exp2()).collect()
}
