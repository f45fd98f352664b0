//! Classical zero-distribution diagnostics for Blaschke products: `I(r)`, `J(r)`,
//! `ψ_r`, Stolz-angle counts and region counts.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::evaluators::SubharmonicSpec;
use crate::geometry::{region_contains, DiscPoint, RegionSpec};
use crate::means::circle_mean_mp;
use crate::measures::ZeroSequence;
use crate::sum::NeumaierSum;

pub const J_MAX_TERMS: usize = 1_000_000;

/// `I(r) = (1/2π) ∫ (log|B(re^{iθ})|)² dθ`.
///
/// A radius equal to the modulus of a zero is nudged outward by `1e-14`.
pub fn i_mean(zeros: &ZeroSequence, r: f64, rel_tol: f64) -> Result<f64> {
    let mut r = r;
    if zeros.zeros().iter().any(|z| z.point.modulus() == r) && r + 1e-14 < 1.0 {
        r += 1e-14;
    }
    let m = circle_mean_mp(&SubharmonicSpec::BlaschkeLogMod(zeros.clone()), r, 2.0, rel_tol)?;
    Ok(m * m)
}

/// Outcome of [`j_sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JSum {
    pub value: f64,
    pub terms: usize,
    /// Set when `J_MAX_TERMS` was reached before the stopping rule fired.
    pub truncated: bool,
}

/// `J(r) = Σ_k k^{-2} |(r^k - r^{-k}) Σ_{|a|≤r} ā^k + r^k Σ_{|a|>r} (ā^k - a^{-k})|²`.
///
/// Terms are summed until ten consecutive terms fall below `tol·(sum + 1)` with `k ≥ 50`.
pub fn j_sum(zeros: &ZeroSequence, r: f64, tol: f64) -> Result<JSum> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("j_sum needs r in (0, 1), got {r}")));
    }
    if !(tol > 0.0) {
        return Err(invalid("j_sum tolerance must be positive"));
    }
    if zeros.zeros().iter().any(|z| z.point.modulus() == 0.0) {
        return Err(invalid("j_sum is undefined for zeros at the origin (a^{-k} term)"));
    }
    // each zero contributes m[(ār)^k - (ā/r)^k] inside and m[(ār)^k - (r/a)^k] outside;
    // all four ratios have modulus at most 1
    let one = Complex64::new(1.0, 0.0);
    // (ratio_1, ratio_2, multiplicity, power_1, power_2)
    let mut active: Vec<(Complex64, Complex64, f64, Complex64, Complex64)> = zeros
        .zeros()
        .iter()
        .map(|z| {
            let a = z.point.to_complex();
            let second = if z.point.modulus() <= r { a.conj() / r } else { Complex64::new(r, 0.0) / a };
            (a.conj() * r, second, z.multiplicity as f64, one, one)
        })
        .collect();
    let mut acc = NeumaierSum::default();
    let mut small_run = 0;
    let mut k = 0;
    while k < J_MAX_TERMS {
        k += 1;
        let mut c = Complex64::new(0.0, 0.0);
        for e in active.iter_mut() {
            e.3 *= e.0;
            e.4 *= e.1;
            c += (e.3 - e.4) * e.2;
        }
        // powers below 1e-40 can no longer move the sum
        active.retain(|e| e.3.norm_sqr().max(e.4.norm_sqr()) * e.2 * e.2 > 1e-80);
        let term = c.norm_sqr() / (k as f64 * k as f64);
        acc.add(term);
        if term < tol * (acc.value() + 1.0) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 10 && k >= 50 {
            return Ok(JSum { value: acc.value(), terms: k, truncated: false });
        }
    }
    Ok(JSum { value: acc.value(), terms: k, truncated: true })
}

/// `ψ_r(ζ) = Σ_{r ≤ |a| < 1} m (1-|a|)² / |ζ - a|²`.
pub fn psi_r(zeros: &ZeroSequence, zeta: DiscPoint, r: f64) -> f64 {
    let z = zeta.to_complex();
    zeros
        .zeros()
        .iter()
        .filter(|a| a.point.modulus() >= r)
        .map(|a| {
            let d = 1.0 - a.point.modulus();
            a.multiplicity as f64 * d * d / (z - a.point.to_complex()).norm_sqr()
        })
        .collect::<NeumaierSum>()
        .value()
}

/// `Φ(ζ) = #{a : |1 - a ζ̄| < 2(1 - |a|)}`, counted with multiplicity.
pub fn stolz_count_phi(zeros: &ZeroSequence, zeta: DiscPoint) -> f64 {
    let zb = zeta.to_complex().conj();
    zeros
        .zeros()
        .iter()
        .filter(|a| (Complex64::new(1.0, 0.0) - a.point.to_complex() * zb).norm() < 2.0 * (1.0 - a.point.modulus()))
        .map(|a| a.multiplicity as f64)
        .sum()
}

/// `∫₀^{2π} (∫₀^{2π} P_r(θ, φ) ψ_r(e^{iθ}) dθ)^p dφ` with
/// `P_r(θ, φ) = (1-r²)/|re^{iθ} - e^{iφ}|²`, both integrals on an `n_grid` uniform grid.
pub fn vm_smoothed_condition(zeros: &ZeroSequence, r: f64, p: f64, n_grid: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(invalid(format!("radius must lie in [0, 1), got {r}")));
    }
    if !(p > 1.0) || n_grid == 0 {
        return Err(invalid("vm_smoothed_condition needs p > 1 and a non-empty grid"));
    }
    let h = 2.0 * PI / n_grid as f64;
    let psi: Vec<f64> = crate::par::map_indexed(n_grid, |i| psi_r(zeros, DiscPoint::boundary(i as f64 * h), r));
    let outer = crate::par::map_indexed(n_grid, |j| {
        let phi = j as f64 * h;
        let w = Complex64::from_polar(1.0, phi);
        let inner: f64 = psi
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let z = Complex64::from_polar(r, i as f64 * h);
                (1.0 - r * r) / (z - w).norm_sqr() * v
            })
            .collect::<NeumaierSum>()
            .value()
            * h;
        inner.powf(p)
    });
    Ok(outer.into_iter().collect::<NeumaierSum>().value() * h)
}

/// Zeros in the sector `{r ≤ |ζ| ≤ (1+r)/2, |arg ζ - φ| ≤ κ(1-r)^γ}`.
pub fn linden_region_count(zeros: &ZeroSequence, r: f64, phi: f64, kappa: f64, gamma: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) || !(kappa > 0.0) || !(gamma >= 0.0) {
        return Err(invalid("linden_region_count needs r in (0,1), kappa > 0, gamma >= 0"));
    }
    let region = RegionSpec::AnnulusSector { r, phi, sigma: kappa * (1.0 - r).powf(gamma) };
    Ok(zeros
        .zeros()
        .iter()
        .filter(|a| region_contains(&region, a.point))
        .map(|a| a.multiplicity as f64)
        .sum())
}

/// A function sampled on the uniform grid `θ_k = 2πk/N`, `N` a power of two `≥ 256`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunctionSample {
    values: Vec<f64>,
}

impl BoundaryFunctionSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 256 || !n.is_power_of_two() {
            return Err(invalid(format!("boundary sample size must be a power of two >= 256, got {n}")));
        }
        Ok(BoundaryFunctionSample { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        let h = 2.0 * PI / n as f64;
        Self::new(crate::par::map_indexed(n, |k| f(k as f64 * h)))
    }

    /// `ψ_r` on `n` points.
    pub fn psi(zeros: &ZeroSequence, r: f64, n: usize) -> Result<Self> {
        Self::from_fn(n, |t| psi_r(zeros, DiscPoint::boundary(t), r))
    }

    /// `Φ` on `n` points.
    pub fn stolz(zeros: &ZeroSequence, n: usize) -> Result<Self> {
        Self::from_fn(n, |t| stolz_count_phi(zeros, DiscPoint::boundary(t)))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn thetas(&self) -> Vec<f64> {
        let h = 2.0 * PI / self.values.len() as f64;
        (0..self.values.len()).map(|k| k as f64 * h).collect()
    }
}

/// `((1/2π)∫|g|^p)^{1/p}`, or `(1/2π)∫ g log⁺ g` when `xlogx` is set.
pub fn boundary_lp_norm(samples: &BoundaryFunctionSample, p: f64, xlogx: bool) -> Result<f64> {
    let n = samples.values.len() as f64;
    if xlogx {
        let s: NeumaierSum = samples
            .values
            .iter()
            .map(|&g| if g > 1.0 { g * g.ln() } else { 0.0 })
            .collect();
        return Ok(s.value() / n);
    }
    if !(p >= 1.0) {
        return Err(invalid(format!("p must be >= 1, got {p}")));
    }
    let s: NeumaierSum = samples.values.iter().map(|g| g.abs().powf(p)).collect();
    Ok((s.value() / n).powf(1.0 / p))
}
