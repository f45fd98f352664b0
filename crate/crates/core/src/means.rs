//! Integral means `m_p(r, u)`, maxima on circles and order estimates.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, invalid, Result};
use crate::evaluators::SubharmonicSpec;
use crate::fit::{dyadic_radii, fit_exponent, GrowthFit, DEFAULT_FLOOR_EPS};
use crate::quadrature::{integrate, QuadratureConfig};

pub const DEFAULT_REL_TOL: f64 = 1e-6;

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(domain(format!("radius must lie in [0, 1), got {r}")))
    }
}

/// `m_p(r, u) = ((1/2π) ∫ |u(re^{iθ})|^p dθ)^{1/p}` by adaptive quadrature.
pub fn circle_mean_mp(u: &SubharmonicSpec, r: f64, p: f64, rel_tol: f64) -> Result<f64> {
    circle_mean_with(u, r, p, &QuadratureConfig { rel_tol, ..Default::default() })
}

/// [`circle_mean_mp`] with full control over the quadrature settings.
pub fn circle_mean_with(u: &SubharmonicSpec, r: f64, p: f64, config: &QuadratureConfig) -> Result<f64> {
    check_radius(r)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("p must be >= 1, got {p}")));
    }
    if !(config.rel_tol > 1e-12 && config.rel_tol < 1e-2) {
        return Err(invalid(format!("rel_tol must lie in (1e-12, 1e-2), got {}", config.rel_tol)));
    }
    if let SubharmonicSpec::Constant(c) = u {
        return Ok(c.abs());
    }
    let prepared = u.prepare();
    let seeds = u.singular_angles(r);
    let f = |t: f64| {
        let v = prepared.eval(Complex64::from_polar(r, t));
        if v == f64::NEG_INFINITY {
            return v;
        }
        v.abs().powf(p)
    };
    let integral = integrate(f, -PI, PI, &seeds, config)?;
    Ok((integral.value / (2.0 * PI)).max(0.0).powf(1.0 / p))
}

/// `max_θ u(re^{iθ})`: a uniform scan refined by golden-section search around the best node.
pub fn max_on_circle(u: &SubharmonicSpec, r: f64, n_grid: usize) -> Result<f64> {
    check_radius(r)?;
    if n_grid < 3 {
        return Err(invalid("max_on_circle needs at least 3 grid points"));
    }
    if let SubharmonicSpec::Constant(c) = u {
        return Ok(*c);
    }
    let prepared = u.prepare();
    let g = |t: f64| prepared.eval(Complex64::from_polar(r, t));
    let h = 2.0 * PI / n_grid as f64;
    let values = crate::par::map_indexed(n_grid, |i| g(-PI + i as f64 * h));
    let (best, &best_val) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("non-empty grid");
    let centre = -PI + best as f64 * h;
    let (mut lo, mut hi) = (centre - h, centre + h);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    let mut top = best_val.max(f1).max(f2);
    for _ in 0..30 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
            top = top.max(f2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
            top = top.max(f1);
        }
    }
    Ok(top)
}

/// Fits `m_p(r, u) ~ A (1-r)^{-ρ}` over `r = 1 - 2^{-j}`, `j = j0..=j1`, reporting `ρ`.
pub fn rho_estimate(u: &SubharmonicSpec, p: f64, j0: u32, j1: u32, rel_tol: f64) -> Result<GrowthFit> {
    if j1 < j0 + 3 {
        return Err(invalid(format!("dyadic grid {j0}:{j1} needs j1 >= j0 + 3")));
    }
    let radii = dyadic_radii(j0, j1);
    let means = mean_profile(u, &radii, p, rel_tol)?;
    let samples: Vec<(f64, f64)> = radii.iter().zip(&means).map(|(r, m)| (1.0 - r, *m)).collect();
    Ok(fit_exponent(&samples, DEFAULT_FLOOR_EPS)?.negated())
}

/// `m_p(r, u)` at every radius, evaluated concurrently.
pub fn mean_profile(u: &SubharmonicSpec, radii: &[f64], p: f64, rel_tol: f64) -> Result<Vec<f64>> {
    crate::par::map_slice(radii, |&r| circle_mean_mp(u, r, p, rel_tol))
        .into_iter()
        .collect()
}
