//! Primary factors, the Green-type kernels `K` and `K_s`, and the kernels `S_q`, `P_q`.
//!
//! Kernel values are plain `f64`; `±∞` marks the diagonal `z = ζ` (see the
//! individual functions for the sign convention).

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::geometry::{mobius_a_unchecked, one_minus_sqr, DiscPoint};

/// Pseudohyperbolic distance below which kernels report their diagonal value.
pub const DIAGONAL_EPS: f64 = 1e-8;

/// Series cut-over for `log|E(w, s)|`: below this modulus the tail series is summed.
const SERIES_RADIUS: f64 = 0.5;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `log|E(w, s)| = log|1 - w| + Σ_{j=1..s} Re(w^j)/j`; `-∞` iff `w = 1`.
pub fn log_primary_factor(w: Complex64, s: u32) -> f64 {
    if w.norm() < SERIES_RADIUS {
        return -tail_series(w, s);
    }
    let d = ONE - w;
    if d.re == 0.0 && d.im == 0.0 {
        return f64::NEG_INFINITY;
    }
    d.norm().ln() + head_series(w, s)
}

/// `Re Σ_{j=1..s} w^j / j`.
#[inline]
fn head_series(w: Complex64, s: u32) -> f64 {
    let mut acc = 0.0;
    let mut pow = ONE;
    for j in 1..=s {
        pow *= w;
        acc += pow.re / j as f64;
    }
    acc
}

/// `Re Σ_{j>s} w^j / j` for `|w| < 1/2`, i.e. `-log|E(w, s)|` without cancellation.
#[inline]
fn tail_series(w: Complex64, s: u32) -> f64 {
    let r = w.norm();
    if r == 0.0 {
        return 0.0;
    }
    let mut pow = w.powu(s + 1);
    let mut acc = 0.0;
    let mut j = s + 1;
    let mut mag = pow.norm();
    loop {
        acc += pow.re / j as f64;
        mag *= r;
        if mag < 1e-17 * acc.abs().max(f64::MIN_POSITIVE) || j > s + 200 {
            break;
        }
        pow *= w;
        j += 1;
    }
    acc
}

/// Green function `G(z, ζ) = log|(1 - z ζ̄)/(z - ζ)|` in the cancellation-free form
/// `½ log(1 + (1-|z|²)(1-|ζ|²)/|z-ζ|²)`. `+∞` when `z = ζ`.
#[inline]
pub(crate) fn green(z: Complex64, zeta: Complex64) -> f64 {
    let d2 = (z - zeta).norm_sqr();
    let num = one_minus_sqr(z.norm()) * one_minus_sqr(zeta.norm());
    if d2 == 0.0 {
        return f64::INFINITY;
    }
    0.5 * (num / d2).ln_1p()
}

/// `log|E(A(z, ζ), s)|` for `|z| < 1`, `|ζ| < 1`, without the diagonal marker.
#[inline]
pub(crate) fn log_primary_at(z: Complex64, zeta: DiscPoint, s: u32) -> f64 {
    let a = mobius_a_unchecked(z, zeta);
    if a.norm() < SERIES_RADIUS {
        return -tail_series(a, s);
    }
    // 1 - A(z, ζ) = ζ̄ (ζ - z) / (1 - z ζ̄)
    let rho = zeta.modulus();
    if rho == 0.0 {
        return f64::NEG_INFINITY;
    }
    rho.ln() - green(z, zeta.to_complex()) + head_series(a, s)
}

/// `K_s` at an interior `ζ` without the diagonal marker (`+∞` exactly at `z = ζ`).
/// For `s = 0` this is `K(z, ζ) = G(z, ζ)/(1 - |ζ|)`.
#[inline]
pub(crate) fn ks_interior(z: Complex64, zeta: DiscPoint, s: u32) -> f64 {
    let gap = 1.0 - zeta.modulus();
    if s == 0 {
        return green(z, zeta.to_complex()) / gap;
    }
    -log_primary_at(z, zeta, s) / gap.powi(s as i32 + 1)
}

/// Boundary value of `K_s(z, ·)` at `e^{iθ}`: the Poisson kernel for `s = 0`,
/// `(2^{s+1}/(s+1)) Re (1 - z e^{-iθ})^{-(s+1)}` for `s ≥ 1`.
#[inline]
pub(crate) fn ks_boundary(z: Complex64, theta: f64, s: u32) -> f64 {
    let e = Complex64::from_polar(1.0, -theta);
    let u = ONE - z * e;
    if s == 0 {
        return one_minus_sqr(z.norm()) / u.norm_sqr();
    }
    let n = s + 1;
    2f64.powi(n as i32) / n as f64 * u.powu(n).inv().re
}

/// `∫_a^b K_s(z, e^{iθ}) dθ` in closed form.
///
/// With `u = 1 - z e^{-iθ}`, `F(θ) = θ - i (Log u - Σ_{k=2}^{n} u^{1-k}/(k-1))`
/// is an antiderivative of `u^{-n}`; `Re u > 0` keeps `Log u` continuous.
pub(crate) fn ks_boundary_integral(z: Complex64, a: f64, b: f64, s: u32) -> f64 {
    let n = s + 1;
    let anti = |theta: f64| -> f64 {
        let u = ONE - z * Complex64::from_polar(1.0, -theta);
        let mut x = u.ln();
        let inv = u.inv();
        let mut pw = ONE;
        for k in 2..=n {
            pw *= inv;
            x -= pw / (k - 1) as f64;
        }
        theta + x.im
    };
    let re_integral = anti(b) - anti(a);
    if s == 0 {
        // P_0 = 2 Re(1/u) - 1
        2.0 * re_integral - (b - a)
    } else {
        2f64.powi(n as i32) / n as f64 * re_integral
    }
}

#[inline]
fn is_boundary(zeta: &DiscPoint) -> bool {
    !zeta.is_interior()
}

/// `K(z, ζ) = G(z, ζ)/(1 - |ζ|)`, extended by the Poisson kernel for `|ζ| = 1`.
///
/// Returns `+∞` when `z` and `ζ` are within pseudohyperbolic distance [`DIAGONAL_EPS`].
pub fn kernel_k(z: DiscPoint, zeta: DiscPoint) -> Result<f64> {
    z.require_interior("kernel_k")?;
    let zc = z.to_complex();
    if is_boundary(&zeta) {
        return Ok(ks_boundary(zc, zeta.arg(), 0));
    }
    if crate::geometry::pseudo_modulus(zc, zeta.to_complex()) < DIAGONAL_EPS {
        return Ok(f64::INFINITY);
    }
    Ok(ks_interior(zc, zeta, 0))
}

/// `K_s(z, ζ) = -log|E(A(z, ζ), s)|/(1 - |ζ|)^{s+1}` for `s ≥ 1`; `K_0 = K`.
///
/// On the diagonal this returns the conventional value `-∞` for every `s`.
/// On the boundary it returns the uniform limit as `|ζ| → 1`.
pub fn kernel_ks(z: DiscPoint, zeta: DiscPoint, s: u32) -> Result<f64> {
    z.require_interior("kernel_ks")?;
    let zc = z.to_complex();
    if is_boundary(&zeta) {
        return Ok(ks_boundary(zc, zeta.arg(), s));
    }
    if crate::geometry::pseudo_modulus(zc, zeta.to_complex()) < DIAGONAL_EPS {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ks_interior(zc, zeta, s))
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> f64 {
    // the Lanczos sum is most accurate on [1, 2]; move there by the recurrence
    if !(x > 0.0) || x > 160.0 || !x.is_finite() {
        return statrs::function::gamma::gamma(x);
    }
    let mut y = x;
    let mut scale = 1.0;
    while y > 2.0 {
        y -= 1.0;
        scale *= y;
    }
    while y < 1.0 {
        scale /= y;
        y += 1.0;
    }
    scale * statrs::function::gamma::gamma(y)
}

/// `S_q(z) = Γ(1+q)(2/(1-z)^{q+1} - 1)` and `P_q = Re S_q` (principal power).
pub fn kernel_pq_sq(z: DiscPoint, q: f64) -> Result<(Complex64, f64)> {
    z.require_interior("kernel_pq_sq")?;
    if !(q > -1.0 && q.is_finite()) {
        return Err(domain(format!("q must be > -1, got {q}")));
    }
    let base = ONE - z.to_complex();
    let s = gamma(1.0 + q) * (2.0 * base.powf(q + 1.0).inv() - ONE);
    Ok((s, s.re))
}
