//! Points, regions and elementary maps of the closed unit disc.
//!
//! Boundary points (`|z| = 1`) are representable so they can carry boundary
//! measures and be tested against regions. Formulas that need an interior
//! point reject them with [`Error::Domain`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// Slack used when ingesting points and when testing closed region boundaries.
pub const EPS_GEOM: f64 = 1e-12;

/// A point of the closed unit disc in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct DiscPoint {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    re: f64,
    im: f64,
}

impl TryFrom<RawPoint> for DiscPoint {
    type Error = Error;
    fn try_from(p: RawPoint) -> Result<Self> {
        DiscPoint::new(p.re, p.im)
    }
}

impl From<DiscPoint> for RawPoint {
    fn from(p: DiscPoint) -> Self {
        RawPoint { re: p.re, im: p.im }
    }
}

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint { re: 0.0, im: 0.0 };

    /// Rejects non-finite coordinates and points with `|z| > 1 + EPS_GEOM`.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(invalid(format!("non-finite point ({re}, {im})")));
        }
        let m = re.hypot(im);
        if m > 1.0 + EPS_GEOM {
            return Err(domain(format!("point ({re}, {im}) has modulus {m} > 1")));
        }
        if m > 1.0 {
            // absorb rounding onto the unit circle
            return Ok(DiscPoint {
                re: re / m,
                im: im / m,
            });
        }
        Ok(DiscPoint { re, im })
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(x, 0.0)
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0 + EPS_GEOM).contains(&r) {
            return Err(domain(format!("radius {r} outside [0, 1]")));
        }
        Self::new(r * theta.cos(), r * theta.sin())
    }

    /// The boundary point `e^{iθ}`.
    pub fn boundary(theta: f64) -> Self {
        DiscPoint {
            re: theta.cos(),
            im: theta.sin(),
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    #[inline]
    pub fn re(&self) -> f64 {
        self.re
    }

    #[inline]
    pub fn im(&self) -> f64 {
        self.im
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    #[inline]
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Principal argument in `(-π, π]`; the origin has argument 0.
    #[inline]
    pub fn arg(&self) -> f64 {
        if self.re == 0.0 && self.im == 0.0 {
            0.0
        } else {
            self.im.atan2(self.re)
        }
    }

    /// True when `|z| < 1` strictly (up to the ingestion slack).
    #[inline]
    pub fn is_interior(&self) -> bool {
        self.modulus() < 1.0 - f64::EPSILON
    }

    pub(crate) fn require_interior(&self, what: &str) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(domain(format!(
                "{what} requires |z| < 1, got |z| = {}",
                self.modulus()
            )))
        }
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x % two_pi;
    if y <= -PI {
        y += two_pi;
    } else if y > PI {
        y -= two_pi;
    }
    y
}

/// Absolute angular distance on the circle, in `[0, π]`.
#[inline]
pub fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// `A(z, ζ) = (1 - |ζ|²) / (1 - z ζ̄)`. `ζ` may lie on the unit circle.
pub fn mobius_a(z: DiscPoint, zeta: DiscPoint) -> Result<Complex64> {
    z.require_interior("mobius_a")?;
    Ok(mobius_a_unchecked(z.to_complex(), zeta))
}

#[inline]
pub(crate) fn mobius_a_unchecked(z: Complex64, zeta: DiscPoint) -> Complex64 {
    let w = zeta.to_complex();
    let num = one_minus_sqr(zeta.modulus());
    Complex64::new(num, 0.0) / (Complex64::new(1.0, 0.0) - z * w.conj())
}

/// `1 - x²` evaluated as `(1 - x)(1 + x)`.
#[inline]
pub(crate) fn one_minus_sqr(x: f64) -> f64 {
    (1.0 - x) * (1.0 + x)
}

/// Pseudohyperbolic distance `|(z - w) / (1 - z w̄)|` for interior points.
pub fn pseudo_distance(z: DiscPoint, w: DiscPoint) -> Result<f64> {
    z.require_interior("pseudo_distance")?;
    w.require_interior("pseudo_distance")?;
    Ok(pseudo_modulus(z.to_complex(), w.to_complex()))
}

#[inline]
pub(crate) fn pseudo_modulus(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - z * w.conj()).norm();
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Regions of the closed disc queried by the measure routines.
///
/// All memberships are closed (non-strict) up to [`EPS_GEOM`]; angular
/// comparisons wrap around the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    /// `{ |ζ| ≥ 1 - δ, |arg ζ - φ| ≤ πδ }`.
    CarlesonBox { phi: f64, delta: f64 },
    /// `{ r ≤ |ζ| ≤ (1 + r)/2, |arg ζ - φ| ≤ σ }`.
    AnnulusSector { r: f64, phi: f64, sigma: f64 },
    /// `{ ρe^{iθ} : |ρ - |c|| ≤ σ, |θ - arg c| ≤ σ }`.
    SquareBox { center: DiscPoint, sigma: f64 },
    /// Pseudohyperbolic disc of radius `σ` about `center`.
    PseudoDisc { center: DiscPoint, sigma: f64 },
    /// `{ |ζ| ≤ r }`.
    ClosedDisc { r: f64 },
}

impl RegionSpec {
    pub fn carleson_box(phi: f64, delta: f64) -> Result<Self> {
        let r = RegionSpec::CarlesonBox { phi, delta };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive, got {x}")))
            }
        };
        match *self {
            RegionSpec::CarlesonBox { phi, delta } => {
                positive("carleson box delta", delta)?;
                if delta > 1.0 || !phi.is_finite() {
                    return Err(invalid(format!("carleson box needs delta <= 1, got {delta}")));
                }
            }
            RegionSpec::AnnulusSector { r, phi, sigma } => {
                positive("sector sigma", sigma)?;
                if !(0.0..1.0).contains(&r) || !phi.is_finite() {
                    return Err(invalid(format!("sector radius {r} outside [0, 1)")));
                }
            }
            RegionSpec::SquareBox { sigma, .. } => positive("square sigma", sigma)?,
            RegionSpec::PseudoDisc { center, sigma } => {
                positive("pseudo-disc sigma", sigma)?;
                if sigma > 1.0 {
                    return Err(invalid("pseudo-disc sigma must be <= 1"));
                }
                center.require_interior("pseudo-disc center")?;
            }
            RegionSpec::ClosedDisc { r } => positive("disc radius", r)?,
        }
        Ok(())
    }
}

/// Closed-boundary membership of `ζ` in `region`.
pub fn region_contains(region: &RegionSpec, zeta: DiscPoint) -> bool {
    let rho = zeta.modulus();
    let theta = zeta.arg();
    match *region {
        RegionSpec::CarlesonBox { phi, delta } => {
            rho >= 1.0 - delta - EPS_GEOM
                && (delta >= 1.0 || angular_distance(theta, phi) <= PI * delta + EPS_GEOM)
        }
        RegionSpec::AnnulusSector { r, phi, sigma } => {
            rho >= r - EPS_GEOM
                && rho <= 0.5 * (1.0 + r) + EPS_GEOM
                && angular_distance(theta, phi) <= sigma + EPS_GEOM
        }
        RegionSpec::SquareBox { center, sigma } => {
            (rho - center.modulus()).abs() <= sigma + EPS_GEOM
                && angular_distance(theta, center.arg()) <= sigma + EPS_GEOM
        }
        RegionSpec::PseudoDisc { center, sigma } => {
            pseudo_modulus(center.to_complex(), zeta.to_complex()) <= sigma + EPS_GEOM
        }
        RegionSpec::ClosedDisc { r } => rho <= r + EPS_GEOM,
    }
}
