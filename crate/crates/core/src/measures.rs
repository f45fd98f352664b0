//! Zero sequences, Riesz/boundary measures and the complete measure built from them.
//!
//! A [`DiscMeasure`] holds a finite Riesz measure in the open disc together
//! with a signed boundary measure (atoms plus a piecewise-constant density).
//! [`build_complete_measure`] weights the disc part by `(1 - |ζ|)^{s+1}` and
//! rescales the boundary part by `(s+1)! / (2^s 2π)`, so the kernel
//! representation `u = -∫ K_s dλ + C` needs no further constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    angular_distance, region_contains, wrap_angle, DiscPoint, RegionSpec, EPS_GEOM,
};
use crate::sum::NeumaierSum;

const TWO_PI: f64 = 2.0 * PI;

/// A zero of multiplicity `multiplicity` at `point`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub point: DiscPoint,
    pub multiplicity: u64,
}

/// Finite zero sequence in the open disc, kept sorted by `(|a|, arg a)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSequence {
    zeros: Vec<Zero>,
}

impl ZeroSequence {
    pub fn new(zeros: impl IntoIterator<Item = Zero>) -> Result<Self> {
        let mut zeros: Vec<Zero> = zeros.into_iter().collect();
        for z in &zeros {
            if z.multiplicity == 0 {
                return Err(invalid("zero multiplicity must be positive"));
            }
            z.point.require_interior("a zero")?;
        }
        zeros.sort_by(|a, b| point_order(&a.point, &b.point));
        Ok(ZeroSequence { zeros })
    }

    /// Simple zeros at the given points.
    pub fn simple(points: impl IntoIterator<Item = DiscPoint>) -> Result<Self> {
        Self::new(points.into_iter().map(|point| Zero {
            point,
            multiplicity: 1,
        }))
    }

    /// Simple zeros on `[0, 1)` at the given radii.
    pub fn on_ray(radii: impl IntoIterator<Item = f64>) -> Result<Self> {
        let pts = radii
            .into_iter()
            .map(DiscPoint::real)
            .collect::<Result<Vec<_>>>()?;
        Self::simple(pts)
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Multiplicity-weighted number of zeros.
    pub fn total_multiplicity(&self) -> f64 {
        self.zeros.iter().map(|z| z.multiplicity as f64).sum()
    }

    /// The Riesz measure `Σ m_n δ_{a_n}` of `log|B|`.
    pub fn to_measure(&self) -> DiscMeasure {
        DiscMeasure {
            disc_atoms: self
                .zeros
                .iter()
                .map(|z| DiscAtom {
                    point: z.point,
                    weight: z.multiplicity as f64,
                })
                .collect(),
            boundary_atoms: Vec::new(),
            boundary_density: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ZeroFile::from(self)).expect("zero sequence serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ZeroFile =
            serde_json::from_str(text).map_err(|e| invalid(format!("zero-sequence JSON: {e}")))?;
        file.try_into()
    }
}

pub(crate) fn point_order(a: &DiscPoint, b: &DiscPoint) -> std::cmp::Ordering {
    a.modulus()
        .total_cmp(&b.modulus())
        .then(a.arg().total_cmp(&b.arg()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZeroFile {
    zeros: Vec<ZeroEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZeroEntry {
    re: f64,
    im: f64,
    multiplicity: u64,
}

impl From<&ZeroSequence> for ZeroFile {
    fn from(z: &ZeroSequence) -> Self {
        ZeroFile {
            zeros: z
                .zeros
                .iter()
                .map(|z| ZeroEntry {
                    re: z.point.re(),
                    im: z.point.im(),
                    multiplicity: z.multiplicity,
                })
                .collect(),
        }
    }
}

impl TryFrom<ZeroFile> for ZeroSequence {
    type Error = Error;
    fn try_from(f: ZeroFile) -> Result<Self> {
        let zeros = f
            .zeros
            .into_iter()
            .map(|e| {
                Ok(Zero {
                    point: DiscPoint::new(e.re, e.im)?,
                    multiplicity: e.multiplicity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ZeroSequence::new(zeros)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAtom {
    pub point: DiscPoint,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryAtom {
    pub theta: f64,
    pub mass: f64,
}

/// A constant density `value` (mass per radian) on `[theta_start, theta_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPiece {
    pub theta_start: f64,
    pub theta_end: f64,
    pub value: f64,
}

impl DensityPiece {
    fn len(&self) -> f64 {
        self.theta_end - self.theta_start
    }

    /// Length of `[start, end] ∩ (arc of half-width `half` about `center`)`, periodically.
    fn overlap_with_arc(&self, center: f64, half: f64) -> f64 {
        if half >= PI {
            return self.len();
        }
        // nearest copy of the arc centre, then its neighbours
        let mid = 0.5 * (self.theta_start + self.theta_end);
        let c0 = mid + wrap_angle(center - mid);
        let mut total = 0.0;
        for k in -1..=1 {
            let c = c0 + k as f64 * TWO_PI;
            let lo = self.theta_start.max(c - half);
            let hi = self.theta_end.min(c + half);
            if hi > lo {
                total += hi - lo;
            }
        }
        total
    }
}

/// Riesz measure in `𝔻` plus a signed boundary measure on `∂𝔻`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscMeasure {
    disc_atoms: Vec<DiscAtom>,
    boundary_atoms: Vec<BoundaryAtom>,
    boundary_density: Vec<DensityPiece>,
}

impl DiscMeasure {
    pub fn new(
        disc_atoms: Vec<DiscAtom>,
        boundary_atoms: Vec<BoundaryAtom>,
        boundary_density: Vec<DensityPiece>,
    ) -> Result<Self> {
        let mut disc_atoms = disc_atoms;
        for a in &disc_atoms {
            if !(a.weight.is_finite() && a.weight > 0.0) {
                return Err(invalid(format!("disc atom weight must be > 0, got {}", a.weight)));
            }
            a.point.require_interior("a disc atom")?;
        }
        disc_atoms.sort_by(|a, b| point_order(&a.point, &b.point));
        for b in &boundary_atoms {
            if !(b.theta.is_finite() && b.mass.is_finite()) {
                return Err(invalid("non-finite boundary atom"));
            }
        }
        let boundary_density = normalize_pieces(boundary_density)?;
        Ok(DiscMeasure {
            disc_atoms,
            boundary_atoms,
            boundary_density,
        })
    }

    pub fn disc_only(disc_atoms: Vec<DiscAtom>) -> Result<Self> {
        Self::new(disc_atoms, Vec::new(), Vec::new())
    }

    pub fn disc_atoms(&self) -> &[DiscAtom] {
        &self.disc_atoms
    }

    pub fn boundary_atoms(&self) -> &[BoundaryAtom] {
        &self.boundary_atoms
    }

    pub fn boundary_density(&self) -> &[DensityPiece] {
        &self.boundary_density
    }

    pub fn has_boundary_part(&self) -> bool {
        !self.boundary_atoms.is_empty() || !self.boundary_density.is_empty()
    }
}

/// Checks piece ordering, reduces them to `[-π, π)` (splitting at the seam), and rejects overlaps.
fn normalize_pieces(pieces: Vec<DensityPiece>) -> Result<Vec<DensityPiece>> {
    let mut out = Vec::with_capacity(pieces.len());
    for p in pieces {
        if !(p.theta_start.is_finite() && p.theta_end.is_finite() && p.value.is_finite()) {
            return Err(invalid("non-finite density piece"));
        }
        if p.theta_start >= p.theta_end {
            return Err(invalid(format!(
                "density piece needs theta_start < theta_end, got [{}, {}]",
                p.theta_start, p.theta_end
            )));
        }
        if p.len() > TWO_PI + EPS_GEOM {
            return Err(invalid("density piece longer than a full turn"));
        }
        let len = p.len().min(TWO_PI);
        let mut start = wrap_angle(p.theta_start);
        if start >= PI {
            start -= TWO_PI;
        }
        let end = start + len;
        if end > PI {
            out.push(DensityPiece {
                theta_start: start,
                theta_end: PI,
                value: p.value,
            });
            if end - TWO_PI > -PI {
                out.push(DensityPiece {
                    theta_start: -PI,
                    theta_end: end - TWO_PI,
                    value: p.value,
                });
            }
        } else {
            out.push(DensityPiece {
                theta_start: start,
                theta_end: end,
                value: p.value,
            });
        }
    }
    out.sort_by(|a, b| a.theta_start.total_cmp(&b.theta_start));
    for w in out.windows(2) {
        if w[1].theta_start < w[0].theta_end - EPS_GEOM {
            return Err(invalid("density pieces overlap after reduction mod 2π"));
        }
    }
    Ok(out)
}

/// The complete measure at genus level `s`.
///
/// Disc atoms carry `weight (1 - |ζ|)^{s+1}`; boundary masses are already
/// multiplied by `(s+1)! / (2^s 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteMeasure {
    s: u32,
    disc_atoms: Vec<DiscAtom>,
    boundary_atoms: Vec<BoundaryAtom>,
    boundary_density: Vec<DensityPiece>,
}

/// `(s+1)! / (2^s 2π)`: converts boundary `ψ*`-mass into complete-measure mass.
pub fn boundary_normalization(s: u32) -> f64 {
    let mut f = 1.0;
    for j in 2..=(s + 1) {
        f *= j as f64;
    }
    f / (2f64.powi(s as i32) * TWO_PI)
}

pub fn build_complete_measure(mu: &DiscMeasure, s: u32) -> CompleteMeasure {
    let exponent = s as i32 + 1;
    let disc_atoms = mu
        .disc_atoms
        .iter()
        .map(|a| DiscAtom {
            point: a.point,
            weight: a.weight * (1.0 - a.point.modulus()).powi(exponent),
        })
        .collect();
    let c = boundary_normalization(s);
    let boundary_atoms = mu
        .boundary_atoms
        .iter()
        .map(|b| BoundaryAtom {
            theta: b.theta,
            mass: b.mass * c,
        })
        .collect();
    let boundary_density = mu
        .boundary_density
        .iter()
        .map(|p| DensityPiece {
            value: p.value * c,
            ..*p
        })
        .collect();
    CompleteMeasure {
        s,
        disc_atoms,
        boundary_atoms,
        boundary_density,
    }
}

impl CompleteMeasure {
    /// A complete measure given directly by its (already normalized) parts.
    pub fn from_parts(
        s: u32,
        disc_atoms: Vec<DiscAtom>,
        boundary_atoms: Vec<BoundaryAtom>,
        boundary_density: Vec<DensityPiece>,
    ) -> Result<Self> {
        let m = DiscMeasure::new(disc_atoms, boundary_atoms, boundary_density)?;
        Ok(CompleteMeasure {
            s,
            disc_atoms: m.disc_atoms,
            boundary_atoms: m.boundary_atoms,
            boundary_density: m.boundary_density,
        })
    }

    pub fn empty(s: u32) -> Self {
        CompleteMeasure {
            s,
            disc_atoms: Vec::new(),
            boundary_atoms: Vec::new(),
            boundary_density: Vec::new(),
        }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn disc_atoms(&self) -> &[DiscAtom] {
        &self.disc_atoms
    }

    pub fn boundary_atoms(&self) -> &[BoundaryAtom] {
        &self.boundary_atoms
    }

    pub fn boundary_density(&self) -> &[DensityPiece] {
        &self.boundary_density
    }

    pub fn is_atomic(&self) -> bool {
        self.boundary_density.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.disc_atoms.len() + self.boundary_atoms.len()
    }

    /// `λ(𝔻̄)` and `|λ|(𝔻̄)`.
    pub fn total_mass(&self) -> (f64, f64) {
        let mut v = NeumaierSum::default();
        let mut tv = NeumaierSum::default();
        for a in &self.disc_atoms {
            v.add(a.weight);
            tv.add(a.weight);
        }
        for b in &self.boundary_atoms {
            v.add(b.mass);
            tv.add(b.mass.abs());
        }
        for p in &self.boundary_density {
            v.add(p.value * p.len());
            tv.add(p.value.abs() * p.len());
        }
        (v.value(), tv.value())
    }
}

/// Part of `∂𝔻` inside a region, as (centre, half-width); half-width `>= π` means the whole circle.
fn boundary_arc(region: &RegionSpec) -> Option<(f64, f64)> {
    match *region {
        RegionSpec::CarlesonBox { phi, delta } => Some((phi, PI * delta)),
        RegionSpec::AnnulusSector { .. } => None,
        RegionSpec::SquareBox { center, sigma } => {
            ((1.0 - center.modulus()) <= sigma + EPS_GEOM).then_some((center.arg(), sigma))
        }
        RegionSpec::PseudoDisc { sigma, .. } => (sigma >= 1.0 - EPS_GEOM).then_some((0.0, PI)),
        RegionSpec::ClosedDisc { r } => (r >= 1.0 - EPS_GEOM).then_some((0.0, PI)),
    }
}

/// `λ(R)` together with `|λ|(R)`.
pub fn box_mass(lambda: &CompleteMeasure, region: &RegionSpec) -> (f64, f64) {
    let mut v = NeumaierSum::default();
    let mut tv = NeumaierSum::default();
    for a in &lambda.disc_atoms {
        if region_contains(region, a.point) {
            v.add(a.weight);
            tv.add(a.weight);
        }
    }
    for b in &lambda.boundary_atoms {
        if region_contains(region, DiscPoint::boundary(b.theta)) {
            v.add(b.mass);
            tv.add(b.mass.abs());
        }
    }
    if let Some((center, half)) = boundary_arc(region) {
        for p in &lambda.boundary_density {
            let len = p.overlap_with_arc(center, half);
            v.add(p.value * len);
            tv.add(p.value.abs() * len);
        }
    }
    (v.value(), tv.value())
}

/// How `φ ↦ λ(C(φ, δ))` is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxIntegralMode {
    /// Exact sum over the breakpoints `arg ζ ± πδ`; atomic measures only.
    ExactBreakpoints,
    /// Midpoint rule on `n` uniform values of `φ`.
    Grid(usize),
}

/// Whether box masses use the signed measure or its total variation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassKind {
    Signed,
    TotalVariation,
}

/// Default midpoint-grid size for a measure with `atoms` atoms.
pub fn default_grid_size(atoms: usize) -> usize {
    4096.max(64 * atoms)
}

/// `(∫₀^{2π} |λ(C(φ, δ))|^p dφ)^{1/p}`.
pub fn box_mass_integral(
    lambda: &CompleteMeasure,
    delta: f64,
    p: f64,
    mode: BoxIntegralMode,
    kind: MassKind,
) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1], got {delta}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("p must be >= 1, got {p}")));
    }
    let integral = match mode {
        BoxIntegralMode::ExactBreakpoints => {
            if !lambda.is_atomic() {
                return Err(invalid(
                    "exact breakpoint mode needs a purely atomic measure",
                ));
            }
            exact_box_integral(lambda, delta, p, kind)
        }
        BoxIntegralMode::Grid(n) => {
            if n == 0 {
                return Err(invalid("grid size must be positive"));
            }
            grid_box_integral(lambda, delta, p, n, kind)
        }
    };
    Ok(integral.powf(1.0 / p))
}

fn signed_or_abs(m: f64, kind: MassKind) -> f64 {
    match kind {
        MassKind::Signed => m,
        MassKind::TotalVariation => m.abs(),
    }
}

/// Atoms inside some box `C(·, δ)`, as (argument, mass).
fn box_atoms(lambda: &CompleteMeasure, delta: f64, kind: MassKind) -> Vec<(f64, f64)> {
    let mut atoms: Vec<(f64, f64)> = lambda
        .disc_atoms
        .iter()
        .filter(|a| a.point.modulus() >= 1.0 - delta - EPS_GEOM)
        .map(|a| (a.point.arg(), a.weight))
        .collect();
    atoms.extend(
        lambda
            .boundary_atoms
            .iter()
            .map(|b| (wrap_angle(b.theta), signed_or_abs(b.mass, kind))),
    );
    atoms
}

fn exact_box_integral(lambda: &CompleteMeasure, delta: f64, p: f64, kind: MassKind) -> f64 {
    let atoms = box_atoms(lambda, delta, kind);
    let half = PI * delta;
    if half >= PI {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        return TWO_PI * total.abs().powf(p);
    }
    // each atom is seen by the closed window φ ∈ [θ - πδ, θ + πδ]
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(2 * atoms.len() + 2);
    let mut initial = NeumaierSum::default();
    for &(theta, mass) in &atoms {
        let mut start = (theta - half).rem_euclid(TWO_PI);
        if start >= TWO_PI {
            start = 0.0;
        }
        let end = start + 2.0 * half;
        events.push((start, mass));
        if end >= TWO_PI {
            // window wraps past 2π: active from 0 up to end - 2π
            initial.add(mass);
            events.push((end - TWO_PI, -mass));
        } else {
            events.push((end, -mass));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut current = initial;
    let mut last = 0.0;
    let mut acc = NeumaierSum::default();
    for (pos, dm) in events {
        if pos > last {
            acc.add(current.value().abs().powf(p) * (pos - last));
            last = pos;
        }
        current.add(dm);
    }
    acc.add(current.value().abs().powf(p) * (TWO_PI - last));
    acc.value()
}

fn grid_box_integral(lambda: &CompleteMeasure, delta: f64, p: f64, n: usize, kind: MassKind) -> f64 {
    let h = TWO_PI / n as f64;
    let value_at = |i: usize| {
        let phi = (i as f64 + 0.5) * h;
        let region = RegionSpec::CarlesonBox { phi, delta };
        let (v, tv) = box_mass(lambda, &region);
        let m = match kind {
            MassKind::Signed => v,
            MassKind::TotalVariation => tv,
        };
        m.abs().powf(p)
    };
    let values = crate::par::map_indexed(n, value_at);
    let mut acc = NeumaierSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value() * h
}

/// Riesz mass of the closed disc `|ζ| ≤ r`.
pub fn counting_n(mu: &DiscMeasure, r: f64) -> f64 {
    let mut acc = NeumaierSum::default();
    for a in &mu.disc_atoms {
        if a.point.modulus() <= r + EPS_GEOM {
            acc.add(a.weight);
        }
    }
    acc.value()
}

/// Riesz mass of `{ r ≤ |ζ| ≤ (1+r)/2, |arg ζ - φ| ≤ (1-r)/2 }`.
pub fn counting_nu(mu: &DiscMeasure, r: f64, phi: f64) -> f64 {
    let region = RegionSpec::AnnulusSector {
        r,
        phi,
        sigma: 0.5 * (1.0 - r),
    };
    let mut acc = NeumaierSum::default();
    for a in &mu.disc_atoms {
        if region_contains(&region, a.point) {
            acc.add(a.weight);
        }
    }
    acc.value()
}

/// A non-negative `2π`-periodic measure on the line, given on one period.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodicMeasure {
    atoms: Vec<BoundaryAtom>,
    density: Vec<DensityPiece>,
}

impl PeriodicMeasure {
    pub fn new(atoms: Vec<BoundaryAtom>, density: Vec<DensityPiece>) -> Result<Self> {
        let mut atoms = atoms;
        for a in &mut atoms {
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(invalid("periodic measure atoms must have positive mass"));
            }
            a.theta = wrap_angle(a.theta);
            if a.theta >= PI {
                a.theta -= TWO_PI;
            }
        }
        atoms.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        if density.iter().any(|p| p.value < 0.0) {
            return Err(invalid("periodic measure density must be non-negative"));
        }
        let density = normalize_pieces(density)?;
        Ok(PeriodicMeasure { atoms, density })
    }

    pub fn atoms(&self) -> &[BoundaryAtom] {
        &self.atoms
    }

    pub fn density(&self) -> &[DensityPiece] {
        &self.density
    }

    /// `ν((θ - δ, θ + δ))` for `δ < π`; atoms at distance exactly `δ` are excluded.
    pub fn open_window(&self, theta: f64, delta: f64) -> f64 {
        let mut acc = NeumaierSum::default();
        for a in &self.atoms {
            if angular_distance(a.theta, theta) < delta {
                acc.add(a.mass);
            }
        }
        for p in &self.density {
            acc.add(p.value * p.overlap_with_arc(theta, delta));
        }
        acc.value()
    }

    fn density_at(&self, theta: f64) -> f64 {
        let t = {
            let w = wrap_angle(theta);
            if w >= PI {
                w - TWO_PI
            } else {
                w
            }
        };
        self.density
            .iter()
            .filter(|p| p.theta_start <= t && t < p.theta_end)
            .map(|p| p.value)
            .sum()
    }
}

/// Both sides of the periodic measure inequality and whether it holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Outcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `∫ ν^{p-1}((θ-δ, θ+δ)) dν(θ)` with `(2^{p+1}/δ) ∫ ν^p((θ-δ, θ+δ)) dθ`.
///
/// Both integrals are evaluated exactly: between consecutive breakpoints
/// (atoms and density edges shifted by `±δ`) the window mass is affine in `θ`.
pub fn lemma1_check(nu: &PeriodicMeasure, p: f64, delta: f64) -> Result<Lemma1Outcome> {
    if !(delta > 0.0 && delta < PI) {
        return Err(invalid(format!("delta must lie in (0, π), got {delta}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("p must be >= 1, got {p}")));
    }
    let mut lhs = NeumaierSum::default();
    for a in &nu.atoms {
        lhs.add(a.mass * nu.open_window(a.theta, delta).powf(p - 1.0));
    }

    let mut cuts = vec![-PI, PI];
    let mut push = |x: f64| {
        let mut w = wrap_angle(x);
        if w >= PI {
            w -= TWO_PI;
        }
        cuts.push(w);
    };
    for a in &nu.atoms {
        push(a.theta - delta);
        push(a.theta + delta);
    }
    for piece in &nu.density {
        for edge in [piece.theta_start, piece.theta_end] {
            push(edge);
            push(edge - delta);
            push(edge + delta);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut window_p = NeumaierSum::default();
    for seg in cuts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let w_mid = nu.open_window(mid, delta);
        let slope = nu.density_at(mid + delta) - nu.density_at(mid - delta);
        let w0 = (w_mid - slope * (mid - a)).max(0.0);
        let w1 = (w_mid + slope * (b - mid)).max(0.0);
        window_p.add(power_integral_linear(w0, w1, b - a, p));
        let rho = nu.density_at(mid);
        if rho > 0.0 {
            lhs.add(rho * power_integral_linear(w0, w1, b - a, p - 1.0));
        }
    }
    let lhs = lhs.value();
    let rhs = 2f64.powf(p + 1.0) / delta * window_p.value();
    Ok(Lemma1Outcome {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}

/// `∫ w(t)^q dt` over an interval of length `len` on which `w` is affine from `w0` to `w1`.
fn power_integral_linear(w0: f64, w1: f64, len: f64, q: f64) -> f64 {
    if q == 0.0 {
        return len;
    }
    let scale = w0.max(w1);
    if scale == 0.0 {
        return 0.0;
    }
    let dw = w1 - w0;
    if dw.abs() <= 1e-6 * scale {
        let mean = 0.5 * (w0 + w1);
        let rel = dw / mean;
        return len * mean.powf(q) * (1.0 + q * (q - 1.0) * rel * rel / 24.0);
    }
    len * (w1.powf(q + 1.0) - w0.powf(q + 1.0)) / ((q + 1.0) * dw)
}

/// JSON document for a measure at genus level `s` (`disc_atoms` are Riesz weights, boundary entries are `ψ*`-masses).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureDocument {
    pub s: u32,
    pub measure: DiscMeasure,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    s: u32,
    #[serde(default)]
    disc_atoms: Vec<DiscAtomEntry>,
    #[serde(default)]
    boundary_atoms: Vec<BoundaryAtomEntry>,
    #[serde(default)]
    boundary_density: Vec<DensityEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscAtomEntry {
    re: f64,
    im: f64,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryAtomEntry {
    theta: f64,
    mass: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityEntry {
    theta_start: f64,
    theta_end: f64,
    value: f64,
}

impl MeasureDocument {
    pub fn to_json(&self) -> String {
        let m = &self.measure;
        let file = MeasureFile {
            s: self.s,
            disc_atoms: m
                .disc_atoms
                .iter()
                .map(|a| DiscAtomEntry {
                    re: a.point.re(),
                    im: a.point.im(),
                    weight: a.weight,
                })
                .collect(),
            boundary_atoms: m
                .boundary_atoms
                .iter()
                .map(|b| BoundaryAtomEntry {
                    theta: b.theta,
                    mass: b.mass,
                })
                .collect(),
            boundary_density: m
                .boundary_density
                .iter()
                .map(|p| DensityEntry {
                    theta_start: p.theta_start,
                    theta_end: p.theta_end,
                    value: p.value,
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("measure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MeasureFile =
            serde_json::from_str(text).map_err(|e| invalid(format!("measure JSON: {e}")))?;
        let disc_atoms = file
            .disc_atoms
            .into_iter()
            .map(|a| {
                Ok(DiscAtom {
                    point: DiscPoint::new(a.re, a.im)?,
                    weight: a.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let boundary_atoms = file
            .boundary_atoms
            .into_iter()
            .map(|b| BoundaryAtom {
                theta: b.theta,
                mass: b.mass,
            })
            .collect();
        let boundary_density = file
            .boundary_density
            .into_iter()
            .map(|p| DensityPiece {
                theta_start: p.theta_start,
                theta_end: p.theta_end,
                value: p.value,
            })
            .collect();
        Ok(MeasureDocument {
            s: file.s,
            measure: DiscMeasure::new(disc_atoms, boundary_atoms, boundary_density)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(r: f64, t: f64) -> DiscPoint {
        DiscPoint::from_polar(r, t).unwrap()
    }

    fn zeros_measure(points: &[(f64, f64, u64)]) -> DiscMeasure {
        ZeroSequence::new(points.iter().map(|&(r, t, m)| Zero {
            point: pt(r, t),
            multiplicity: m,
        }))
        .unwrap()
        .to_measure()
    }

    #[test]
    fn build_examples() {
        let l = build_complete_measure(&zeros_measure(&[(0.9, 0.0, 1)]), 0);
        assert_relative_eq!(l.disc_atoms()[0].weight, 0.1, max_relative = 1e-14);
        let l = build_complete_measure(&zeros_measure(&[(0.9, 0.0, 2)]), 1);
        assert_relative_eq!(l.disc_atoms()[0].weight, 0.02, max_relative = 1e-13);

        let m0 = 3.0;
        let mu = DiscMeasure::new(vec![], vec![BoundaryAtom { theta: 0.0, mass: m0 }], vec![]).unwrap();
        let l = build_complete_measure(&mu, 0);
        let (v, _) = box_mass(&l, &RegionSpec::ClosedDisc { r: 1.0 });
        assert_relative_eq!(v, m0 / (2.0 * PI), max_relative = 1e-15);
    }

    #[test]
    fn blaschke_total_mass() {
        let mu = zeros_measure(&[(0.5, 0.3, 2), (0.9, -1.0, 1), (0.99, 2.0, 3)]);
        let l = build_complete_measure(&mu, 0);
        let expected = 2.0 * 0.5 + 0.1 + 3.0 * 0.01;
        assert_relative_eq!(l.total_mass().0, expected, max_relative = 1e-12);
        for a in l.disc_atoms() {
            assert!(a.weight > 0.0);
        }
    }

    #[test]
    fn normalization_constants() {
        assert_relative_eq!(boundary_normalization(0), 1.0 / (2.0 * PI));
        // (s+1)!/2^s = 2!/2 = 1 and 3!/4 = 1.5
        assert_relative_eq!(boundary_normalization(1), 1.0 / (2.0 * PI));
        assert_relative_eq!(boundary_normalization(2), 1.5 / (2.0 * PI));
    }

    #[test]
    fn box_mass_examples() {
        let l = build_complete_measure(&zeros_measure(&[(0.9, 0.0, 1)]), 0);
        let (v, tv) = box_mass(&l, &RegionSpec::carleson_box(0.0, 0.2).unwrap());
        assert_relative_eq!(v, 0.1, max_relative = 1e-14);
        assert_relative_eq!(tv, 0.1, max_relative = 1e-14);
        let (v, _) = box_mass(&l, &RegionSpec::carleson_box(PI, 0.05).unwrap());
        assert_eq!(v, 0.0);

        let l = build_complete_measure(&zeros_measure(&[(0.9, 0.0, 1), (0.99, 0.1, 1)]), 0);
        let region = RegionSpec::carleson_box(0.05, 0.2).unwrap();
        let brute: f64 = l
            .disc_atoms()
            .iter()
            .filter(|a| {
                a.point.modulus() >= 0.8 && (a.point.arg() - 0.05).abs() <= PI * 0.2
            })
            .map(|a| a.weight)
            .sum();
        assert_relative_eq!(box_mass(&l, &region).0, brute, max_relative = 1e-14);
        assert_relative_eq!(brute, 0.1 + 0.01, max_relative = 1e-12);
    }

    #[test]
    fn signed_boundary_mass_and_variation() {
        let lambda = CompleteMeasure::from_parts(
            0,
            vec![],
            vec![BoundaryAtom { theta: 0.0, mass: -2.0 }, BoundaryAtom { theta: 0.05, mass: 0.5 }],
            vec![DensityPiece { theta_start: -0.1, theta_end: 0.1, value: -1.0 }],
        )
        .unwrap();
        let (v, tv) = box_mass(&lambda, &RegionSpec::carleson_box(0.0, 0.1).unwrap());
        assert_relative_eq!(v, -2.0 + 0.5 - 0.2, max_relative = 1e-12);
        assert_relative_eq!(tv, 2.0 + 0.5 + 0.2, max_relative = 1e-12);
    }

    #[test]
    fn density_wraps_around_seam() {
        let lambda = CompleteMeasure::from_parts(
            0,
            vec![],
            vec![],
            vec![DensityPiece { theta_start: 3.0, theta_end: 3.5, value: 2.0 }],
        )
        .unwrap();
        assert_eq!(lambda.boundary_density().len(), 2);
        let (v, _) = box_mass(&lambda, &RegionSpec::carleson_box(PI, 0.3 / PI).unwrap());
        // arc [π - 0.3, π + 0.3] meets [3.0, 3.5] in [3.0, π + 0.3]
        assert_relative_eq!(v, 2.0 * (PI + 0.3 - 3.0), max_relative = 1e-12);
        assert!(DiscMeasure::new(
            vec![],
            vec![],
            vec![
                DensityPiece { theta_start: 0.0, theta_end: 1.0, value: 1.0 },
                DensityPiece { theta_start: 0.5, theta_end: 1.5, value: 1.0 },
            ]
        )
        .is_err());
    }

    #[test]
    fn box_integral_single_boundary_atom() {
        let lambda =
            CompleteMeasure::from_parts(0, vec![], vec![BoundaryAtom { theta: 0.0, mass: 1.0 }], vec![]).unwrap();
        let l = box_mass_integral(&lambda, 0.1, 2.0, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap();
        assert_relative_eq!(l, (2.0 * PI * 0.1f64).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(l, 0.79266, max_relative = 1e-5);
    }

    #[test]
    fn box_integral_errors_and_empty() {
        let empty = CompleteMeasure::empty(0);
        assert_eq!(
            box_mass_integral(&empty, 0.5, 2.0, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap(),
            0.0
        );
        assert!(box_mass_integral(&empty, 0.0, 2.0, BoxIntegralMode::Grid(10), MassKind::Signed).is_err());
        assert!(box_mass_integral(&empty, 1.5, 2.0, BoxIntegralMode::Grid(10), MassKind::Signed).is_err());
        let dense = CompleteMeasure::from_parts(
            0,
            vec![],
            vec![],
            vec![DensityPiece { theta_start: 0.0, theta_end: 1.0, value: 1.0 }],
        )
        .unwrap();
        assert!(box_mass_integral(&dense, 0.5, 2.0, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).is_err());
        assert!(box_mass_integral(&dense, 0.5, 2.0, BoxIntegralMode::Grid(64), MassKind::Signed).is_ok());
    }

    #[test]
    fn box_integral_full_circle_delta_one() {
        let l = build_complete_measure(&zeros_measure(&[(0.5, 1.0, 1), (0.1, -2.0, 1)]), 0);
        let got = box_mass_integral(&l, 1.0, 2.0, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap();
        let total = 0.5 + 0.9;
        assert_relative_eq!(got, (2.0 * PI * total * total).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn box_integral_exact_matches_grid_two_atoms() {
        let l = build_complete_measure(&zeros_measure(&[(0.8, 0.3, 1), (0.9, 0.6, 2)]), 0);
        let exact = box_mass_integral(&l, 0.3, 2.0, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap();
        let grid = box_mass_integral(&l, 0.3, 2.0, BoxIntegralMode::Grid(1 << 16), MassKind::Signed).unwrap();
        assert_relative_eq!(exact, grid, max_relative = 1e-4);
    }

    #[test]
    fn wrapping_atoms_in_exact_mode() {
        let l = CompleteMeasure::from_parts(
            0,
            vec![],
            vec![BoundaryAtom { theta: PI - 0.01, mass: 1.0 }, BoundaryAtom { theta: -PI + 0.01, mass: 1.0 }],
            vec![],
        )
        .unwrap();
        let exact = box_mass_integral(&l, 0.2, 3.0, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap();
        let grid = box_mass_integral(&l, 0.2, 3.0, BoxIntegralMode::Grid(1 << 16), MassKind::Signed).unwrap();
        assert_relative_eq!(exact, grid, max_relative = 1e-4);
    }

    #[test]
    fn counting_examples() {
        let mu = zeros_measure(&[(0.5, 0.0, 1), (0.9, 0.0, 1)]);
        assert_eq!(counting_n(&mu, 0.7), 1.0);
        assert_eq!(counting_n(&mu, 0.9), 2.0);
        assert_eq!(counting_n(&zeros_measure(&[(0.5, 0.0, 3)]), 0.6), 3.0);

        assert_eq!(counting_nu(&zeros_measure(&[(0.85, 0.0, 1)]), 0.8, 0.0), 1.0);
        assert_eq!(counting_nu(&zeros_measure(&[(0.95, 0.0, 1)]), 0.8, 0.0), 0.0);
        assert_eq!(counting_nu(&zeros_measure(&[(0.85, 0.05, 1)]), 0.8, 0.0), 1.0);
    }

    #[test]
    fn lemma1_examples() {
        let nu = PeriodicMeasure::new(vec![BoundaryAtom { theta: 0.0, mass: 1.0 }], vec![]).unwrap();
        let o = lemma1_check(&nu, 2.0, 0.1).unwrap();
        assert_relative_eq!(o.lhs, 1.0, max_relative = 1e-12);
        assert_relative_eq!(o.rhs, 16.0, max_relative = 1e-12);
        assert!(o.holds);

        let uniform = PeriodicMeasure::new(
            vec![],
            vec![DensityPiece { theta_start: -PI, theta_end: PI, value: 1.0 }],
        )
        .unwrap();
        let o = lemma1_check(&uniform, 1.0, 0.1).unwrap();
        assert_relative_eq!(o.lhs, 2.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(o.rhs, 16.0 * PI, max_relative = 1e-12);

        let two = PeriodicMeasure::new(
            vec![BoundaryAtom { theta: 0.0, mass: 1.0 }, BoundaryAtom { theta: PI, mass: 1.0 }],
            vec![],
        )
        .unwrap();
        let o = lemma1_check(&two, 2.0, 0.1).unwrap();
        assert_relative_eq!(o.lhs, 2.0, max_relative = 1e-12);
        assert_relative_eq!(o.rhs, 32.0, max_relative = 1e-12);
        assert!(lemma1_check(&two, 2.0, 0.0).is_err());
        assert!(lemma1_check(&two, 2.0, PI).is_err());
    }

    #[test]
    fn lemma1_open_interval_ties() {
        // atoms exactly δ apart do not see each other
        let nu = PeriodicMeasure::new(
            vec![BoundaryAtom { theta: 0.0, mass: 1.0 }, BoundaryAtom { theta: 0.5, mass: 1.0 }],
            vec![],
        )
        .unwrap();
        assert_eq!(nu.open_window(0.0, 0.5), 1.0);
        let o = lemma1_check(&nu, 2.0, 0.5).unwrap();
        assert_relative_eq!(o.lhs, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn lemma1_density_matches_midpoint_oracle() {
        let nu = PeriodicMeasure::new(
            vec![BoundaryAtom { theta: 0.2, mass: 0.7 }],
            vec![
                DensityPiece { theta_start: -1.0, theta_end: 0.5, value: 2.0 },
                DensityPiece { theta_start: 2.0, theta_end: 4.0, value: 0.3 },
            ],
        )
        .unwrap();
        let (p, delta) = (2.5, 0.4);
        let o = lemma1_check(&nu, p, delta).unwrap();
        let n = 200_000;
        let h = 2.0 * PI / n as f64;
        let mut rhs = 0.0;
        let mut lhs_density = 0.0;
        for i in 0..n {
            let t = -PI + (i as f64 + 0.5) * h;
            let w = nu.open_window(t, delta);
            rhs += w.powf(p) * h;
            lhs_density += nu.density_at(t) * w.powf(p - 1.0) * h;
        }
        let lhs = lhs_density + 0.7 * nu.open_window(0.2, delta).powf(p - 1.0);
        // the window jumps where the atom enters or leaves, so the midpoint rule is only O(h)
        assert_relative_eq!(o.rhs, 2f64.powf(p + 1.0) / delta * rhs, max_relative = 2e-5);
        assert_relative_eq!(o.lhs, lhs, max_relative = 2e-5);
    }

    #[test]
    fn json_round_trip() {
        let z = ZeroSequence::new([
            Zero { point: pt(0.5, 0.1), multiplicity: 3 },
            Zero { point: pt(1.0 - 1.0 / 3.0, -2.0), multiplicity: 1 },
        ])
        .unwrap();
        assert_eq!(ZeroSequence::from_json(&z.to_json()).unwrap(), z);
        assert!(ZeroSequence::from_json(r#"{"zeros":[{"re":1.5,"im":0,"multiplicity":1}]}"#).is_err());
        assert!(ZeroSequence::from_json(r#"{"zeros":[],"extra":1}"#).is_err());

        let doc = MeasureDocument::from_json(
            r#"{"s":1,"disc_atoms":[{"re":0.5,"im":0.25,"weight":2}],"boundary_atoms":[{"theta":0.1,"mass":-1}],
                "boundary_density":[{"theta_start":0,"theta_end":1,"value":0.5}]}"#,
        )
        .unwrap();
        assert_eq!(doc.s, 1);
        assert_eq!(MeasureDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    fn random_atomic(rng: &mut ChaCha8Rng, n: usize) -> CompleteMeasure {
        let atoms = (0..n)
            .map(|_| DiscAtom {
                point: pt(rng.gen_range(0.5..0.999), rng.gen_range(-PI..PI)),
                weight: rng.gen_range(0.1..3.0),
            })
            .collect();
        build_complete_measure(&DiscMeasure::disc_only(atoms).unwrap(), 0)
    }

    #[test]
    fn exact_and_grid_agree_on_random_measures() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let n = rng.gen_range(1..30);
            let l = random_atomic(&mut rng, n);
            let delta = rng.gen_range(0.01..0.6);
            let p = rng.gen_range(1.1..4.0);
            let exact = box_mass_integral(&l, delta, p, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap();
            let grid = box_mass_integral(&l, delta, p, BoxIntegralMode::Grid(1 << 17), MassKind::Signed).unwrap();
            // midpoint error per breakpoint is O(h)
            assert_relative_eq!(exact, grid, max_relative = 2e-3);
        }
    }

    #[test]
    fn lemma1_random_suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..20);
            let atoms = (0..n)
                .map(|_| BoundaryAtom { theta: rng.gen_range(-PI..PI), mass: rng.gen_range(0.01..5.0) })
                .collect();
            let nu = PeriodicMeasure::new(atoms, vec![]).unwrap();
            let o = lemma1_check(&nu, rng.gen_range(1.0..4.0), rng.gen_range(0.01..1.0)).unwrap();
            assert!(o.holds, "{o:?}");
        }
    }

    #[test]
    fn periodic_remark_bound() {
        // boundary-only non-negative measure of total mass C:
        // (∫ λ(C(φ,δ))^p dφ)^{1/p} ≤ (3 (2C)^p 2π δ)^{1/p}
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..15);
            let atoms: Vec<_> = (0..n)
                .map(|_| BoundaryAtom { theta: rng.gen_range(-PI..PI), mass: rng.gen_range(0.01..2.0) })
                .collect();
            let l = CompleteMeasure::from_parts(0, vec![], atoms, vec![]).unwrap();
            let c = l.total_mass().0;
            let p = rng.gen_range(1.0..4.0);
            for j in 1..=12 {
                let delta = 2f64.powi(-j);
                let got = box_mass_integral(&l, delta, p, BoxIntegralMode::ExactBreakpoints, MassKind::Signed).unwrap();
                let bound = (3.0 * (2.0 * c).powf(p) * 2.0 * PI * delta).powf(1.0 / p);
                assert!(got <= bound, "delta={delta} got={got} bound={bound}");
                // the sharper Fubini estimate C (2πδ)^{1/p}
                assert!(got <= c * (2.0 * PI * delta).powf(1.0 / p) * (1.0 + 1e-12));
            }
        }
    }

    proptest! {
        #[test]
        fn box_mass_monotone_in_delta(seed in 0u64..1000, phi in -PI..PI, d1 in 0.01..0.5f64, extra in 0.0..0.5f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = random_atomic(&mut rng, 25);
            let small = box_mass(&l, &RegionSpec::carleson_box(phi, d1).unwrap()).0;
            let large = box_mass(&l, &RegionSpec::carleson_box(phi, d1 + extra).unwrap()).0;
            prop_assert!(small <= large + 1e-15);
        }

        #[test]
        fn counting_monotone_and_nu_bounded(seed in 0u64..1000, r1 in 0.0..0.99f64, dr in 0.0..0.5f64, phi in -PI..PI) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mu = DiscMeasure::disc_only((0..40).map(|_| DiscAtom {
                point: pt(rng.gen_range(0.0..0.999), rng.gen_range(-PI..PI)),
                weight: rng.gen_range(1.0..3.0f64).floor(),
            }).collect()).unwrap();
            let r2 = (r1 + dr).min(0.999);
            prop_assert!(counting_n(&mu, r1) <= counting_n(&mu, r2));
            let nu = counting_nu(&mu, r1, phi);
            // atoms on the inner circle are counted by both discs, so include them in the annulus count
            let annulus = counting_n(&mu, 0.5 * (1.0 + r1)) - counting_n(&mu, r1)
                + mu.disc_atoms().iter().filter(|a| (a.point.modulus() - r1).abs() <= EPS_GEOM).map(|a| a.weight).sum::<f64>();
            prop_assert!(nu <= annulus + 1e-12);
        }
    }
}
