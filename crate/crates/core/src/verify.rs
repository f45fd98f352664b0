//! Reproducible growth experiments: the two worked examples and harnesses comparing
//! box-mass exponents, counting exponents and integral-mean exponents.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::evaluators::{example2_value, ClosedForm, SubharmonicSpec};
use crate::fit::{dyadic_deltas, dyadic_radii, fit_exponent, GrowthFit, DEFAULT_FLOOR_EPS};
use crate::geometry::DiscPoint;
use crate::means::{mean_profile, DEFAULT_REL_TOL};
use crate::measures::{
    box_mass_integral, build_complete_measure, counting_n, default_grid_size, BoundaryAtom,
    BoxIntegralMode, CompleteMeasure, DiscMeasure, MassKind, Zero, ZeroSequence,
};

/// Which direction of an equivalence a harness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Iff,
    Sufficiency,
}

/// Outcome of a harness run.
///
/// `gamma_box` carries the measure-side fit (box masses or counting function) and
/// `gamma_means` the growth order `ρ` of the integral means, `m_p ~ (1-r)^{-ρ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub relation_checked: String,
    pub gamma_box: GrowthFit,
    pub gamma_means: GrowthFit,
    pub consistent: bool,
    pub tolerance: f64,
    pub direction: Direction,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// An inclusive dyadic index range `j0..=j1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicRange {
    pub j0: u32,
    pub j1: u32,
}

impl DyadicRange {
    pub fn new(j0: u32, j1: u32) -> Result<Self> {
        if j1 < j0 + 4 {
            return Err(invalid(format!("dyadic grid {j0}:{j1} needs at least 5 points")));
        }
        if j1 > 60 {
            return Err(invalid("dyadic index above 60 exceeds double precision"));
        }
        Ok(DyadicRange { j0, j1 })
    }

    pub fn radii(&self) -> Vec<f64> {
        dyadic_radii(self.j0, self.j1)
    }

    pub fn deltas(&self) -> Vec<f64> {
        dyadic_deltas(self.j0, self.j1)
    }
}

/// Zeros `(1-2^{-k}) e^{im2^{-k}}`, `1 ≤ m ≤ ⌊2^{kβ}⌋`, each of multiplicity `⌊2^{αk}⌋`,
/// for `k = 1..=k_max`, together with the genus `s = min{q ∈ ℕ : q > α+β-1}`.
///
/// For `β = 0` each level holds the single real point `1 - 2^{-k}`.
pub fn gen_example1(alpha: f64, beta: f64, k_max: u32) -> Result<(ZeroSequence, u32)> {
    if !(alpha >= 1.0 && alpha.is_finite()) || !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("example 1 needs alpha >= 1 and beta in [0, 1], got ({alpha}, {beta})")));
    }
    if k_max == 0 || k_max > 40 {
        return Err(invalid(format!("k_max must lie in 1..=40, got {k_max}")));
    }
    if alpha * k_max as f64 > 52.0 {
        return Err(invalid("multiplicity 2^(alpha k) would exceed exact integer range"));
    }
    let mut zeros = Vec::new();
    for k in 1..=k_max {
        let kf = k as f64;
        let radius = 1.0 - (-kf).exp2();
        let mult = (alpha * kf).exp2().floor() as u64;
        if beta == 0.0 {
            zeros.push(Zero { point: DiscPoint::real(radius)?, multiplicity: mult });
            continue;
        }
        let count = (beta * kf).exp2().floor() as u64;
        for m in 1..=count {
            let point = DiscPoint::from_polar(radius, m as f64 * (-kf).exp2())?;
            zeros.push(Zero { point, multiplicity: mult });
        }
    }
    let s = (alpha + beta - 1.0).floor() as u32 + 1;
    Ok((ZeroSequence::new(zeros)?, s))
}

/// `Re (1/(1-z))^{q+1}`, i.e. `log|f|` for `f = exp((1-z)^{-(q+1)})`.
pub fn example2_logmod(q: f64, z: DiscPoint) -> Result<f64> {
    z.require_interior("example2_logmod")?;
    if !(q > -1.0) {
        return Err(invalid(format!("example 2 needs q > -1, got {q}")));
    }
    Ok(example2_value(q, z.to_complex()))
}

/// The measure of `Re (1 - z)^{-(q+1)}` at genus `s = q`: a single boundary atom at `θ = 0` whose
/// mass is calibrated so that the representation with `C = 0` matches at `z = 0`.
pub fn example2_measure(q: u32) -> CompleteMeasure {
    let k0 = crate::kernels::ks_boundary(num_complex::Complex64::new(0.0, 0.0), 0.0, q);
    let mass = -example2_value(q as f64, num_complex::Complex64::new(0.0, 0.0)) / k0;
    CompleteMeasure::from_parts(q, vec![], vec![BoundaryAtom { theta: 0.0, mass }], vec![])
        .expect("single boundary atom is valid")
}

fn box_profile(lambda: &CompleteMeasure, p: f64, deltas: &[f64], kind: MassKind) -> Result<Vec<f64>> {
    let mode = if lambda.boundary_density().is_empty() {
        BoxIntegralMode::ExactBreakpoints
    } else {
        BoxIntegralMode::Grid(default_grid_size(lambda.atom_count()))
    };
    deltas
        .iter()
        .map(|&d| box_mass_integral(lambda, d, p, mode, kind))
        .collect()
}

/// `L(δ_j, p)` for `δ_j = 2^{-j}`, the fitted exponent in `δ`.
pub fn box_exponent(lambda: &CompleteMeasure, p: f64, grid: DyadicRange, kind: MassKind) -> Result<GrowthFit> {
    let deltas = grid.deltas();
    let values = box_profile(lambda, p, &deltas, kind)?;
    fit_exponent(&deltas.into_iter().zip(values).collect::<Vec<_>>(), DEFAULT_FLOOR_EPS)
}

fn means_exponent(u: &SubharmonicSpec, p: f64, grid: DyadicRange, rel_tol: f64) -> Result<GrowthFit> {
    let radii = grid.radii();
    let means = mean_profile(u, &radii, p, rel_tol)?;
    let samples: Vec<_> = radii.iter().zip(means).map(|(r, m)| (1.0 - r, m)).collect();
    Ok(fit_exponent(&samples, DEFAULT_FLOOR_EPS)?.negated())
}

fn counting_exponent(mu: &DiscMeasure, grid: DyadicRange) -> Result<GrowthFit> {
    let samples: Vec<_> = grid.radii().into_iter().map(|r| (1.0 - r, counting_n(mu, r))).collect();
    Ok(fit_exponent(&samples, DEFAULT_FLOOR_EPS)?.negated())
}

/// Compares the box exponent `γ` of `L(δ, p)` with the mean order `ρ` of `u`, expecting
/// `ρ = max(0, s + 1 - γ)`.
///
/// Total-variation masses are used for `s ≥ 1`, where only sufficiency is claimed.
#[allow(clippy::too_many_arguments)]
pub fn verify_box_vs_means(
    lambda: &CompleteMeasure,
    u: &SubharmonicSpec,
    s: u32,
    p: f64,
    delta_grid: DyadicRange,
    r_grid: DyadicRange,
    tolerance: f64,
) -> Result<VerificationReport> {
    if !(p > 1.0) {
        return Err(invalid(format!("p must be > 1, got {p}")));
    }
    if lambda.s() != s {
        return Err(invalid(format!("measure was built at genus {} but s = {s}", lambda.s())));
    }
    let kind = if s >= 1 { MassKind::TotalVariation } else { MassKind::Signed };
    let gamma_box = box_exponent(lambda, p, delta_grid, kind)?;
    let gamma_means = means_exponent(u, p, r_grid, DEFAULT_REL_TOL)?;
    let consistent = if gamma_box.degenerate {
        gamma_means.exponent.abs() <= tolerance
    } else {
        let expected = (s as f64 + 1.0 - gamma_box.exponent).max(0.0);
        (gamma_means.exponent - expected).abs() <= tolerance
    };
    let direction = if s == 0 { Direction::Iff } else { Direction::Sufficiency };
    Ok(VerificationReport {
        relation_checked: format!(
            "m_p(r,u) ~ (1-r)^(gamma-{}) <=> L(delta,p) ~ delta^gamma (p = {p}, s = {s})",
            s + 1
        ),
        gamma_box,
        gamma_means,
        consistent,
        tolerance,
        direction,
    })
}

/// For zeros inside finitely many Stolz angles (vertices `e^{iφ}`, `φ ∈ vertices`), fits
/// `n(r) ~ (1-r)^{-a_n}` and `m_p(r, log|B|) ~ (1-r)^{-a_m}` and checks `a_m = max(0, a_n - 1/p)`.
pub fn verify_stolz(
    zeros: &ZeroSequence,
    vertices: &[f64],
    p: f64,
    r_grid: DyadicRange,
    tolerance: f64,
) -> Result<VerificationReport> {
    if !(p > 1.0) {
        return Err(invalid(format!("p must be > 1, got {p}")));
    }
    let stray = zeros.zeros().iter().find(|a| {
        !vertices.iter().any(|&phi| {
            let zeta = DiscPoint::boundary(phi);
            let single = ZeroSequence::new([**a]).expect("valid zero");
            crate::classical::stolz_count_phi(&single, zeta) > 0.0
        })
    });
    if let Some(a) = stray {
        return Err(Error::Precondition(format!(
            "zero at {}{:+}i lies in none of the declared Stolz angles",
            a.point.re(),
            a.point.im()
        )));
    }
    let gamma_box = counting_exponent(&zeros.to_measure(), r_grid)?;
    let u = SubharmonicSpec::BlaschkeLogMod(zeros.clone());
    let gamma_means = means_exponent(&u, p, r_grid, DEFAULT_REL_TOL)?;
    let expected = (gamma_box.exponent - 1.0 / p).max(0.0);
    let consistent = (gamma_means.exponent - expected).abs() <= tolerance;
    // the two-sided statement is claimed for α + 1/p < 1, where α = a_n - 1/p
    let direction = if gamma_box.exponent < 1.0 { Direction::Iff } else { Direction::Sufficiency };
    Ok(VerificationReport {
        relation_checked: format!("n(r) ~ (1-r)^(-alpha-1/p) <=> m_p(r,log|B|) ~ (1-r)^(-alpha) (p = {p})"),
        gamma_box,
        gamma_means,
        consistent,
        tolerance,
        direction,
    })
}

/// Sufficiency: if `n(r) = O((1-r)^{-α-1/p})` and `α + 1/p < s + 1`, the canonical integral
/// of genus `s` satisfies `m_p = O((1-r)^{-α})`.
pub fn verify_growth_sufficiency(
    mu: &DiscMeasure,
    s: u32,
    p: f64,
    alpha: f64,
    r_grid: DyadicRange,
    tolerance: f64,
) -> Result<VerificationReport> {
    if !(p > 1.0) {
        return Err(invalid(format!("p must be > 1, got {p}")));
    }
    if !(alpha + 1.0 / p < s as f64 + 1.0) {
        return Err(Error::Precondition(format!(
            "alpha+1/p<s+1 fails: {alpha} + 1/{p} >= {}",
            s + 1
        )));
    }
    if mu.has_boundary_part() {
        return Err(Error::Precondition("growth sufficiency needs a measure supported in the open disc".into()));
    }
    let gamma_box = counting_exponent(mu, r_grid)?;
    if gamma_box.exponent > alpha + 1.0 / p + 0.05 {
        return Err(Error::Precondition(format!(
            "counting exponent {} exceeds alpha+1/p = {}",
            gamma_box.exponent,
            alpha + 1.0 / p
        )));
    }
    let u = SubharmonicSpec::CanonicalIntegral { mu: mu.clone(), s };
    let gamma_means = means_exponent(&u, p, r_grid, DEFAULT_REL_TOL)?;
    let consistent = gamma_means.exponent <= alpha + tolerance;
    Ok(VerificationReport {
        relation_checked: format!(
            "n(r) = O((1-r)^(-alpha-1/p)) => m_p(r,U) = O((1-r)^(-alpha)) (alpha = {alpha}, p = {p}, s = {s})"
        ),
        gamma_box,
        gamma_means,
        consistent,
        tolerance,
        direction: Direction::Sufficiency,
    })
}

/// Box exponent of the lattice product's complete measure at its genus, fitted over
/// `δ = 2^{-j}`, `j ∈ delta_grid` (default `3..=k_max-2`).
pub fn example1_lower_bound_check(
    alpha: f64,
    beta: f64,
    p: f64,
    k_max: u32,
    delta_grid: Option<DyadicRange>,
) -> Result<GrowthFit> {
    let (zeros, s) = gen_example1(alpha, beta, k_max)?;
    let grid = match delta_grid {
        Some(g) => g,
        None => DyadicRange::new(3, k_max.saturating_sub(2))?,
    };
    let lambda = build_complete_measure(&zeros.to_measure(), s);
    box_exponent(&lambda, p, grid, MassKind::Signed)
}

/// The exponent `s + 1 - α - (β - 1)/p` bounding the lattice product's box exponent.
pub fn example1_expected_box_exponent(alpha: f64, beta: f64, p: f64) -> f64 {
    let s = (alpha + beta - 1.0).floor() + 1.0;
    s + 1.0 - alpha - (beta - 1.0) / p
}

/// `sup_φ ν(r, φ)`: the largest mass in `{r ≤ |ζ| ≤ (1+r)/2, |arg ζ - φ| ≤ (1-r)/2}`.
pub fn counting_nu_sup(mu: &DiscMeasure, r: f64) -> f64 {
    let sigma = 0.5 * (1.0 - r);
    let eps = crate::geometry::EPS_GEOM;
    let mut pts: Vec<(f64, f64)> = mu
        .disc_atoms()
        .iter()
        .filter(|a| {
            let m = a.point.modulus();
            m >= r - eps && m <= 0.5 * (1.0 + r) + eps
        })
        .map(|a| (a.point.arg(), a.weight))
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pts.len();
    let mut ext = pts.clone();
    ext.extend(pts.iter().map(|&(t, w)| (t + 2.0 * PI, w)));
    let width = 2.0 * sigma + 2.0 * eps;
    let mut best = 0.0f64;
    let mut j = 0;
    let mut window = 0.0;
    for i in 0..n {
        if j < i {
            j = i;
            window = 0.0;
        }
        while j < i + n && ext[j].0 - ext[i].0 <= width {
            window += ext[j].1;
            j += 1;
        }
        best = best.max(window);
        window -= ext[i].1;
    }
    best
}

/// `Re (1 - z)^{-(q+1)}` as a spec.
pub fn example2_spec(q: f64) -> SubharmonicSpec {
    SubharmonicSpec::ClosedForm(ClosedForm::Example2 { q })
}
