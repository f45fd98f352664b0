//! Pointwise evaluation of `log|B|`, canonical integrals and kernel representations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::DiscPoint;
use crate::kernels::{green, ks_boundary, ks_boundary_integral, ks_interior, log_primary_at};
use crate::measures::{
    CompleteMeasure, DiscMeasure, MeasureDocument, ZeroSequence,
};
use crate::sum::NeumaierSum;

/// Closed-form test functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `log|f|` for `f(z) = exp((1/(1-z))^{q+1})`, i.e. `Re (1-z)^{-(q+1)}`.
    Example2 { q: f64 },
}

/// A subharmonic function given by one of its representations.
#[derive(Debug, Clone, PartialEq)]
pub enum SubharmonicSpec {
    BlaschkeLogMod(ZeroSequence),
    CanonicalIntegral { mu: DiscMeasure, s: u32 },
    /// `u = -∫ K_s dλ + c`, with `s` taken from `lambda`.
    Representation { lambda: CompleteMeasure, c: f64 },
    ClosedForm(ClosedForm),
    Constant(f64),
}

impl SubharmonicSpec {
    /// Evaluates `u(z)` for an interior point.
    pub fn eval(&self, z: DiscPoint) -> Result<f64> {
        z.require_interior("evaluating u")?;
        Ok(self.prepare().eval(z.to_complex()))
    }

    /// Flattens the spec into arrays for repeated evaluation.
    pub fn prepare(&self) -> PreparedSpec {
        PreparedSpec::new(self)
    }

    /// Parses the tagged spec JSON used by the command line, or a bare zero-sequence
    /// or measure document.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| invalid(format!("spec JSON: {e}")))?;
        if value.get("zeros").is_some() {
            return Ok(SubharmonicSpec::BlaschkeLogMod(ZeroSequence::from_json(text)?));
        }
        if value.get("disc_atoms").is_some() || value.get("boundary_atoms").is_some() {
            let doc = MeasureDocument::from_json(text)?;
            return Ok(SubharmonicSpec::from_measure(&doc, 0.0));
        }
        let tagged: TaggedSpec =
            serde_json::from_value(value).map_err(|e| invalid(format!("spec JSON: {e}")))?;
        Ok(match tagged {
            TaggedSpec::Example2 { q } => {
                if !(q > -1.0) {
                    return Err(invalid("example2 needs q > -1"));
                }
                SubharmonicSpec::ClosedForm(ClosedForm::Example2 { q })
            }
            TaggedSpec::Constant { c } => SubharmonicSpec::Constant(c),
        })
    }

    /// The representation `-∫ K_s dλ + c` of a measure document.
    pub fn from_measure(doc: &MeasureDocument, c: f64) -> Self {
        SubharmonicSpec::Representation {
            lambda: crate::measures::build_complete_measure(&doc.measure, doc.s),
            c,
        }
    }

    /// Angles where `u(re^{iθ})` may be singular or sharply peaked: arguments of disc atoms
    /// with `||a| - r| < 1 - r`, boundary atoms and density edges.
    pub(crate) fn singular_angles(&self, r: f64) -> Vec<f64> {
        let near = |p: &DiscPoint| (p.modulus() - r).abs() < 1.0 - r;
        let mut out: Vec<f64> = match self {
            SubharmonicSpec::BlaschkeLogMod(z) => z
                .zeros()
                .iter()
                .map(|z| z.point)
                .filter(near)
                .map(|p| p.arg())
                .collect(),
            SubharmonicSpec::CanonicalIntegral { mu, .. } => mu
                .disc_atoms()
                .iter()
                .map(|a| a.point)
                .filter(near)
                .map(|p| p.arg())
                .collect(),
            SubharmonicSpec::Representation { lambda, .. } => {
                let mut v: Vec<f64> = lambda
                    .disc_atoms()
                    .iter()
                    .map(|a| a.point)
                    .filter(near)
                    .map(|p| p.arg())
                    .collect();
                v.extend(lambda.boundary_atoms().iter().map(|b| b.theta));
                for piece in lambda.boundary_density() {
                    v.push(piece.theta_start);
                    v.push(piece.theta_end);
                }
                v
            }
            SubharmonicSpec::ClosedForm(ClosedForm::Example2 { .. }) => vec![0.0],
            SubharmonicSpec::Constant(_) => Vec::new(),
        };
        for t in &mut out {
            *t = crate::geometry::wrap_angle(*t);
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum TaggedSpec {
    Example2 { q: f64 },
    Constant { c: f64 },
}

#[derive(Debug, Clone)]
enum Prepared {
    Blaschke { atoms: Vec<(DiscPoint, f64)> },
    Canonical { atoms: Vec<(DiscPoint, f64)>, s: u32 },
    Representation {
        atoms: Vec<(DiscPoint, f64)>,
        boundary: Vec<(f64, f64)>,
        density: Vec<(f64, f64, f64)>,
        s: u32,
        c: f64,
    },
    Example2 { q: f64 },
    Constant(f64),
}

/// A [`SubharmonicSpec`] laid out for fast repeated evaluation at interior points.
#[derive(Debug, Clone)]
pub struct PreparedSpec {
    inner: Prepared,
}

impl PreparedSpec {
    fn new(spec: &SubharmonicSpec) -> Self {
        let inner = match spec {
            SubharmonicSpec::BlaschkeLogMod(zeros) => Prepared::Blaschke {
                atoms: zeros
                    .zeros()
                    .iter()
                    .map(|z| (z.point, z.multiplicity as f64))
                    .collect(),
            },
            SubharmonicSpec::CanonicalIntegral { mu, s } => Prepared::Canonical {
                atoms: mu.disc_atoms().iter().map(|a| (a.point, a.weight)).collect(),
                s: *s,
            },
            SubharmonicSpec::Representation { lambda, c } => Prepared::Representation {
                atoms: lambda
                    .disc_atoms()
                    .iter()
                    .map(|a| (a.point, a.weight))
                    .collect(),
                boundary: lambda
                    .boundary_atoms()
                    .iter()
                    .map(|b| (b.theta, b.mass))
                    .collect(),
                density: lambda
                    .boundary_density()
                    .iter()
                    .map(|p| (p.theta_start, p.theta_end, p.value))
                    .collect(),
                s: lambda.s(),
                c: *c,
            },
            SubharmonicSpec::ClosedForm(ClosedForm::Example2 { q }) => Prepared::Example2 { q: *q },
            SubharmonicSpec::Constant(c) => Prepared::Constant(*c),
        };
        PreparedSpec { inner }
    }

    /// `u(z)`; the caller guarantees `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> f64 {
        match &self.inner {
            Prepared::Blaschke { atoms } => blaschke_sum(atoms, z),
            Prepared::Canonical { atoms, s } => canonical_sum(atoms, *s, z),
            Prepared::Representation {
                atoms,
                boundary,
                density,
                s,
                c,
            } => {
                let mut acc = NeumaierSum::default();
                for &(zeta, mass) in atoms {
                    if zeta.to_complex() == z {
                        return f64::NEG_INFINITY;
                    }
                    acc.add(-mass * ks_interior(z, zeta, *s));
                }
                acc.add(boundary_sum(boundary, density, *s, z));
                acc.add(*c);
                acc.value()
            }
            Prepared::Example2 { q } => example2_value(*q, z),
            Prepared::Constant(c) => *c,
        }
    }
}

fn blaschke_sum(atoms: &[(DiscPoint, f64)], z: Complex64) -> f64 {
    let mut acc = NeumaierSum::default();
    for &(a, m) in atoms {
        let g = green(z, a.to_complex());
        if g.is_infinite() {
            return f64::NEG_INFINITY;
        }
        acc.add(-m * g);
    }
    acc.value()
}

fn canonical_sum(atoms: &[(DiscPoint, f64)], s: u32, z: Complex64) -> f64 {
    let mut acc = NeumaierSum::default();
    for &(a, w) in atoms {
        let v = log_primary_at(z, a, s);
        if v == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        acc.add(w * v);
    }
    acc.value()
}

fn boundary_sum(boundary: &[(f64, f64)], density: &[(f64, f64, f64)], s: u32, z: Complex64) -> f64 {
    let mut acc = NeumaierSum::default();
    for &(theta, mass) in boundary {
        acc.add(-mass * ks_boundary(z, theta, s));
    }
    for &(a, b, value) in density {
        acc.add(-value * ks_boundary_integral(z, a, b, s));
    }
    acc.value()
}

#[inline]
pub(crate) fn example2_value(q: f64, z: Complex64) -> f64 {
    let base = Complex64::new(1.0, 0.0) - z;
    base.powf(q + 1.0).inv().re
}

/// `log|B(z)| = Σ m_n log(|a_n - z| / |1 - z ā_n|)`; a zero at the origin contributes `m log|z|`.
pub fn log_mod_blaschke(zeros: &ZeroSequence, z: DiscPoint) -> Result<f64> {
    z.require_interior("log_mod_blaschke")?;
    let atoms: Vec<_> = zeros
        .zeros()
        .iter()
        .map(|z| (z.point, z.multiplicity as f64))
        .collect();
    Ok(blaschke_sum(&atoms, z.to_complex()))
}

/// `U(z; μ, s) = ∫ log|E(A(z, ζ), s)| dμ(ζ)` over the disc part of `mu`.
pub fn canonical_integral(mu: &DiscMeasure, s: u32, z: DiscPoint) -> Result<f64> {
    z.require_interior("canonical_integral")?;
    let atoms: Vec<_> = mu.disc_atoms().iter().map(|a| (a.point, a.weight)).collect();
    Ok(canonical_sum(&atoms, s, z.to_complex()))
}

/// `-∫_{∂𝔻} K_s(z, e^{iθ}) dλ(e^{iθ})` for the boundary part of `lambda`.
pub fn boundary_term(lambda: &CompleteMeasure, z: DiscPoint) -> Result<f64> {
    z.require_interior("boundary_term")?;
    let boundary: Vec<_> = lambda
        .boundary_atoms()
        .iter()
        .map(|b| (b.theta, b.mass))
        .collect();
    let density: Vec<_> = lambda
        .boundary_density()
        .iter()
        .map(|p| (p.theta_start, p.theta_end, p.value))
        .collect();
    Ok(boundary_sum(&boundary, &density, lambda.s(), z.to_complex()))
}

/// `u(z) = -∫_{𝔻̄} K_s(z, ζ) dλ(ζ) + c`; `-∞` at disc atoms.
pub fn eval_representation(lambda: &CompleteMeasure, c: f64, z: DiscPoint) -> Result<f64> {
    SubharmonicSpec::Representation {
        lambda: lambda.clone(),
        c,
    }
    .eval(z)
}
