//! Browser bindings: zeros travel as flat `[re0, im0, re1, im1, ...]` arrays.

use std::f64::consts::PI;

use discmeans::fit::dyadic_radii;
use discmeans::means::mean_profile;
use discmeans::{
    box_mass, build_complete_measure, log_mod_blaschke, DiscPoint, Error, RegionSpec, Result, SubharmonicSpec,
    ZeroSequence,
};
use wasm_bindgen::prelude::*;

pub fn zeros_from_flat(flat: &[f64]) -> Result<ZeroSequence> {
    if flat.len() % 2 != 0 {
        return Err(Error::InvalidInput("zero array must hold (re, im) pairs".into()));
    }
    let points = flat
        .chunks_exact(2)
        .map(|c| DiscPoint::new(c[0], c[1]))
        .collect::<Result<Vec<_>>>()?;
    ZeroSequence::simple(points)
}

/// `[r_j, m_p(r_j)]` pairs for `r_j = 1 - 2^-j`, `j = j0..=j1`, of `log|B|`.
pub fn mean_curve(zeros: &[f64], p: f64, j0: u32, j1: u32) -> Result<Vec<f64>> {
    if j0 > j1 || j1 > 30 {
        return Err(Error::InvalidInput("need j0 <= j1 <= 30".into()));
    }
    let u = SubharmonicSpec::BlaschkeLogMod(zeros_from_flat(zeros)?);
    let radii = dyadic_radii(j0, j1);
    let means = mean_profile(&u, &radii, p, 1e-6)?;
    Ok(radii.iter().zip(&means).flat_map(|(&r, &m)| [r, m]).collect())
}

/// `λ(C(φ_k, δ))` at `φ_k = -π + 2πk/n`, with `λ` the complete measure of the zeros at genus `s`.
pub fn box_profile(zeros: &[f64], s: u32, delta: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one angle".into()));
    }
    let lambda = build_complete_measure(&zeros_from_flat(zeros)?.to_measure(), s);
    (0..n)
        .map(|k| {
            let phi = -PI + 2.0 * PI * k as f64 / n as f64;
            Ok(box_mass(&lambda, &RegionSpec::carleson_box(phi, delta)?).0)
        })
        .collect()
}

/// Row-major `n × n` samples of `log|B|` at cell centres of `[-1, 1]²`, top row first; NaN outside the disc.
pub fn log_modulus_field(zeros: &[f64], n: usize) -> Result<Vec<f64>> {
    let zeros = zeros_from_flat(zeros)?;
    let h = 2.0 / n.max(1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        let y = 1.0 - (row as f64 + 0.5) * h;
        for col in 0..n {
            let x = -1.0 + (col as f64 + 0.5) * h;
            let v = DiscPoint::new(x, y)
                .and_then(|z| log_mod_blaschke(&zeros, z))
                .unwrap_or(f64::NAN);
            out.push(v);
        }
    }
    Ok(out)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = meanCurve)]
pub fn mean_curve_js(zeros: &[f64], p: f64, j0: u32, j1: u32) -> std::result::Result<Vec<f64>, JsError> {
    mean_curve(zeros, p, j0, j1).map_err(js)
}

#[wasm_bindgen(js_name = boxProfile)]
pub fn box_profile_js(zeros: &[f64], s: u32, delta: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
    box_profile(zeros, s, delta, n).map_err(js)
}

#[wasm_bindgen(js_name = logModulusField)]
pub fn log_modulus_field_js(zeros: &[f64], n: usize) -> std::result::Result<Vec<f64>, JsError> {
    log_modulus_field(zeros, n).map_err(js)
}
