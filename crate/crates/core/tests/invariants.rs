use std::f64::consts::PI;

use discmeans::fit::{dyadic_radii, fit_exponent, DEFAULT_FLOOR_EPS};
use discmeans::verify::{example2_measure, example2_spec};
use discmeans::*;

fn ray_power(k_max: u32, power: f64) -> ZeroSequence {
    ZeroSequence::on_ray((2..=k_max).map(|k| 1.0 - (k as f64).powf(-power))).unwrap()
}

#[test]
fn linden_counts_grow_like_inverse_square_root() {
    let zeros = ray_power(4096, 2.0);
    let samples: Vec<_> = dyadic_radii(3, 11)
        .into_iter()
        .map(|r| (1.0 - r, linden_region_count(&zeros, r, 0.0, 1.0, 1.0).unwrap()))
        .collect();
    let fit = fit_exponent(&samples, DEFAULT_FLOOR_EPS).unwrap().negated();
    assert!(fit.exponent <= 0.6, "{fit:?}");
}

#[test]
fn threshold_counting_gives_bounded_means() {
    let zeros = ray_power(16384, 2.0);
    let rep = verify_stolz(&zeros, &[0.0], 2.0, DyadicRange::new(5, 13).unwrap(), 0.1).unwrap();
    assert!((rep.gamma_box.exponent - 0.5).abs() <= 0.1, "{rep:?}");
    assert!(rep.gamma_means.exponent <= 0.1, "{rep:?}");
    assert!(rep.consistent);
}

#[test]
fn box_and_means_exponents_agree_for_blaschke_ray() {
    let zeros = ray_power(16384, 2.0);
    let lambda = build_complete_measure(&zeros.to_measure(), 0);
    let u = SubharmonicSpec::BlaschkeLogMod(zeros);
    let grid = DyadicRange::new(3, 11).unwrap();
    let rep = verify_box_vs_means(&lambda, &u, 0, 2.0, grid, grid, 0.2).unwrap();
    assert!((rep.gamma_box.exponent - 1.0).abs() <= 0.1, "{rep:?}");
    assert!(rep.gamma_means.exponent.abs() <= 0.1, "{rep:?}");
    assert!(((1.0 - rep.gamma_box.exponent).max(0.0) - rep.gamma_means.exponent).abs() <= 0.2);
    assert!(rep.consistent);
    assert_eq!(rep.direction, Direction::Iff);
}

#[test]
fn box_and_means_exponents_agree_for_example2() {
    let grid = DyadicRange::new(4, 12).unwrap();
    let rep = verify_box_vs_means(&example2_measure(0), &example2_spec(0.0), 0, 2.0, grid, grid, 0.05).unwrap();
    assert!(((1.0 - rep.gamma_box.exponent) - rep.gamma_means.exponent).abs() <= 0.2);
    assert!(rep.consistent, "{rep:?}");
}

#[test]
fn growth_sufficiency_for_ray_atoms() {
    // the local slope approaches 0.4 from above slowly, so fit the far end only
    let zeros = ray_power(40000, 1.0 / 0.9);
    let rep = verify_growth_sufficiency(&zeros.to_measure(), 1, 2.0, 0.4, DyadicRange::new(7, 14).unwrap(), 0.1)
        .unwrap();
    assert!((rep.gamma_box.exponent - 0.9).abs() <= 0.05, "{rep:?}");
    assert!(rep.consistent, "{rep:?}");
    assert_eq!(rep.direction, Direction::Sufficiency);
}

#[test]
fn growth_sufficiency_for_example1() {
    let (zeros, s) = gen_example1(1.0, 1.0, 9).unwrap();
    assert_eq!(s, 2);
    let rep = verify_growth_sufficiency(&zeros.to_measure(), s, 2.0, 1.5, DyadicRange::new(3, 7).unwrap(), 0.1)
        .unwrap();
    assert!(rep.consistent, "{rep:?}");
}

#[test]
fn phi_and_psi_concentrate_at_the_cluster_vertex() {
    let pts = (2..400).map(|k| {
        let d = 1.0 / k as f64;
        DiscPoint::from_polar(1.0 - d, 0.3 * d).unwrap()
    });
    let zeros = ZeroSequence::simple(pts).unwrap();
    let stolz = BoundaryFunctionSample::stolz(&zeros, 1024).unwrap();
    let psi = BoundaryFunctionSample::psi(&zeros, 0.0, 1024).unwrap();
    let (vertex, antipode) = (0, 512);
    assert!(stolz.values()[vertex] > 10.0 && stolz.values()[antipode] == 0.0);
    assert!(psi.values()[vertex] > 100.0 * psi.values()[antipode]);
    assert!((stolz.thetas()[antipode] - PI).abs() < 1e-15);
}

#[test]
fn i_mean_is_square_of_circle_mean() {
    let zeros = ray_power(300, 2.0);
    let u = SubharmonicSpec::BlaschkeLogMod(zeros.clone());
    for &r in &[0.3, 0.8, 0.99] {
        let m = circle_mean_mp(&u, r, 2.0, 1e-9).unwrap();
        let i = i_mean(&zeros, r, 1e-9).unwrap();
        assert!((m * m - i).abs() <= 1e-9 * i.max(1.0));
    }
}
