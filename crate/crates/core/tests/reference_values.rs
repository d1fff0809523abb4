//! Engine values against numbers frozen from an independent numpy/scipy
//! implementation (direct sums and a separate Ewald split of the 1/|n|^2 sum).

use latticebands::latticesum::{s1_theta_integral, s2_theta_integral, s3_ewald};
use latticebands::specfun::{erfcx_complex, exp_integral_e1, log_gamma};
use latticebands::*;

fn bm(c: &[f64]) -> BlochMomentum {
    BlochMomentum::new(c).unwrap()
}

fn close(a: C64, re: f64, im: f64, tol: f64) {
    let e = (a - C64::new(re, im)).norm();
    assert!(e < tol, "{a} vs {re}{im:+}i: {e:.3e}");
}

#[test]
fn one_dimensional_sum_matches_direct_sum() {
    // static part summed to n = 1e5 (tail ~ n^-3), Helmholtz part exponentially convergent
    let s = lattice_sum_1d(C64::new(0.3, 0.1), 0.2).unwrap();
    close(s, -0.044_728_259_460_511_17, 0.150_402_342_342_512_87, 1e-8);
}

#[test]
fn one_dimensional_generic_engine_matches_direct_sum() {
    let cfg = EwaldConfig {
        generic_1d: true,
        ..Default::default()
    };
    let s = lattice_sum(1, C64::new(0.3, 0.1), &bm(&[0.2]), &cfg).unwrap();
    close(s, -0.044_728_259_460_511_17, 0.150_402_342_342_512_87, 1e-8);
}

#[test]
fn static_sum_three_dimensions() {
    let v = s1_theta_integral(3, &bm(&[0.1, 0.2, 0.3]), &EwaldConfig::default()).unwrap();
    assert!((v - 0.017_986_083_924_496_5).abs() < 1e-10, "{v}");
}

#[test]
fn e1_bracket_sum_two_dimensions() {
    // direct sum of G(r; -k) to radius 2000 minus the static 1/|n|^2 part
    let v = s2_theta_integral(
        2,
        C64::new(0.3, 0.1),
        &bm(&[0.2, 0.4]),
        &EwaldConfig::default(),
    )
    .unwrap();
    close(v, 0.051_601_029_095_933_21, 0.004_617_572_674_858_205, 1e-8);
}

#[test]
fn helmholtz_sum_three_dimensions() {
    let v = s3_ewald(
        3,
        C64::new(0.2, 0.15),
        &bm(&[0.1, 0.2, 0.3]),
        &EwaldConfig::default(),
    )
    .unwrap();
    close(v, 0.084_419_191_454_369_14, 0.107_248_492_031_729_95, 1e-9);
}

#[test]
fn special_function_examples() {
    close(
        exp_integral_e1(C64::new(1.0, 0.0)).unwrap(),
        0.219_383_934_395_520,
        0.0,
        1e-14,
    );
    close(
        erfcx_complex(C64::new(10.0, 0.0)).unwrap(),
        0.056_140_992_743_8,
        0.0,
        1e-10,
    );
    close(
        log_gamma(C64::new(0.5, 0.0)).unwrap(),
        0.572_364_942_924_700_1,
        0.0,
        1e-14,
    );
}

#[test]
fn gamma0_and_zone_centre_rate() {
    let p = ModelParams::default();
    assert!((gamma0(&p) - 2.827_433_388_230_814e-3).abs() < 1e-15);
    assert!((decay_rate_1d(0.0, &p) - 0.3 * std::f64::consts::PI * 5e-3).abs() < 1e-15);
}
