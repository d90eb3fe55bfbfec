use std::f64::consts::PI;

use krein_core::bounds::tan_half_arcsin;
use krein_core::enclosures::enclosure_radius;
use krein_core::oscillator::{build_oscillator, oscillator_report, Profile};
use krein_core::Tolerances;

fn interior(eigs: &[(f64, f64)], m: usize) -> Vec<f64> {
    eigs.iter().map(|e| e.0).filter(|&re| re <= (m / 2) as f64 + 0.75).collect()
}

#[test]
fn moderate_coupling_passes_all_checks() {
    let tol = Tolerances::default();
    let model = build_oscillator(64, 0.2, Profile::Sin, 4 * 64 + 50).unwrap();
    let rep = oscillator_report(&model, &tol).unwrap();
    println!(
        "||V|| = {:.6}, max |Im| = {:.3e}, max displacement = {:.6}, r_V = {:?}, tan = {:?}, rhs = {:?}",
        rep.norm_v_trunc, rep.max_abs_imag, rep.max_interior_displacement, rep.r_v_used, rep.measured_tan, rep.angle_bound_rhs
    );
    assert!(rep.real_ok && rep.max_abs_imag <= 1e-9);
    assert_eq!(rep.enclosure_ok, Some(true));
    assert_eq!(rep.angle_ok, Some(true));
    assert!(rep.passed());
    assert!(rep.angle_bound_rhs.unwrap() <= 0.5 * PI * tan_half_arcsin(0.4) + 1e-12);
    assert!(rep.angle_bound_rhs.unwrap() <= 0.3279);
    let r_v_full = enclosure_radius(0.2, 0.2, 1.0).unwrap();
    assert!((r_v_full - 0.0417424).abs() < 1e-6);
    assert!(rep.r_v_used.unwrap() <= r_v_full + 1e-12);
    assert_eq!(rep.interior_count, 33);
}

#[test]
fn interior_spectrum_is_stable_under_refinement() {
    let tol = Tolerances::default();
    let small = oscillator_report(&build_oscillator(64, 0.2, Profile::Sin, 306).unwrap(), &tol).unwrap();
    let large = oscillator_report(&build_oscillator(128, 0.2, Profile::Sin, 562).unwrap(), &tol).unwrap();
    let a = interior(&small.eigs, 64);
    let b = &large.eigs;
    let worst = a.iter().zip(b).map(|(x, y)| (x - y.0).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "interior eigenvalues moved by {worst}");
}

#[test]
fn truncated_norm_grows_with_truncation() {
    let mut last = 0.0;
    for m in [4, 8, 16, 32] {
        let model = build_oscillator(m, 0.3, Profile::Sin, 4 * m + 50).unwrap();
        assert!(model.norm_v_trunc >= last - 1e-14);
        assert!(model.norm_v_trunc <= 0.3 + 1e-10);
        last = model.norm_v_trunc;
    }
}

#[test]
fn parity_blocks_are_exactly_off_diagonal() {
    let model = build_oscillator(16, 0.2, Profile::Sin, 114).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            if (i + j) % 2 == 0 {
                assert!(model.coupling[(i, j)].abs() <= 1e-14);
            }
        }
    }
    assert!((model.coupling[(0, 1)] - (-0.25f64).exp() / 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn strong_coupling_is_observed_not_asserted() {
    let model = build_oscillator(16, 0.6, Profile::Sin, 114).unwrap();
    let rep = oscillator_report(&model, &Tolerances::default()).unwrap();
    assert!(!rep.real_asserted);
    assert!(rep.angle_ok.is_none());
    assert!(!rep.notes.is_empty());
}
