use krein_web::{analyze_witness, oscillator_spectrum, qnr_cloud};

#[test]
fn witness_analysis_is_sharp() {
    let a = analyze_witness("gap_in_z0", 4.0, 1.0).unwrap();
    assert!((a.norm_k - (2.0 - 3f64.sqrt())).abs() < 1e-12);
    assert!(a.witness.pass);
    assert!(a.bounds.all_hold());
    assert!(serde_json::to_string(&a).unwrap().contains("bound_id"));
}

#[test]
fn unknown_witness_is_rejected() {
    assert!(analyze_witness("nope", 1.0, 1.0).is_err());
    assert!(qnr_cloud("nope", 1.0, 1.0, 10, 0).is_err());
}

#[test]
fn qnr_cloud_stays_in_strip() {
    let c = qnr_cloud("subordinated", 2.0, 0.6, 2000, 3).unwrap();
    assert_eq!(c.spectrum.len(), 2);
    assert_eq!(c.strip, (-1.0, 1.0));
    assert!(c.qnr.iter().all(|&(re, _)| re.abs() <= 1.0 + 1e-9));
}

#[test]
fn oscillator_small_truncation() {
    let r = oscillator_spectrum(0.2, 16).unwrap();
    assert_eq!(r.eigs.len(), 16);
    assert!(r.max_abs_imag <= 1e-9);
}
