//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Every export returns a JSON string; errors surface as JS exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use krein_core::angles::AngleReport;
use krein_core::bounds::{check_bounds, BoundReport};
use krein_core::enclosures::{enclosure_radius, sample_qnr};
use krein_core::oscillator::{build_oscillator, oscillator_report, OscillatorReport, Profile};
use krein_core::riccati::solve_riccati_with;
use krein_core::schur::eigenvalues;
use krein_core::witnesses::{
    check_gap_in_a1, check_gap_in_z0, check_subordinated, gap_in_a1_witness, gap_in_z0_witness, subordinated_witness,
    WitnessResult,
};
use krein_core::{BlockInstance, Error, Result, Tolerances};

fn witness_instance(kind: &str, d: f64, b: f64) -> Result<BlockInstance> {
    match kind {
        "gap_in_z0" => gap_in_z0_witness(d, b),
        "gap_in_a1" => gap_in_a1_witness(d, b),
        "subordinated" => subordinated_witness(d, b),
        _ => Err(Error::InvalidInput(format!("unknown witness `{kind}`"))),
    }
}

#[derive(Serialize)]
pub struct WitnessAnalysis {
    pub norm_k: f64,
    pub norm_v: f64,
    pub d: f64,
    pub r_v: Option<f64>,
    pub witness: WitnessResult,
    pub bounds: BoundReport,
}

/// Solves one witness family at `(d, b)` and checks the whole bound catalogue.
pub fn analyze_witness(kind: &str, d: f64, b: f64) -> Result<WitnessAnalysis> {
    let tol = Tolerances::default();
    let eq_tol = 1e-10;
    let witness = match kind {
        "gap_in_z0" => check_gap_in_z0(d, b, eq_tol, &tol)?,
        "gap_in_a1" => check_gap_in_a1(d, b, eq_tol, &tol)?,
        "subordinated" => check_subordinated(d, b, eq_tol, &tol)?,
        _ => return Err(Error::InvalidInput(format!("unknown witness `{kind}`"))),
    };
    let inst = witness_instance(kind, d, b)?;
    let sol = solve_riccati_with(&inst, &tol)?;
    let angles = AngleReport::from_solution(&inst, &sol)?;
    let bounds = check_bounds(&inst, &sol, &angles, &tol)?;
    let (norm_v, d) = (inst.norm_v(), inst.d());
    Ok(WitnessAnalysis { norm_k: sol.norm_k, norm_v, d, r_v: enclosure_radius(norm_v, norm_v, d).ok(), witness, bounds })
}

#[derive(Serialize)]
pub struct QnrCloud {
    pub qnr: Vec<(f64, f64)>,
    pub spectrum: Vec<(f64, f64)>,
    pub norm_v: f64,
    /// Hull of the unperturbed spectrum.
    pub strip: (f64, f64),
}

/// Samples the quadratic numerical range of a witness instance.
pub fn qnr_cloud(kind: &str, d: f64, b: f64, samples: usize, seed: u64) -> Result<QnrCloud> {
    let inst = witness_instance(kind, d, b)?;
    let pairs = |v: &[krein_core::linalg::C64]| v.iter().map(|z| (z.re, z.im)).collect();
    let sample = sample_qnr(&inst, samples, seed);
    let diag: Vec<f64> = inst.sigma0().into_iter().chain(inst.sigma1()).collect();
    let strip = (diag.iter().copied().fold(f64::INFINITY, f64::min), diag.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    Ok(QnrCloud {
        qnr: pairs(&sample.points),
        spectrum: pairs(&eigenvalues(&inst.assemble())?),
        norm_v: inst.norm_v(),
        strip,
    })
}

/// Truncated oscillator with the `sin` profile.
pub fn oscillator_spectrum(beta: f64, m: usize) -> Result<OscillatorReport> {
    let model = build_oscillator(m, beta, Profile::Sin, 4 * m + 50)?;
    oscillator_report(&model, &Tolerances::default())
}

fn js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&format!("{}: {e}", e.name())))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = analyzeWitness)]
pub fn analyze_witness_js(kind: &str, d: f64, b: f64) -> std::result::Result<String, JsError> {
    js(analyze_witness(kind, d, b))
}

#[wasm_bindgen(js_name = qnrCloud)]
pub fn qnr_cloud_js(kind: &str, d: f64, b: f64, samples: usize, seed: u32) -> std::result::Result<String, JsError> {
    js(qnr_cloud(kind, d, b, samples, seed as u64))
}

#[wasm_bindgen(js_name = oscillatorSpectrum)]
pub fn oscillator_spectrum_js(beta: f64, m: usize) -> std::result::Result<String, JsError> {
    js(oscillator_spectrum(beta, m))
}
