//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion. Exits nonzero
//! if any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use krein_core::enclosures::{
    enclosure_radius, enclosure_radius_root_form, neumann_excludes, qnr_halfplane_check, sample_qnr, verify_enclosure,
};
use krein_core::ensemble::{random_general_instance, random_j_instance, run_trial, EnsembleDisposition, TrialConfig, TrialOutcome};
use krein_core::linalg::{c64, frobenius, identity, min_singular_value, principal_sqrt, spectral_norm};
use krein_core::oscillator::{build_oscillator, oscillator_report, Profile};
use krein_core::random::{complex_gaussian_matrix, rng};
use krein_core::witnesses::{check_gap_in_a1, check_gap_in_z0, check_subordinated, gap_in_z0_witness};
use krein_core::Tolerances;

const EQ_TOL: f64 = 1e-10;
const SLACK_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn golden_gap_in_z0(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let w = check_gap_in_z0(4.0, 1.0, EQ_TOL, tol).expect("witness solves");
    let elapsed = start.elapsed().as_secs_f64();
    let norm_k = w.equalities[0].lhs;
    let closed = (norm_k - (2.0 - 3f64.sqrt())).abs();
    let pass = w.pass && closed <= EQ_TOL && elapsed < 0.1;
    outcome(pass, format!("||K|| = {norm_k:.16}, |diff to 2-sqrt3| = {closed:.1e}, worst equality {:.1e}, {elapsed:.4} s", worst(&w)))
}

fn worst(w: &krein_core::witnesses::WitnessResult) -> f64 {
    w.equalities.iter().map(|e| e.diff).fold(0.0, f64::max)
}

fn golden_gap_in_a1(tol: &Tolerances) -> Outcome {
    let w = check_gap_in_a1(2.0, 1.0, EQ_TOL, tol).expect("witness solves");
    let norm_k = w.equalities[0].lhs;
    let delta_hat = w.equalities[1].lhs;
    let pass = w.pass && (norm_k - 0.5).abs() <= EQ_TOL && (delta_hat - 3f64.sqrt()).abs() <= EQ_TOL;
    outcome(pass, format!("||K|| = {norm_k:.16}, delta_hat = {delta_hat:.16}, worst equality {:.1e}", worst(&w)))
}

fn golden_subordinated(tol: &Tolerances) -> Outcome {
    let w = check_subordinated(2.0, 0.6, EQ_TOL, tol).expect("witness solves");
    let norm_k = w.equalities[0].lhs;
    let tan2 = w.equalities[1].lhs;
    let displacement = w.equalities[3].lhs;
    let pass = w.pass
        && (norm_k - 1.0 / 3.0).abs() <= EQ_TOL
        && (tan2 - 0.75).abs() <= EQ_TOL
        && (displacement - 0.2).abs() <= EQ_TOL;
    outcome(
        pass,
        format!("||K|| = {norm_k:.16}, ||tan 2Theta|| = {tan2:.16}, displacement = r_V = {displacement:.16}, worst equality {:.1e}", worst(&w)),
    )
}

/// 1000 trials over dispositions x ratios, dimensions drawn in `min..=8`.
fn ensemble_trials(tol: &Tolerances) -> (Vec<TrialOutcome>, usize, f64) {
    let start = Instant::now();
    let ratios = [0.1, 0.25, 0.3];
    let results: Vec<_> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let disposition = EnsembleDisposition::ALL[(i % 3) as usize];
            let v_over_d = ratios[(i / 3 % 3) as usize];
            let (m0, m1) = disposition.min_dims();
            let mut r = rng(1_000_000 + i);
            let config = TrialConfig { n0: r.random_range(m0..=8), n1: r.random_range(m1..=8), v_over_d, disposition };
            run_trial(&config, 20_000, i, tol)
        })
        .collect();
    let failures = results.iter().filter(|r| r.is_err()).count();
    let ok = results.into_iter().filter_map(|r| r.ok()).collect();
    (ok, failures, start.elapsed().as_secs_f64())
}

fn ensemble_bounds(trials: &[TrialOutcome], failures: usize, elapsed: f64) -> Outcome {
    let min_slack = trials.iter().map(|t| t.bounds.min_slack()).fold(f64::INFINITY, f64::min);
    let applicable: usize = trials.iter().map(|t| t.bounds.records.iter().filter(|r| r.applicable).count()).sum();
    let ordering_ok = trials.iter().all(|t| {
        let rhs = |id: &str| t.bounds.record(id).and_then(|r| r.rhs);
        match (rhs("apriori_tan_generic"), rhs("apriori_tan_pi")) {
            (Some(a), Some(b)) => t.norm_v == 0.0 || a < b,
            _ => false,
        }
    });
    let pass = failures == 0 && trials.len() == 1000 && min_slack >= -SLACK_TOL && ordering_ok && elapsed < 30.0;
    outcome(
        pass,
        format!(
            "{} trials, {failures} solver failures, {applicable} applicable bounds, min slack {min_slack:.3e}, ordering {}, {elapsed:.2} s",
            trials.len(),
            if ordering_ok { "strict" } else { "VIOLATED" }
        ),
    )
}

fn diagonalization(trials: &[TrialOutcome]) -> Outcome {
    let max = |f: &dyn Fn(&TrialOutcome) -> f64| trials.iter().map(f).fold(0.0, f64::max);
    let recon = max(&|t| t.diagnostics.diagonalization_defect);
    let herm = max(&|t| t.diagnostics.lambda0_hermitian_defect.max(t.diagnostics.lambda1_hermitian_defect));
    let sim = max(&|t| t.diagnostics.similarity_defect);
    let pass = !trials.is_empty() && recon <= 1e-8 && herm <= 1e-9 && sim <= 1e-8;
    outcome(pass, format!("max relative reconstruction {recon:.1e}, Hermitian defect {herm:.1e}, spectral mismatch {sim:.1e}"))
}

fn angle_duality(trials: &[TrialOutcome]) -> Outcome {
    let tan = trials.iter().map(|t| t.tan_k_defect).fold(0.0, f64::max);
    let theta = trials.iter().map(|t| t.theta_defect).fold(0.0, f64::max);
    let pass = !trials.is_empty() && tan <= 1e-9 && theta <= 1e-9;
    outcome(pass, format!("max | ||tan Theta0|| - ||K|| | = {tan:.1e}, max |max Theta0 - max Theta1| = {theta:.1e}"))
}

fn enclosure_suite(tol: &Tolerances) -> Outcome {
    let ratios = [0.1, 0.3, 0.45];
    let results: Vec<_> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(30_000 + i);
            let disposition = EnsembleDisposition::ALL[(i % 3) as usize];
            let (m0, m1) = disposition.min_dims();
            let (n0, n1) = (r.random_range(m0..=6), r.random_range(m1..=6));
            let inst = random_general_instance(&mut r, n0, n1, ratios[(i / 3 % 3) as usize], disposition)?;
            verify_enclosure(&inst, tol)
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let reports: Vec<_> = results.into_iter().filter_map(|r| r.ok()).collect();
    let real = reports.iter().filter(|r| r.all_real).count();
    let inside = reports.iter().filter(|r| r.inclusion_ok).count();
    let min_margin = reports
        .iter()
        .flat_map(|r| r.eigenvalues.iter().map(|e| e.margin))
        .fold(f64::INFINITY, f64::min);

    let mut grid_err: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let d = 0.1 + 2.0 * i as f64;
            let v = d * 0.499 * j as f64 / 9.0;
            let a = enclosure_radius(v, v, d).unwrap();
            let b = enclosure_radius_root_form(v, v, d).unwrap();
            grid_err = grid_err.max((a - b).abs());
        }
    }
    let pass = errors == 0 && real == 500 && inside == 500 && min_margin >= -1e-9 && grid_err <= 1e-12;
    outcome(
        pass,
        format!(
            "{} general instances, {errors} errors, {real} real, {inside} enclosed, min margin {min_margin:.3e}, radius forms differ by {grid_err:.1e}",
            reports.len()
        ),
    )
}

fn neumann_soundness() -> Outcome {
    let mut excluded = 0usize;
    let mut unsound = 0usize;
    let mut worst = f64::INFINITY;
    for i in 0..200u64 {
        let mut r = rng(40_000 + i);
        let disposition = EnsembleDisposition::ALL[(i % 3) as usize];
        let (m0, m1) = disposition.min_dims();
        let (n0, n1) = (r.random_range(m0..=5), r.random_range(m1..=5));
        let v = [0.1, 0.3, 0.6, 1.5][(i / 3 % 4) as usize];
        let inst = random_j_instance(&mut r, n0, n1, v, disposition).unwrap();
        let l = inst.assemble();
        for _ in 0..50 {
            let z = c64(r.random_range(-1.0..8.0), r.random_range(-2.0..2.0));
            if let Ok(true) = neumann_excludes(&inst, z) {
                excluded += 1;
                let s = min_singular_value(&(&l - identity(l.nrows()) * z));
                worst = worst.min(s);
                if s < 1e-12 {
                    unsound += 1;
                }
            }
        }
    }
    outcome(unsound == 0 && excluded > 0, format!("{excluded} of 10000 points excluded, {unsound} unsound, min sigma_min {worst:.3e}"))
}

fn qnr_halfplane(tol: &Tolerances) -> Outcome {
    let mut instances = vec![gap_in_z0_witness(4.0, 1.0).unwrap()];
    let ratios = [0.1, 0.5, 1.0, 3.0];
    for i in 0..100u64 {
        let mut r = rng(50_000 + i);
        let disposition = EnsembleDisposition::ALL[(i % 3) as usize];
        let (m0, m1) = disposition.min_dims();
        let (n0, n1) = (r.random_range(m0..=5), r.random_range(m1..=5));
        instances.push(random_j_instance(&mut r, n0, n1, ratios[(i / 3 % 4) as usize], disposition).unwrap());
    }
    let results: Vec<bool> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| qnr_halfplane_check(inst, &sample_qnr(inst, 10_000, 60_000 + i as u64), tol).unwrap_or(false))
        .collect();
    let strong = instances.iter().filter(|i| i.norm_v() >= 2.999 * i.d()).count();
    let ok = results.iter().filter(|&&b| b).count();
    outcome(ok == results.len() && strong > 0, format!("{ok}/{} instances inside the strip ({strong} with ||V|| = 3d)", results.len()))
}

fn oscillator(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let model = build_oscillator(64, 0.2, Profile::Sin, 306).unwrap();
    let rep = oscillator_report(&model, tol).unwrap();
    let fine = oscillator_report(&build_oscillator(128, 0.2, Profile::Sin, 562).unwrap(), tol).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let element = (model.coupling[(0, 1)] - (-0.25f64).exp() / 2f64.sqrt()).abs();
    let r_v = enclosure_radius(0.2, 0.2, 1.0).unwrap();
    let r_v_used = rep.r_v_used.unwrap_or(f64::NAN);
    let rhs = rep.angle_bound_rhs.unwrap_or(f64::NAN);
    let tan = rep.measured_tan.unwrap_or(f64::NAN);
    let interior: Vec<f64> = rep.eigs.iter().map(|e| e.0).filter(|&x| x <= 32.5 + 0.5).collect();
    let drift = interior.iter().zip(&fine.eigs).map(|(a, b)| (a - b.0).abs()).fold(0.0, f64::max);
    let pass = rep.max_abs_imag <= 1e-9
        && (r_v - 0.0417424).abs() <= 5e-7
        && rep.max_interior_displacement <= r_v_used
        && r_v_used <= r_v
        && tan <= rhs
        && rhs <= 0.3279
        && element <= 1e-10
        && drift <= 1e-8
        && elapsed < 10.0;
    outcome(
        pass,
        format!(
            "max |Im| {:.1e}, displacement {:.6} <= r_V {r_v_used:.6} (full {r_v:.7}), tan {tan:.6} <= {rhs:.6}, element error {element:.1e}, M->128 drift {drift:.1e}, {elapsed:.2} s",
            rep.max_abs_imag, rep.max_interior_displacement
        ),
    )
}

fn commutation() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut r = rng(70_000 + i);
        let (n, m) = (r.random_range(1..=6), r.random_range(1..=6));
        let a = complex_gaussian_matrix(&mut r, n, m);
        let b = complex_gaussian_matrix(&mut r, m, n);
        let target: f64 = r.random_range(0.0..0.9);
        let s = (target / spectral_norm(&(&a * &b)).max(spectral_norm(&(&b * &a)))).sqrt();
        let (a, b) = (a * c64(s, 0.0), b * c64(s, 0.0));
        let left = &a * principal_sqrt(&(identity(m) - &b * &a)).unwrap();
        let right = principal_sqrt(&(identity(n) - &a * &b)).unwrap() * &a;
        worst = worst.max(frobenius(&(left - right)));
    }
    outcome(worst <= 1e-10, format!("max commutation defect {worst:.1e} over 200 pairs"))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("krein-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_krein"))
            .args(["ensemble", "--trials", "200", "--dims", "5,3", "--v-over-d", "0.25", "--disposition", "gap", "--seed", "42"])
            .arg("--out")
            .arg(&path)
            .status()
            .expect("binary runs");
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok1, first) = run("a.csv");
    let (ok2, second) = run("b.csv");
    let _ = std::fs::remove_dir_all(&dir);
    outcome(ok1 && ok2 && !first.is_empty() && first == second, format!("two runs, {} bytes each, identical: {}", first.len(), first == second))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let tol = Tolerances::default();
    let (trials, failures, elapsed) = ensemble_trials(&tol);
    let criteria: Vec<Criterion> = vec![
        ("golden sharpness, gap in spectrum of Z0", Box::new(|| golden_gap_in_z0(&tol))),
        ("golden sharpness, gap in spectrum of A1", Box::new(|| golden_gap_in_a1(&tol))),
        ("golden sharpness, subordinated scalar pair", Box::new(|| golden_subordinated(&tol))),
        ("ensemble bound suite", Box::new(|| ensemble_bounds(&trials, failures, elapsed))),
        ("block diagonalization", Box::new(|| diagonalization(&trials))),
        ("angle duality", Box::new(|| angle_duality(&trials))),
        ("enclosure suite", Box::new(|| enclosure_suite(&tol))),
        ("Schur complement / Neumann soundness", Box::new(neumann_soundness)),
        ("quadratic numerical range strip", Box::new(|| qnr_halfplane(&tol))),
        ("oscillator", Box::new(|| oscillator(&tol))),
        ("operator function commutation", Box::new(commutation)),
        ("ensemble determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
