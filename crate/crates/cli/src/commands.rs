use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use krein_core::angles::AngleReport;
use krein_core::bounds::{check_bounds, tsuff_check, BoundReport, TsuffRecord};
use krein_core::enclosures::{qnr_halfplane_check, sample_qnr, verify_enclosure, EnclosureReport};
use krein_core::ensemble::{run_trial, EnsembleDisposition, TrialConfig, TrialOutcome};
use krein_core::oscillator::{build_oscillator, oscillator_report, Profile};
use krein_core::report::{bounds_csv, ensemble_csv, fmt_f64, points_csv, to_json};
use krein_core::riccati::{solve_riccati_with, Diagnostics, Grouping};
use krein_core::schur::eigenvalues;
use krein_core::witnesses::run_witnesses;
use krein_core::{BlockInstance, Error, Mode, Tolerances};

use crate::failure::Failure;
use crate::{Common, Format};

const DEFAULT_EQUALITY_TOL: f64 = 1e-10;

fn tolerances(common: &Common) -> Result<Tolerances, Failure> {
    match common.tol {
        None => Ok(Tolerances::default()),
        Some(t) if t >= 0.0 && t.is_finite() => Ok(Tolerances::default().with_slack(t)),
        Some(t) => Err(Failure::input(format!("--tol must be a nonnegative number, got {t}"))),
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<BlockInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(BlockInstance::from_json(&text)?)
}

#[derive(Serialize)]
struct InstanceSummary {
    n0: usize,
    n1: usize,
    mode: Mode,
    norm_b: f64,
    norm_c: f64,
    d: f64,
}

#[derive(Serialize)]
struct SolutionSummary {
    norm_k: f64,
    grouping: Grouping,
    sigma0_prime: Vec<f64>,
    sigma1_prime: Vec<f64>,
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
struct AnalyzeBundle {
    instance: InstanceSummary,
    solution: Option<SolutionSummary>,
    angles: Option<AngleReport>,
    bounds: Option<BoundReport>,
    tsuff: Option<TsuffRecord>,
    enclosure: Option<EnclosureReport>,
    notes: Vec<String>,
    pass: bool,
}

pub fn analyze(path: &Path, common: &Common) -> Result<bool, Failure> {
    let tol = tolerances(common)?;
    let inst = load_instance(path)?;
    let mut notes = Vec::new();

    let (solution, angles, bounds) = if inst.mode == Mode::JSelfAdjoint {
        let sol = solve_riccati_with(&inst, &tol)?;
        let angles = AngleReport::from_solution(&inst, &sol)?;
        let bounds = check_bounds(&inst, &sol, &angles, &tol)?;
        let summary = SolutionSummary {
            norm_k: sol.norm_k,
            grouping: sol.grouping,
            sigma0_prime: sol.sigma0_prime.clone(),
            sigma1_prime: sol.sigma1_prime.clone(),
            diagnostics: sol.diagnostics(&inst)?,
        };
        (Some(summary), Some(angles), Some(bounds))
    } else {
        notes.push("general mode: Riccati solution and angle bounds need a j_self_adjoint instance".into());
        (None, None, None)
    };
    let tsuff = match tsuff_check(&inst, &tol) {
        Ok(t) => Some(t),
        Err(e) => {
            notes.push(format!("similarity conditions not evaluated: {}", e.name()));
            None
        }
    };
    let enclosure = match verify_enclosure(&inst, &tol) {
        Ok(r) => Some(r),
        Err(Error::HypothesesNotMet(why)) => {
            notes.push(format!("enclosure not applicable: {why}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let pass = bounds.as_ref().is_none_or(|b| b.all_hold()) && enclosure.as_ref().is_none_or(|e| e.inclusion_ok);

    let bundle = AnalyzeBundle {
        instance: InstanceSummary {
            n0: inst.n0(),
            n1: inst.n1(),
            mode: inst.mode,
            norm_b: inst.norm_b(),
            norm_c: inst.norm_c(),
            d: inst.d(),
        },
        solution,
        angles,
        bounds,
        tsuff,
        enclosure,
        notes,
        pass,
    };
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&bundle) + "\n",
        Format::Csv => match &bundle.bounds {
            Some(b) => bounds_csv(b),
            None => krein_core::report::BOUNDS_HEADER.to_string() + "\n",
        },
        Format::Text => analyze_text(&bundle),
    };
    emit(common, &text)?;
    Ok(pass)
}

fn analyze_text(b: &AnalyzeBundle) -> String {
    let mut s = String::new();
    let i = &b.instance;
    let _ = writeln!(s, "instance: n0 = {}, n1 = {}, d = {}, ||B|| = {}, ||C|| = {}", i.n0, i.n1, i.d, i.norm_b, i.norm_c);
    if let Some(sol) = &b.solution {
        let _ = writeln!(s, "||K|| = {}  residual = {:.3e}", sol.norm_k, sol.diagnostics.residual);
    }
    if let Some(a) = &b.angles {
        let _ = writeln!(s, "||tan Theta|| = {}  ||sin 2Theta|| = {}  ||tan 2Theta|| = {}", a.norm_tan, a.norm_sin2, a.norm_tan2);
    }
    if let Some(rep) = &b.bounds {
        for r in &rep.records {
            match (r.rhs, r.slack) {
                (Some(rhs), Some(slack)) => {
                    let mark = if r.holds { "ok" } else { "VIOLATED" };
                    let _ = writeln!(s, "  {:<26} lhs {:<22} rhs {:<22} slack {:+.3e} {mark}", r.bound_id, r.lhs, rhs, slack);
                }
                _ => {
                    let _ = writeln!(s, "  {:<26} inapplicable", r.bound_id);
                }
            }
        }
    }
    if let Some(e) = &b.enclosure {
        let _ = writeln!(s, "enclosure: r_V = {}  inclusion {}", e.r_v, if e.inclusion_ok { "ok" } else { "VIOLATED" });
    }
    for n in &b.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "{}", if b.pass { "PASS" } else { "FAIL" });
    s
}

pub fn examples(json: bool, common: &Common) -> Result<bool, Failure> {
    tolerances(common)?;
    let eq_tol = common.tol.unwrap_or(DEFAULT_EQUALITY_TOL);
    let results = run_witnesses(eq_tol, &Tolerances::default())?;
    let pass = results.iter().all(|w| w.pass);
    let format = if json { Format::Json } else { common.format.unwrap_or(Format::Text) };
    let text = match format {
        Format::Json => to_json(&results) + "\n",
        Format::Csv => {
            let mut s = String::from("witness,d,b,equality,lhs,rhs,diff,pass\n");
            for w in &results {
                for e in &w.equalities {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{}",
                        w.name,
                        fmt_f64(w.d),
                        fmt_f64(w.b),
                        e.name,
                        fmt_f64(e.lhs),
                        fmt_f64(e.rhs),
                        fmt_f64(e.diff),
                        e.pass
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for w in &results {
                let _ = writeln!(s, "{:<13} d = {:<4} b = {:<4} {}", w.name, w.d, w.b, if w.pass { "pass" } else { "FAIL" });
                for e in &w.equalities {
                    let _ = writeln!(s, "    {:<48} |diff| = {:.3e}{}", e.name, e.diff, if e.pass { "" } else { "  FAILED" });
                }
            }
            let passed = results.iter().filter(|w| w.pass).count();
            let _ = writeln!(s, "{passed}/{} pass", results.len());
            s
        }
    };
    emit(common, &text)?;
    for w in &results {
        for e in w.failures() {
            eprintln!("{}: equality '{}' fails by {:.3e}", w.name, e.name, e.diff);
        }
    }
    Ok(pass)
}

pub fn ensemble(
    trials: u64,
    dims: (usize, usize),
    v_over_d: f64,
    disposition: &str,
    allow_gap_only: bool,
    common: &Common,
) -> Result<bool, Failure> {
    let tol = tolerances(common)?;
    let disposition: EnsembleDisposition = disposition.parse()?;
    let limit = if allow_gap_only { 0.5 } else { 1.0 / std::f64::consts::PI };
    if !(v_over_d >= 0.0 && v_over_d < limit) {
        return Err(Failure::input(format!(
            "--v-over-d must lie in [0, {limit:.6}){}",
            if allow_gap_only { "" } else { "; pass --allow-gap-only to go up to 1/2" }
        )));
    }
    let (m0, m1) = disposition.min_dims();
    if dims.0 < m0 || dims.1 < m1 {
        return Err(Failure::input(format!("{disposition} disposition needs dims of at least {m0},{m1}")));
    }
    let config = TrialConfig { n0: dims.0, n1: dims.1, v_over_d, disposition };
    let outcomes: Vec<Result<TrialOutcome, Error>> =
        (0..trials).into_par_iter().map(|i| run_trial(&config, common.seed, i, &tol)).collect();
    let outcomes: Vec<TrialOutcome> = outcomes
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Failure { message: format!("trial {i}: {}", Failure::from(e).message), code: 3 }))
        .collect::<Result<_, _>>()?;

    let min_slack = outcomes.iter().map(|t| t.bounds.min_slack()).fold(f64::INFINITY, f64::min);
    let pass = outcomes.iter().all(|t| t.bounds.all_hold());
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => ensemble_csv(&outcomes),
        Format::Json => to_json(&outcomes) + "\n",
        Format::Text => {
            let mut s = String::new();
            for t in &outcomes {
                let _ = writeln!(s, "trial {:>5} seed {:>20} ||K|| = {:<22} min slack {:+.3e}", t.index, t.seed, t.norm_k, t.bounds.min_slack());
            }
            s
        }
    };
    emit(common, &text)?;
    eprintln!("trials={trials} disposition={disposition} v_over_d={v_over_d} min_slack={min_slack:.6e} pass={pass}");
    Ok(pass)
}

fn parse_profile(arg: &str) -> Result<Profile, Failure> {
    if arg == "sin" {
        return Ok(Profile::Sin);
    }
    let text = fs::read_to_string(arg)
        .map_err(|e| Failure::input(format!("profile must be 'sin' or a readable table file ({arg}: {e})")))?;
    let pts: Vec<(f64, f64)> =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("profile table {arg}: {e}")))?;
    Ok(Profile::Table(pts))
}

pub fn oscillator(beta: f64, m: usize, profile: &str, quad_nodes: Option<usize>, common: &Common) -> Result<bool, Failure> {
    let tol = tolerances(common)?;
    let profile = parse_profile(profile)?;
    let model = build_oscillator(m, beta, profile, quad_nodes.unwrap_or(4 * m + 50))?;
    let rep = oscillator_report(&model, &tol)?;
    let pass = rep.passed();
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&rep) + "\n",
        Format::Csv => {
            let mut s = String::from("re,im\n");
            for (re, im) in &rep.eigs {
                let _ = writeln!(s, "{},{}", fmt_f64(*re), fmt_f64(*im));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "beta = {}  M = {}  ||V_trunc|| = {}", rep.beta, rep.truncation_m, rep.norm_v_trunc);
            let _ = writeln!(s, "max |Im| = {:.3e}  real {}", rep.max_abs_imag, if rep.real_ok { "yes" } else { "no" });
            let _ = writeln!(
                s,
                "interior eigenvalues: {}  max displacement {}  r_V {:?}",
                rep.interior_count, rep.max_interior_displacement, rep.r_v_used
            );
            let _ = writeln!(s, "||tan Theta|| = {:?}  bound {:?}", rep.measured_tan, rep.angle_bound_rhs);
            for n in &rep.notes {
                let _ = writeln!(s, "note: {n}");
            }
            let _ = writeln!(s, "{}", if pass { "PASS" } else { "FAIL" });
            s
        }
    };
    emit(common, &text)?;
    Ok(pass)
}

pub fn qnr(path: &Path, samples: usize, common: &Common) -> Result<bool, Failure> {
    let tol = tolerances(common)?;
    let inst = load_instance(path)?;
    let sample = sample_qnr(&inst, samples, common.seed);
    let spectrum = eigenvalues(&inst.assemble())?;
    let pass = match qnr_halfplane_check(&inst, &sample, &tol) {
        Ok(ok) => ok,
        Err(Error::HypothesesNotMet(why)) => {
            eprintln!("note: half-plane check inapplicable: {why}");
            true
        }
        Err(e) => return Err(e.into()),
    };
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct QnrJson {
                seed: u64,
                n_samples: usize,
                qnr: Vec<(f64, f64)>,
                spectrum: Vec<(f64, f64)>,
                pass: bool,
            }
            let pairs = |v: &[krein_core::linalg::C64]| v.iter().map(|z| (z.re, z.im)).collect();
            to_json(&QnrJson {
                seed: common.seed,
                n_samples: samples,
                qnr: pairs(&sample.points),
                spectrum: pairs(&spectrum),
                pass,
            }) + "\n"
        }
        _ => points_csv([("qnr", sample.points.as_slice()), ("spectrum", spectrum.as_slice())]),
    };
    emit(common, &text)?;
    Ok(pass)
}
