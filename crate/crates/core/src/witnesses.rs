//! Three small instances on which the angular-operator bounds are attained
//! with equality.

use serde::Serialize;

use crate::angles::AngleReport;
use crate::bounds::{check_bounds, tan_half_arcsin};
use crate::enclosures::verify_enclosure;
use crate::error::{Error, Result};
use crate::instance::BlockInstance;
use crate::linalg::{real_diagonal, real_matrix, set_distance};
use crate::riccati::solve_riccati_with;
use crate::schur::eigenvalues;
use crate::tolerance::Tolerances;

/// `A0 = diag(-d, d)`, `A1 = 0`, `B = (0, b)^T`, `0 <= b < d/2`. `spec A1` sits in
/// a gap of `spec Z0` and `||K|| = ||B|| / dist(spec Z0, spec A1)`.
pub fn gap_in_z0_witness(d: f64, b: f64) -> Result<BlockInstance> {
    if !(0.0 <= b && 2.0 * b < d) {
        return Err(Error::InvalidInput(format!("need 0 <= b < d/2, got b = {b}, d = {d}")));
    }
    BlockInstance::j_self_adjoint(real_diagonal(&[-d, d]), real_diagonal(&[0.0]), real_matrix(&[&[0.0], &[b]]))
}

/// `A0 = 0`, `A1 = diag(-d, d)`, `B = (b, b)/sqrt 2`, `0 <= b < d`. Here
/// `||K|| = ||B|| / sqrt(dist(spec Z0, spec Z1)^2 + ||B||^2)`.
pub fn gap_in_a1_witness(d: f64, b: f64) -> Result<BlockInstance> {
    if !(0.0 <= b && b < d) {
        return Err(Error::InvalidInput(format!("need 0 <= b < d, got b = {b}, d = {d}")));
    }
    let e = b / 2f64.sqrt();
    BlockInstance::j_self_adjoint(real_diagonal(&[0.0]), real_diagonal(&[-d, d]), real_matrix(&[&[e, e]]))
}

/// Scalar `A0 = -d/2`, `A1 = d/2`, `B = b`, `0 < b < d/2`. The spectra are
/// subordinated, `||tan 2Theta|| = 2||B|| / dist(Z0, Z1)` and the eigenvalues
/// sit exactly on the boundary of the enclosure.
pub fn subordinated_witness(d: f64, b: f64) -> Result<BlockInstance> {
    if !(0.0 < b && 2.0 * b < d) {
        return Err(Error::InvalidInput(format!("need 0 < b < d/2, got b = {b}, d = {d}")));
    }
    BlockInstance::j_self_adjoint(real_matrix(&[&[-d / 2.0]]), real_matrix(&[&[d / 2.0]]), real_matrix(&[&[b]]))
}

/// `b / (d/2 + sqrt(d^2/4 - b^2))`.
pub fn kappa(d: f64, b: f64) -> f64 {
    b / (0.5 * d + (0.25 * d * d - b * b).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct Equality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    pub pass: bool,
}

impl Equality {
    fn new(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let diff = (lhs - rhs).abs();
        Equality { name: name.to_string(), lhs, rhs, diff, pass: diff <= tol }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessResult {
    pub name: &'static str,
    pub d: f64,
    pub b: f64,
    pub equalities: Vec<Equality>,
    pub pass: bool,
}

impl WitnessResult {
    fn new(name: &'static str, d: f64, b: f64, equalities: Vec<Equality>) -> Self {
        let pass = equalities.iter().all(|e| e.pass);
        WitnessResult { name, d, b, equalities, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Equality> {
        self.equalities.iter().filter(|e| !e.pass)
    }
}

fn spectrum(m: &crate::linalg::CMat) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = eigenvalues(m)?.iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn slack_of(report: &crate::bounds::BoundReport, id: &str) -> f64 {
    report.record(id).and_then(|r| r.slack).unwrap_or(f64::NAN)
}

pub fn check_gap_in_z0(d: f64, b: f64, eq_tol: f64, tol: &Tolerances) -> Result<WitnessResult> {
    let inst = gap_in_z0_witness(d, b)?;
    let sol = solve_riccati_with(&inst, tol)?;
    let angles = AngleReport::from_solution(&inst, &sol)?;
    let report = check_bounds(&inst, &sol, &angles, tol)?;
    let delta = set_distance(&spectrum(&sol.z0)?, &inst.sigma1());
    Ok(WitnessResult::new(
        "gap_in_z0",
        d,
        b,
        vec![
            Equality::new("norm_k = kappa", sol.norm_k, kappa(d, b), eq_tol),
            Equality::new("norm_k = norm_b / dist(spec Z0, spec A1)", sol.norm_k, inst.norm_b() / delta, eq_tol),
            Equality::new("k_semi_gap slack = 0", slack_of(&report, "k_semi_gap"), 0.0, eq_tol),
            Equality::new("semi_tan_gap_i1 slack = 0", slack_of(&report, "semi_tan_gap_i1"), 0.0, eq_tol),
        ],
    ))
}

pub fn check_gap_in_a1(d: f64, b: f64, eq_tol: f64, tol: &Tolerances) -> Result<WitnessResult> {
    let inst = gap_in_a1_witness(d, b)?;
    let sol = solve_riccati_with(&inst, tol)?;
    let angles = AngleReport::from_solution(&inst, &sol)?;
    let report = check_bounds(&inst, &sol, &angles, tol)?;
    let nb = inst.norm_b();
    let delta_hat = set_distance(&spectrum(&sol.z0)?, &spectrum(&sol.z1)?);
    Ok(WitnessResult::new(
        "gap_in_a1",
        d,
        b,
        vec![
            Equality::new("norm_k = b / d", sol.norm_k, b / d, eq_tol),
            Equality::new("dist(spec Z0, spec Z1) = sqrt(d^2 - b^2)", delta_hat, (d * d - b * b).sqrt(), eq_tol),
            Equality::new(
                "norm_k = norm_b / sqrt(delta_hat^2 + norm_b^2)",
                sol.norm_k,
                nb / (delta_hat * delta_hat + nb * nb).sqrt(),
                eq_tol,
            ),
            Equality::new("post_tan_gap slack = 0", slack_of(&report, "post_tan_gap"), 0.0, eq_tol),
        ],
    ))
}

pub fn check_subordinated(d: f64, b: f64, eq_tol: f64, tol: &Tolerances) -> Result<WitnessResult> {
    let inst = subordinated_witness(d, b)?;
    let sol = solve_riccati_with(&inst, tol)?;
    let angles = AngleReport::from_solution(&inst, &sol)?;
    let report = check_bounds(&inst, &sol, &angles, tol)?;
    let enclosure = verify_enclosure(&inst, tol)?;
    let delta_hat = set_distance(&spectrum(&sol.z0)?, &spectrum(&sol.z1)?);
    let min_margin = enclosure.eigenvalues.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    let max_disp = enclosure.eigenvalues.iter().map(|e| e.displacement).fold(0.0, f64::max);
    let r_v = b * tan_half_arcsin(2.0 * b / d);
    Ok(WitnessResult::new(
        "subordinated",
        d,
        b,
        vec![
            Equality::new("norm_k = kappa", sol.norm_k, kappa(d, b), eq_tol),
            Equality::new("tan 2theta = 2 norm_b / delta_hat", angles.norm_tan2, 2.0 * inst.norm_b() / delta_hat, eq_tol),
            Equality::new("post_tan2_subordinated slack = 0", slack_of(&report, "post_tan2_subordinated"), 0.0, eq_tol),
            Equality::new("eigenvalue displacement = r_V", max_disp, r_v, eq_tol),
            Equality::new("enclosure margin = 0", min_margin, 0.0, eq_tol),
        ],
    ))
}

/// Runs the three witnesses at `(d, b) = (4, 1), (2, 1), (2, 0.6)`.
pub fn run_witnesses(eq_tol: f64, tol: &Tolerances) -> Result<Vec<WitnessResult>> {
    Ok(vec![
        check_gap_in_z0(4.0, 1.0, eq_tol, tol)?,
        check_gap_in_a1(2.0, 1.0, eq_tol, tol)?,
        check_subordinated(2.0, 0.6, eq_tol, tol)?,
    ])
}
