//! Seeded random instances with prescribed spectral disposition and
//! perturbation size, and the per-trial bound check used by ensemble runs.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angles::AngleReport;
use crate::bounds::{check_bounds, BoundReport};
use crate::error::{Error, Result};
use crate::instance::{BlockInstance, Mode};
use crate::linalg::{c64, hermitian_part, spectral_norm, CMat};
use crate::random::{complex_gaussian_matrix, haar_unitary, rng, uniform_values};
use crate::riccati::{solve_riccati_with, Diagnostics};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleDisposition {
    /// Interlaced: `sigma0` in `[0,1] ∪ [4,5]`, `sigma1` in `[2,3] ∪ [6,7]`.
    Generic,
    /// `sigma1` in `[2,3]`, `sigma0` on both sides in `[0,1] ∪ [4,5]`.
    Gap,
    /// `sigma0` in `[0,1]`, `sigma1` in `[2,3]`.
    Subordinated,
}

impl EnsembleDisposition {
    pub const ALL: [EnsembleDisposition; 3] =
        [EnsembleDisposition::Generic, EnsembleDisposition::Gap, EnsembleDisposition::Subordinated];

    /// Smallest block dimensions for which the disposition can be realized.
    pub fn min_dims(self) -> (usize, usize) {
        match self {
            EnsembleDisposition::Generic => (2, 2),
            EnsembleDisposition::Gap => (2, 1),
            EnsembleDisposition::Subordinated => (1, 1),
        }
    }
}

impl fmt::Display for EnsembleDisposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleDisposition::Generic => "generic",
            EnsembleDisposition::Gap => "gap",
            EnsembleDisposition::Subordinated => "subordinated",
        })
    }
}

impl FromStr for EnsembleDisposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(EnsembleDisposition::Generic),
            "gap" => Ok(EnsembleDisposition::Gap),
            "subordinated" => Ok(EnsembleDisposition::Subordinated),
            other => Err(Error::InvalidInput(format!(
                "unknown disposition '{other}' (expected generic, gap or subordinated)"
            ))),
        }
    }
}

/// Values spread over two intervals with at least one in each, in random order.
fn split_values<R: Rng + ?Sized>(r: &mut R, count: usize, first: (f64, f64), second: (f64, f64)) -> Vec<f64> {
    let n_first = r.random_range(1..count);
    let mut v = uniform_values(r, n_first, first.0, first.1);
    v.extend(uniform_values(r, count - n_first, second.0, second.1));
    v.shuffle(r);
    v
}

/// Eigenvalues of `A0` and `A1` for the requested disposition.
pub fn sample_spectra<R: Rng + ?Sized>(
    r: &mut R,
    n0: usize,
    n1: usize,
    disposition: EnsembleDisposition,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (m0, m1) = disposition.min_dims();
    if n0 < m0 || n1 < m1 {
        return Err(Error::InvalidInput(format!(
            "{disposition} disposition needs n0 >= {m0} and n1 >= {m1}, got ({n0}, {n1})"
        )));
    }
    Ok(match disposition {
        EnsembleDisposition::Subordinated => (uniform_values(r, n0, 0.0, 1.0), uniform_values(r, n1, 2.0, 3.0)),
        EnsembleDisposition::Gap => (split_values(r, n0, (0.0, 1.0), (4.0, 5.0)), uniform_values(r, n1, 2.0, 3.0)),
        EnsembleDisposition::Generic => {
            (split_values(r, n0, (0.0, 1.0), (4.0, 5.0)), split_values(r, n1, (2.0, 3.0), (6.0, 7.0)))
        }
    })
}

/// Random matrix with spectral norm exactly `norm` (up to roundoff).
fn coupling_with_norm<R: Rng + ?Sized>(r: &mut R, n0: usize, n1: usize, norm: f64) -> CMat {
    let g = complex_gaussian_matrix(r, n0, n1);
    let s = spectral_norm(&g);
    if s == 0.0 || norm == 0.0 {
        return CMat::zeros(n0, n1);
    }
    g * c64(norm / s, 0.0)
}

fn conjugate(u: &CMat, values: &[f64]) -> CMat {
    let mut scaled = u.clone();
    for (j, &v) in values.iter().enumerate() {
        for i in 0..u.nrows() {
            scaled[(i, j)] *= v;
        }
    }
    hermitian_part(&(&scaled * u.adjoint()))
}

/// J-self-adjoint instance with Haar-rotated diagonal blocks and
/// `||B|| = v_over_d * d`, where `d` is the realized block separation.
pub fn random_j_instance<R: Rng + ?Sized>(
    r: &mut R,
    n0: usize,
    n1: usize,
    v_over_d: f64,
    disposition: EnsembleDisposition,
) -> Result<BlockInstance> {
    if !(v_over_d >= 0.0) || !v_over_d.is_finite() {
        return Err(Error::InvalidInput(format!("v_over_d must be nonnegative, got {v_over_d}")));
    }
    let (s0, s1) = sample_spectra(r, n0, n1, disposition)?;
    let a0 = conjugate(&haar_unitary(r, n0), &s0);
    let a1 = conjugate(&haar_unitary(r, n1), &s1);
    let d = BlockInstance::j_self_adjoint(a0.clone(), a1.clone(), CMat::zeros(n0, n1))?.d();
    let b = coupling_with_norm(r, n0, n1, v_over_d * d);
    BlockInstance::j_self_adjoint(a0, a1, b)
}

/// General-mode instance `diag(S0, S1) L' diag(S0, S1)^{-1}` where `L'` is a
/// J-self-adjoint instance and `S_i` are positive functions of `A_i` with
/// eigenvalues in `[1, 1.1]`. The diagonal blocks stay Hermitian, `C != -B*`,
/// and the spectrum is real. The coupling is scaled so that
/// `sqrt(||B|| ||C||) = coupling_over_d * d`; keeping `coupling_over_d < 0.45`
/// holds the underlying `||B'||` below `d/2`.
pub fn random_general_instance<R: Rng + ?Sized>(
    r: &mut R,
    n0: usize,
    n1: usize,
    coupling_over_d: f64,
    disposition: EnsembleDisposition,
) -> Result<BlockInstance> {
    let (s0, s1) = sample_spectra(r, n0, n1, disposition)?;
    let u0 = haar_unitary(r, n0);
    let u1 = haar_unitary(r, n1);
    let a0 = conjugate(&u0, &s0);
    let a1 = conjugate(&u1, &s1);
    let w0 = uniform_values(r, n0, 1.0, 1.1);
    let w1 = uniform_values(r, n1, 1.0, 1.1);
    let inv = |w: &[f64]| w.iter().map(|x| 1.0 / x).collect::<Vec<_>>();
    let (sim0, sim0_inv) = (conjugate(&u0, &w0), conjugate(&u0, &inv(&w0)));
    let (sim1, sim1_inv) = (conjugate(&u1, &w1), conjugate(&u1, &inv(&w1)));

    let bp = complex_gaussian_matrix(r, n0, n1);
    let b = &sim0 * &bp * &sim1_inv;
    let c = -(&sim1 * bp.adjoint() * &sim0_inv);
    let probe = BlockInstance::new(a0.clone(), a1.clone(), b.clone(), Some(c.clone()), Mode::General)?;
    let (d, coupling) = (probe.d(), probe.coupling());
    let scale = if coupling > 0.0 { coupling_over_d * d / coupling } else { 0.0 };
    let s = c64(scale, 0.0);
    BlockInstance::new(a0, a1, b * s, Some(c * s), Mode::General)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n0: usize,
    pub n1: usize,
    pub v_over_d: f64,
    pub disposition: EnsembleDisposition,
}

/// Seed of trial `index` in a run with seed `base`.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub index: u64,
    pub seed: u64,
    pub config: TrialConfig,
    pub d: f64,
    pub norm_v: f64,
    pub norm_k: f64,
    pub bounds: BoundReport,
    pub diagnostics: Diagnostics,
    /// `| ||tan Theta0|| - ||K|| |`.
    pub tan_k_defect: f64,
    /// `| max Theta0 - max Theta1 |`.
    pub theta_defect: f64,
}

/// Generates, solves and checks one instance.
pub fn run_trial(config: &TrialConfig, base_seed: u64, index: u64, tol: &Tolerances) -> Result<TrialOutcome> {
    let seed = trial_seed(base_seed, index);
    let mut r = rng(seed);
    let inst = random_j_instance(&mut r, config.n0, config.n1, config.v_over_d, config.disposition)?;
    let sol = solve_riccati_with(&inst, tol)?;
    let angles = AngleReport::from_solution(&inst, &sol)?;
    let bounds = check_bounds(&inst, &sol, &angles, tol)?;
    let diagnostics = sol.diagnostics(&inst)?;
    Ok(TrialOutcome {
        index,
        seed,
        config: *config,
        d: inst.d(),
        norm_v: inst.norm_v(),
        norm_k: sol.norm_k,
        tan_k_defect: (angles.norm_tan - sol.norm_k).abs(),
        theta_defect: (angles.max_theta0() - angles.max_theta1()).abs(),
        bounds,
        diagnostics,
    })
}
