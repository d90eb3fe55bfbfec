//! Harmonic oscillator `-d²/dx² + x²` (scaled to levels `n + 1/2`) under the
//! perturbation `i β b(x)` with odd bounded `b`, truncated to `M` Hermite modes
//! and sorted by parity so that the perturbation is block off-diagonal.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::angles::angle_from_angular_operator;
use crate::bounds::tan_half_arcsin;
use crate::enclosures::enclosure_radius;
use crate::error::{Error, Result};
use crate::instance::BlockInstance;
use crate::linalg::{c64, real_diagonal, spectral_norm, CMat};
use crate::quadrature::GaussHermite;
use crate::riccati::solve_riccati_with;
use crate::schur::eigenvalues;
use crate::tolerance::Tolerances;

/// Odd profile `b(x)` with `sup |b| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Sin,
    /// Piecewise-linear interpolation of `(x, b(x))` samples with ascending
    /// `x`, held constant beyond the ends.
    Table(Vec<(f64, f64)>),
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Sin => x.sin(),
            Profile::Table(pts) => {
                let (first, last) = (pts[0], pts[pts.len() - 1]);
                if x <= first.0 {
                    return first.1;
                }
                if x >= last.0 {
                    return last.1;
                }
                let i = pts.partition_point(|p| p.0 <= x);
                let (x0, y0) = pts[i - 1];
                let (x1, y1) = pts[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Profile::Sin => 1.0,
            Profile::Table(pts) => pts.iter().map(|p| p.1.abs()).fold(0.0, f64::max),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Profile::Table(pts) = self {
            if pts.len() < 2 || pts.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                return Err(Error::InvalidInput("profile table needs at least two ascending abscissae".into()));
            }
        }
        Ok(())
    }
}

/// `binom(N + n - 1, n)`, the degeneracy of level `n` of the `N`-dimensional oscillator.
pub fn multiplicity(n: u64, dim_n: u64) -> u128 {
    assert!(dim_n >= 1, "dimension must be positive");
    let top = (dim_n + n - 1) as u128;
    let k = n.min(dim_n - 1) as u128;
    (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
}

#[derive(Debug, Clone)]
pub struct OscillatorModel {
    pub truncation_m: usize,
    pub beta: f64,
    pub profile: Profile,
    pub quad_nodes: usize,
    /// `∫ ψ_m b ψ_n` in the natural Hermite ordering.
    pub coupling: DMatrix<f64>,
    pub instance: BlockInstance,
    pub norm_v_trunc: f64,
    /// Largest entry change of `coupling` under node doubling.
    pub quadrature_change: f64,
}

const ODD_TOL: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-9;

/// Assembles the truncated model. Even modes form `H0`, odd modes `H1`.
pub fn build_oscillator(truncation_m: usize, beta: f64, profile: Profile, quad_nodes: usize) -> Result<OscillatorModel> {
    if truncation_m < 2 {
        return Err(Error::InvalidInput("need at least two modes".into()));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("beta must be nonnegative, got {beta}")));
    }
    if quad_nodes < 4 * truncation_m + 50 {
        return Err(Error::InvalidInput(format!(
            "quad_nodes must be at least 4 M + 50 = {}",
            4 * truncation_m + 50
        )));
    }
    profile.validate()?;
    let sup = profile.sup_norm();
    if (sup - 1.0).abs() > 1e-12 {
        return Err(Error::ProfileNotNormalized(sup));
    }
    let quad = GaussHermite::new(quad_nodes, truncation_m);
    let odd_defect = quad.nodes.iter().map(|&x| (profile.eval(x) + profile.eval(-x)).abs()).fold(0.0, f64::max);
    if odd_defect > ODD_TOL {
        return Err(Error::ProfileNotOdd(odd_defect));
    }
    let coupling = quad.matrix_elements(|x| profile.eval(x));
    let fine = GaussHermite::new(2 * quad_nodes, truncation_m).matrix_elements(|x| profile.eval(x));
    let quadrature_change = (&fine - &coupling).amax();
    if quadrature_change > QUAD_TOL {
        return Err(Error::QuadratureUnconverged(quadrature_change));
    }

    let even: Vec<usize> = (0..truncation_m).step_by(2).collect();
    let odd: Vec<usize> = (1..truncation_m).step_by(2).collect();
    let level = |n: usize| n as f64 + 0.5;
    let a0 = real_diagonal(&even.iter().map(|&n| level(n)).collect::<Vec<_>>());
    let a1 = real_diagonal(&odd.iter().map(|&n| level(n)).collect::<Vec<_>>());
    let b = CMat::from_fn(even.len(), odd.len(), |i, j| c64(0.0, beta * coupling[(even[i], odd[j])]));
    let instance = BlockInstance::j_self_adjoint(a0, a1, b)?;
    let norm_v_trunc = instance.norm_v();
    Ok(OscillatorModel { truncation_m, beta, profile, quad_nodes, coupling, instance, norm_v_trunc, quadrature_change })
}

#[derive(Debug, Clone, Serialize)]
pub struct OscillatorReport {
    pub truncation_m: usize,
    pub beta: f64,
    pub norm_v_trunc: f64,
    /// Eigenvalues `(re, im)` sorted by real part.
    pub eigs: Vec<(f64, f64)>,
    pub max_abs_imag: f64,
    pub real_ok: bool,
    /// Whether reality is a claim (`β < 1/2`) or only an observation.
    pub real_asserted: bool,
    pub interior_count: usize,
    /// Largest distance of an interior eigenvalue from its level `n + 1/2`.
    pub max_interior_displacement: f64,
    pub r_v_used: Option<f64>,
    pub enclosure_ok: Option<bool>,
    pub angle_bound_rhs: Option<f64>,
    pub measured_tan: Option<f64>,
    pub angle_ok: Option<bool>,
    pub notes: Vec<String>,
}

impl OscillatorReport {
    /// All asserted checks pass.
    pub fn passed(&self) -> bool {
        (!self.real_asserted || self.real_ok) && self.enclosure_ok.unwrap_or(true) && self.angle_ok.unwrap_or(true)
    }
}

/// Spectral, enclosure and angle checks. Spectral assertions use only the
/// interior levels `n <= M/2`, away from the truncation edge.
pub fn oscillator_report(model: &OscillatorModel, tol: &Tolerances) -> Result<OscillatorReport> {
    let inst = &model.instance;
    let l = inst.assemble();
    let mut eigs = eigenvalues(&l)?;
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
    let max_abs_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let real_ok = eigs.iter().all(|z| z.im.abs() <= tol.imag * (1.0 + z.norm()));
    let v = model.norm_v_trunc;
    let mut notes = Vec::new();

    let interior_max = model.truncation_m / 2;
    let interior: Vec<f64> = eigs
        .iter()
        .filter_map(|z| {
            let n = (z.re - 0.5).round().max(0.0) as usize;
            (n <= interior_max).then(|| (z - c64(n as f64 + 0.5, 0.0)).norm())
        })
        .collect();
    let max_interior_displacement = interior.iter().copied().fold(0.0, f64::max);

    let real_asserted = model.beta < 0.5;
    if !real_asserted {
        notes.push("beta >= 1/2: reality of the spectrum is reported, not asserted".into());
    }
    let r_v_used = enclosure_radius(v, v, 1.0).ok();
    let enclosure_ok = r_v_used.map(|r| interior.iter().all(|&dist| dist <= r + tol.imag));

    let (angle_bound_rhs, measured_tan, angle_ok) = if 2.0 * v < 1.0 {
        let rhs = 0.5 * PI * tan_half_arcsin(2.0 * v);
        match solve_riccati_with(inst, tol) {
            Ok(sol) => {
                let tan = angle_from_angular_operator(&sol.k).last().map_or(0.0, |t| t.tan());
                let asserted = model.beta < 1.0 / PI;
                if !asserted {
                    notes.push("beta >= 1/pi: angle bound reported, not asserted".into());
                }
                (Some(rhs), Some(tan), asserted.then_some(tan <= rhs + tol.slack))
            }
            Err(e) => {
                notes.push(format!("angular operator unavailable: {}", e.name()));
                (Some(rhs), None, (model.beta < 1.0 / PI).then_some(false))
            }
        }
    } else {
        notes.push("||V|| >= 1/2: angle bounds not applicable".into());
        (None, None, None)
    };

    Ok(OscillatorReport {
        truncation_m: model.truncation_m,
        beta: model.beta,
        norm_v_trunc: v,
        eigs: eigs.iter().map(|z| (z.re, z.im)).collect(),
        max_abs_imag,
        real_ok,
        real_asserted,
        interior_count: interior.len(),
        max_interior_displacement,
        r_v_used,
        enclosure_ok,
        angle_bound_rhs,
        measured_tan,
        angle_ok,
        notes,
    })
}

/// Full coupling matrix norm, `||β S||` over all modes.
pub fn coupling_norm(model: &OscillatorModel) -> f64 {
    let s = CMat::from_fn(model.truncation_m, model.truncation_m, |i, j| c64(model.beta * model.coupling[(i, j)], 0.0));
    spectral_norm(&s)
}
