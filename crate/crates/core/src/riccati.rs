//! Contractive solutions of `K A0 - A1 K + K B K = -B*` and the block
//! diagonalization `L = T diag(Lambda0, Lambda1) T^{-1}`.
//!
//! The solution is read off an `n0`-dimensional uniformly positive invariant
//! subspace of `L`: with basis `[X0; X1]`, `K = X1 X0^{-1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BlockInstance, Mode};
use crate::krein::{krein_gram, KreinSignature};
use crate::linalg::{
    block_2x2, frobenius, hermitian_defect, hermitian_eigen, hermitian_eigenvalues, identity, inverse, point_to_set,
    psd_function, set_distance, singular_values, spectral_norm, CMat, C64,
};
use crate::schur::{solve_general_sylvester, ComplexSchur};
use crate::tolerance::Tolerances;

/// Which rule produced the positive spectral set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    /// Eigenvalues assigned to the nearest unperturbed component.
    Proximity,
    /// Eigenvalues assigned by the sign of the indefinite inner product.
    KreinSign,
    /// Prescribed by the caller.
    Prescribed,
}

#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    pub k: CMat,
    pub norm_k: f64,
    /// `||K A0 - A1 K + K B K + B*||_F`.
    pub residual: f64,
    pub z0: CMat,
    pub z1: CMat,
    pub t: CMat,
    pub lambda0: CMat,
    pub lambda1: CMat,
    /// Ascending spectrum of `Lambda0`.
    pub sigma0_prime: Vec<f64>,
    /// Ascending spectrum of `Lambda1`.
    pub sigma1_prime: Vec<f64>,
    pub grouping: Grouping,
}

/// Quality figures of a solution, all expected to be at roundoff level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Diagnostics {
    pub residual: f64,
    pub residual_scale: f64,
    pub dual_residual: f64,
    pub transformed_residual: f64,
    /// `||L - T diag(Lambda) T^{-1}||_F / ||L||_F`.
    pub diagonalization_defect: f64,
    pub lambda0_hermitian_defect: f64,
    pub lambda1_hermitian_defect: f64,
    /// Largest mismatch between sorted spectra of `Z_i` and `Lambda_i`.
    pub similarity_defect: f64,
}

pub fn riccati_residual(k: &CMat, inst: &BlockInstance) -> f64 {
    frobenius(&riccati_defect(k, inst))
}

fn riccati_defect(k: &CMat, inst: &BlockInstance) -> CMat {
    k * &inst.a0 - &inst.a1 * k + k * &inst.b * k + inst.b.adjoint()
}

/// Scale against which residuals are judged: `(||A|| + ||B||) (1 + ||K||)^2`.
pub fn residual_scale(inst: &BlockInstance, norm_k: f64) -> f64 {
    let norm_a = spectral_norm(&inst.a0).max(spectral_norm(&inst.a1));
    (norm_a + inst.norm_b()).max(f64::MIN_POSITIVE) * (1.0 + norm_k).powi(2)
}

/// `K' = K*`, the solution of the dual equation `K' A1 - A0 K' - K' B* K' = B`.
pub fn dual_solution(k: &CMat) -> CMat {
    k.adjoint()
}

pub fn dual_riccati_residual(kp: &CMat, inst: &BlockInstance) -> f64 {
    let b_adj = inst.b.adjoint();
    frobenius(&(kp * &inst.a1 - &inst.a0 * kp - kp * &b_adj * kp - &inst.b))
}

/// `||K Lambda0 - Lambda1 K + (I - KK*)^{1/2} B* (I - K*K)^{1/2}||_F`.
pub fn transformed_riccati_residual(sol: &RiccatiSolution, inst: &BlockInstance) -> f64 {
    let (s0, _) = sqrt_pair(&sol.k, true);
    let (s1, _) = sqrt_pair(&sol.k, false);
    let k = &sol.k;
    frobenius(&(k * &sol.lambda0 - &sol.lambda1 * k + s1 * inst.b.adjoint() * s0))
}

/// `((I - K*K)^{1/2}, (I - K*K)^{-1/2})` when `right`, else the `I - KK*` pair.
fn sqrt_pair(k: &CMat, right: bool) -> (CMat, CMat) {
    let floor = Tolerances::default().psd_floor;
    let g = if right { k.adjoint() * k } else { k * k.adjoint() };
    let m = identity(g.nrows()) - g;
    (psd_function(&m, floor, f64::sqrt), psd_function(&m, floor, |x| 1.0 / x.sqrt()))
}

/// Solves via the invariant-subspace route.
pub fn solve_riccati_contractive(inst: &BlockInstance) -> Result<RiccatiSolution> {
    solve_riccati_with(inst, &Tolerances::default())
}

pub fn solve_riccati_with(inst: &BlockInstance, tol: &Tolerances) -> Result<RiccatiSolution> {
    let (schur, eigs) = real_schur_spectrum(inst, tol)?;
    let sigma0 = inst.sigma0();
    let sigma1 = inst.sigma1();
    let d = set_distance(&sigma0, &sigma1);
    if d > 0.0 && inst.norm_v() < d / 2.0 {
        let select: Vec<bool> =
            eigs.iter().map(|z| point_to_set(*z, &sigma0) < point_to_set(*z, &sigma1)).collect();
        if select.iter().filter(|&&s| s).count() == inst.n0() {
            let mut s = schur.clone();
            let k = s.reorder(&select);
            let basis = s.leading_subspace(k);
            if let Ok(sol) = finish(inst, &basis, Grouping::Proximity, tol) {
                return Ok(sol);
            }
        }
    }
    let basis = krein_sign_basis(inst, &schur, &eigs)?;
    finish(inst, &basis, Grouping::KreinSign, tol)
}

/// Solves with the positive spectral set fixed to the eigenvalues of `L`
/// closest to the given points.
pub fn solve_riccati_for_group(inst: &BlockInstance, sigma0_prime: &[f64], tol: &Tolerances) -> Result<RiccatiSolution> {
    if sigma0_prime.len() != inst.n0() {
        return Err(Error::DimensionMismatch("prescribed group must have n0 points".into()));
    }
    let (mut schur, eigs) = real_schur_spectrum(inst, tol)?;
    let mut select = vec![false; eigs.len()];
    for &p in sigma0_prime {
        let best = (0..eigs.len())
            .filter(|&i| !select[i])
            .min_by(|&a, &b| (eigs[a] - p).norm().total_cmp(&(eigs[b] - p).norm()))
            .ok_or_else(|| Error::InvalidInput("empty spectrum".into()))?;
        select[best] = true;
    }
    let k = schur.reorder(&select);
    let basis = schur.leading_subspace(k);
    finish(inst, &basis, Grouping::Prescribed, tol)
}

fn real_schur_spectrum(inst: &BlockInstance, tol: &Tolerances) -> Result<(ComplexSchur, Vec<C64>)> {
    if inst.mode != Mode::JSelfAdjoint {
        return Err(Error::InvalidInput("Riccati solver requires a j_self_adjoint instance".into()));
    }
    let schur = ComplexSchur::new(&inst.assemble())?;
    let eigs = schur.eigenvalues();
    for z in &eigs {
        if z.im.abs() > tol.imag * (1.0 + z.norm()) {
            return Err(Error::NonRealSpectrum { re: z.re, im: z.im });
        }
    }
    Ok((schur, eigs))
}

/// Spectral clusters (indices into `eigs`) of numerically coincident eigenvalues.
fn clusters(eigs: &[C64], width: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..eigs.len()).collect();
    order.sort_by(|&a, &b| eigs[a].re.total_cmp(&eigs[b].re));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match out.last_mut() {
            Some(c) if (eigs[i] - eigs[*c.last().unwrap()]).norm() <= width => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Positive invariant subspace assembled cluster by cluster: the spectral
/// subspace of each cluster is split by the sign of its Krein Gram matrix.
fn krein_sign_basis(inst: &BlockInstance, schur: &ComplexSchur, eigs: &[C64]) -> Result<CMat> {
    let sig = inst.signature();
    let scale = spectral_norm(&inst.assemble()).max(1.0);
    let width = 1e-8 * scale;
    let mut columns: Vec<CMat> = Vec::new();
    let mut count = 0;
    for cluster in clusters(eigs, width) {
        let mut select = vec![false; eigs.len()];
        for &i in &cluster {
            select[i] = true;
        }
        let mut s = schur.clone();
        let m = s.reorder(&select);
        let q = s.leading_subspace(m);
        let (g, v) = hermitian_eigen(&krein_gram(&q, &sig));
        let neutral = g.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        if neutral <= 1e-8 {
            return Err(Error::NoDefiniteInvariantSubspace(format!(
                "eigenvalue {:.6} has a neutral eigenvector (Gram value {neutral:.3e})",
                eigs[cluster[0]].re
            )));
        }
        let positive: Vec<usize> = (0..g.len()).filter(|&j| g[j] > 0.0).collect();
        if !positive.is_empty() {
            let w = CMat::from_fn(m, positive.len(), |i, j| v[(i, positive[j])]);
            columns.push(&q * w);
            count += positive.len();
        }
    }
    if count != inst.n0() {
        return Err(Error::NoDefiniteInvariantSubspace(format!(
            "positive spectral subspace has dimension {count}, expected {}",
            inst.n0()
        )));
    }
    let n = inst.dim();
    let mut basis = CMat::zeros(n, count);
    let mut col = 0;
    for c in columns {
        basis.view_mut((0, col), (n, c.ncols())).copy_from(&c);
        col += c.ncols();
    }
    Ok(basis)
}

/// Newton correction `dK` with `dK Z0 - (A1 - K B) dK = -F(K)`.
pub fn newton_step(inst: &BlockInstance, k: &CMat) -> Result<CMat> {
    let z0 = &inst.a0 + &inst.b * k;
    let w = &inst.a1 - k * &inst.b;
    let f = riccati_defect(k, inst);
    let dk = solve_general_sylvester(&z0, &w, &(-f))?;
    Ok(k + dk)
}

/// Undamped Newton iteration from `K = 0`, used as an independent cross-check.
pub fn solve_riccati_newton(inst: &BlockInstance, max_iter: usize) -> Result<CMat> {
    let mut k = CMat::zeros(inst.n1(), inst.n0());
    let scale = residual_scale(inst, 0.0);
    for _ in 0..max_iter {
        k = newton_step(inst, &k)?;
        if riccati_residual(&k, inst) <= 1e-13 * scale {
            return Ok(k);
        }
    }
    Err(Error::NoDefiniteInvariantSubspace("Newton iteration did not converge".into()))
}

fn finish(inst: &BlockInstance, basis: &CMat, grouping: Grouping, tol: &Tolerances) -> Result<RiccatiSolution> {
    let (n0, n1) = (inst.n0(), inst.n1());
    let x0 = basis.rows(0, n0).into_owned();
    let x1 = basis.rows(n0, n1).into_owned();
    let sv = singular_values(&x0);
    let smin = sv.last().copied().unwrap_or(0.0);
    let cond = if smin > 0.0 { sv[0] / smin } else { f64::INFINITY };
    if !(cond < tol.graph_cond) {
        return Err(Error::NotAGraph { cond });
    }
    let mut k = x1 * inverse(&x0)?;
    let mut residual = riccati_residual(&k, inst);
    // Polish with Newton steps while they help.
    for _ in 0..3 {
        if residual <= 4.0 * f64::EPSILON * residual_scale(inst, spectral_norm(&k)) {
            break;
        }
        match newton_step(inst, &k) {
            Ok(next) => {
                let r = riccati_residual(&next, inst);
                if r < residual {
                    k = next;
                    residual = r;
                } else {
                    break;
                }
            }
            Err(_) => break,
        }
    }
    let norm_k = spectral_norm(&k);
    if !(norm_k < 1.0 - tol.contraction) {
        return Err(Error::NotContractive { norm: norm_k });
    }
    let limit = 1e-9 * residual_scale(inst, norm_k);
    if residual > limit {
        return Err(Error::NoDefiniteInvariantSubspace(format!(
            "invariant subspace gives Riccati residual {residual:.3e} above {limit:.3e}"
        )));
    }
    let z0 = &inst.a0 + &inst.b * &k;
    let z1 = &inst.a1 - inst.b.adjoint() * k.adjoint();
    let (s0, s0_inv) = sqrt_pair(&k, true);
    let (s1, s1_inv) = sqrt_pair(&k, false);
    let lambda0 = &s0 * &z0 * &s0_inv;
    let lambda1 = &s1 * &z1 * &s1_inv;
    let t = block_2x2(&identity(n0), &k.adjoint(), &k, &identity(n1))
        * block_2x2(&s0_inv, &CMat::zeros(n0, n1), &CMat::zeros(n1, n0), &s1_inv);
    Ok(RiccatiSolution {
        sigma0_prime: hermitian_eigenvalues(&lambda0),
        sigma1_prime: hermitian_eigenvalues(&lambda1),
        k,
        norm_k,
        residual,
        z0,
        z1,
        t,
        lambda0,
        lambda1,
        grouping,
    })
}

impl RiccatiSolution {
    pub fn diagnostics(&self, inst: &BlockInstance) -> Result<Diagnostics> {
        let l = inst.assemble();
        let (n0, n1) = (inst.n0(), inst.n1());
        let lam = block_2x2(&self.lambda0, &CMat::zeros(n0, n1), &CMat::zeros(n1, n0), &self.lambda1);
        let recon = &self.t * lam * inverse(&self.t)?;
        let diagonalization_defect = frobenius(&(&l - recon)) / frobenius(&l).max(f64::MIN_POSITIVE);
        let similarity_defect = spectrum_mismatch(&self.z0, &self.sigma0_prime)?
            .max(spectrum_mismatch(&self.z1, &self.sigma1_prime)?);
        Ok(Diagnostics {
            residual: self.residual,
            residual_scale: residual_scale(inst, self.norm_k),
            dual_residual: dual_riccati_residual(&dual_solution(&self.k), inst),
            transformed_residual: transformed_riccati_residual(self, inst),
            diagonalization_defect,
            lambda0_hermitian_defect: hermitian_defect(&self.lambda0),
            lambda1_hermitian_defect: hermitian_defect(&self.lambda1),
            similarity_defect,
        })
    }

    /// `G(K)`, the perturbed positive subspace.
    pub fn positive_subspace(&self, sig: &KreinSignature) -> Result<crate::krein::Subspace> {
        crate::krein::graph_subspace(&self.k, sig, crate::krein::Component::Zero)
    }

    /// `G(K*)`, the perturbed negative subspace.
    pub fn negative_subspace(&self, sig: &KreinSignature) -> Result<crate::krein::Subspace> {
        crate::krein::graph_subspace(&self.k.adjoint(), sig, crate::krein::Component::One)
    }
}

fn spectrum_mismatch(z: &CMat, sorted: &[f64]) -> Result<f64> {
    let mut ev = crate::schur::eigenvalues(z)?;
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(ev.iter().zip(sorted).map(|(a, &b)| (a - b).norm()).fold(0.0, f64::max))
}
