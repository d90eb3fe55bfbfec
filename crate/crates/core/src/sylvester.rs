//! `X A0 - A1 X = Y` for Hermitian `A0`, `A1` with disjoint spectra.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::disposition::{classify_disposition, DispositionKind};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigen, set_distance, spectral_norm, CMat};

/// Smallest admissible eigenvalue separation.
pub const MIN_SEPARATION: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SylvesterResult {
    #[serde(skip)]
    pub x: CMat,
    pub norm_x: f64,
    /// `||X A0 - A1 X - Y||_F`.
    pub residual: f64,
    pub d: f64,
    pub disposition: DispositionKind,
    /// `1` when one spectrum lies in a gap of the other, `pi/2` otherwise.
    pub applicable_constant: f64,
}

/// Solves in the joint eigenbases: `X~_ij = Y~_ij / (lambda_j(A0) - mu_i(A1))`.
pub fn solve_sylvester(a0: &CMat, a1: &CMat, y: &CMat) -> Result<SylvesterResult> {
    let (n0, n1) = (a0.nrows(), a1.nrows());
    if a0.ncols() != n0 || a1.ncols() != n1 || y.shape() != (n1, n0) {
        return Err(Error::DimensionMismatch("Sylvester coefficients".into()));
    }
    let (lam, u) = hermitian_eigen(a0);
    let (mu, w) = hermitian_eigen(a1);
    let d = set_distance(&lam, &mu);
    let scale = lam.iter().chain(&mu).fold(0.0f64, |m, x| m.max(x.abs()));
    if d <= 4.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE) || d == 0.0 {
        return Err(Error::SpectraOverlap { separation: d });
    }
    if d < MIN_SEPARATION {
        return Err(Error::IllConditioned { separation: d });
    }
    let yt = w.adjoint() * y * &u;
    let xt = CMat::from_fn(n1, n0, |i, j| yt[(i, j)] / (lam[j] - mu[i]));
    let x = &w * xt * u.adjoint();
    let residual = frobenius(&(&x * a0 - a1 * &x - y));
    let disposition = classify_disposition(&lam, &mu, 0.0).map(|disp| disp.kind).unwrap_or(DispositionKind::Generic);
    let applicable_constant = if disposition == DispositionKind::Generic { FRAC_PI_2 } else { 1.0 };
    Ok(SylvesterResult { norm_x: spectral_norm(&x), x, residual, d, disposition, applicable_constant })
}

/// `(pi/2) ||Y|| / d` in general, `||Y|| / d` when one spectrum lies in a gap of the other.
pub fn sylvester_bound_rhs(norm_y: f64, d: f64, disposition: DispositionKind) -> Result<f64> {
    if d.is_nan() || d <= 0.0 {
        return Err(Error::NonpositiveSeparation(d));
    }
    let constant = match disposition {
        DispositionKind::Generic => FRAC_PI_2,
        _ => 1.0,
    };
    Ok(constant * norm_y / d)
}
