//! Operator angles between unperturbed and perturbed subspaces.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::BlockInstance;
use crate::krein::{Component, Subspace};
use crate::linalg::{identity, singular_values};
use crate::riccati::RiccatiSolution;

#[derive(Debug, Clone, Serialize)]
pub struct AngleReport {
    /// Ascending angles between `H0` and `G(K)`.
    pub theta0: Vec<f64>,
    /// Ascending angles between `H1` and `G(K*)`.
    pub theta1: Vec<f64>,
    pub norm_tan: f64,
    pub norm_sin2: f64,
    pub norm_tan2: f64,
}

/// Principal angles from `sub_unperturbed` to `sub_perturbed`, one per
/// dimension of `sub_unperturbed`. The sines are the singular values of
/// `(I - P') X`, which stays accurate for small angles; missing directions
/// of a lower-dimensional perturbed subspace show up as right angles.
pub fn operator_angle(sub_unperturbed: &Subspace, sub_perturbed: &Subspace) -> Result<Vec<f64>> {
    if sub_unperturbed.ambient() != sub_perturbed.ambient() {
        return Err(Error::DimensionMismatch("subspaces live in different spaces".into()));
    }
    let n = sub_unperturbed.ambient();
    let k = sub_unperturbed.dim();
    if k == 0 {
        return Ok(Vec::new());
    }
    let residual = (identity(n) - sub_perturbed.projector()) * &sub_unperturbed.basis;
    let mut angles: Vec<f64> = singular_values(&residual).iter().map(|s| s.clamp(0.0, 1.0).asin()).collect();
    angles.resize(k, FRAC_PI_2);
    angles.sort_by(|a, b| a.total_cmp(b));
    Ok(angles)
}

/// `arctan` of the singular values of `K`, padded with zeros to the domain dimension.
pub fn angle_from_angular_operator(k: &crate::linalg::CMat) -> Vec<f64> {
    let mut angles: Vec<f64> = singular_values(k).iter().map(|s| s.atan()).collect();
    angles.resize(k.ncols(), 0.0);
    angles.sort_by(|a, b| a.total_cmp(b));
    angles
}

/// `(||tan Theta||, ||sin 2Theta||, ||tan 2Theta||)`.
pub fn angle_norms(angles: &[f64]) -> (f64, f64, f64) {
    let max = angles.iter().copied().fold(0.0, f64::max);
    let norm_tan = if max >= FRAC_PI_2 { f64::INFINITY } else { max.tan() };
    let norm_sin2 = angles.iter().map(|t| (2.0 * t).sin()).fold(0.0, f64::max);
    let norm_tan2 = if max >= FRAC_PI_4 { f64::INFINITY } else { (2.0 * max).tan() };
    (norm_tan, norm_sin2, norm_tan2)
}

impl AngleReport {
    pub fn from_angles(theta0: Vec<f64>, theta1: Vec<f64>) -> Self {
        let (norm_tan, norm_sin2, norm_tan2) = angle_norms(&theta0);
        AngleReport { theta0, theta1, norm_tan, norm_sin2, norm_tan2 }
    }

    /// Angles measured geometrically between the coordinate components and
    /// the perturbed subspaces of a solution.
    pub fn from_solution(inst: &BlockInstance, sol: &RiccatiSolution) -> Result<Self> {
        let sig = inst.signature();
        let theta0 = operator_angle(&sig.component(Component::Zero), &sol.positive_subspace(&sig)?)?;
        let theta1 = operator_angle(&sig.component(Component::One), &sol.negative_subspace(&sig)?)?;
        Ok(Self::from_angles(theta0, theta1))
    }

    pub fn max_theta0(&self) -> f64 {
        self.theta0.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_theta1(&self) -> f64 {
        self.theta1.iter().copied().fold(0.0, f64::max)
    }
}
