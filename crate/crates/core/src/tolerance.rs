use serde::{Deserialize, Serialize};

/// Numerical thresholds shared across modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Two spectral points closer than `same_point * (1 + |x|)` coincide.
    pub same_point: f64,
    /// Relative imaginary part above which an eigenvalue counts as non-real.
    pub imag: f64,
    /// Most negative slack still reported as a satisfied bound.
    pub slack: f64,
    /// Relative Hermiticity defect accepted for the diagonal blocks.
    pub hermitian: f64,
    /// Largest admissible condition number of the top block of an invariant basis.
    pub graph_cond: f64,
    /// Contraction margin: `||K|| >= 1 - contraction` is rejected.
    pub contraction: f64,
    /// Eigenvalue floor used in square roots of positive semidefinite matrices.
    pub psd_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            same_point: 1e-12,
            imag: 1e-9,
            slack: 1e-8,
            hermitian: 1e-10,
            graph_cond: 1e8,
            contraction: 1e-12,
            psd_floor: 1e-14,
        }
    }
}

impl Tolerances {
    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }
}
