//! Indefinite inner product `[x, y] = (Jx, y)` with `J = diag(I_n0, -I_n1)`.
//!
//! Convention: `(x, y) = sum x_i conj(y_i)`, linear in the first argument and
//! conjugate-linear in the second.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigenvalues, inverse, orthonormal_columns, singular_values, vstack, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KreinSignature {
    pub n0: usize,
    pub n1: usize,
}

/// Selects one of the two coordinate components `H0`, `H1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    Zero,
    One,
}

impl KreinSignature {
    pub fn new(n0: usize, n1: usize) -> Self {
        KreinSignature { n0, n1 }
    }

    pub fn dim(&self) -> usize {
        self.n0 + self.n1
    }

    /// Dense `J`.
    pub fn j(&self) -> CMat {
        let n = self.dim();
        CMat::from_fn(n, n, |i, k| {
            if i != k {
                C64::default()
            } else if i < self.n0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(-1.0, 0.0)
            }
        })
    }

    /// `J m`, negating the rows of the second component.
    pub fn apply(&self, m: &CMat) -> CMat {
        let mut out = m.clone();
        for i in self.n0..self.dim() {
            for k in 0..m.ncols() {
                out[(i, k)] = -out[(i, k)];
            }
        }
        out
    }

    /// Orthonormal basis of `H0` (`Zero`) or `H1` (`One`).
    pub fn component(&self, which: Component) -> Subspace {
        let n = self.dim();
        let (start, k) = match which {
            Component::Zero => (0, self.n0),
            Component::One => (self.n0, self.n1),
        };
        Subspace { basis: CMat::from_fn(n, k, |i, j| if i == start + j { C64::new(1.0, 0.0) } else { C64::default() }) }
    }
}

/// Subspace represented by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: CMat,
}

impl Subspace {
    /// Orthonormalizes the columns of `spanning`, which must have full rank.
    pub fn from_columns(spanning: &CMat) -> Self {
        Subspace { basis: orthonormal_columns(spanning) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// `||(I - P) M P||` for a square operator `M`; zero iff the subspace is invariant.
    pub fn invariance_defect(&self, m: &CMat) -> f64 {
        let mx = m * &self.basis;
        let resid = &mx - &self.basis * (self.basis.adjoint() * &mx);
        singular_values(&resid).first().copied().unwrap_or(0.0)
    }
}

pub fn krein_inner(x: &[C64], y: &[C64], sig: &KreinSignature) -> Result<C64> {
    if x.len() != sig.dim() || y.len() != sig.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} for signature ({}, {})",
            x.len(),
            y.len(),
            sig.n0,
            sig.n1
        )));
    }
    let mut s = C64::default();
    for (i, (a, b)) in x.iter().zip(y).enumerate() {
        let term = a * b.conj();
        if i < sig.n0 {
            s += term;
        } else {
            s -= term;
        }
    }
    Ok(s)
}

/// Gram matrix `X* J X` of a basis.
pub fn krein_gram(basis: &CMat, sig: &KreinSignature) -> CMat {
    basis.adjoint() * sig.apply(basis)
}

/// Extreme eigenvalues `(min, max)` of `X* J X`.
pub fn definiteness_range(sub: &Subspace, sig: &KreinSignature) -> Result<(f64, f64)> {
    if sub.ambient() != sig.dim() {
        return Err(Error::DimensionMismatch("subspace and signature".into()));
    }
    let ev = hermitian_eigenvalues(&krein_gram(&sub.basis, sig));
    match (ev.first(), ev.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Ok((0.0, 0.0)),
    }
}

/// Smallest eigenvalue of `X* J X`; positive iff the subspace is uniformly positive.
pub fn definiteness_margin(sub: &Subspace, sig: &KreinSignature) -> Result<f64> {
    Ok(definiteness_range(sub, sig)?.0)
}

/// Graph `{(x, Kx)}` of `K: H0 -> H1` (`over = Zero`, `k` is n1 x n0) or
/// `{(Kx, x)}` of `K: H1 -> H0` (`over = One`, `k` is n0 x n1).
pub fn graph_subspace(k: &CMat, sig: &KreinSignature, over: Component) -> Result<Subspace> {
    let spanning = match over {
        Component::Zero => {
            if k.shape() != (sig.n1, sig.n0) {
                return Err(Error::DimensionMismatch("graph over H0 needs an n1 x n0 operator".into()));
            }
            vstack(&CMat::identity(sig.n0, sig.n0), k)
        }
        Component::One => {
            if k.shape() != (sig.n0, sig.n1) {
                return Err(Error::DimensionMismatch("graph over H1 needs an n0 x n1 operator".into()));
            }
            vstack(k, &CMat::identity(sig.n1, sig.n1))
        }
    };
    Ok(Subspace::from_columns(&spanning))
}

/// Angular operator of a subspace that is a graph over the given component.
pub fn angular_operator(sub: &Subspace, sig: &KreinSignature, over: Component) -> Result<CMat> {
    let (n0, n1) = (sig.n0, sig.n1);
    let x0 = sub.basis.rows(0, n0).into_owned();
    let x1 = sub.basis.rows(n0, n1).into_owned();
    match over {
        Component::Zero => Ok(x1 * inverse(&x0)?),
        Component::One => Ok(x0 * inverse(&x1)?),
    }
}

/// Gram eigenvalues within this distance of zero count as neutral.
const DEFINITE_FLOOR: f64 = 1e-12;

/// Krein-orthogonal complement of a uniformly definite subspace. A positive
/// graph `G(K)` over `H0` is mapped to `G(K*)` over `H1`, and a negative graph
/// over `H1` to the corresponding positive graph over `H0`.
pub fn j_orthogonal_complement(sub: &Subspace, sig: &KreinSignature) -> Result<Subspace> {
    let (lo, hi) = definiteness_range(sub, sig)?;
    let (over, other) = if lo > DEFINITE_FLOOR && sub.dim() == sig.n0 {
        (Component::Zero, Component::One)
    } else if hi < -DEFINITE_FLOOR && sub.dim() == sig.n1 {
        (Component::One, Component::Zero)
    } else {
        let margin = if hi < 0.0 { hi } else { lo };
        return Err(Error::NotUniformlyDefinite { margin });
    };
    let k = angular_operator(sub, sig, over)?;
    let complement = graph_subspace(&k.adjoint(), sig, other)?;
    let cross = sub.basis.adjoint() * sig.apply(&complement.basis);
    let defect = frobenius(&cross);
    debug_assert!(defect <= 1e-8, "Krein orthogonality defect {defect}");
    Ok(complement)
}
