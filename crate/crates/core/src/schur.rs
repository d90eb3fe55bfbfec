//! Complex Schur decomposition `A = Q T Q*` with eigenvalue reordering.
//!
//! nalgebra's Schur routine runs real-style double shifts, which does not
//! reliably triangularize complex non-normal matrices. This module runs the
//! single-shift complex QR iteration on the Hessenberg form and supports the
//! adjacent-swap reordering needed to extract invariant subspaces for an
//! arbitrary selection of eigenvalues.

use nalgebra::Hessenberg;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, C64};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct ComplexSchur {
    /// Unitary Schur vectors.
    pub q: CMat,
    /// Upper triangular factor.
    pub t: CMat,
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, C64::default());
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Rows `k, k+1` of `m` (columns `from..`) are replaced by `G` times them.
fn rotate_rows(m: &mut CMat, k: usize, cs: f64, sn: C64, from: usize) {
    for j in from..m.ncols() {
        let u = m[(k, j)];
        let v = m[(k + 1, j)];
        m[(k, j)] = u * cs + sn * v;
        m[(k + 1, j)] = v * cs - sn.conj() * u;
    }
}

/// Columns `k, k+1` of `m` (rows `..to`) are replaced by them times `G*`.
fn rotate_cols(m: &mut CMat, k: usize, cs: f64, sn: C64, to: usize) {
    for i in 0..to {
        let u = m[(i, k)];
        let v = m[(i, k + 1)];
        m[(i, k)] = u * cs + v * sn.conj();
        m[(i, k + 1)] = v * cs - u * sn;
    }
}

impl ComplexSchur {
    pub fn new(a: &CMat) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DimensionMismatch("Schur decomposition needs a square matrix".into()));
        }
        if n <= 1 {
            return Ok(ComplexSchur { q: CMat::identity(n, n), t: a.clone() });
        }
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Ok(ComplexSchur { q: CMat::identity(n, n), t: a.clone() });
        }
        let (mut q, mut h) = Hessenberg::new(a.unscale(scale)).unpack();
        for j in 0..n {
            for i in (j + 2)..n {
                h[(i, j)] = C64::default();
            }
        }

        let eps = f64::EPSILON;
        let mut hi = n - 1;
        let mut its = 0usize;
        let mut total = 0usize;
        while hi > 0 {
            // Locate the top of the active unreduced block.
            let mut lo = hi;
            while lo > 0 {
                let sub = h[(lo, lo - 1)].norm();
                let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
                if sub <= eps * diag || sub <= f64::MIN_POSITIVE / eps {
                    h[(lo, lo - 1)] = C64::default();
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                hi -= 1;
                its = 0;
                continue;
            }

            total += 1;
            if total > MAX_SWEEPS_PER_EIGENVALUE * n {
                return Err(Error::SchurNotConverged);
            }
            its += 1;

            let shift = if its % 11 == 10 {
                // Exceptional shift to break cycles.
                h[(hi, hi)] + c64(0.75 * h[(hi, hi - 1)].norm(), 0.0)
            } else {
                let a11 = h[(hi - 1, hi - 1)];
                let a12 = h[(hi - 1, hi)];
                let a21 = h[(hi, hi - 1)];
                let a22 = h[(hi, hi)];
                let half = (a11 - a22) * 0.5;
                let root = (half * half + a12 * a21).sqrt();
                let mean = (a11 + a22) * 0.5;
                let e1 = mean + root;
                let e2 = mean - root;
                if (e1 - a22).norm() <= (e2 - a22).norm() {
                    e1
                } else {
                    e2
                }
            };

            let mut x = h[(lo, lo)] - shift;
            let mut y = h[(lo + 1, lo)];
            for k in lo..hi {
                if k > lo {
                    x = h[(k, k - 1)];
                    y = h[(k + 1, k - 1)];
                }
                let (cs, sn) = givens(x, y);
                let from = if k > lo { k - 1 } else { lo };
                rotate_rows(&mut h, k, cs, sn, from);
                let to = (k + 3).min(hi + 1);
                rotate_cols(&mut h, k, cs, sn, to);
                rotate_cols(&mut q, k, cs, sn, n);
                if k > lo {
                    h[(k + 1, k - 1)] = C64::default();
                }
            }
        }

        for j in 0..n {
            for i in (j + 1)..n {
                h[(i, j)] = C64::default();
            }
        }
        Ok(ComplexSchur { q, t: h.scale(scale) })
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    /// Eigenvalues in Schur order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.t[(i, i)]).collect()
    }

    /// Swaps the adjacent diagonal entries `k` and `k + 1`.
    fn swap(&mut self, k: usize) {
        let n = self.dim();
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        let (cs, sn) = givens(self.t[(k, k + 1)], t22 - t11);
        if k + 2 < n {
            rotate_rows(&mut self.t, k, cs, sn, k + 2);
        }
        rotate_cols(&mut self.t, k, cs, sn, k);
        rotate_cols(&mut self.q, k, cs, sn, n);
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
    }

    /// Reorders so that the selected eigenvalues (by current Schur position)
    /// occupy the leading positions, preserving their relative order.
    /// Returns the number of selected eigenvalues.
    pub fn reorder(&mut self, select: &[bool]) -> usize {
        assert_eq!(select.len(), self.dim());
        let mut flags = select.to_vec();
        let mut front = 0;
        for pos in 0..flags.len() {
            if flags[pos] {
                let mut k = pos;
                while k > front {
                    self.swap(k - 1);
                    flags.swap(k - 1, k);
                    k -= 1;
                }
                front += 1;
            }
        }
        front
    }

    /// Orthonormal basis of the invariant subspace of the leading `k` eigenvalues.
    pub fn leading_subspace(&self, k: usize) -> CMat {
        self.q.columns(0, k).into_owned()
    }

    pub fn reconstruct(&self) -> CMat {
        &self.q * &self.t * self.q.adjoint()
    }
}

/// Eigenvalues of a general complex square matrix.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    Ok(ComplexSchur::new(a)?.eigenvalues())
}

/// Solves `X A - B X = C` for general square `A` (n x n) and `B` (m x m) by
/// the Bartels-Stewart method on complex Schur forms.
pub fn solve_general_sylvester(a: &CMat, b: &CMat, rhs: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let m = b.nrows();
    if rhs.nrows() != m || rhs.ncols() != n {
        return Err(Error::DimensionMismatch("Sylvester right-hand side".into()));
    }
    let sa = ComplexSchur::new(a)?;
    let sb = ComplexSchur::new(b)?;
    // F Ta - Tb F = G with F = Qb* X Qa, G = Qb* C Qa.
    let g = sb.q.adjoint() * rhs * &sa.q;
    let mut f = CMat::zeros(m, n);
    for j in 0..n {
        let mut col: Vec<C64> = (0..m).map(|i| g[(i, j)]).collect();
        for k in 0..j {
            let tkj = sa.t[(k, j)];
            if tkj != C64::default() {
                for i in 0..m {
                    col[i] -= f[(i, k)] * tkj;
                }
            }
        }
        // (t_jj I - Tb) f_j = col, upper triangular back substitution.
        let ajj = sa.t[(j, j)];
        for i in (0..m).rev() {
            let mut s = col[i];
            for l in (i + 1)..m {
                s += sb.t[(i, l)] * f[(l, j)];
            }
            let piv = ajj - sb.t[(i, i)];
            if piv.norm() == 0.0 {
                return Err(Error::SpectraOverlap { separation: 0.0 });
            }
            f[(i, j)] = s / piv;
        }
    }
    Ok(&sb.q * f * sa.q.adjoint())
}
