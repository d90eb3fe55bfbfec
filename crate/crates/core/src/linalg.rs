//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a complex matrix from real row slices.
pub fn real_matrix(rows: &[&[f64]]) -> CMat {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(nrows, ncols, |i, j| c64(rows[i][j], 0.0))
}

pub fn real_diagonal(values: &[f64]) -> CMat {
    let n = values.len();
    CMat::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { C64::default() })
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values sorted in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn min_singular_value(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Relative Hermiticity defect `||M - M*||_F / max(1, ||M||_F)`.
pub fn hermitian_defect(m: &CMat) -> f64 {
    frobenius(&(m - m.adjoint())) / frobenius(m).max(1.0)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Applies `f` to a positive semidefinite Hermitian matrix through its
/// eigen-decomposition, flooring eigenvalues at `floor` first.
pub fn psd_function(m: &CMat, floor: f64, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let fj = f(lam.max(floor));
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    &scaled * vectors.adjoint()
}

/// Orthonormal basis of the column span (column-pivoted QR).
pub fn orthonormal_columns(m: &CMat) -> CMat {
    if m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    m.clone().col_piv_qr().q()
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("singular matrix".into()))
}

/// Principal square root of a general complex matrix with spectrum in the
/// open right half-plane (Denman-Beavers iteration).
pub fn principal_sqrt(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    let mut y = m.clone();
    let mut z = identity(n);
    for _ in 0..100 {
        let y_inv = inverse(&y)?;
        let z_inv = inverse(&z)?;
        let y_next = (&y + z_inv).scale(0.5);
        let z_next = (&z + y_inv).scale(0.5);
        let change = frobenius(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if change <= 1e-15 * frobenius(&y).max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::InvalidInput("matrix square root iteration did not converge".into()))
}

/// `min |a - b|` over two real point sets; infinity when either is empty.
pub fn set_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for &x in a {
        for &y in b {
            best = best.min((x - y).abs());
        }
    }
    best
}

/// Distance of a complex point to a real point set.
pub fn point_to_set(z: C64, set: &[f64]) -> f64 {
    set.iter().map(|&s| (z - s).norm()).fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of a 2x2 complex matrix by the quadratic formula.
pub fn eigenvalues_2x2(a: C64, b: C64, c: C64, d: C64) -> [C64; 2] {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    [half_tr + root, half_tr - root]
}

/// Copies a block of `m` into a new matrix.
pub fn block(m: &CMat, row: usize, col: usize, nrows: usize, ncols: usize) -> CMat {
    m.view((row, col), (nrows, ncols)).into_owned()
}

/// Two-block vertical stack `[top; bottom]`.
pub fn vstack(top: &CMat, bottom: &CMat) -> CMat {
    let mut out = CMat::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

/// Horizontal concatenation `[left, right]`.
pub fn hstack(left: &CMat, right: &CMat) -> CMat {
    let mut out = CMat::zeros(left.nrows(), left.ncols() + right.ncols());
    out.view_mut((0, 0), left.shape()).copy_from(left);
    out.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    out
}

/// Builds `[[a, b], [c, d]]` from conforming blocks.
pub fn block_2x2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    vstack(&hstack(a, b), &hstack(c, d))
}
