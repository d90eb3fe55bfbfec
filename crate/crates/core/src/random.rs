//! Seeded random vectors and matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c64, CMat, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64(re, im)
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, nrows: usize, ncols: usize) -> CMat {
    let mut m = CMat::zeros(nrows, ncols);
    for j in 0..ncols {
        for i in 0..nrows {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// Uniform point on the complex unit sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let qr = complex_gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `U diag(values) U*` with Haar `U`, symmetrized.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> CMat {
    let n = values.len();
    let u = haar_unitary(rng, n);
    let mut scaled = u.clone();
    for (j, &v) in values.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= v;
        }
    }
    crate::linalg::hermitian_part(&(&scaled * u.adjoint()))
}

/// `count` values uniform in `[lo, hi]`.
pub fn uniform_values<R: Rng + ?Sized>(rng: &mut R, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(lo..=hi)).collect()
}
