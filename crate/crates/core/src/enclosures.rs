//! Spectral enclosures for `L = [[A0, B], [C, A1]]`: enclosure radius,
//! Schur complement and Neumann test, resolvent strips, numerical range and
//! quadratic numerical range.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BlockInstance, Mode};
use crate::linalg::{
    hermitian_eigenvalues, hermitian_part, identity, inverse, min_singular_value, point_to_set, set_distance,
    spectral_norm, CMat, CVec, C64,
};
use crate::random::{rng, unit_vector};
use crate::schur::eigenvalues;
use crate::tolerance::Tolerances;

fn check_radius_args(v: f64, d: f64) -> Result<()> {
    if !(d > 0.0) || !(v >= 0.0) || !(2.0 * v < d) {
        return Err(Error::TooLargePerturbation(format!(
            "coupling {v} must be below half the separation {d}"
        )));
    }
    Ok(())
}

/// `r_V = v tan(arcsin(2v/d)/2)` with `v = sqrt(||B|| ||C||)`.
pub fn enclosure_radius(norm_b: f64, norm_c: f64, d: f64) -> Result<f64> {
    let v = (norm_b * norm_c).sqrt();
    check_radius_args(v, d)?;
    Ok(v * (0.5 * (2.0 * v / d).asin()).tan())
}

/// The same radius in the form `d/2 - sqrt(d^2/4 - v^2)`.
pub fn enclosure_radius_root_form(norm_b: f64, norm_c: f64, d: f64) -> Result<f64> {
    let v = (norm_b * norm_c).sqrt();
    check_radius_args(v, d)?;
    let h = 0.5 * d;
    // Written as v^2 / (h + sqrt(h^2 - v^2)) to avoid cancellation.
    Ok(v * v / (h + (h * h - v * v).sqrt()))
}

#[derive(Debug, Clone, Serialize)]
pub struct EnclosedEigenvalue {
    pub re: f64,
    pub im: f64,
    /// Index of the nearest unperturbed component.
    pub group: usize,
    /// Distance to the nearest point of that component.
    pub displacement: f64,
    /// `r_V - displacement`; nonnegative inside the enclosure.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnclosureReport {
    pub r_v: f64,
    pub d: f64,
    pub coupling: f64,
    pub eigenvalues: Vec<EnclosedEigenvalue>,
    pub group_sizes: [usize; 2],
    pub all_real: bool,
    /// Every eigenvalue lies within `r_V` of its component and the groups
    /// have sizes `n0`, `n1`; in J-self-adjoint mode the spectrum is also real.
    pub inclusion_ok: bool,
}

/// Checks the enclosure of the spectrum in the `r_V`-neighbourhoods of the
/// unperturbed components. Requires Hermitian diagonal blocks with disjoint
/// spectra and `sqrt(||B|| ||C||) < d/2`. The neighbourhoods are complex
/// discs; reality of the spectrum is part of the conclusion only for
/// J-self-adjoint instances and is merely reported otherwise.
pub fn verify_enclosure(inst: &BlockInstance, tol: &Tolerances) -> Result<EnclosureReport> {
    if !inst.diagonal_blocks_hermitian(tol) {
        return Err(Error::HypothesesNotMet("diagonal blocks must be Hermitian".into()));
    }
    let s0 = inst.sigma0();
    let s1 = inst.sigma1();
    let d = set_distance(&s0, &s1);
    let coupling = inst.coupling();
    if !(d > 0.0) || !(2.0 * coupling < d) {
        return Err(Error::HypothesesNotMet(format!(
            "need sqrt(||B|| ||C||) = {coupling:.6e} < d/2 = {:.6e}",
            d / 2.0
        )));
    }
    let r_v = enclosure_radius(inst.norm_b(), inst.norm_c(), d)?;
    let l = inst.assemble();
    let scale = 1.0 + spectral_norm(&l);
    let mut eigs = eigenvalues(&l)?;
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut group_sizes = [0usize; 2];
    let mut all_real = true;
    let mut within = true;
    let records: Vec<EnclosedEigenvalue> = eigs
        .iter()
        .map(|&z| {
            let d0 = point_to_set(z, &s0);
            let d1 = point_to_set(z, &s1);
            let (group, displacement) = if d0 <= d1 { (0, d0) } else { (1, d1) };
            group_sizes[group] += 1;
            if z.im.abs() > tol.imag * scale {
                all_real = false;
            }
            if displacement > r_v + tol.imag * scale {
                within = false;
            }
            EnclosedEigenvalue { re: z.re, im: z.im, group, displacement, margin: r_v - displacement }
        })
        .collect();
    let sizes_ok = group_sizes == [inst.n0(), inst.n1()];
    let real_required = inst.mode == Mode::JSelfAdjoint;
    Ok(EnclosureReport {
        r_v,
        d,
        coupling,
        eigenvalues: records,
        group_sizes,
        all_real,
        inclusion_ok: within && sizes_ok && (all_real || !real_required),
    })
}

fn shifted(m: &CMat, lambda: C64) -> CMat {
    m - identity(m.nrows()) * lambda
}

fn in_spectrum(m: &CMat, lambda: C64) -> bool {
    let scale = 1.0 + spectral_norm(m) + lambda.norm();
    min_singular_value(&shifted(m, lambda)) <= 1e-13 * scale
}

/// `S0(lambda) = A0 - lambda - B (A1 - lambda)^{-1} C`.
pub fn schur_complement(inst: &BlockInstance, lambda: C64) -> Result<CMat> {
    if in_spectrum(&inst.a1, lambda) {
        return Err(Error::LambdaInSpectrumA1);
    }
    let r1 = inverse(&shifted(&inst.a1, lambda))?;
    Ok(shifted(&inst.a0, lambda) - &inst.b * r1 * &inst.c)
}

/// `||B (A1 - lambda)^{-1} C (A0 - lambda)^{-1}|| < 1`, which places `lambda`
/// in the resolvent set of `L`.
pub fn neumann_excludes(inst: &BlockInstance, lambda: C64) -> Result<bool> {
    if in_spectrum(&inst.a0, lambda) || in_spectrum(&inst.a1, lambda) {
        return Err(Error::LambdaInUnperturbedSpectrum);
    }
    let r0 = inverse(&shifted(&inst.a0, lambda))?;
    let r1 = inverse(&shifted(&inst.a1, lambda))?;
    Ok(spectral_norm(&(&inst.b * r1 * &inst.c * r0)) < 1.0)
}

/// Largest real part of the numerical range.
pub fn max_re_numerical_range(m: &CMat) -> f64 {
    hermitian_eigenvalues(&hermitian_part(m)).last().copied().unwrap_or(f64::NAN)
}

/// Smallest real part of the numerical range.
pub fn min_re_numerical_range(m: &CMat) -> f64 {
    hermitian_eigenvalues(&hermitian_part(m)).first().copied().unwrap_or(f64::NAN)
}

/// Checks that the strip `a + r_V < Re z < b - r_V` is free of spectrum, given
/// `max Re W(A0) <= a < b <= min Re W(A1)` and `sqrt(||B|| ||C||) < (b - a)/2`.
/// Besides the eigenvalues, `L - z` is checked to be invertible on a
/// `grid_n x grid_n` grid strictly inside the strip with `|Im z| <= 2 ||L||`.
pub fn strip_resolvent_check(inst: &BlockInstance, a: f64, b: f64, grid_n: usize, tol: &Tolerances) -> Result<bool> {
    let w0 = max_re_numerical_range(&inst.a0);
    let w1 = min_re_numerical_range(&inst.a1);
    let slack = tol.imag * (1.0 + a.abs().max(b.abs()));
    if !(a < b) || w0 > a + slack || w1 < b - slack {
        return Err(Error::HypothesesNotMet(format!(
            "need max Re W(A0) = {w0:.6} <= a = {a} < b = {b} <= min Re W(A1) = {w1:.6}"
        )));
    }
    let v = inst.coupling();
    let r = enclosure_radius(inst.norm_b(), inst.norm_c(), b - a)
        .map_err(|e| Error::HypothesesNotMet(e.to_string()))?;
    let (lo, hi) = (a + r, b - r);
    let l = inst.assemble();
    let norm_l = spectral_norm(&l);
    let eig_tol = tol.imag * (1.0 + norm_l);
    for z in eigenvalues(&l)? {
        if z.re > lo + eig_tol && z.re < hi - eig_tol {
            return Ok(false);
        }
    }
    if grid_n == 0 || hi <= lo {
        return Ok(true);
    }
    let height = 2.0 * norm_l.max(v).max(1e-300);
    for i in 0..grid_n {
        let x = lo + (hi - lo) * (i as f64 + 1.0) / (grid_n as f64 + 1.0);
        for j in 0..grid_n {
            let y = if grid_n == 1 { 0.0 } else { -height + 2.0 * height * j as f64 / (grid_n as f64 - 1.0) };
            if min_singular_value(&shifted(&l, C64::new(x, y))) <= 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct QnrSample {
    pub points: Vec<C64>,
    pub n_samples: usize,
    pub seed: u64,
}

fn quadratic_form(m: &CMat, x: &[C64], y: &[C64]) -> C64 {
    // (M y, x) with the inner product linear in the first argument.
    let yv = CVec::from_column_slice(y);
    let my = m * yv;
    my.iter().zip(x).map(|(a, b)| a * b.conj()).sum()
}

/// Eigenvalues of the compressions
/// `L_{x,y} = [[(A0 x, x), (B y, x)], [(C x, y), (A1 y, y)]]` for random unit `x`, `y`.
pub fn sample_qnr(inst: &BlockInstance, n_samples: usize, seed: u64) -> QnrSample {
    let mut r = rng(seed);
    let mut points = Vec::with_capacity(2 * n_samples);
    for _ in 0..n_samples {
        let x = unit_vector(&mut r, inst.n0());
        let y = unit_vector(&mut r, inst.n1());
        let ev = crate::linalg::eigenvalues_2x2(
            quadratic_form(&inst.a0, &x, &x),
            quadratic_form(&inst.b, &x, &y),
            quadratic_form(&inst.c, &y, &x),
            quadratic_form(&inst.a1, &y, &y),
        );
        points.extend(ev);
    }
    QnrSample { points, n_samples, seed }
}

/// In J-self-adjoint mode, every eigenvalue of `L` and every sampled point has
/// real part within `[min spec A, max spec A]` up to tolerance.
pub fn qnr_halfplane_check(inst: &BlockInstance, samples: &QnrSample, tol: &Tolerances) -> Result<bool> {
    if inst.mode != Mode::JSelfAdjoint {
        return Err(Error::HypothesesNotMet("half-plane bound needs a J-self-adjoint instance".into()));
    }
    let spec: Vec<f64> = inst.sigma0().into_iter().chain(inst.sigma1()).collect();
    let lo = spec.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = spec.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l = inst.assemble();
    let slack = tol.imag * (1.0 + spectral_norm(&l));
    let ok = |z: &C64| z.re >= lo - slack && z.re <= hi + slack;
    Ok(eigenvalues(&l)?.iter().all(ok) && samples.points.iter().all(ok))
}

/// Rayleigh quotients `(M x, x)` of random unit vectors.
pub fn numerical_range_sample(m: &CMat, n_samples: usize, seed: u64) -> Vec<C64> {
    let mut r = rng(seed);
    (0..n_samples)
        .map(|_| {
            let x = unit_vector(&mut r, m.nrows());
            quadratic_form(m, &x, &x)
        })
        .collect()
}

/// Support function `max Re(e^{-i phi} w)` of the numerical range.
pub fn numerical_range_support(m: &CMat, phi: f64) -> f64 {
    let rot = C64::from_polar(1.0, -phi);
    max_re_numerical_range(&m.map(|z| z * rot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, real_diagonal, real_matrix};

    #[test]
    fn radius_forms() {
        assert!((enclosure_radius(0.3, 0.3, 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((enclosure_radius_root_form(0.3, 0.3, 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(enclosure_radius(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert!((enclosure_radius(0.2, 0.2, 1.0).unwrap() - 0.0417424).abs() < 5e-8);
        assert_eq!(enclosure_radius(0.5, 0.5, 1.0).unwrap_err().name(), "TooLargePerturbation");
    }

    #[test]
    fn scalar_subordinated_instance_is_sharp() {
        let inst = BlockInstance::j_self_adjoint(real_diagonal(&[-1.0]), real_diagonal(&[1.0]), real_matrix(&[&[0.6]]))
            .unwrap();
        let rep = verify_enclosure(&inst, &Tolerances::default()).unwrap();
        assert!((rep.r_v - 0.2).abs() < 1e-15);
        assert!(rep.inclusion_ok && rep.all_real);
        for e in &rep.eigenvalues {
            assert!((e.displacement - 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn general_coupling_can_leave_the_real_axis() {
        // Hermitian diagonal, sqrt(|b c|) < d/2, yet the eigenvalues +-sqrt(1 + 0.36i) are not real.
        let inst = BlockInstance::new(
            real_diagonal(&[-1.0]),
            real_diagonal(&[1.0]),
            CMat::from_element(1, 1, c64(0.0, 0.6)),
            Some(real_matrix(&[&[0.6]])),
            Mode::General,
        )
        .unwrap();
        let rep = verify_enclosure(&inst, &Tolerances::default()).unwrap();
        assert!(!rep.all_real);
        assert!(rep.inclusion_ok);
    }

    #[test]
    fn schur_complement_detects_eigenvalue() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let inst = BlockInstance::j_self_adjoint(
            real_diagonal(&[0.0]),
            real_diagonal(&[-2.0, 2.0]),
            real_matrix(&[&[h, h]]),
        )
        .unwrap();
        let s = schur_complement(&inst, c64(0.0, 0.0)).unwrap();
        assert!(s[(0, 0)].norm() < 1e-15);
        assert_eq!(schur_complement(&inst, c64(2.0, 0.0)).unwrap_err().name(), "LambdaInSpectrumA1");
        assert!(!neumann_excludes(&inst, c64(3f64.sqrt(), 0.0)).unwrap());
    }

    #[test]
    fn strip_examples() {
        let tol = Tolerances::default();
        let zero = BlockInstance::j_self_adjoint(
            real_diagonal(&[-1.0, -1.0]),
            real_diagonal(&[1.0]),
            CMat::zeros(2, 1),
        )
        .unwrap();
        assert!(strip_resolvent_check(&zero, -1.0, 1.0, 8, &tol).unwrap());
        let sharp = BlockInstance::j_self_adjoint(real_diagonal(&[-1.0]), real_diagonal(&[1.0]), real_matrix(&[&[0.6]]))
            .unwrap();
        assert!(strip_resolvent_check(&sharp, -1.0, 1.0, 16, &tol).unwrap());
        assert!(strip_resolvent_check(&sharp, -0.5, 1.0, 4, &tol).unwrap());
        assert!(strip_resolvent_check(&sharp, -1.2, 1.0, 4, &tol).is_err());
    }

    #[test]
    fn nilpotent_numerical_range_is_half_disc() {
        let m = real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
        for p in numerical_range_sample(&m, 500, 1) {
            assert!(p.norm() <= 0.5 + 1e-12);
        }
        assert!((numerical_range_support(&m, 0.3) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn qnr_of_scalar_blocks_is_spectrum() {
        let inst = BlockInstance::j_self_adjoint(real_diagonal(&[-1.0]), real_diagonal(&[1.0]), real_matrix(&[&[0.6]]))
            .unwrap();
        let s = sample_qnr(&inst, 10, 4);
        assert_eq!(s.points.len(), 20);
        for p in &s.points {
            assert!((p.re.abs() - 0.8).abs() < 1e-14 && p.im.abs() < 1e-14);
        }
        assert!(qnr_halfplane_check(&inst, &s, &Tolerances::default()).unwrap());
    }
}
