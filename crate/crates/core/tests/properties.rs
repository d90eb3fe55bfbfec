use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use rand::Rng;

use krein_core::angles::operator_angle;
use krein_core::bounds::apriori_deltahat_lower;
use krein_core::disposition::{classify_disposition, DispositionKind};
use krein_core::enclosures::{
    enclosure_radius, enclosure_radius_root_form, neumann_excludes, numerical_range_support, sample_qnr,
};
use krein_core::ensemble::{random_j_instance, run_trial, EnsembleDisposition, TrialConfig};
use krein_core::krein::{
    definiteness_margin, graph_subspace, j_orthogonal_complement, krein_gram, krein_inner, Component, KreinSignature,
};
use krein_core::linalg::{
    c64, frobenius, hermitian_part, identity, min_singular_value, principal_sqrt, spectral_norm, CMat,
};
use krein_core::random::{complex_gaussian_matrix, rng, unit_vector, uniform_values};
use krein_core::riccati::{solve_riccati_for_group, solve_riccati_newton, solve_riccati_with};
use krein_core::schur::eigenvalues;
use krein_core::sylvester::{solve_sylvester, sylvester_bound_rhs};
use krein_core::Tolerances;

fn scaled(m: CMat, target: f64) -> CMat {
    let n = spectral_norm(&m);
    if n == 0.0 {
        m
    } else {
        m * c64(target / n, 0.0)
    }
}

fn disposition(i: u8) -> EnsembleDisposition {
    EnsembleDisposition::ALL[i as usize % 3]
}

fn dims_for(disp: EnsembleDisposition, n0: usize, n1: usize) -> (usize, usize) {
    let (m0, m1) = disp.min_dims();
    (n0.max(m0), n1.max(m1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_margin_matches_norm(seed in any::<u64>(), n0 in 1usize..5, n1 in 1usize..5, s in 0.0f64..0.99) {
        let mut r = rng(seed);
        let k = scaled(complex_gaussian_matrix(&mut r, n1, n0), s);
        let sig = KreinSignature::new(n0, n1);
        let g = graph_subspace(&k, &sig, Component::Zero).unwrap();
        let nk = spectral_norm(&k);
        let gamma = definiteness_margin(&g, &sig).unwrap();
        prop_assert!((gamma - (1.0 - nk * nk) / (1.0 + nk * nk)).abs() <= 1e-10);
    }

    #[test]
    fn complement_is_graph_of_adjoint(seed in any::<u64>(), n0 in 1usize..5, n1 in 1usize..5, s in 0.0f64..0.95) {
        let mut r = rng(seed);
        let k = scaled(complex_gaussian_matrix(&mut r, n1, n0), s);
        let sig = KreinSignature::new(n0, n1);
        let g = graph_subspace(&k, &sig, Component::Zero).unwrap();
        let comp = j_orthogonal_complement(&g, &sig).unwrap();
        let expected = graph_subspace(&k.adjoint(), &sig, Component::One).unwrap();
        let angles = operator_angle(&comp, &expected).unwrap();
        prop_assert!(angles.iter().all(|&a| a <= 1e-10));
        prop_assert!(frobenius(&(g.basis.adjoint() * sig.apply(&comp.basis))) <= 1e-10);
    }

    #[test]
    fn krein_square_is_real(seed in any::<u64>(), n0 in 1usize..5, n1 in 1usize..5) {
        let mut r = rng(seed);
        let x = unit_vector(&mut r, n0 + n1);
        let v = krein_inner(&x, &x, &KreinSignature::new(n0, n1)).unwrap();
        prop_assert!(v.im.abs() <= 1e-15);
    }

    #[test]
    fn classification_is_symmetric(seed in any::<u64>(), n0 in 1usize..6, n1 in 1usize..6) {
        let mut r = rng(seed);
        let mut a = uniform_values(&mut r, n0, -5.0, 5.0);
        let mut b = uniform_values(&mut r, n1, -5.0, 5.0);
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (x, y) = (classify_disposition(&a, &b, 1e-12), classify_disposition(&b, &a, 1e-12));
        match (x, y) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x.d, y.d);
                let swapped = match y.kind {
                    DispositionKind::GapOf(i) => DispositionKind::GapOf(1 - i),
                    other => other,
                };
                prop_assert_eq!(x.kind, swapped);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "asymmetric failure"),
        }
    }

    #[test]
    fn sylvester_is_linear_and_bounded(seed in any::<u64>(), n0 in 1usize..5, n1 in 1usize..5, disp in 0u8..3) {
        let disp = disposition(disp);
        let (n0, n1) = dims_for(disp, n0, n1);
        let mut r = rng(seed);
        let inst = random_j_instance(&mut r, n0, n1, 0.0, disp).unwrap();
        let y1 = complex_gaussian_matrix(&mut r, n1, n0);
        let y2 = complex_gaussian_matrix(&mut r, n1, n0);
        let alpha = c64(0.7, -1.3);
        let s1 = solve_sylvester(&inst.a0, &inst.a1, &y1).unwrap();
        let s2 = solve_sylvester(&inst.a0, &inst.a1, &y2).unwrap();
        let s3 = solve_sylvester(&inst.a0, &inst.a1, &(&y1 * alpha + &y2)).unwrap();
        prop_assert!(frobenius(&(&s3.x - (&s1.x * alpha + &s2.x))) <= 1e-10 * (1.0 + frobenius(&s3.x)));
        let rhs = sylvester_bound_rhs(spectral_norm(&y1), s1.d, s1.disposition).unwrap();
        prop_assert!(s1.norm_x <= rhs * (1.0 + 1e-10));
        prop_assert!(s1.residual <= 1e-10 * (1.0 + frobenius(&y1)));
    }

    #[test]
    fn operator_function_commutes(seed in any::<u64>(), n in 1usize..5, m in 1usize..5, s in 0.0f64..0.9) {
        let mut r = rng(seed);
        let a = complex_gaussian_matrix(&mut r, n, m);
        let b = complex_gaussian_matrix(&mut r, m, n);
        let t = (s / spectral_norm(&(&a * &b)).max(spectral_norm(&(&b * &a)))).sqrt();
        let (a, b) = (a * c64(t, 0.0), b * c64(t, 0.0));
        let left = &a * principal_sqrt(&(identity(m) - &b * &a)).unwrap();
        let right = principal_sqrt(&(identity(n) - &a * &b)).unwrap() * &a;
        prop_assert!(frobenius(&(left - right)) <= 1e-10);
    }

    #[test]
    fn solutions_satisfy_all_invariants(
        seed in any::<u64>(), n0 in 1usize..6, n1 in 1usize..6, disp in 0u8..3, v in 0.0f64..0.49
    ) {
        let disp = disposition(disp);
        let (n0, n1) = dims_for(disp, n0, n1);
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let inst = random_j_instance(&mut r, n0, n1, v, disp).unwrap();
        let sol = solve_riccati_with(&inst, &tol).unwrap();
        let diag = sol.diagnostics(&inst).unwrap();
        prop_assert!(sol.norm_k < 1.0);
        prop_assert!(diag.residual <= 1e-9 * diag.residual_scale);
        prop_assert!(diag.dual_residual <= 1e-9 * diag.residual_scale);
        prop_assert!(diag.transformed_residual <= 1e-9 * diag.residual_scale);
        prop_assert!(diag.diagonalization_defect <= 1e-8);
        prop_assert!(diag.lambda0_hermitian_defect <= 1e-9 && diag.lambda1_hermitian_defect <= 1e-9);
        prop_assert!(diag.similarity_defect <= 1e-8);

        // (I - KK*)^{1/2} K = K (I - K*K)^{1/2}
        let k = &sol.k;
        let left = principal_sqrt(&(identity(n1) - k * k.adjoint())).unwrap() * k;
        let right = k * principal_sqrt(&(identity(n0) - k.adjoint() * k)).unwrap();
        prop_assert!(frobenius(&(left - right)) <= 1e-10);

        let sig = inst.signature();
        let l = inst.assemble();
        let pos = sol.positive_subspace(&sig).unwrap();
        let neg = sol.negative_subspace(&sig).unwrap();
        prop_assert!(pos.invariance_defect(&l) <= 1e-9 * spectral_norm(&l));
        prop_assert!(neg.invariance_defect(&l) <= 1e-9 * spectral_norm(&l));
        prop_assert!(frobenius(&(pos.basis.adjoint() * sig.apply(&neg.basis))) <= 1e-9);
        prop_assert!(definiteness_margin(&pos, &sig).unwrap() > 0.0);
        let gram_neg = krein_gram(&neg.basis, &sig);
        prop_assert!(krein_core::linalg::hermitian_eigenvalues(&gram_neg).last().unwrap() < &0.0);

        let again = solve_riccati_for_group(&inst, &sol.sigma0_prime, &tol).unwrap();
        prop_assert!(frobenius(&(&again.k - k)) <= 1e-10);
        let newton = solve_riccati_newton(&inst, 60).unwrap();
        prop_assert!(frobenius(&(newton - k)) <= 1e-8);

        if 2.0 * inst.norm_v() < inst.d() {
            let dh = krein_core::linalg::set_distance(&sol.sigma0_prime, &sol.sigma1_prime);
            prop_assert!(dh >= apriori_deltahat_lower(inst.norm_v(), inst.d()).unwrap() - 1e-9);
        }
    }

    #[test]
    fn bounds_and_angle_duality(
        seed in any::<u64>(), n0 in 1usize..7, n1 in 1usize..7, disp in 0u8..3, v in 0.0f64..0.3
    ) {
        let disp = disposition(disp);
        let (n0, n1) = dims_for(disp, n0, n1);
        let tol = Tolerances::default();
        let t = run_trial(&TrialConfig { n0, n1, v_over_d: v, disposition: disp }, seed, 0, &tol).unwrap();
        for rec in &t.bounds.records {
            prop_assert!(rec.holds, "{} violated: lhs {} rhs {:?}", rec.bound_id, rec.lhs, rec.rhs);
        }
        prop_assert!(t.tan_k_defect <= 1e-9);
        prop_assert!(t.theta_defect <= 1e-9);
        let rhs = |id: &str| t.bounds.record(id).and_then(|r| r.rhs);
        if let (Some(a), Some(b)) = (rhs("apriori_tan_generic"), rhs("apriori_tan_pi")) {
            prop_assert!(t.norm_v == 0.0 || a < b);
        }
        for i in 0..2 {
            if let (Some(a), Some(b)) = (rhs(["semi_tan_gap_i0", "semi_tan_gap_i1"][i]), rhs(["semi_tan_generic_i0", "semi_tan_generic_i1"][i])) {
                prop_assert!(a <= b);
            }
        }
    }

    #[test]
    fn radius_forms_agree(v in 0.0f64..10.0, ratio in 0.0f64..0.4999) {
        let d = if v == 0.0 { 1.0 } else { v / ratio.max(1e-6) };
        prop_assume!(2.0 * v < d);
        let a = enclosure_radius(v, v, d).unwrap();
        let b = enclosure_radius_root_form(v, v, d).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn neumann_exclusion_is_sound(seed in any::<u64>(), n0 in 1usize..5, n1 in 1usize..5, v in 0.0f64..3.0) {
        let mut r = rng(seed);
        let inst = random_j_instance(&mut r, n0, n1, v, EnsembleDisposition::Subordinated).unwrap();
        let l = inst.assemble();
        for _ in 0..20 {
            let z = c64(r.random_range(-1.0..4.0), r.random_range(-2.0..2.0));
            if let Ok(true) = neumann_excludes(&inst, z) {
                let shifted = &l - identity(l.nrows()) * z;
                prop_assert!(min_singular_value(&shifted) >= 1e-12);
            }
        }
    }

    #[test]
    fn qnr_lies_in_numerical_range(seed in any::<u64>(), n0 in 1usize..5, n1 in 1usize..5) {
        let mut r = rng(seed);
        let a0 = hermitian_part(&complex_gaussian_matrix(&mut r, n0, n0));
        let a1 = complex_gaussian_matrix(&mut r, n1, n1);
        let b = complex_gaussian_matrix(&mut r, n0, n1);
        let c = complex_gaussian_matrix(&mut r, n1, n0);
        let inst = krein_core::BlockInstance::new(a0, a1, b, Some(c), krein_core::Mode::General).unwrap();
        let l = inst.assemble();
        let pts = sample_qnr(&inst, 200, seed).points;
        for k in 0..16 {
            let phi = k as f64 * FRAC_PI_2 / 4.0;
            let h = numerical_range_support(&l, phi);
            let rot = c64(phi.cos(), -phi.sin());
            prop_assert!(pts.iter().all(|z| (z * rot).re <= h + 1e-9 * (1.0 + h.abs())));
        }
        for z in eigenvalues(&l).unwrap() {
            prop_assert!(z.re <= numerical_range_support(&l, 0.0) + 1e-9);
        }
    }
}
