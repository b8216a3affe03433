use proptest::prelude::*;

use framecheck::checks::symmetry_residuals;
use framecheck::tensor::orthogonality_defect;
use framecheck::{
    catalog_lookup, check_frame_indifference, check_isotropy, check_observer_independence,
    check_symmetry, conjugate_tensor, generate_closure, random_orthogonal, schur_reduce,
    transform_vector, CheckConfig, ComponentMap, ConstitutiveModel, ObserverChange, RngSeed,
    StatePoint, SymmetryGroup, Tensor2, Vec3,
};

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-range..range).prop_map(Vec3)
}

fn tensor(range: f64) -> impl Strategy<Value = Tensor2> {
    prop::array::uniform3(prop::array::uniform3(-range..range)).prop_map(Tensor2)
}

fn observer() -> impl Strategy<Value = ObserverChange> {
    any::<u64>().prop_map(|s| ObserverChange::random(RngSeed(s)))
}

fn orthogonal() -> impl Strategy<Value = Tensor2> {
    (any::<u64>(), any::<bool>()).prop_map(|(s, p)| random_orthogonal(RngSeed(s), p))
}

fn symmetric_positive() -> impl Strategy<Value = Tensor2> {
    (any::<u64>(), prop::array::uniform3(0.1f64..10.0)).prop_map(|(s, l)| {
        let v = random_orthogonal(RngSeed(s), false);
        let k = v * Tensor2::diag(l[0], l[1], l[2]) * v.transpose();
        (k + k.transpose()) * 0.5
    })
}

fn any_model() -> impl Strategy<Value = ConstitutiveModel> {
    prop_oneof![
        tensor(5.0).prop_map(|k| ConstitutiveModel::LinearConstant { kappa0: k }),
        (tensor(5.0), prop::collection::vec(-0.01f64..0.01, 1..3)).prop_map(|(k, mut c)| {
            c.insert(0, 1.0);
            ConstitutiveModel::LinearTemperature {
                kappa0: k,
                theta_coeffs: c,
            }
        }),
        (0.1f64..5.0, -2.0f64..2.0)
            .prop_map(|(a, b)| ConstitutiveModel::NonlinearIsotropic { a, b }),
        (symmetric_positive(), 0.0f64..2.0)
            .prop_map(|(a, c)| ConstitutiveModel::NonlinearAnisotropic { a_tensor: a, c }),
    ]
}

fn small_cfg(seed: u64) -> CheckConfig {
    CheckConfig {
        gradient_samples: 4,
        theta_samples: vec![0.5, 300.0],
        seed: RngSeed(seed),
        ..CheckConfig::default()
    }
}

proptest! {
    #[test]
    fn observer_change_preserves_length(q in observer(), v in vec3(100.0)) {
        let w = transform_vector(&q, &v);
        prop_assert!((w.norm() - v.norm()).abs() <= 1e-12 * (1.0 + v.norm()));
    }

    #[test]
    fn conjugation_round_trips(q in observer(), h in tensor(10.0)) {
        let back = conjugate_tensor(&q.inverse(), &conjugate_tensor(&q, &h));
        prop_assert!((back - h).max_norm() <= 1e-12 * (1.0 + h.max_norm()));
    }

    #[test]
    fn conjugation_preserves_trace_and_det(q in observer(), h in tensor(1.0)) {
        let c = conjugate_tensor(&q, &h);
        prop_assert!((c.trace() - h.trace()).abs() <= 1e-10);
        prop_assert!((c.det() - h.det()).abs() <= 1e-10);
    }

    #[test]
    fn haar_samples_are_orthogonal(q in orthogonal()) {
        prop_assert!(orthogonality_defect(&q) <= 1e-12);
        prop_assert!((q.det().abs() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn component_map_round_trips(m in any_model(), q in observer(),
                                 theta in 0.1f64..500.0, g in vec3(3.0)) {
        let z = StatePoint::new(theta, g).unwrap();
        let cm = ComponentMap::new(m.clone(), q);
        let z_star = z.with_gradient(transform_vector(&q, &g));
        let back = transform_vector(&q.inverse(), &cm.evaluate_components(&z_star));
        let q_ref = m.evaluate(&z);
        prop_assert!((back - q_ref).max_norm() <= 1e-10 * (1.0 + q_ref.max_norm()));
    }

    #[test]
    fn symmetry_forms_agree(m in any_model(), h in orthogonal(), g in vec3(1.0)) {
        prop_assume!(g.norm() > 1e-3);
        let z = StatePoint::new(1.0, g.normalized()).unwrap();
        let r = symmetry_residuals(&m, &h, &z);
        prop_assert!((r.flux_relative - r.kappa_relative).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frame_indifference_holds_for_any_model(m in any_model(), seed in any::<u64>()) {
        let cfg = small_cfg(seed);
        let observers: Vec<_> = (0..5).map(|i| ObserverChange::random(RngSeed(seed).derive(i))).collect();
        let r = check_frame_indifference(&m, &SymmetryGroup::trivial(), &observers, &cfg);
        prop_assert!(r.passed, "residual {:e}", r.max_residual);
    }

    #[test]
    fn isotropy_implies_observer_independence(m in any_model(), seed in any::<u64>()) {
        let cfg = small_cfg(seed);
        if check_isotropy(&m, &cfg, 32).passed {
            let observers: Vec<_> = (0..10).map(|i| ObserverChange::random(RngSeed(seed).derive(i))).collect();
            let r = check_observer_independence(&m, &observers, &cfg.with_tol(1e-8));
            prop_assert!(r.passed, "residual {:e}", r.max_residual);
        }
    }

    #[test]
    fn refining_the_group_never_lowers_the_residual(m in any_model(), seed in any::<u64>()) {
        let cfg = small_cfg(seed);
        let z4 = catalog_lookup("z4").unwrap();
        let cubic = catalog_lookup("cubic_rotations").unwrap();
        for h in z4.elements() {
            prop_assert!(cubic.contains(h));
        }
        let small = check_symmetry(&m, &z4, &cfg);
        let large = check_symmetry(&m, &cubic, &cfg);
        prop_assert!(small.max_residual <= large.max_residual + 1e-12);
    }

    #[test]
    fn scalar_conductors_are_isotropic(alpha in 0.01f64..100.0, seed in any::<u64>()) {
        let m = ConstitutiveModel::LinearConstant { kappa0: Tensor2::scalar(alpha) };
        prop_assert!(check_isotropy(&m, &small_cfg(seed), 32).passed);
    }

    #[test]
    fn schur_acceptance_means_scalar(l in tensor(10.0), alpha in -10.0f64..10.0,
                                     scalar in any::<bool>(), seed in any::<u64>()) {
        let l = if scalar { Tensor2::scalar(alpha) } else { l };
        let cfg = small_cfg(seed);
        let s = schur_reduce(&l, &cfg);
        if s.is_isotropic_invariant {
            let a = s.alpha.unwrap();
            prop_assert!((l - Tensor2::scalar(a)).max_norm() <= cfg.tol);
        }
        prop_assert_eq!(s.is_isotropic_invariant, scalar);
        let again = schur_reduce(&l, &cfg);
        prop_assert_eq!(s.residual.to_bits(), again.residual.to_bits());
    }

    #[test]
    fn closure_is_idempotent(pick in 0usize..4,
                             pairs in prop::collection::vec(any::<(prop::sample::Index, prop::sample::Index)>(), 8)) {
        let name = ["trivial", "z4", "orthotropic", "cubic_rotations"][pick];
        let g = catalog_lookup(name).unwrap();
        let again = generate_closure(g.elements(), 1000).unwrap();
        prop_assert_eq!(again.order(), g.order());
        prop_assert!(g.contains(&Tensor2::identity()));
        let elems = g.elements();
        for (i, j) in pairs {
            let (a, b) = (*i.get(elems), *j.get(elems));
            prop_assert!(g.contains(&(a * b)));
            prop_assert!(g.contains(&a.transpose()));
        }
    }
}
