use normaloid::classes::{
    ascent, is_binormal, is_hyponormal, is_normal, is_normaloid, is_partial_isometry,
    is_posinormal, is_positive, is_quasinormal, is_self_adjoint, is_unitary,
};
use normaloid::generators::*;
use normaloid::linalg::{
    modulus, operator_norm, polar_decompose, rank, spectral_radius, ComplexMatrix, SingularSystem,
};
use normaloid::pencil::{check_abs_pr_lambda_grid, check_abs_pr_sphere};
use normaloid::transforms::{generalized_transform, UNIT_TOL};
use normaloid::{classify, ClassId, ClassifyOptions, ToleranceConfig};
use proptest::prelude::*;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix, scale: f64) -> f64 {
    (a.inner() - b.inner()).norm() / scale.max(1e-300)
}

fn small_options() -> ClassifyOptions {
    ClassifyOptions {
        p_list: vec![1.0],
        r_list: vec![1.0],
        k_list: vec![1.0],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_radius_never_exceeds_norm(n in 1usize..7, seed in any::<u64>()) {
        let t = gen_random(n, seed).unwrap();
        let r = spectral_radius(&t).unwrap();
        let norm = operator_norm(&t).unwrap();
        prop_assert!(r <= norm * (1.0 + 1e-12));
    }

    #[test]
    fn polar_round_trip(n in 1usize..7, rank_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let r = ((n as f64 * rank_frac) as usize).min(n);
        let t = if r == n { gen_random(n, seed).unwrap() } else { gen_rank_deficient(n, r, seed).unwrap() };
        let norm = operator_norm(&t).unwrap();
        let pd = polar_decompose(&t, &cfg()).unwrap();
        let back = &pd.u * &pd.p;
        prop_assert!(rel(&back, &t, norm) <= 1e-12);
        // U is a partial isometry with N(U) = N(|T|)
        prop_assert!(is_partial_isometry(&pd.u, &cfg()).unwrap().member);
        let kernel_of_u = ComplexMatrix::identity(n) - &pd.u.adjoint() * &pd.u;
        let kernel_of_p = &kernel_of_u * &pd.p;
        prop_assert!(kernel_of_p.inner().norm() <= 1e-10 * norm.max(1.0));
    }

    #[test]
    fn transform_at_one_is_identity(n in 1usize..6, seed in any::<u64>()) {
        let t = gen_random(n, seed).unwrap();
        let tr = generalized_transform(&t, 1.0, &cfg()).unwrap();
        let norm = operator_norm(&t).unwrap();
        prop_assert!(rel(&tr.matrix, &t, norm) <= UNIT_TOL);
    }

    #[test]
    fn verdicts_are_scale_invariant(n in 1usize..5, seed in any::<u64>(), c in 0.01f64..100.0) {
        let t = gen_normaloid(n.max(2), seed).unwrap();
        let a = classify(&t, &small_options(), &cfg()).unwrap();
        let b = classify(&t.scale(c), &small_options(), &cfg()).unwrap();
        for (va, vb) in a.verdicts.iter().zip(&b.verdicts) {
            prop_assert_eq!(va.class_id, vb.class_id);
            if va.class_id.scale_invariant() && !va.marginal && !vb.marginal {
                prop_assert_eq!(va.member, vb.member, "{} at scale {}", va.class_id, c);
            }
        }
    }

    #[test]
    fn verdicts_are_unitarily_invariant(n in 2usize..5, seed in any::<u64>()) {
        let t = gen_binormal(n, seed).unwrap();
        let w = gen_unitary(n, seed ^ 0xabcdef).unwrap();
        let s = &(&w * &t) * &w.adjoint();
        let a = classify(&t, &small_options(), &cfg()).unwrap();
        let b = classify(&s, &small_options(), &cfg()).unwrap();
        for (va, vb) in a.verdicts.iter().zip(&b.verdicts) {
            if !va.marginal && !vb.marginal {
                prop_assert_eq!(va.member, vb.member, "{}", va.class_id);
            }
        }
    }

    #[test]
    fn ascent_at_most_one_iff_rank_stable(n in 1usize..6, r in 0usize..6, seed in any::<u64>()) {
        let r = r.min(n);
        let t = if seed % 2 == 0 {
            gen_rank_deficient(n, r, seed).unwrap()
        } else {
            gen_quasinormal_partial_isometry(n, r, seed).unwrap()
        };
        let a = ascent(&t, &cfg()).unwrap();
        let r1 = rank(&t, &cfg()).unwrap();
        let r2 = rank(&(&t * &t), &cfg()).unwrap();
        prop_assert_eq!(a <= 1, r1 == r2);
    }

    #[test]
    fn grid_refutation_implies_sphere_refutation(n in 2usize..4, seed in any::<u64>()) {
        let t = gen_random(n, seed).unwrap();
        let grid = check_abs_pr_lambda_grid(&t, 1.0, 1.0, &cfg()).unwrap();
        let sphere = check_abs_pr_sphere(&t, 1.0, 1.0, &cfg()).unwrap();
        if !grid.decision {
            prop_assert!(!sphere.decision);
            prop_assert!(sphere.margin <= grid.margin + 1e-12);
        }
    }

    #[test]
    fn hyponormal_partial_isometries_are_quasinormal(n in 1usize..6, r in 0usize..6, seed in any::<u64>()) {
        let r = r.min(n);
        let v = if seed % 2 == 0 {
            gen_partial_isometry(n, r, seed).unwrap()
        } else {
            gen_quasinormal_partial_isometry(n, r, seed).unwrap()
        };
        let h = is_hyponormal(&v, &cfg()).unwrap();
        if h.member && !h.marginal {
            prop_assert!(is_quasinormal(&v, &cfg()).unwrap().member);
        }
    }
}

#[test]
fn generators_satisfy_their_class_on_100_seeds() {
    let cfg = cfg();
    for class in GeneratorClass::ALL {
        for seed in 0..100u64 {
            let n = 1 + (seed as usize % 6);
            let r = seed as usize % (n + 1);
            let spec = GeneratorSpec::new(class, n, seed).with_rank(r);
            let t = generate(&spec).unwrap();
            assert_eq!(t.dim(), n);
            assert_eq!(generate(&spec).unwrap(), t, "{class:?} not deterministic");
            let ok = match class {
                GeneratorClass::Random => true,
                GeneratorClass::Unitary => is_unitary(&t, &cfg).unwrap().member,
                GeneratorClass::Normal => is_normal(&t, &cfg).unwrap().member,
                GeneratorClass::Hermitian => is_self_adjoint(&t, &cfg).unwrap().member,
                GeneratorClass::Psd => is_positive(&t, &cfg).unwrap().member,
                GeneratorClass::PartialIsometry => is_partial_isometry(&t, &cfg).unwrap().member,
                GeneratorClass::QuasinormalPartialIsometry => {
                    is_partial_isometry(&t, &cfg).unwrap().member
                        && is_quasinormal(&t, &cfg).unwrap().member
                }
                GeneratorClass::Binormal => is_binormal(&t, &cfg).unwrap().member,
                GeneratorClass::Normaloid => is_normaloid(&t, &cfg).unwrap().member,
                GeneratorClass::Posinormal => is_posinormal(&t, &cfg).unwrap().member,
                GeneratorClass::RankDeficient => rank(&t, &cfg).unwrap() == r,
            };
            assert!(ok, "{class:?} n={n} seed={seed}");
        }
    }
}

#[test]
fn modulus_squares_to_gram() {
    let cfg = cfg();
    for seed in 0..50 {
        let t = gen_rank_deficient(5, 2, seed).unwrap();
        let m = modulus(&t, &cfg).unwrap();
        let gram = &t.adjoint() * &t;
        let norm = operator_norm(&t).unwrap();
        assert!(rel(&(&m * &m), &gram, norm * norm) < 1e-12);
        let s = SingularSystem::new(&t, &cfg).unwrap();
        assert_eq!(s.rank(), 2);
    }
}

#[test]
fn identity_is_in_every_class() {
    for n in 1..5 {
        let report = classify(&ComplexMatrix::identity(n), &ClassifyOptions::default(), &cfg()).unwrap();
        assert!(report.verdicts.iter().all(|v| v.member), "n={n}");
        assert!(report.chain_consistent);
        assert!(report.member(ClassId::Normaloid));
    }
}

/// Near-normal inputs violate the inequality by amounts far below what any
/// sampling oracle resolves; every refutation must still replay exactly.
#[test]
fn near_normal_refutations_replay() {
    use normaloid::pencil::abs_pr_inequality_value;
    let cfg = cfg();
    let mut g = rng(4);
    let mut refuted = 0;
    for i in 0..60u64 {
        let n = 2 + (i as usize % 2);
        let e = random_with(n, &mut g);
        let t = &gen_normal(n, i).unwrap() + &e.scale(1e-3);
        let (p, r) = ([0.5, 1.0, 2.0][i as usize % 3], [0.5, 1.0, 2.0][(i as usize / 3) % 3]);
        let cert = check_abs_pr_sphere(&t, p, r, &cfg).unwrap();
        if !cert.decision {
            refuted += 1;
            let x = cert.witness_vector.as_ref().unwrap();
            let value = abs_pr_inequality_value(&t, p, r, x, &cfg).unwrap();
            assert!(value < -cfg.psd_tol, "i={i}: witness replays to {value:e}");
            assert!((value - cert.margin).abs() <= 1e-9, "i={i}: {value:e} vs {:e}", cert.margin);
        }
    }
    assert!(refuted > 0);
}
