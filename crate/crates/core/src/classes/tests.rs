use super::*;
use crate::generators;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn m(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows)
}

fn ex_normaloid() -> ComplexMatrix {
    m(&[&[2.0, 0.0, 0.0], &[0.0, 0.0, 2.0], &[0.0, 1.0, 0.0]])
}

fn ex_v() -> ComplexMatrix {
    m(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])
}

fn nilpotent() -> ComplexMatrix {
    m(&[&[0.0, 1.0], &[0.0, 0.0]])
}

fn posinormal_remark() -> ComplexMatrix {
    m(&[&[1.0, 1.0], &[0.0, -1.0]])
}

#[test]
fn class_ids_round_trip() {
    for c in ClassId::ALL {
        assert_eq!(c.as_str().parse::<ClassId>().unwrap(), c);
    }
    assert!(matches!("cheese".parse::<ClassId>(), Err(Error::UnknownClassId(_))));
}

#[test]
fn self_adjoint_examples() {
    let c = cfg();
    assert!(is_self_adjoint(&m(&[&[1.0, 0.0], &[0.0, 2.0]]), &c).unwrap().member);
    assert!(!is_self_adjoint(&nilpotent(), &c).unwrap().member);
    let u = crate::linalg::polar_decompose(&ex_normaloid(), &c).unwrap().u;
    assert!(is_self_adjoint(&u, &c).unwrap().member);
}

#[test]
fn normal_examples() {
    let c = cfg();
    assert!(is_normal(&generators::gen_unitary(4, 3).unwrap(), &c).unwrap().member);
    assert!(!is_normal(&ex_normaloid(), &c).unwrap().member);
    let v = is_normal(&posinormal_remark(), &c).unwrap();
    assert!(!v.member);
    // T*T - TT* = [[-1,2],[2,1]] has spectral norm sqrt(5); ‖T‖² = (3+sqrt5)/2
    let expected = -5f64.sqrt() / ((3.0 + 5f64.sqrt()) / 2.0);
    assert!((v.margin - expected).abs() < 1e-12);
}

#[test]
fn elementary_classes() {
    let c = cfg();
    let i = ComplexMatrix::identity(3);
    for v in [
        is_positive(&i, &c),
        is_unitary(&i, &c),
        is_orthogonal_projection(&i, &c),
        is_isometry(&i, &c),
    ] {
        assert!(v.unwrap().member);
    }
    let d = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
    assert!(is_orthogonal_projection(&d, &c).unwrap().member);
    assert!(!is_unitary(&d, &c).unwrap().member);
    let g = &ex_v().adjoint() * &ex_v();
    assert!(is_orthogonal_projection(&g, &c).unwrap().member);
    let neg = m(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let v = is_positive(&neg, &c).unwrap();
    assert!(!v.member);
    assert!(v.witness.is_some());
}

#[test]
fn partial_isometry_examples() {
    let c = cfg();
    assert!(is_partial_isometry(&ex_v(), &c).unwrap().member);
    let remark = m(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.5], &[0.0, 0.0, 0.0]]);
    assert!(!is_partial_isometry(&remark, &c).unwrap().member);
    assert!(is_partial_isometry(&ComplexMatrix::zeros(3), &c).unwrap().member);
}

#[test]
fn quasinormal_examples() {
    let c = cfg();
    assert!(is_quasinormal(&generators::gen_normal(4, 1).unwrap(), &c).unwrap().member);
    assert!(!is_quasinormal(&ex_v(), &c).unwrap().member);
    // isometry ⊕ 0 with a non-unitary isometry part is impossible in finite
    // dimension, so use a unitary block
    let block = generators::gen_unitary(2, 5).unwrap().direct_sum(&ComplexMatrix::zeros(2));
    assert!(is_quasinormal(&block, &c).unwrap().member);
}

#[test]
fn hyponormal_examples() {
    let c = cfg();
    assert!(is_hyponormal(&generators::gen_normal(3, 2).unwrap(), &c).unwrap().member);
    let v = is_hyponormal(&ex_normaloid(), &c).unwrap();
    assert!(!v.member);
    // T*T - TT* = diag(0,-3,3), normalized by ‖T‖² = 4
    assert!((v.margin + 0.75).abs() < 1e-12);
    // column shift: T*T - TT* = diag(1,0,0,-1)
    let mut s = ComplexMatrix::zeros(4).into_inner();
    for i in 0..3 {
        s[(i + 1, i)] = 1.0.into();
    }
    let shift = ComplexMatrix::new(s).unwrap();
    let v = is_hyponormal(&shift, &c).unwrap();
    assert!(!v.member);
    assert!((v.margin + 1.0).abs() < 1e-12);
}

#[test]
fn p_hyponormal_examples() {
    let c = cfg();
    let normal = generators::gen_normal(3, 8).unwrap();
    for p in [0.25, 0.5, 1.0] {
        assert!(is_p_hyponormal(&normal, p, &c).unwrap().member);
    }
    assert!(is_p_hyponormal(&normal, 1.5, &c).is_err());
    let t = ex_normaloid();
    assert_eq!(
        is_p_hyponormal(&t, 1.0, &c).unwrap().member,
        is_hyponormal(&t, &c).unwrap().member
    );
}

#[test]
fn p_hyponormal_agrees_with_sampled_quadratic_form() {
    let c = cfg();
    for seed in 0..10 {
        let t = generators::gen_random(2, seed).unwrap();
        let svd = SingularSystem::new(&t, &c).unwrap();
        let d = &svd.modulus_power(1.0) - &svd.adjoint_modulus_power(1.0);
        let min = crate::pencil::qmc::SphereSequence::new(2, seed)
            .take(20_000)
            .map(|x| d.quadratic_form(&x))
            .fold(f64::INFINITY, f64::min);
        let v = is_p_hyponormal(&t, 0.5, &c).unwrap();
        assert_eq!(v.member, min >= -1e-9 * svd.norm());
    }
}

#[test]
fn paranormal_family_rejects_ex_normaloid() {
    let c = cfg();
    let t = ex_normaloid();
    assert!(!is_class_a(&t, &c).unwrap().member);
    assert!(!is_paranormal(&t, &c).unwrap().member);
    let k1 = is_k_paranormal(&t, 1, &c).unwrap();
    assert!(!k1.member);
    assert!(k1.witness.as_ref().unwrap().vector.is_some());
    assert!(!is_absolute_k_paranormal(&t, 1.0, &c).unwrap().member);
    assert!(!is_absolute_pr_paranormal(&t, 1.0, 1.0, &c).unwrap().member);
}

#[test]
fn first_order_variants_coincide_with_paranormal() {
    let c = cfg();
    for seed in 0..5 {
        let t = generators::gen_random(3, seed).unwrap();
        let para = is_paranormal(&t, &c).unwrap();
        let k1 = is_k_paranormal(&t, 1, &c).unwrap();
        let a1 = is_absolute_k_paranormal(&t, 1.0, &c).unwrap();
        assert_eq!(para.member, k1.member);
        assert_eq!(para.member, a1.member);
        assert!((para.margin - k1.margin).abs() < 1e-6);
        assert!((para.margin - a1.margin).abs() < 1e-6);
    }
}

#[test]
fn normal_matrices_are_in_every_inequality_class() {
    let c = cfg();
    let t = generators::gen_normal(4, 11).unwrap();
    assert!(is_class_a(&t, &c).unwrap().member);
    assert!(is_paranormal(&t, &c).unwrap().member);
    for k in [0, 1, 2, 3] {
        assert!(is_k_paranormal(&t, k, &c).unwrap().member);
    }
    for k in [0.5, 1.0, 2.5] {
        assert!(is_absolute_k_paranormal(&t, k, &c).unwrap().member);
    }
    let qpi = generators::gen_quasinormal_partial_isometry(4, 2, 3).unwrap();
    assert!(is_class_a(&qpi, &c).unwrap().member);
}

#[test]
fn normaloid_examples() {
    let c = cfg();
    assert!(is_normaloid(&ex_normaloid(), &c).unwrap().member);
    let v = is_normaloid(&nilpotent(), &c).unwrap();
    assert!(!v.member);
    assert!((v.margin + 1.0).abs() < 1e-12);
    assert!(is_normaloid(&ex_v(), &c).unwrap().member);
}

#[test]
fn binormal_examples() {
    let c = cfg();
    assert!(is_binormal(&ex_normaloid(), &c).unwrap().member);
    assert!(is_binormal(&nilpotent(), &c).unwrap().member);
    let t = generators::gen_random(3, 4).unwrap();
    let v = is_binormal(&t, &c).unwrap();
    let direct = norm2(&(&t.adjoint() * &t).commutator(&(&t * &t.adjoint())));
    let norm = operator_norm(&t).unwrap();
    assert!(!v.member);
    assert!((v.margin + direct / norm.powi(4)).abs() < 1e-12);
}

#[test]
fn posinormal_examples() {
    let c = cfg();
    let v = is_posinormal(&posinormal_remark(), &c).unwrap();
    assert!(v.member);
    assert!(v.lambda_min.unwrap().is_finite());
    let v = is_posinormal(&nilpotent(), &c).unwrap();
    assert!(!v.member);
    assert!(v.witness.is_some());
    let u = generators::gen_unitary(3, 1).unwrap();
    assert!((is_posinormal(&u, &c).unwrap().lambda_min.unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn posinormal_constant_is_tight() {
    let c = cfg();
    for seed in 0..10 {
        let t = generators::gen_posinormal(3, seed).unwrap();
        let lambda = is_posinormal(&t, &c).unwrap().lambda_min.unwrap();
        let g = &t.adjoint() * &t;
        let h = &t * &t.adjoint();
        let gap = |l: f64| {
            let d = (&g.scale(l) - &h).hermitian_part();
            hermitian_eig_unchecked(&d).unwrap().min()
        };
        assert!(gap(lambda) >= -1e-9 * lambda);
        assert!(gap(lambda * (1.0 - 1e-6)) < 0.0);
    }
}

#[test]
fn subnormal_is_normal_with_note() {
    let c = cfg();
    let v = is_subnormal(&ex_normaloid(), &c).unwrap();
    assert_eq!(v.class_id, ClassId::Subnormal);
    assert!(!v.member);
    assert!(v.note.is_some());
}

#[test]
fn ascent_examples() {
    let c = cfg();
    assert_eq!(ascent(&generators::gen_random(4, 0).unwrap(), &c).unwrap(), 1);
    assert_eq!(ascent(&nilpotent(), &c).unwrap(), 2);
    assert_eq!(ascent(&ex_v(), &c).unwrap(), 2);
    assert_eq!(ascent(&ComplexMatrix::zeros(3), &c).unwrap(), 1);
}

#[test]
fn classify_identity_and_ex_normaloid() {
    let c = cfg();
    let opts = ClassifyOptions::default();
    let report = classify(&ComplexMatrix::identity(3), &opts, &c).unwrap();
    assert!(report.verdicts.iter().all(|v| v.member), "{report:#?}");
    assert!(report.chain_consistent);

    let report = classify(&ex_normaloid(), &opts, &c).unwrap();
    assert!(report.member(ClassId::Binormal));
    assert!(report.member(ClassId::Normaloid));
    assert!(report.member(ClassId::Posinormal));
    assert!(!report.member(ClassId::Normal));
    for id in [
        ClassId::Hyponormal,
        ClassId::ClassA,
        ClassId::Paranormal,
        ClassId::KParanormal,
        ClassId::AbsoluteKParanormal,
        ClassId::AbsolutePrParanormal,
    ] {
        assert!(report.verdicts_of(id).all(|v| !v.member), "{id}");
    }
    assert!(report.chain_consistent);
    assert!((report.norm - 2.0).abs() < 1e-12);
    assert!((report.spectral_radius - 2.0).abs() < 1e-12);
}

#[test]
fn classify_random_normal_is_everything_scale_free() {
    let c = cfg();
    let t = generators::gen_normal(3, 9).unwrap();
    let report = classify(&t, &ClassifyOptions::default(), &c).unwrap();
    for v in &report.verdicts {
        if v.class_id.scale_invariant() && v.class_id != ClassId::SelfAdjoint && v.class_id != ClassId::Positive {
            assert!(v.member, "{:?}", v);
        }
    }
    assert!(report.chain_consistent);
}

#[test]
fn classify_rejects_empty_lists() {
    let opts = ClassifyOptions { p_list: vec![], ..ClassifyOptions::default() };
    assert!(classify(&ex_v(), &opts, &cfg()).is_err());
}

#[test]
fn report_serializes_with_stable_keys() {
    let report = classify(&ex_normaloid(), &ClassifyOptions::default(), &cfg()).unwrap();
    let a = serde_json::to_string(&report).unwrap();
    let b = serde_json::to_string(&report).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["verdicts"][0]["class_id"], "self_adjoint");
    assert!(a.find("\"dimension\"").unwrap() < a.find("\"verdicts\"").unwrap());
}
