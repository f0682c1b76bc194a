use super::*;

#[test]
fn theorem_ids_round_trip() {
    for &t in TheoremId::ALL {
        assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
    }
    assert!(matches!("BOGUS".parse::<TheoremId>(), Err(Error::UnknownTheoremId(_))));
}

#[test]
fn zero_trials_rejected() {
    assert!(run_suite(TheoremId::PolarQ, 0, 1, &ToleranceConfig::default()).is_err());
}

#[test]
fn trial_streams_are_independent() {
    use rand::Rng;
    let a: u64 = trial_rng(1, TheoremId::PolarQ, 0).random();
    let b: u64 = trial_rng(1, TheoremId::PolarQ, 1).random();
    let c: u64 = trial_rng(1, TheoremId::TransEquiv, 0).random();
    let d: u64 = trial_rng(2, TheoremId::PolarQ, 0).random();
    assert!(a != b && a != c && a != d);
    assert_eq!(a, trial_rng(1, TheoremId::PolarQ, 0).random::<u64>());
}

#[test]
fn outcome_folding() {
    let held = Outcome::Held(-1e-12);
    assert!(matches!(Outcome::all([Outcome::Vacuous, held.clone()]), Outcome::Held(_)));
    assert!(matches!(Outcome::all([held.clone(), Outcome::Skipped]), Outcome::Skipped));
    assert!(matches!(Outcome::all([Outcome::Vacuous]), Outcome::Vacuous));
    let fail = Outcome::expect(Decision::exact(false), true, || {
        Failure::new(&ComplexMatrix::identity(1), &[], "x")
    });
    assert!(matches!(Outcome::all([Outcome::Skipped, fail]), Outcome::Failed(_)));
}

#[test]
fn marginal_antecedent_is_skipped() {
    let marginal = Decision { member: false, margin: -2e-9, marginal: true };
    let o = Outcome::implies(marginal, || Ok(Decision::exact(false)), || unreachable!()).unwrap();
    assert!(matches!(o, Outcome::Skipped));
}

#[test]
fn implication_counts_the_contrapositive() {
    let no = || Decision::exact(false);
    let yes = || Decision::exact(true);
    let o = Outcome::implies(no(), || Ok(no()), || unreachable!()).unwrap();
    assert!(matches!(o, Outcome::Contrapositive(_)));
    let o = Outcome::implies(no(), || Ok(yes()), || unreachable!()).unwrap();
    assert!(matches!(o, Outcome::Vacuous));
    let fail = || Failure::new(&ComplexMatrix::identity(1), &[], "x");
    let o = Outcome::implies(yes(), || Ok(no()), fail).unwrap();
    assert!(matches!(o, Outcome::Failed(_)));
    // a clearly false side settles a conjunction with a marginal one
    let marginal = Decision { member: true, margin: -2e-9, marginal: true };
    assert!(!marginal.and(no()).marginal);
    assert!(marginal.and(yes()).marginal);
    assert!(matches!(
        Outcome::all([Outcome::Contrapositive(0.5), Outcome::Held(0.1)]),
        Outcome::Held(m) if m == 0.1
    ));
}

#[test]
fn small_suites_pass_and_are_deterministic() {
    let cfg = ToleranceConfig::default();
    for &t in TheoremId::ALL {
        let a = run_suite(t, 12, 5, &cfg).unwrap();
        assert!(a.passed(), "{}: {:?}", t, a.counterexample);
        assert!(a.fixture_checks > 0, "{t} has no fixture check");
        let b = run_suite(t, 12, 5, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
