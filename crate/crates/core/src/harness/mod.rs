//! Property suites that exercise each theorem on generated matrices and on
//! the fixture registry.
//!
//! Implications whose antecedents are rare among dense random matrices are
//! tested constructively: every suite mixes generators that land inside the
//! antecedent class with generators that land outside it. Trials run in
//! parallel; results are aggregated in trial order, so a result depends only
//! on `(theorem, trials, seed, cfg)`.

mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::classes::ClassVerdict;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::generators::GENERATOR_NAME;
use crate::linalg::io::MatrixJson;
use crate::linalg::ComplexMatrix;
use crate::pencil::PencilCertificate;

/// Skipped fractions at or above this raise the tolerance alarm.
pub const SKIP_ALARM_FRACTION: f64 = 0.05;

macro_rules! theorem_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Identifier of a property suite.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum TheoremId {
            $($variant),*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $name),*
                }
            }
        }
    };
}

theorem_ids! {
    SelfAdjointChar => "SELF_ADJOINT_CHAR",
    TwoByTwoNormaloid => "TWO_BY_TWO_NORMALOID",
    ScalarRoot => "SCALAR_ROOT",
    NthRootNormal => "NTH_ROOT_NORMAL",
    BinormalHyponormal => "BINORMAL_HYPONORMAL",
    PowerInequality => "POWER_INEQUALITY",
    MixedAdjointPower => "MIXED_ADJOINT_POWER",
    FiniteDimCollapse => "FINITE_DIM_COLLAPSE",
    PartialIsometryChar => "PARTIAL_ISOMETRY_CHAR",
    AscentOne => "ASCENT_ONE",
    RootPartialIsometry => "ROOT_PARTIAL_ISOMETRY",
    Monotonicity => "MONOTONICITY",
    FundamentalIdentity => "FUNDAMENTAL_IDENTITY",
    TransEquiv => "TRANS_EQUIV",
    PolarQ => "POLAR_Q",
    ChainConsistency => "CHAIN_CONSISTENCY",
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheoremId(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Replay data for the first failing trial or fixture check.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    /// Trial index, or `None` for a fixture check.
    pub trial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    pub matrix: MatrixJson,
    pub parameters: BTreeMap<String, f64>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub theorem_id: TheoremId,
    pub trials: usize,
    /// Trials whose antecedent held and whose conclusion was checked.
    pub evaluated: usize,
    /// Evaluated trials that confirmed the contrapositive: antecedent and
    /// conclusion both clearly false.
    pub contrapositive: usize,
    /// Trials inside the marginal band, excluded from the verdict.
    pub skipped: usize,
    pub failures: usize,
    pub fixture_checks: usize,
    /// Smallest conclusion margin over evaluated trials.
    pub worst_margin: Option<f64>,
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
    pub generator: String,
    pub tolerance_alarm: bool,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A yes/no decision with its signed margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Decision {
    pub member: bool,
    pub margin: f64,
    pub marginal: bool,
}

impl Decision {
    /// Residual of an identity that should vanish; never marginal.
    pub fn residual(residual: f64, tol: f64) -> Self {
        Self { member: residual <= tol, margin: -residual, marginal: false }
    }

    /// An exact (combinatorial) decision.
    pub fn exact(member: bool) -> Self {
        Self { member, margin: if member { 0.0 } else { -1.0 }, marginal: false }
    }

    /// The complementary decision.
    pub fn negate(self) -> Self {
        Self { member: !self.member, margin: -self.margin, marginal: self.marginal }
    }

    /// A clear non-member on either side settles the conjunction, whatever
    /// the other side's band status.
    pub fn and(self, other: Decision) -> Self {
        let settled = self.clearly(false) || other.clearly(false);
        Self {
            member: self.member && other.member,
            margin: self.margin.min(other.margin),
            marginal: !settled && (self.marginal || other.marginal),
        }
    }

    fn clearly(&self, member: bool) -> bool {
        !self.marginal && self.member == member
    }
}

impl From<&ClassVerdict> for Decision {
    fn from(v: &ClassVerdict) -> Self {
        Self { member: v.member, margin: v.margin, marginal: v.marginal }
    }
}

impl From<ClassVerdict> for Decision {
    fn from(v: ClassVerdict) -> Self {
        Decision::from(&v)
    }
}

impl From<&PencilCertificate> for Decision {
    fn from(c: &PencilCertificate) -> Self {
        Self { member: c.decision, margin: c.margin, marginal: c.marginal }
    }
}

impl From<PencilCertificate> for Decision {
    fn from(c: PencilCertificate) -> Self {
        Decision::from(&c)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Failure {
    pub margin: f64,
    pub matrix: ComplexMatrix,
    pub parameters: BTreeMap<String, f64>,
    pub detail: String,
}

impl Failure {
    pub fn new(matrix: &ComplexMatrix, parameters: &[(&str, f64)], detail: impl Into<String>) -> Self {
        Self {
            margin: f64::NAN,
            matrix: matrix.clone(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    /// Antecedent false: nothing to check.
    Vacuous,
    Held(f64),
    /// Antecedent and conclusion both clearly false.
    Contrapositive(f64),
    Skipped,
    Failed(Box<Failure>),
}

impl Outcome {
    /// Checks `decision == want`.
    pub fn expect(decision: Decision, want: bool, fail: impl FnOnce() -> Failure) -> Self {
        if decision.marginal {
            Outcome::Skipped
        } else if decision.member == want {
            Outcome::Held(decision.margin)
        } else {
            let mut f = fail();
            f.margin = decision.margin;
            Outcome::Failed(Box::new(f))
        }
    }

    /// Checks `antecedent ⟹ conclusion`. A trial whose antecedent clearly
    /// fails still counts when the conclusion clearly fails too: it then
    /// confirms the contrapositive.
    pub fn implies(
        antecedent: Decision,
        conclusion: impl FnOnce() -> Result<Decision>,
        fail: impl FnOnce() -> Failure,
    ) -> Result<Self> {
        if antecedent.marginal {
            return Ok(Outcome::Skipped);
        }
        let conclusion = conclusion()?;
        if antecedent.member {
            return Ok(Outcome::expect(conclusion, true, fail));
        }
        Ok(if conclusion.clearly(false) {
            Outcome::Contrapositive(-antecedent.margin)
        } else {
            Outcome::Vacuous
        })
    }

    /// Checks `a ⟺ b`.
    pub fn equivalent(a: Decision, b: Decision, fail: impl FnOnce() -> Failure) -> Self {
        if a.marginal || b.marginal {
            Outcome::Skipped
        } else if a.member == b.member {
            Outcome::Held(b.margin)
        } else {
            let mut f = fail();
            f.margin = b.margin;
            Outcome::Failed(Box::new(f))
        }
    }

    /// Folds several checks of one trial: any failure wins, then any skip,
    /// then a direct check over a contrapositive one.
    pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Self {
        let min = |acc: Option<f64>, m: f64| Some(acc.map_or(m, |h: f64| h.min(m)));
        let mut held: Option<f64> = None;
        let mut contra: Option<f64> = None;
        let mut skipped = false;
        for o in outcomes {
            match o {
                Outcome::Failed(_) => return o,
                Outcome::Skipped => skipped = true,
                Outcome::Held(m) => held = min(held, m),
                Outcome::Contrapositive(m) => contra = min(contra, m),
                Outcome::Vacuous => {}
            }
        }
        match (skipped, held, contra) {
            (true, _, _) => Outcome::Skipped,
            (_, Some(h), c) => Outcome::Held(c.map_or(h, |c| h.min(c))),
            (_, None, Some(c)) => Outcome::Contrapositive(c),
            _ => Outcome::Vacuous,
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for one trial, independent of every other trial and suite.
pub(crate) fn trial_rng(seed: u64, theorem: TheoremId, index: usize) -> ChaCha8Rng {
    let suite = TheoremId::ALL.iter().position(|&t| t == theorem).unwrap_or(0) as u64;
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ (suite << 48)) ^ index as u64))
}

fn counterexample(f: &Failure, trial: Option<usize>, fixture: Option<String>) -> Counterexample {
    Counterexample {
        trial,
        fixture,
        matrix: MatrixJson::from_matrix(&f.matrix),
        parameters: f.parameters.clone(),
        detail: f.detail.clone(),
    }
}

/// Runs one suite: `trials` generated cases plus the suite's fixture checks.
pub fn run_suite(
    theorem: TheoremId,
    trials: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<PropertyResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    cfg.validate()?;
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| suites::trial(theorem, i, &mut trial_rng(seed, theorem, i), cfg))
        .collect::<Result<_>>()?;
    let fixtures = suites::fixture_checks(theorem, cfg)?;

    let mut result = PropertyResult {
        theorem_id: theorem,
        trials,
        evaluated: 0,
        contrapositive: 0,
        skipped: 0,
        failures: 0,
        fixture_checks: fixtures.len(),
        worst_margin: None,
        counterexample: None,
        seed,
        generator: GENERATOR_NAME.to_string(),
        tolerance_alarm: false,
    };
    let note = |margin: f64, result: &mut PropertyResult| {
        if margin.is_finite() {
            result.worst_margin = Some(result.worst_margin.map_or(margin, |w| w.min(margin)));
        }
    };
    for (i, o) in outcomes.iter().enumerate() {
        match o {
            Outcome::Vacuous => {}
            Outcome::Skipped => result.skipped += 1,
            Outcome::Held(m) => {
                result.evaluated += 1;
                note(*m, &mut result);
            }
            Outcome::Contrapositive(m) => {
                result.evaluated += 1;
                result.contrapositive += 1;
                note(*m, &mut result);
            }
            Outcome::Failed(f) => {
                result.evaluated += 1;
                result.failures += 1;
                note(f.margin, &mut result);
                if result.counterexample.is_none() {
                    result.counterexample = Some(counterexample(f, Some(i), None));
                }
            }
        }
    }
    for (name, o) in &fixtures {
        if let Outcome::Failed(f) = o {
            result.failures += 1;
            if result.counterexample.is_none() {
                result.counterexample = Some(counterexample(f, None, Some(name.clone())));
            }
        }
    }
    result.tolerance_alarm = result.skipped as f64 >= SKIP_ALARM_FRACTION * trials as f64;
    Ok(result)
}

/// Runs every suite in a fixed order.
pub fn run_all(trials: usize, seed: u64, cfg: &ToleranceConfig) -> Result<Vec<PropertyResult>> {
    TheoremId::ALL
        .iter()
        .map(|&t| run_suite(t, trials, seed, cfg))
        .collect()
}

#[cfg(test)]
mod tests;
