//! One trial body per suite, plus the fixture checks each suite runs once.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Decision, Failure, Outcome, TheoremId};
use crate::classes::{self, ascent, classify, ClassifyOptions};
use crate::config::ToleranceConfig;
use crate::error::Result;
use crate::fixtures::fixture;
use crate::generators::{self as gen, complex_gaussian, random_with, unitary_with};
use crate::linalg::{
    norm2, operator_norm, polar_decompose, rank_scaled, ComplexMatrix, SingularSystem, C64,
};
use crate::pencil::{abs_pr_inequality_value, binormal_scalar_check, check_abs_pr};
use crate::transforms;

/// `(p, r)` pairs tested by the pencil suites.
pub(crate) const PR_GRID: [(f64, f64); 9] = [
    (0.5, 0.5),
    (0.5, 1.0),
    (0.5, 2.0),
    (1.0, 0.5),
    (1.0, 1.0),
    (1.0, 2.0),
    (2.0, 0.5),
    (2.0, 1.0),
    (2.0, 2.0),
];
const ALPHAS: [f64; 5] = [0.3, 0.5, 1.0, 2.0, 3.7];
const TRANSFORM_S: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
const POLAR_Q: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
/// Bound on the relative residual of identities that hold exactly.
pub(crate) const IDENTITY_TOL: f64 = 1e-8;
/// Minimum violation a fixture witness must show, in normalized units.
pub(crate) const WITNESS_VIOLATION: f64 = 1e-6;
/// Size of the off-class perturbation used to leave a class.
const PERTURBATION: f64 = 1e-3;

pub(super) fn trial(
    theorem: TheoremId,
    index: usize,
    rng: &mut ChaCha8Rng,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    match theorem {
        TheoremId::SelfAdjointChar => self_adjoint_char(index, rng, cfg),
        TheoremId::TwoByTwoNormaloid => two_by_two(index, rng, cfg),
        TheoremId::ScalarRoot => scalar_root(index, rng, cfg),
        TheoremId::NthRootNormal => nth_root_normal(index, rng, cfg),
        TheoremId::BinormalHyponormal => binormal_hyponormal(index, rng, cfg),
        TheoremId::PowerInequality => power_inequality(index, rng, cfg),
        TheoremId::MixedAdjointPower => mixed_adjoint_power(index, rng, cfg),
        TheoremId::FiniteDimCollapse => finite_dim_collapse(index, rng, cfg),
        TheoremId::PartialIsometryChar => partial_isometry_char(index, rng, cfg),
        TheoremId::AscentOne => ascent_one(index, rng, cfg),
        TheoremId::RootPartialIsometry => root_partial_isometry(index, rng, cfg),
        TheoremId::Monotonicity => monotonicity(index, rng, cfg),
        TheoremId::FundamentalIdentity => fundamental_identity(index, rng, cfg),
        TheoremId::TransEquiv => trans_equiv(index, rng, cfg),
        TheoremId::PolarQ => polar_q(index, rng, cfg),
        TheoremId::ChainConsistency => chain_consistency(index, rng, cfg),
    }
}

fn dim(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

fn seed(rng: &mut ChaCha8Rng) -> u64 {
    rng.random()
}

fn pr(index: usize) -> (f64, f64) {
    PR_GRID[index % PR_GRID.len()]
}

fn abs_pr(t: &ComplexMatrix, p: f64, r: f64, cfg: &ToleranceConfig) -> Result<Decision> {
    Ok(check_abs_pr(t, p, r, cfg)?.into())
}

fn perturbed(t: &ComplexMatrix, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let e = random_with(t.dim(), rng);
    let scale = PERTURBATION * operator_norm(t).unwrap_or(1.0).max(1.0) / operator_norm(&e).unwrap_or(1.0);
    t + &e.scale(scale)
}

/// `S D S⁻¹` for a well-conditioned random `S`.
fn similar(d: &ComplexMatrix, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let n = d.dim();
    loop {
        let g = random_with(n, rng).scale(0.5 / (n as f64).sqrt());
        let s = g.shift(1.0);
        if let Some(inv) = s.inner().clone().try_inverse() {
            let inv = ComplexMatrix::new(inv).expect("finite inverse");
            if operator_norm(&inv).unwrap_or(f64::INFINITY) < 10.0 {
                return &(&s * d) * &inv;
            }
        }
    }
}

fn scalar_power_residual(tm: &ComplexMatrix, scale: f64) -> (f64, C64) {
    let n = tm.dim();
    let c = tm.trace() / n as f64;
    let residual = norm2(&(tm - &ComplexMatrix::identity(n).scale_complex(c)));
    (residual / scale.max(crate::config::ABS_FLOOR), c)
}

fn self_adjoint_polar(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Decision> {
    let u = polar_decompose(t, cfg)?.u;
    Ok(classes::is_self_adjoint(&u, cfg)?.into())
}

/// Random Hermitian unitary `W diag(±1) W*` and the unitary `W`.
fn symmetry(n: usize, rng: &mut ChaCha8Rng) -> (ComplexMatrix, ComplexMatrix) {
    let w = unitary_with(n, rng);
    let signs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let s = &(&w * &ComplexMatrix::from_real_diagonal(&signs)) * &w.adjoint();
    (s, w)
}

fn self_adjoint_char(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let (p, r) = pr(index);
    let params = [("p", p), ("r", r)];
    let t = match index % 3 {
        0 => gen::gen_hermitian(n, seed(rng))?,
        1 => {
            // commuting factors: S P is self-adjoint
            let (s, w) = symmetry(n, rng);
            let d: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
            &s * &(&(&w * &ComplexMatrix::from_real_diagonal(&d)) * &w.adjoint())
        }
        _ => {
            // self-adjoint polar factor over a generic positive part
            let (s, _) = symmetry(n, rng);
            &s * &gen::gen_psd(n, seed(rng))?
        }
    };
    let sa: Decision = classes::is_self_adjoint(&t, cfg)?.into();
    let ante = abs_pr(&t, p, r, cfg)?.and(self_adjoint_polar(&t, cfg)?);
    let forward = Outcome::implies(ante, || Ok(sa), || {
        Failure::new(&t, &params, "abs-(p,r) with self-adjoint U but T not self-adjoint")
    })?;
    let backward = Outcome::implies(sa, || Ok(ante), || {
        Failure::new(&t, &params, "self-adjoint T fails abs-(p,r) or has non-self-adjoint U")
    })?;
    Ok(Outcome::all([forward, backward]))
}

fn two_by_two(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let t = match index % 4 {
        0 => gen::gen_normal(2, seed(rng))?,
        1 => gen::gen_random(2, seed(rng))?,
        2 => {
            let base = gen::gen_normal(2, seed(rng))?;
            perturbed(&base, rng)
        }
        _ => gen::gen_normaloid(2, seed(rng))?,
    };
    let normaloid = classes::is_normaloid(&t, cfg)?.into();
    let normal = classes::is_normal(&t, cfg)?.into();
    Ok(Outcome::equivalent(normaloid, normal, || {
        Failure::new(&t, &[], "2x2 normaloid and normal verdicts disagree")
    }))
}

fn scalar_root(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 4);
    let m = rng.random_range(2..=4u32);
    let roots = |rng: &mut ChaCha8Rng| -> ComplexMatrix {
        let c: f64 = 0.5 + rng.random::<f64>();
        let d: Vec<C64> = (0..n)
            .map(|_| {
                let j = rng.random_range(0..m) as f64;
                C64::from_polar(c, std::f64::consts::TAU * j / m as f64)
            })
            .collect();
        ComplexMatrix::from_diagonal(&d)
    };
    let (t, m) = match index % 4 {
        0 => {
            let w = unitary_with(n, rng);
            (&(&w * &roots(rng)) * &w.adjoint(), m)
        }
        1 => {
            let d = roots(rng);
            (similar(&d, rng), m)
        }
        2 => {
            let mut j = ComplexMatrix::zeros(n).into_inner();
            for row in 0..n {
                for col in row + 1..n {
                    j[(row, col)] = complex_gaussian(rng);
                }
            }
            (similar(&ComplexMatrix::new(j)?, rng), n as u32)
        }
        _ => (ComplexMatrix::zeros(n), m),
    };
    let params = [("n", m as f64)];
    let norm = operator_norm(&t)?;
    let (residual, c) = scalar_power_residual(&t.pow(m), norm.powi(m as i32));
    let scalar = Decision::residual(residual, IDENTITY_TOL);
    let ante = Decision::from(classes::is_normaloid(&t, cfg)?).and(scalar);
    let normal = Outcome::implies(ante, || Ok(classes::is_normal(&t, cfg)?.into()), || {
        Failure::new(&t, &params, "normaloid root of a scalar is not normal")
    })?;
    let unitary_multiple = Outcome::implies(ante, || {
        if c.norm() > IDENTITY_TOL * norm.powi(m as i32) {
            let u = t.scale(1.0 / c.norm().powf(1.0 / m as f64));
            Ok(classes::is_unitary(&u, cfg)?.into())
        } else {
            Ok(Decision::residual(norm, 0.0))
        }
    }, || Failure::new(&t, &params, "normaloid root of a scalar is not a multiple of a unitary"))?;
    Ok(Outcome::all([normal, unitary_multiple]))
}

fn nth_root_normal(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 4);
    let (p, r) = pr(index);
    let t = match index % 3 {
        0 => gen::gen_normal(n, seed(rng))?,
        1 => {
            let d: Vec<C64> = (0..n)
                .map(|_| C64::from_polar(1.0, std::f64::consts::PI * rng.random_range(0..2) as f64))
                .collect();
            similar(&ComplexMatrix::from_diagonal(&d), rng)
        }
        _ => {
            // T^n = 0: a normal power without T being normal
            let mut j = ComplexMatrix::zeros(n).into_inner();
            for row in 0..n {
                for col in row + 1..n {
                    j[(row, col)] = complex_gaussian(rng);
                }
            }
            let w = unitary_with(n, rng);
            &(&w * &ComplexMatrix::new(j)?) * &w.adjoint()
        }
    };
    let params = [("p", p), ("r", r)];
    let base = abs_pr(&t, p, r, cfg)?;
    let mut power_normal = Decision::exact(false);
    let mut power = t.clone();
    for _ in 2..=4 {
        power = &power * &t;
        let d: Decision = classes::is_normal(&power, cfg)?.into();
        if d.member || d.marginal {
            power_normal = d;
            break;
        }
    }
    Outcome::implies(base.and(power_normal), || Ok(classes::is_normal(&t, cfg)?.into()), || {
        Failure::new(&t, &params, "abs-(p,r) with a normal power but T not normal")
    })
}

fn binormal_hyponormal(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let (p, r) = pr(index);
    let t = match index % 4 {
        0 => gen::gen_binormal(n, seed(rng))?,
        1 => {
            let rank = rng.random_range(1..=n);
            gen::gen_binormal_rank(n, rank, seed(rng))?
        }
        2 => gen::gen_normal(n, seed(rng))?,
        _ => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
    };
    let params = [("p", p), ("r", r)];
    let sphere = abs_pr(&t, p, r, cfg)?;
    let scalar = binormal_scalar_check(&t, p, r, cfg)?;
    let scalar = Decision {
        member: scalar.decision,
        margin: scalar.margin,
        marginal: ToleranceConfig::is_marginal(scalar.margin, cfg.psd_tol),
    };
    let agree = Outcome::equivalent(sphere, scalar, || {
        Failure::new(&t, &params, "joint-spectrum criterion disagrees with sphere decision")
    });
    let binormal: Decision = classes::is_binormal(&t, cfg)?.into();
    let hypo = Outcome::implies(binormal.and(sphere), || Ok(classes::is_hyponormal(&t, cfg)?.into()), || {
        Failure::new(&t, &params, "binormal abs-(p,r) matrix is not hyponormal")
    })?;
    Ok(Outcome::all([agree, hypo]))
}

fn power_inequality_outcomes(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Outcome> {
    let binormal: Decision = classes::is_binormal(t, cfg)?.into();
    let posi = classes::is_posinormal(t, cfg)?;
    let mut out = Vec::new();
    if binormal.member && !binormal.marginal && posi.member {
        let lambda = posi.lambda_min.unwrap_or(0.0).max(f64::MIN_POSITIVE);
        for k in 1..=4u32 {
            let check = transforms::power_inequality_check(t, lambda, k, cfg)?;
            out.push(Outcome::expect(
                Decision { member: check.holds, margin: check.margin, marginal: false },
                true,
                || Failure::new(t, &[("lambda", lambda), ("n", k as f64)], "power inequality fails"),
            ));
            let tk = t.pow(k);
            out.push(Outcome::expect(classes::is_posinormal(&tk, cfg)?.into(), true, || {
                Failure::new(t, &[("n", k as f64)], "power of binormal posinormal is not posinormal")
            }));
        }
        for (k, check) in transforms::lambda_power_chain(t, lambda, 4, cfg)?.into_iter().enumerate() {
            out.push(Outcome::expect(
                Decision { member: check.holds, margin: check.margin, marginal: false },
                true,
                || Failure::new(t, &[("lambda", lambda), ("k", (k + 1) as f64)], "λ-power chain fails"),
            ));
        }
    }
    let hypo: Decision = classes::is_hyponormal(t, cfg)?.into();
    if binormal.member && !binormal.marginal && hypo.member && !hypo.marginal {
        for k in 1..=4u32 {
            let tk = t.pow(k);
            out.push(Outcome::expect(classes::is_hyponormal(&tk, cfg)?.into(), true, || {
                Failure::new(t, &[("n", k as f64)], "power of binormal hyponormal is not hyponormal")
            }));
            let check = transforms::power_inequality_check(t, 1.0, k, cfg)?;
            out.push(Outcome::expect(
                Decision { member: check.holds, margin: check.margin, marginal: false },
                true,
                || Failure::new(t, &[("lambda", 1.0), ("n", k as f64)], "power inequality fails"),
            ));
        }
    }
    Ok(Outcome::all(out))
}

fn power_inequality(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let t = match index % 3 {
        0 => gen::gen_binormal(n, seed(rng))?,
        1 => gen::gen_normal(n, seed(rng))?,
        _ => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
    };
    power_inequality_outcomes(&t, cfg)
}

fn mixed_adjoint_power(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 4);
    let (p1, r1) = pr(index);
    let (p2, r2) = PR_GRID[(index / PR_GRID.len()) % PR_GRID.len()];
    let t = match index % 3 {
        0 => gen::gen_binormal(n, seed(rng))?,
        1 => gen::gen_normal(n, seed(rng))?,
        _ => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
    };
    let params = [("p1", p1), ("r1", r1), ("p2", p2), ("r2", r2)];
    let mut ante: Decision = classes::is_binormal(&t, cfg)?.into();
    if ante.member && !ante.marginal {
        ante = ante.and(abs_pr(&t, p1, r1, cfg)?);
    }
    if ante.member && !ante.marginal {
        let adj = t.adjoint();
        let mut power = ComplexMatrix::identity(n);
        let mut some = Decision::exact(false);
        for _ in 1..=3 {
            power = &power * &adj;
            let d = abs_pr(&power, p2, r2, cfg)?;
            if d.member || d.marginal {
                some = d;
                break;
            }
        }
        ante = ante.and(some);
    }
    Outcome::implies(ante, || Ok(classes::is_normal(&t, cfg)?.into()), || {
        Failure::new(&t, &params, "mixed adjoint-power hypotheses hold but T is not normal")
    })
}

fn collapse_candidate(index: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    Ok(match (index / PR_GRID.len()) % 6 {
        0 => gen::gen_normal(n, seed(rng))?,
        1 => gen::gen_random(n, seed(rng))?,
        2 => gen::gen_normaloid(n, seed(rng))?,
        3 => gen::gen_binormal(n, seed(rng))?,
        4 => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
        _ => {
            let base = gen::gen_normal(n, seed(rng))?;
            perturbed(&base, rng)
        }
    })
}

fn finite_dim_collapse(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let (p, r) = pr(index);
    let t = collapse_candidate(index, n, rng)?;
    let decision = abs_pr(&t, p, r, cfg)?;
    let normal = classes::is_normal(&t, cfg)?.into();
    Ok(Outcome::equivalent(decision, normal, || {
        Failure::new(&t, &[("p", p), ("r", r)], "abs-(p,r) decision differs from normality")
    }))
}

fn partial_isometry_char(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let (p, r) = pr(index);
    let v = match index % 3 {
        0 => {
            let rank = rng.random_range(0..=n);
            gen::gen_partial_isometry(n, rank, seed(rng))?
        }
        1 => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
        _ => gen::gen_partial_isometry(n, n - 1, seed(rng))?,
    };
    partial_isometry_conditions(&v, p, r, cfg)
}

/// The four equivalent conditions on a partial isometry must agree.
fn partial_isometry_conditions(v: &ComplexMatrix, p: f64, r: f64, cfg: &ToleranceConfig) -> Result<Outcome> {
    let quasinormal: Decision = classes::is_quasinormal(v, cfg)?.into();
    let abs = abs_pr(v, p, r, cfg)?;
    let v2 = v.pow(2);
    let identity = norm2(&(&(&v2.adjoint() * &v2) - &(&v.adjoint() * v)));
    let identity = Decision {
        member: identity <= IDENTITY_TOL,
        margin: -identity,
        marginal: ToleranceConfig::is_marginal(-identity, IDENTITY_TOL),
    };
    let paranormal: Decision = classes::is_paranormal(v, cfg)?.into();
    let params = [("p", p), ("r", r)];
    let conditions = [quasinormal, abs, identity, paranormal];
    Ok(Outcome::all(conditions.iter().skip(1).map(|&c| {
        Outcome::equivalent(quasinormal, c, || {
            Failure::new(v, &params, format!(
                "partial isometry conditions disagree: quasinormal={}, abs-(p,r)={}, power identity={}, paranormal={}",
                conditions[0].member, conditions[1].member, conditions[2].member, conditions[3].member
            ))
        })
    })))
}

fn ascent_one(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let (p, r) = pr(index);
    let t = match index % 4 {
        0 => {
            let rank = rng.random_range(0..=n);
            gen::gen_normal_rank(n, rank, seed(rng))?
        }
        1 => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
        2 => {
            let rank = rng.random_range(1..n);
            gen::gen_rank_deficient(n, rank, seed(rng))?
        }
        _ => {
            let rank = rng.random_range(1..n);
            gen::gen_partial_isometry(n, rank, seed(rng))?
        }
    };
    let params = [("p", p), ("r", r)];
    let asc = ascent(&t, cfg)?;
    let norm = operator_norm(&t)?;
    let same_rank = rank_scaled(&t, norm, cfg)? == rank_scaled(&t.pow(2), norm * norm, cfg)?;
    let definition = Outcome::equivalent(Decision::exact(asc == 1), Decision::exact(same_rank), || {
        Failure::new(&t, &[], "ascent one disagrees with rank(T²) = rank(T)")
    });
    let theorem = Outcome::implies(abs_pr(&t, p, r, cfg)?, || Ok(Decision::exact(asc == 1)), || {
        Failure::new(&t, &params, format!("abs-(p,r) matrix has ascent {asc}"))
    })?;
    Ok(Outcome::all([definition, theorem]))
}

fn some_power_partial_isometry(t: &ComplexMatrix, max: u32, cfg: &ToleranceConfig) -> Result<Decision> {
    let mut power = t.clone();
    for k in 1..=max {
        if k > 1 {
            power = &power * t;
        }
        let d: Decision = classes::is_partial_isometry(&power, cfg)?.into();
        if d.member || d.marginal {
            return Ok(d);
        }
    }
    Ok(Decision::exact(false))
}

fn quasinormal_partial_isometry(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Decision> {
    let q: Decision = classes::is_quasinormal(t, cfg)?.into();
    Ok(q.and(classes::is_partial_isometry(t, cfg)?.into()))
}

fn root_partial_isometry(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 5);
    let (p, r) = pr(index);
    let t = match index % 4 {
        0 => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
        1 => {
            // unitary block plus a nilpotent block: T² is a partial isometry
            let a = complex_gaussian(rng);
            let nil = ComplexMatrix::from_row_major(2, &[0.0.into(), a, 0.0.into(), 0.0.into()])?;
            let core = if n > 2 {
                unitary_with(n - 2, rng).direct_sum(&nil)
            } else {
                nil
            };
            let w = unitary_with(n, rng);
            &(&w * &core) * &w.adjoint()
        }
        2 => {
            let rank = rng.random_range(0..=n);
            gen::gen_partial_isometry(n, rank, seed(rng))?
        }
        _ => gen::gen_normal(n, seed(rng))?,
    };
    let ante = abs_pr(&t, p, r, cfg)?.and(some_power_partial_isometry(&t, 3, cfg)?);
    Outcome::implies(ante, || quasinormal_partial_isometry(&t, cfg), || {
        Failure::new(&t, &[("p", p), ("r", r)], "abs-(p,r) root of a partial isometry is not a quasinormal partial isometry")
    })
}

fn monotonicity(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 4);
    let (p0, r0) = pr(index);
    let t = match (index / PR_GRID.len()) % 3 {
        0 => gen::gen_normal(n, seed(rng))?,
        1 => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
        _ => gen::gen_random(n, seed(rng))?,
    };
    let base = abs_pr(&t, p0, r0, cfg)?;
    let mut out = vec![Outcome::implies(base, || Ok(classes::is_normaloid(&t, cfg)?.into()), || {
        Failure::new(&t, &[("p", p0), ("r", r0)], "abs-(p,r) matrix is not normaloid")
    })?];
    for &(p, r) in PR_GRID.iter().filter(|&&(p, r)| p >= p0 && r >= r0 && (p, r) != (p0, r0)) {
        out.push(Outcome::implies(base, || abs_pr(&t, p, r, cfg), || {
            Failure::new(&t, &[("p0", p0), ("r0", r0), ("p", p), ("r", r)], "membership lost at larger exponents")
        })?);
    }
    Ok(Outcome::all(out))
}

fn identity_candidate(index: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    let n = dim(rng, 2, 8);
    if index.is_multiple_of(2) {
        gen::gen_random(n, seed(rng))
    } else {
        let rank = rng.random_range(1..n);
        gen::gen_rank_deficient(n, rank, seed(rng))
    }
}

fn fundamental_identity(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let t = identity_candidate(index, rng)?;
    let alpha = ALPHAS[index % ALPHAS.len()];
    let residual = transforms::fundamental_identity_residual(&t, alpha, cfg)?;
    Ok(Outcome::expect(Decision::residual(residual, IDENTITY_TOL), true, || {
        Failure::new(&t, &[("alpha", alpha)], format!("residual {residual:e}"))
    }))
}

fn trans_equiv(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let t = identity_candidate(index, rng)?;
    let s = TRANSFORM_S[index % TRANSFORM_S.len()];
    let out = transforms::generalized_transform(&t, s, cfg)?;
    let mut checks = Vec::new();
    for key in ["trans_equiv", "alternate_form", "gram", "cogram"] {
        let residual = out.residuals[key];
        checks.push(Outcome::expect(Decision::residual(residual, IDENTITY_TOL), true, || {
            Failure::new(&t, &[("s", s)], format!("{key} residual {residual:e}"))
        }));
    }
    // |T|^{2s} = |T*|^{2s} forces normality
    let svd = SingularSystem::new(&t, cfg)?;
    let gap = norm2(&(&svd.modulus_power(2.0 * s) - &svd.adjoint_modulus_power(2.0 * s)))
        / svd.norm().powf(2.0 * s);
    checks.push(Outcome::implies(Decision::residual(gap, IDENTITY_TOL), || {
        Ok(classes::is_normal(&t, cfg)?.into())
    }, || Failure::new(&t, &[("s", s)], "equal transform moduli without normality"))?);
    Ok(Outcome::all(checks))
}

fn polar_q(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let t = identity_candidate(index, rng)?;
    let q = POLAR_Q[index % POLAR_Q.len()];
    let residual = transforms::generalized_transform(&t, q, cfg)?.residuals["polar_q"];
    let polar = polar_decompose(&t, cfg)?;
    let round_trip = norm2(&(&(&polar.u * &polar.p) - &t)) / operator_norm(&t)?;
    Ok(Outcome::all([
        Outcome::expect(Decision::residual(residual, IDENTITY_TOL), true, || {
            Failure::new(&t, &[("q", q)], format!("polar_q residual {residual:e}"))
        }),
        Outcome::expect(Decision::residual(round_trip, 1e-9), true, || {
            Failure::new(&t, &[], format!("polar round trip residual {round_trip:e}"))
        }),
    ]))
}

fn chain_consistency(index: usize, rng: &mut ChaCha8Rng, cfg: &ToleranceConfig) -> Result<Outcome> {
    let n = dim(rng, 2, 4);
    let t = match index % 8 {
        0 => gen::gen_normal(n, seed(rng))?,
        1 => gen::gen_random(n, seed(rng))?,
        2 => gen::gen_normaloid(n, seed(rng))?,
        3 => gen::gen_binormal(n, seed(rng))?,
        4 => {
            let rank = rng.random_range(0..=n);
            gen::gen_quasinormal_partial_isometry(n, rank, seed(rng))?
        }
        5 => gen::gen_psd(n, seed(rng))?,
        6 => {
            let rank = rng.random_range(0..=n);
            gen::gen_partial_isometry(n, rank, seed(rng))?
        }
        _ => gen::gen_hermitian(n, seed(rng))?,
    };
    let report = classify(&t, &ClassifyOptions::default(), cfg)?;
    Ok(Outcome::expect(Decision::exact(report.chain_consistent), true, || {
        let links: Vec<String> = report
            .chain_violations
            .iter()
            .map(|l| format!("{} => {}", l.from, l.to))
            .collect();
        Failure::new(&t, &[], format!("inclusion chain broken: {}", links.join("; ")))
    }))
}

fn named(name: &str) -> crate::fixtures::Fixture {
    fixture(name).unwrap_or_else(|| panic!("fixture `{name}` is bundled"))
}

/// Every tested `(p,r)` fails with a replayable witness of size ≥ 1e-6.
fn fails_abs_pr_everywhere(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Decision> {
    let mut worst = f64::NEG_INFINITY;
    for &(p, r) in &PR_GRID {
        let cert = check_abs_pr(t, p, r, cfg)?;
        let value = match (&cert.decision, &cert.witness_vector) {
            (false, Some(x)) => abs_pr_inequality_value(t, p, r, x, cfg)?,
            _ => f64::INFINITY,
        };
        worst = worst.max(value);
    }
    Ok(Decision { member: worst <= -WITNESS_VIOLATION, margin: -worst, marginal: false })
}

pub(super) fn fixture_checks(theorem: TheoremId, cfg: &ToleranceConfig) -> Result<Vec<(String, Outcome)>> {
    let mut out = Vec::new();
    let mut push = |name: &str, outcome: Outcome| out.push((name.to_string(), outcome));
    let fail = |name: &str, t: &ComplexMatrix, detail: &str| Failure::new(t, &[], format!("{name}: {detail}"));
    match theorem {
        TheoremId::SelfAdjointChar => {
            let f = named("ex_normaloid");
            let t = &f.matrix;
            let checks = Decision::from(classes::is_normaloid(t, cfg)?)
                .and(self_adjoint_polar(t, cfg)?)
                .and(Decision::from(classes::is_self_adjoint(t, cfg)?).negate())
                .and(Decision::from(check_abs_pr(t, 1.0, 1.0, cfg)?).negate());
            push(&f.name, Outcome::expect(checks, true, || {
                fail(&f.name, t, "normaloid with self-adjoint U should not force self-adjointness")
            }));
        }
        TheoremId::TwoByTwoNormaloid => {
            for name in ["nilpotent", "remark_binormal_nilpotent", "remark_posinormal"] {
                let f = named(name);
                let a = classes::is_normaloid(&f.matrix, cfg)?.into();
                let b = classes::is_normal(&f.matrix, cfg)?.into();
                push(name, Outcome::equivalent(a, b, || fail(name, &f.matrix, "verdicts disagree")));
            }
        }
        TheoremId::ScalarRoot => {
            // a nonzero nilpotent is never normaloid
            for name in ["nilpotent", "remark_binormal_nilpotent"] {
                let f = named(name);
                let d = classes::is_normaloid(&f.matrix, cfg)?.into();
                push(name, Outcome::expect(d, false, || fail(name, &f.matrix, "nilpotent reported normaloid")));
            }
        }
        TheoremId::NthRootNormal | TheoremId::MixedAdjointPower => {
            // T² = I is normal while T is not; the abs-(p,r) hypothesis must fail
            let f = named("remark_posinormal");
            let d = fails_abs_pr_everywhere(&f.matrix, cfg)?;
            push(&f.name, Outcome::expect(d, true, || fail(&f.name, &f.matrix, "abs-(p,r) not refuted")));
        }
        TheoremId::BinormalHyponormal => {
            let f = named("binormal_example");
            let t = &f.matrix;
            let d = Decision::from(classes::is_binormal(t, cfg)?)
                .and(classes::is_normaloid(t, cfg)?.into())
                .and(Decision::from(classes::is_hyponormal(t, cfg)?).negate());
            push(&f.name, Outcome::expect(d, true, || {
                fail(&f.name, t, "binormal normaloid example should not be hyponormal")
            }));
        }
        TheoremId::PowerInequality => {
            let f = named("binormal_example");
            push(&f.name, power_inequality_outcomes(&f.matrix, cfg)?);
        }
        TheoremId::FiniteDimCollapse => {
            for name in ["ex_normaloid", "ex_non_quasi_pi", "remark_normaloid_root"] {
                let f = named(name);
                let d = Decision::from(classes::is_normaloid(&f.matrix, cfg)?)
                    .and(fails_abs_pr_everywhere(&f.matrix, cfg)?);
                push(name, Outcome::expect(d, true, || {
                    fail(name, &f.matrix, "normaloid non-normal fixture not refuted with a witness")
                }));
            }
        }
        TheoremId::PartialIsometryChar => {
            let f = named("ex_non_quasi_pi");
            for &(p, r) in &PR_GRID {
                push(&f.name, partial_isometry_conditions(&f.matrix, p, r, cfg)?);
            }
            let e = transforms::embry_power_identity(&f.matrix, 2)?;
            push(&f.name, Outcome::expect(Decision::residual(e, IDENTITY_TOL), false, || {
                fail(&f.name, &f.matrix, "power identity unexpectedly holds")
            }));
        }
        TheoremId::AscentOne => {
            for name in ["nilpotent", "ex_non_quasi_pi"] {
                let f = named(name);
                let asc = ascent(&f.matrix, cfg)?;
                let d = Decision::exact(asc == 2).and(fails_abs_pr_everywhere(&f.matrix, cfg)?);
                push(name, Outcome::expect(d, true, || fail(name, &f.matrix, "expected ascent 2 and abs-(p,r) failure")));
            }
        }
        TheoremId::RootPartialIsometry => {
            for (name, weaker) in [
                ("remark_normaloid_root", classes::ClassId::Normaloid),
                ("remark_binormal_nilpotent", classes::ClassId::Binormal),
                ("remark_posinormal", classes::ClassId::Posinormal),
            ] {
                let f = named(name);
                let t = &f.matrix;
                let weak = classify_one(t, weaker, cfg)?;
                let square_pi: Decision = classes::is_partial_isometry(&t.pow(2), cfg)?.into();
                let conclusion = quasinormal_partial_isometry(t, cfg)?;
                let d = weak
                    .and(square_pi)
                    .and(conclusion.negate())
                    .and(fails_abs_pr_everywhere(t, cfg)?);
                push(name, Outcome::expect(d, true, || {
                    fail(name, t, "counterexample must fail exactly the abs-(p,r) hypothesis")
                }));
            }
        }
        TheoremId::Monotonicity => {
            let f = named("ex_normaloid");
            let d = fails_abs_pr_everywhere(&f.matrix, cfg)?;
            push(&f.name, Outcome::expect(d, true, || fail(&f.name, &f.matrix, "abs-(p,r) not refuted")));
        }
        TheoremId::FundamentalIdentity | TheoremId::TransEquiv | TheoremId::PolarQ => {
            let f = named("ex_normaloid");
            let t = &f.matrix;
            let mut worst: f64 = 0.0;
            for alpha in ALPHAS {
                worst = worst.max(transforms::fundamental_identity_residual(t, alpha, cfg)?);
            }
            for s in TRANSFORM_S {
                let out = transforms::generalized_transform(t, s, cfg)?;
                worst = worst.max(out.residuals.values().copied().fold(0.0, f64::max));
            }
            push(&f.name, Outcome::expect(Decision::residual(worst, IDENTITY_TOL), true, || {
                fail(&f.name, t, "identity residual too large")
            }));
        }
        TheoremId::ChainConsistency => {
            for f in crate::fixtures::fixture_registry() {
                let report = classify(&f.matrix, &ClassifyOptions::default(), cfg)?;
                push(&f.name, Outcome::expect(Decision::exact(report.chain_consistent), true, || {
                    fail(&f.name, &f.matrix, "inclusion chain broken")
                }));
            }
        }
    }
    Ok(out)
}

fn classify_one(t: &ComplexMatrix, class: classes::ClassId, cfg: &ToleranceConfig) -> Result<Decision> {
    use classes::ClassId;
    Ok(match class {
        ClassId::Normaloid => classes::is_normaloid(t, cfg)?.into(),
        ClassId::Binormal => classes::is_binormal(t, cfg)?.into(),
        ClassId::Posinormal => classes::is_posinormal(t, cfg)?.into(),
        other => unreachable!("no weaker-property check for {other}"),
    })
}
