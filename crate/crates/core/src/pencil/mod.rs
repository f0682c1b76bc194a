//! Decision procedures for absolute-(p,r)-paranormality and paranormality.
//!
//! Two routes decide the same inequality:
//!
//! * the λ-pencil `r|T*|^r|T|^{2p}|T*|^r - (p+r)λ^p|T*|^{2r} + pλ^{p+r}I ≥ 0`
//!   scanned over a logarithmic grid, which can only refute;
//! * the scalar reduction on the unit sphere, `a(x) - b(x)^{(p+r)/r} ≥ 0` with
//!   `a(x) = <|T*|^r|T|^{2p}|T*|^r x, x>` and `b(x) = <|T*|^{2r} x, x>`, obtained
//!   by minimizing the pencil over λ for fixed `x` (the minimizer is
//!   `λ* = b(x)^{1/r}`).
//!
//! The sphere route is authoritative. Every grid refutation hands its
//! eigenvector to the sphere optimizer as a starting point, and the pencil value
//! there bounds the sphere objective from above, so a refutation always yields a
//! sphere witness.
//!
//! All computations run on `T/‖T‖`; margins are therefore in units of
//! `‖T‖^{2(p+r)}` and witness λ values are reported in the original scale.

pub mod qmc;
pub mod sphere;

use serde::Serialize;

use crate::config::{ToleranceConfig, ABS_FLOOR};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig_unchecked, operator_norm, CVector, ComplexMatrix, SingularSystem,
};
use qmc::SphereSequence;
use sphere::{SphereMinimum, SphereProblem};

/// `<Bx,x>` below this (in normalized units) makes the power term vanish.
pub const B_FLOOR: f64 = 1e-14;
/// Lower end of the λ bracket relative to `‖T‖^2`.
pub const GRID_LOWER: f64 = 1e-6;
/// Sample count of the built-in dense cross-check for `n ≤ 3`.
const CROSS_CHECK_SAMPLES: usize = 4096;
/// Sample count of the dense fallback after a nonconverged descent.
const FALLBACK_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilMethod {
    LambdaGrid,
    SphereOpt,
    DenseOracle,
}

/// Decision with witness data for one pencil/sphere inequality.
#[derive(Debug, Clone, Serialize)]
pub struct PencilCertificate {
    pub method: PencilMethod,
    pub decision: bool,
    /// λ in the original scale of `T`.
    pub witness_lambda: Option<f64>,
    #[serde(serialize_with = "crate::serde_util::option_vector")]
    pub witness_vector: Option<CVector>,
    /// Normalized minimum of the inequality (negative means violated).
    pub margin: f64,
    pub marginal: bool,
    pub evaluations: usize,
    pub converged: bool,
    pub reduced_confidence: bool,
}

impl PencilCertificate {
    fn trivial(method: PencilMethod) -> Self {
        Self {
            method,
            decision: true,
            witness_lambda: None,
            witness_vector: None,
            margin: 0.0,
            marginal: false,
            evaluations: 0,
            converged: true,
            reduced_confidence: false,
        }
    }
}

fn check_pr(p: f64, r: f64) -> Result<()> {
    if p > 0.0 && r > 0.0 && p.is_finite() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "p and r must be positive, got p={p}, r={r}"
        )))
    }
}

/// `T/‖T‖` and `‖T‖`, or `None` for the zero matrix.
pub(crate) fn normalize(t: &ComplexMatrix) -> Result<Option<(ComplexMatrix, f64)>> {
    let norm = operator_norm(t)?;
    if norm == 0.0 {
        return Ok(None);
    }
    Ok(Some((t.scale(1.0 / norm), norm)))
}

/// The pencil of the λ-characterization, built on `T` as given.
pub fn pencil_matrix(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    lambda: f64,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    check_pr(p, r)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("λ must be positive, got {lambda}")));
    }
    let ops = AbsPrOperators::new(t, p, r, cfg)?;
    Ok(ops.pencil(lambda))
}

/// The Hermitian pieces of the absolute-(p,r) inequality for a fixed `T`.
#[derive(Debug, Clone)]
pub struct AbsPrOperators {
    pub p: f64,
    pub r: f64,
    /// `|T*|^r |T|^{2p} |T*|^r`
    pub a: ComplexMatrix,
    /// `|T*|^{2r}`
    pub b: ComplexMatrix,
    /// Right and left singular vectors, used as structured starting points.
    basis: Vec<CVector>,
}

impl AbsPrOperators {
    pub fn new(t: &ComplexMatrix, p: f64, r: f64, cfg: &ToleranceConfig) -> Result<Self> {
        let svd = SingularSystem::new(t, cfg)?;
        let tr = svd.adjoint_modulus_power(r);
        let a = (&(&tr * &svd.modulus_power(2.0 * p)) * &tr).hermitian_part();
        let b = svd.adjoint_modulus_power(2.0 * r);
        let basis = svd
            .right_vectors()
            .column_iter()
            .chain(svd.left_vectors().column_iter())
            .map(|c| c.into_owned())
            .collect();
        Ok(Self { p, r, a, b, basis })
    }

    /// `r A - (p+r) λ^p B + p λ^{p+r} I`.
    pub fn pencil(&self, lambda: f64) -> ComplexMatrix {
        let (p, r) = (self.p, self.r);
        (&self.a.scale(r) - &self.b.scale((p + r) * lambda.powf(p))).shift(p * lambda.powf(p + r))
    }

    pub fn problem(&self) -> SphereProblem {
        SphereProblem::new(self.a.clone(), self.b.clone(), (self.p + self.r) / self.r, B_FLOOR)
    }
}

/// Evaluates `‖|T|^p|T*|^r x‖^2 - ‖|T*|^r x‖^{2(p+r)/r}` for unit `x/‖x‖`,
/// normalized by `‖T‖^{2(p+r)}`, straight from the defining norms.
pub fn abs_pr_inequality_value(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    x: &CVector,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_pr(p, r)?;
    let Some((tn, _)) = normalize(t)? else {
        return Ok(0.0);
    };
    let svd = SingularSystem::new(&tn, cfg)?;
    let x = x / crate::linalg::C64::new(x.norm(), 0.0);
    let y = svd.adjoint_modulus_power(r).mul_vec(&x);
    let lhs = svd.modulus_power(p).mul_vec(&y).norm_squared();
    let b = y.norm_squared();
    let rhs = if b < B_FLOOR { 0.0 } else { b.powf((p + r) / r) };
    Ok(lhs - rhs)
}

/// Evaluates `‖T^2 x‖^2 - ‖T x‖^4` for unit `x/‖x‖`, normalized by `‖T‖^4`.
pub fn paranormal_inequality_value(t: &ComplexMatrix, x: &CVector) -> Result<f64> {
    let Some((tn, _)) = normalize(t)? else {
        return Ok(0.0);
    };
    let x = x / crate::linalg::C64::new(x.norm(), 0.0);
    let tx = tn.mul_vec(&x);
    let t2x = tn.mul_vec(&tx);
    Ok(t2x.norm_squared() - tx.norm_squared().powi(2))
}

fn log_grid(points: usize) -> impl Iterator<Item = f64> {
    let lo = GRID_LOWER.log10();
    (0..points).map(move |i| {
        if points == 1 {
            1.0
        } else {
            10f64.powf(lo + (0.0 - lo) * i as f64 / (points - 1) as f64)
        }
    })
}

/// Grid scan of `λ ↦ λ_min(pencil(λ))` on normalized λ values.
fn grid_scan(
    pencil: impl Fn(f64) -> ComplexMatrix,
    points: usize,
    cfg: &ToleranceConfig,
) -> Result<PencilCertificate> {
    let mut worst: Option<(f64, f64, CVector)> = None;
    let mut evaluations = 0;
    for lambda in log_grid(points) {
        let eig = hermitian_eig_unchecked(&pencil(lambda))?;
        evaluations += 1;
        if worst.as_ref().is_none_or(|(m, _, _)| eig.min() < *m) {
            worst = Some((eig.min(), lambda, eig.eigenvector(0)));
        }
    }
    let (margin, lambda, vector) = worst.expect("grid has at least one point");
    let decision = margin >= -cfg.psd_tol;
    Ok(PencilCertificate {
        method: PencilMethod::LambdaGrid,
        decision,
        witness_lambda: (!decision).then_some(lambda),
        witness_vector: (!decision).then_some(vector),
        margin,
        marginal: ToleranceConfig::is_marginal(margin, cfg.psd_tol),
        evaluations,
        converged: true,
        reduced_confidence: false,
    })
}

/// Runs the restarted sphere descent and assembles a certificate.
pub(crate) fn sphere_certificate(
    problem: &SphereProblem,
    extra_starts: Vec<CVector>,
    cfg: &ToleranceConfig,
) -> PencilCertificate {
    let n = problem.dim();
    let mut starts: Vec<CVector> = SphereSequence::new(n, cfg.seed)
        .take(cfg.sphere_restarts)
        .collect();
    starts.extend(extra_starts);
    let mut evaluations = 0;
    if n <= 3 {
        let samples: Vec<CVector> = SphereSequence::new(n, cfg.seed ^ 0x5eed)
            .take(CROSS_CHECK_SAMPLES)
            .collect();
        evaluations += samples.len();
        if let Some((_, x)) = problem.sample_min(&samples) {
            starts.push(x);
        }
    }
    let mut best: SphereMinimum = problem.minimize(&starts);
    evaluations += best.evaluations;
    let mut method = PencilMethod::SphereOpt;
    let mut reduced_confidence = false;
    let undecided = best.value > -10.0 * cfg.psd_tol;
    if !best.converged && undecided {
        if n <= 4 {
            let samples: Vec<CVector> = SphereSequence::new(n, cfg.seed ^ 0xfa11)
                .take(FALLBACK_SAMPLES)
                .collect();
            evaluations += samples.len();
            if let Some((_, x)) = problem.sample_min(&samples) {
                let refined = problem.descend(&x);
                evaluations += refined.evaluations;
                if refined.value < best.value {
                    best = refined;
                }
            }
            method = PencilMethod::DenseOracle;
        } else {
            reduced_confidence = true;
        }
    }
    let margin = best.value;
    let decision = margin >= -cfg.psd_tol;
    PencilCertificate {
        method,
        decision,
        witness_lambda: None,
        witness_vector: (!decision).then_some(best.argmin),
        margin,
        marginal: ToleranceConfig::is_marginal(margin, cfg.psd_tol),
        evaluations,
        converged: best.converged,
        reduced_confidence,
    }
}

/// Sphere decision of `<Ax,x> ≥ <Bx,x>^κ` for Hermitian `A`, `B ≥ 0` and `κ ≥ 1`,
/// with caller-supplied extra starting points.
pub fn check_power_pair(
    a: ComplexMatrix,
    b: ComplexMatrix,
    kappa: f64,
    starts: Vec<CVector>,
    cfg: &ToleranceConfig,
) -> Result<PencilCertificate> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent must be >= 1, got {kappa}")));
    }
    let problem = SphereProblem::new(a.hermitian_part(), b.hermitian_part(), kappa, B_FLOOR);
    Ok(sphere_certificate(&problem, starts, cfg))
}

/// Sphere decision of absolute-(p,r)-paranormality.
pub fn check_abs_pr_sphere(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    cfg: &ToleranceConfig,
) -> Result<PencilCertificate> {
    check_pr(p, r)?;
    let Some((tn, _)) = normalize(t)? else {
        return Ok(PencilCertificate::trivial(PencilMethod::SphereOpt));
    };
    let ops = AbsPrOperators::new(&tn, p, r, cfg)?;
    Ok(sphere_with_witness_lambda(&ops, Vec::new(), t, cfg))
}

fn sphere_with_witness_lambda(
    ops: &AbsPrOperators,
    extra: Vec<CVector>,
    t: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> PencilCertificate {
    let mut starts = ops.basis.clone();
    starts.extend(extra);
    let mut cert = sphere_certificate(&ops.problem(), starts, cfg);
    if let Some(x) = &cert.witness_vector {
        // λ* = b(x)^{1/r}, rescaled to the original operator
        let b = ops.b.quadratic_form(x).max(0.0);
        let norm = operator_norm(t).unwrap_or(1.0);
        cert.witness_lambda = Some(b.powf(1.0 / ops.r) * norm * norm);
    }
    cert
}

/// Refutation-only grid scan of the λ-pencil on `[1e-6‖T‖², ‖T‖²]`.
pub fn check_abs_pr_lambda_grid(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    cfg: &ToleranceConfig,
) -> Result<PencilCertificate> {
    check_pr(p, r)?;
    let Some((tn, norm)) = normalize(t)? else {
        return Ok(PencilCertificate::trivial(PencilMethod::LambdaGrid));
    };
    let ops = AbsPrOperators::new(&tn, p, r, cfg)?;
    let mut cert = grid_scan(|l| ops.pencil(l), cfg.grid_points, cfg)?;
    cert.witness_lambda = cert.witness_lambda.map(|l| l * norm * norm);
    Ok(cert)
}

/// Combined decision: the grid refuter runs first and seeds the sphere search.
pub fn check_abs_pr(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    cfg: &ToleranceConfig,
) -> Result<PencilCertificate> {
    check_pr(p, r)?;
    let Some((tn, norm)) = normalize(t)? else {
        return Ok(PencilCertificate::trivial(PencilMethod::SphereOpt));
    };
    let ops = AbsPrOperators::new(&tn, p, r, cfg)?;
    let grid = grid_scan(|l| ops.pencil(l), cfg.grid_points, cfg)?;
    let extra: Vec<CVector> = grid.witness_vector.clone().into_iter().collect();
    let mut cert = sphere_with_witness_lambda(&ops, extra, t, cfg);
    cert.evaluations += grid.evaluations;
    if cert.decision && !grid.decision {
        // unreachable in exact arithmetic; keep the grid refutation
        cert = grid;
        cert.witness_lambda = cert.witness_lambda.map(|l| l * norm * norm);
    }
    Ok(cert)
}

/// Paranormality via Ando's pencil `T*²T² - 2λT*T + λ²I ≥ 0` and its
/// per-vector reduction `‖T²x‖² ≥ ‖Tx‖⁴`.
pub fn check_paranormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<PencilCertificate> {
    let Some((tn, norm)) = normalize(t)? else {
        return Ok(PencilCertificate::trivial(PencilMethod::SphereOpt));
    };
    let gram = &tn.adjoint() * &tn;
    let t2 = &tn * &tn;
    let gram2 = (&t2.adjoint() * &t2).hermitian_part();
    let grid = grid_scan(
        |l| (&gram2 - &gram.scale(2.0 * l)).shift(l * l),
        cfg.grid_points,
        cfg,
    )?;
    let svd = SingularSystem::new(&tn, cfg)?;
    let mut starts: Vec<CVector> = svd.right_vectors().column_iter().map(|c| c.into_owned()).collect();
    starts.extend(grid.witness_vector.clone());
    let problem = SphereProblem::new(gram2, gram.clone(), 2.0, B_FLOOR);
    let mut cert = sphere_certificate(&problem, starts, cfg);
    cert.evaluations += grid.evaluations;
    if let Some(x) = &cert.witness_vector {
        cert.witness_lambda = Some(gram.quadratic_form(x) * norm * norm);
    }
    if cert.decision && !grid.decision {
        cert = grid;
        cert.witness_lambda = cert.witness_lambda.map(|l| l * norm * norm);
    }
    Ok(cert)
}

/// `(λ, λ_min(pencil(λ)))` rows on `[1e-6‖T‖², ‖T‖²]` in the original scale
/// (`[1e-6, 1]` for the zero matrix).
pub fn pencil_scan(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    points: usize,
    cfg: &ToleranceConfig,
) -> Result<Vec<(f64, f64)>> {
    check_pr(p, r)?;
    if points == 0 {
        return Err(Error::InvalidParameter("points must be >= 1".into()));
    }
    let norm = operator_norm(t)?;
    let scale = if norm == 0.0 { 1.0 } else { norm * norm };
    let ops = AbsPrOperators::new(t, p, r, cfg)?;
    log_grid(points)
        .map(|l| {
            let lambda = l * scale;
            let eig = hermitian_eig_unchecked(&ops.pencil(lambda))?;
            Ok((lambda, eig.min()))
        })
        .collect()
}

/// Joint-spectrum decision for binormal `T`.
#[derive(Debug, Clone, Serialize)]
pub struct BinormalScalarCheck {
    pub decision: bool,
    /// `min g^r (f^p - g^p)` over joint eigenpairs, normalized; equals the
    /// exact sphere minimum for binormal `T`.
    pub margin: f64,
    /// Joint eigenvalue pairs `(f, g)` of `(T*T, TT*)`, normalized by `‖T‖²`.
    pub pairs: Vec<(f64, f64)>,
}

/// Simultaneously diagonalizes `T*T` and `TT*` and applies the scalar
/// criterion `f ≥ g` on every joint eigenpair with `g > 0`.
pub fn binormal_scalar_check(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    cfg: &ToleranceConfig,
) -> Result<BinormalScalarCheck> {
    check_pr(p, r)?;
    let Some((tn, _)) = normalize(t)? else {
        return Ok(BinormalScalarCheck {
            decision: true,
            margin: 0.0,
            pairs: vec![(0.0, 0.0); t.dim()],
        });
    };
    let gram = (&tn.adjoint() * &tn).hermitian_part();
    let cogram = (&tn * &tn.adjoint()).hermitian_part();
    let commutator = gram.commutator(&cogram).max_abs();
    if commutator > cfg.eq_rtol * 10.0 {
        return Err(Error::NotBinormal { commutator });
    }
    let joint = joint_eigenvectors(&gram, &cogram)?;
    let tol = cfg.psd_tol;
    let mut pairs = Vec::with_capacity(joint.len());
    let mut decision = true;
    let mut margin = f64::INFINITY;
    for x in &joint {
        let f = gram.quadratic_form(x).max(0.0);
        let g = cogram.quadratic_form(x).max(0.0);
        pairs.push((f, g));
        if g > tol && f < g - tol {
            decision = false;
        }
        let value = if g < B_FLOOR { 0.0 } else { g.powf(r) * (f.powf(p) - g.powf(p)) };
        margin = margin.min(value);
    }
    Ok(BinormalScalarCheck {
        decision,
        margin,
        pairs,
    })
}

/// Orthonormal basis diagonalizing two commuting Hermitian matrices: the first
/// is diagonalized, then the second is diagonalized inside each eigenspace.
fn joint_eigenvectors(first: &ComplexMatrix, second: &ComplexMatrix) -> Result<Vec<CVector>> {
    let eig = hermitian_eig_unchecked(first)?;
    let n = first.dim();
    let scale = eig.max_abs().max(ABS_FLOOR);
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.eigenvalues[end] - eig.eigenvalues[start] <= 1e-8 * scale {
            end += 1;
        }
        let basis = eig.eigenvectors.columns(start, end - start).into_owned();
        let compressed = ComplexMatrix::from_inner(basis.adjoint() * second.inner() * &basis);
        let inner = hermitian_eig_unchecked(&compressed)?;
        for j in 0..(end - start) {
            out.push(&basis * inner.eigenvector(j));
        }
        start = end;
    }
    Ok(out)
}
