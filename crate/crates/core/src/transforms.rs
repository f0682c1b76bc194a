//! The generalized transform `T̄(s) = U|T|^s` and the identity and inequality
//! checks built around polar decompositions.
//!
//! Residuals are relative to the homogeneous degree of the identity in `T`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::{ToleranceConfig, ABS_FLOOR};
use crate::error::{Error, Result};
use crate::linalg::{
    is_psd_scaled, norm2, psd_power, vec_norm, CVector, ComplexMatrix, SingularSystem,
};

/// Tolerance on `‖x‖ = 1` for vector arguments.
pub const UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct TransformResult {
    pub s: f64,
    #[serde(serialize_with = "crate::serde_util::matrix")]
    pub matrix: ComplexMatrix,
    /// Always contains `polar_q`, `gram` and `cogram`; `trans_equiv` and
    /// `alternate_form` are added for `s ≥ 1`.
    pub residuals: BTreeMap<String, f64>,
}

fn relative(m: &ComplexMatrix, norm: f64, degree: f64) -> f64 {
    norm2(m) / norm.powf(degree).max(ABS_FLOOR)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

/// `T̄(s) = U|T|^s` together with the residuals of the identities it satisfies.
pub fn generalized_transform(
    t: &ComplexMatrix,
    s: f64,
    cfg: &ToleranceConfig,
) -> Result<TransformResult> {
    check_positive("s", s)?;
    let svd = SingularSystem::new(t, cfg)?;
    let norm = svd.norm();
    let u = svd.polar_factor();
    let ts = &u * &svd.modulus_power(s);

    let mut residuals = BTreeMap::new();
    let polar_q = &svd.adjoint_modulus_power(s) - &(&ts * &u.adjoint());
    residuals.insert("polar_q".to_string(), relative(&polar_q, norm, s));
    let gram = &(&ts.adjoint() * &ts) - &svd.modulus_power(2.0 * s);
    residuals.insert("gram".to_string(), relative(&gram, norm, 2.0 * s));
    let cogram = &(&ts * &ts.adjoint()) - &svd.adjoint_modulus_power(2.0 * s);
    residuals.insert("cogram".to_string(), relative(&cogram, norm, 2.0 * s));
    if s >= 1.0 {
        let alt = t * &svd.modulus_power(s - 1.0);
        residuals.insert("alternate_form".to_string(), relative(&(&ts - &alt), norm, s));
        residuals.insert("trans_equiv".to_string(), trans_equiv_from(t, &svd, s));
    }
    Ok(TransformResult { s, matrix: ts, residuals })
}

/// `‖T|T|^α - |T*|^α T‖ / ‖T‖^{1+α}`.
pub fn fundamental_identity_residual(
    t: &ComplexMatrix,
    alpha: f64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_positive("α", alpha)?;
    let svd = SingularSystem::new(t, cfg)?;
    let lhs = t * &svd.modulus_power(alpha);
    let rhs = &svd.adjoint_modulus_power(alpha) * t;
    Ok(relative(&(&lhs - &rhs), svd.norm(), 1.0 + alpha))
}

/// Largest pairwise residual among `(U|T|^s)²`, `(T|T|^{s-1})²` and
/// `|T*|^{s-1}T²|T|^{s-1}`, relative to `‖T‖^{2s}`.
pub fn trans_equiv_residual(t: &ComplexMatrix, s: f64, cfg: &ToleranceConfig) -> Result<f64> {
    if !(s >= 1.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("s must be >= 1, got {s}")));
    }
    let svd = SingularSystem::new(t, cfg)?;
    Ok(trans_equiv_from(t, &svd, s))
}

fn trans_equiv_from(t: &ComplexMatrix, svd: &SingularSystem, s: f64) -> f64 {
    let norm = svd.norm();
    let ts = &svd.polar_factor() * &svd.modulus_power(s);
    let first = &ts * &ts;
    let half = t * &svd.modulus_power(s - 1.0);
    let second = &half * &half;
    let third = &(&svd.adjoint_modulus_power(s - 1.0) * &(t * t)) * &svd.modulus_power(s - 1.0);
    [
        &first - &second,
        &first - &third,
        &second - &third,
    ]
    .iter()
    .map(|d| relative(d, norm, 2.0 * s))
    .fold(0.0, f64::max)
}

/// Outcome of an operator inequality `X ≥ 0` in relative units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub holds: bool,
    pub margin: f64,
}

fn check_binormal(t: &ComplexMatrix, norm: f64, cfg: &ToleranceConfig) -> Result<()> {
    let c = (&t.adjoint() * t).commutator(&(t * &t.adjoint()));
    let commutator = relative(&c, norm, 4.0);
    if commutator > 10.0 * cfg.eq_rtol {
        Err(Error::NotBinormal { commutator })
    } else {
        Ok(())
    }
}

fn psd_difference(
    big: &ComplexMatrix,
    small: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityCheck> {
    let scale = norm2(big).max(norm2(small));
    let check = is_psd_scaled(&(big - small).hermitian_part(), scale, cfg)?;
    Ok(InequalityCheck { holds: check.member, margin: check.margin })
}

fn premise(t: &ComplexMatrix, lambda: f64, norm: f64, cfg: &ToleranceConfig) -> Result<()> {
    check_positive("λ", lambda)?;
    check_binormal(t, norm, cfg)?;
    let gram = &t.adjoint() * t;
    let cogram = t * &t.adjoint();
    let base = psd_difference(&gram.scale(lambda), &cogram, cfg)?;
    if !base.holds {
        return Err(Error::PremiseViolated(format!(
            "TT* ≤ λT*T fails for λ={lambda} (margin {:.3e})",
            base.margin
        )));
    }
    Ok(())
}

/// `TⁿT*ⁿ ≤ λ^{n²} T*ⁿTⁿ` for binormal `T` with `TT* ≤ λT*T`.
pub fn power_inequality_check(
    t: &ComplexMatrix,
    lambda: f64,
    n: u32,
    cfg: &ToleranceConfig,
) -> Result<InequalityCheck> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let norm = crate::linalg::operator_norm(t)?;
    premise(t, lambda, norm, cfg)?;
    let tn = t.pow(n);
    let big = (&tn.adjoint() * &tn).scale(lambda.powi((n * n) as i32));
    let small = &tn * &tn.adjoint();
    psd_difference(&big, &small, cfg)
}

/// `(TT*)^k ≤ λ^k (T*T)^k` for `k = 1..=k_max`, under the same premise as
/// [`power_inequality_check`].
pub fn lambda_power_chain(
    t: &ComplexMatrix,
    lambda: f64,
    k_max: u32,
    cfg: &ToleranceConfig,
) -> Result<Vec<InequalityCheck>> {
    let norm = crate::linalg::operator_norm(t)?;
    premise(t, lambda, norm, cfg)?;
    let gram = &t.adjoint() * t;
    let cogram = t * &t.adjoint();
    (1..=k_max)
        .map(|k| {
            let big = gram.pow(k).scale(lambda.powi(k as i32));
            psd_difference(&big, &cogram.pow(k), cfg)
        })
        .collect()
}

/// Hölder–McCarthy: `<A^α x,x> ≥ <Ax,x>^α` for `α > 1`, reversed for
/// `α ∈ (0,1]`. The returned margin is the signed gap relative to `‖A‖^α`,
/// nonnegative when the applicable branch holds.
pub fn holder_mccarthy_check(
    a: &ComplexMatrix,
    x: &CVector,
    alpha: f64,
    cfg: &ToleranceConfig,
) -> Result<InequalityCheck> {
    check_positive("α", alpha)?;
    if a.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: x.len() });
    }
    let norm = vec_norm(x);
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm });
    }
    let a_alpha = psd_power(a, alpha, cfg)?;
    let powered = a_alpha.quadratic_form(x);
    let plain = a.quadratic_form(x).max(0.0).powf(alpha);
    let gap = if alpha > 1.0 { powered - plain } else { plain - powered };
    let scale = norm2(a).powf(alpha).max(ABS_FLOOR);
    let margin = gap / scale;
    Ok(InequalityCheck { holds: margin >= -cfg.psd_tol, margin })
}

/// `‖V*ⁿVⁿ - (V*V)ⁿ‖ / ‖V‖^{2n}`; vanishes for quasinormal `V`.
pub fn embry_power_identity(v: &ComplexMatrix, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let norm = crate::linalg::operator_norm(v)?;
    let vn = v.pow(n);
    let lhs = &vn.adjoint() * &vn;
    let rhs = (&v.adjoint() * v).pow(n);
    Ok(relative(&(&lhs - &rhs), norm, 2.0 * n as f64))
}
