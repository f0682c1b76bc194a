//! Membership predicates for the operator classes, each returning a verdict
//! with a signed margin and, when membership fails, a witness.
//!
//! Margins are relative: equality classes report `-residual/‖T‖^d` for the
//! homogeneous degree `d` of the defining identity, inequality classes report
//! the minimum eigenvalue (or sphere minimum) in the same units. Membership
//! holds when `margin ≥ -threshold`.

mod report;

pub use report::{classify, ascent, ChainLink, ClassReport, ClassifyOptions};

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::config::{ToleranceConfig, ABS_FLOOR};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig_unchecked, is_psd_scaled, norm2, operator_norm, spectral_radius, CVector,
    ComplexMatrix, SingularSystem,
};
use crate::pencil::{self, PencilCertificate};

/// Identifier of every class the library decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    SelfAdjoint,
    Positive,
    Unitary,
    Isometry,
    OrthogonalProjection,
    PartialIsometry,
    Normal,
    Quasinormal,
    Subnormal,
    Hyponormal,
    PHyponormal,
    ClassA,
    Paranormal,
    KParanormal,
    AbsoluteKParanormal,
    AbsolutePrParanormal,
    Normaloid,
    Binormal,
    Posinormal,
}

impl ClassId {
    pub const ALL: [ClassId; 19] = [
        ClassId::SelfAdjoint,
        ClassId::Positive,
        ClassId::Unitary,
        ClassId::Isometry,
        ClassId::OrthogonalProjection,
        ClassId::PartialIsometry,
        ClassId::Normal,
        ClassId::Quasinormal,
        ClassId::Subnormal,
        ClassId::Hyponormal,
        ClassId::PHyponormal,
        ClassId::ClassA,
        ClassId::Paranormal,
        ClassId::KParanormal,
        ClassId::AbsoluteKParanormal,
        ClassId::AbsolutePrParanormal,
        ClassId::Normaloid,
        ClassId::Binormal,
        ClassId::Posinormal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassId::SelfAdjoint => "self_adjoint",
            ClassId::Positive => "positive",
            ClassId::Unitary => "unitary",
            ClassId::Isometry => "isometry",
            ClassId::OrthogonalProjection => "orthogonal_projection",
            ClassId::PartialIsometry => "partial_isometry",
            ClassId::Normal => "normal",
            ClassId::Quasinormal => "quasinormal",
            ClassId::Subnormal => "subnormal",
            ClassId::Hyponormal => "hyponormal",
            ClassId::PHyponormal => "p_hyponormal",
            ClassId::ClassA => "class_a",
            ClassId::Paranormal => "paranormal",
            ClassId::KParanormal => "k_paranormal",
            ClassId::AbsoluteKParanormal => "absolute_k_paranormal",
            ClassId::AbsolutePrParanormal => "absolute_pr_paranormal",
            ClassId::Normaloid => "normaloid",
            ClassId::Binormal => "binormal",
            ClassId::Posinormal => "posinormal",
        }
    }

    /// Whether membership is preserved by `T ↦ cT` for `c > 0`.
    pub fn scale_invariant(self) -> bool {
        !matches!(
            self,
            ClassId::Unitary
                | ClassId::Isometry
                | ClassId::OrthogonalProjection
                | ClassId::PartialIsometry
        )
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownClassId(s.to_string()))
    }
}

impl Serialize for ClassId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Class parameters; absent fields do not apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

impl ClassParams {
    pub fn p(p: f64) -> Self {
        Self { p: Some(p), ..Self::default() }
    }

    pub fn pr(p: f64, r: f64) -> Self {
        Self { p: Some(p), r: Some(r), ..Self::default() }
    }

    pub fn k(k: f64) -> Self {
        Self { k: Some(k), ..Self::default() }
    }

    fn is_empty(&self) -> bool {
        self.p.is_none() && self.r.is_none() && self.k.is_none()
    }
}

/// Evidence of non-membership.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::option_vector"
    )]
    pub vector: Option<CVector>,
}

/// Membership decision for one class and one parameter choice.
#[derive(Debug, Clone, Serialize)]
pub struct ClassVerdict {
    pub class_id: ClassId,
    #[serde(skip_serializing_if = "ClassParams::is_empty")]
    pub parameters: ClassParams,
    pub member: bool,
    pub margin: f64,
    pub threshold: f64,
    pub marginal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Posinormality constant `min{λ : TT* ≤ λT*T}` when it exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClassVerdict {
    fn new(class_id: ClassId, margin: f64, threshold: f64) -> Self {
        Self {
            class_id,
            parameters: ClassParams::default(),
            member: margin >= -threshold,
            margin,
            threshold,
            marginal: ToleranceConfig::is_marginal(margin, threshold),
            witness: None,
            lambda_min: None,
            note: None,
        }
    }

    fn with_params(mut self, parameters: ClassParams) -> Self {
        self.parameters = parameters;
        self
    }

    fn with_vector_witness(mut self, x: CVector) -> Self {
        if !self.member {
            self.witness = Some(Witness { lambda: None, vector: Some(x) });
        }
        self
    }

    fn from_certificate(class_id: ClassId, cert: PencilCertificate, cfg: &ToleranceConfig) -> Self {
        let mut v = ClassVerdict::new(class_id, cert.margin, cfg.psd_tol);
        v.member = cert.decision;
        v.marginal = cert.marginal;
        if !cert.decision {
            v.witness = Some(Witness {
                lambda: cert.witness_lambda,
                vector: cert.witness_vector,
            });
        }
        if cert.reduced_confidence {
            v.note = Some("sphere search did not converge; reduced confidence".into());
        }
        v
    }
}

fn scaled(residual: f64, norm: f64, degree: i32) -> f64 {
    residual / norm.powi(degree).max(ABS_FLOOR)
}

fn equality(class_id: ClassId, residual: f64, cfg: &ToleranceConfig) -> ClassVerdict {
    ClassVerdict::new(class_id, -residual, cfg.eq_rtol)
}

fn psd_verdict(
    class_id: ClassId,
    m: &ComplexMatrix,
    scale: f64,
    cfg: &ToleranceConfig,
) -> Result<ClassVerdict> {
    let check = is_psd_scaled(&m.hermitian_part(), scale, cfg)?;
    Ok(ClassVerdict::new(class_id, check.margin, cfg.psd_tol).with_vector_witness(check.witness))
}

pub fn is_self_adjoint(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    let r = norm2(&(t - &t.adjoint()));
    Ok(equality(ClassId::SelfAdjoint, scaled(r, norm, 1), cfg))
}

pub fn is_normal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    let c = &(&t.adjoint() * t) - &(t * &t.adjoint());
    Ok(equality(ClassId::Normal, scaled(norm2(&c), norm, 2), cfg))
}

/// Finite-dimensional subnormal operators are exactly the normal ones.
pub fn is_subnormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let mut v = is_normal(t, cfg)?;
    v.class_id = ClassId::Subnormal;
    v.note = Some("decided as normal: the two classes coincide in finite dimension".into());
    Ok(v)
}

pub fn is_positive(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let sa = is_self_adjoint(t, cfg)?;
    if !sa.member {
        let mut v = ClassVerdict::new(ClassId::Positive, sa.margin, cfg.eq_rtol);
        v.note = Some("not self-adjoint".into());
        return Ok(v);
    }
    let norm = operator_norm(t)?;
    psd_verdict(ClassId::Positive, t, norm, cfg)
}

pub fn is_unitary(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let a = norm2(&(&t.adjoint() * t).shift(-1.0));
    let b = norm2(&(t * &t.adjoint()).shift(-1.0));
    Ok(equality(ClassId::Unitary, a.max(b), cfg))
}

pub fn is_isometry(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let a = norm2(&(&t.adjoint() * t).shift(-1.0));
    Ok(equality(ClassId::Isometry, a, cfg))
}

pub fn is_orthogonal_projection(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let idem = norm2(&(&(t * t) - t));
    let sa = norm2(&(t - &t.adjoint()));
    Ok(equality(ClassId::OrthogonalProjection, idem.max(sa), cfg))
}

/// `T*T` is an orthogonal projection.
pub fn is_partial_isometry(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let g = (&t.adjoint() * t).hermitian_part();
    let r = norm2(&(&(&g * &g) - &g));
    Ok(equality(ClassId::PartialIsometry, r, cfg))
}

/// `T(T*T) = (T*T)T`.
pub fn is_quasinormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    let g = &t.adjoint() * t;
    let r = norm2(&t.commutator(&g));
    Ok(equality(ClassId::Quasinormal, scaled(r, norm, 3), cfg))
}

pub fn is_hyponormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    let d = &(&t.adjoint() * t) - &(t * &t.adjoint());
    psd_verdict(ClassId::Hyponormal, &d, norm * norm, cfg)
}

/// `(T*T)^p ≥ (TT*)^p` for `p ∈ (0, 1]`.
pub fn is_p_hyponormal(t: &ComplexMatrix, p: f64, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
    }
    let svd = SingularSystem::new(t, cfg)?;
    let d = &svd.modulus_power(2.0 * p) - &svd.adjoint_modulus_power(2.0 * p);
    let scale = svd.norm().powf(2.0 * p);
    Ok(psd_verdict(ClassId::PHyponormal, &d, scale, cfg)?.with_params(ClassParams::p(p)))
}

/// `|T²| ≥ |T|²`.
pub fn is_class_a(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    let abs_t2 = SingularSystem::new(&(t * t), cfg)?.modulus_power(1.0);
    let d = &abs_t2 - &(&t.adjoint() * t);
    psd_verdict(ClassId::ClassA, &d, norm * norm, cfg)
}

/// `‖T²x‖ ≥ ‖Tx‖²` for unit `x`.
pub fn is_paranormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let cert = pencil::check_paranormal(t, cfg)?;
    Ok(ClassVerdict::from_certificate(ClassId::Paranormal, cert, cfg))
}

fn singular_starts(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<CVector>> {
    let svd = SingularSystem::new(t, cfg)?;
    Ok(svd
        .right_vectors()
        .column_iter()
        .chain(svd.left_vectors().column_iter())
        .map(|c| c.into_owned())
        .collect())
}

/// `‖T^{k+1}x‖ ≥ ‖Tx‖^{k+1}` for unit `x` (trivial for `k = 0`).
pub fn is_k_paranormal(t: &ComplexMatrix, k: u32, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let params = ClassParams::k(k as f64);
    let Some((tn, _)) = pencil::normalize(t)? else {
        return Ok(ClassVerdict::new(ClassId::KParanormal, 0.0, cfg.psd_tol).with_params(params));
    };
    let tk = tn.pow(k + 1);
    let a = &tk.adjoint() * &tk;
    let b = &tn.adjoint() * &tn;
    let cert = pencil::check_power_pair(a, b, (k + 1) as f64, singular_starts(&tn, cfg)?, cfg)?;
    Ok(ClassVerdict::from_certificate(ClassId::KParanormal, cert, cfg).with_params(params))
}

/// `‖|T|^k Tx‖ ≥ ‖Tx‖^{k+1}` for unit `x` and real `k > 0`.
pub fn is_absolute_k_paranormal(
    t: &ComplexMatrix,
    k: f64,
    cfg: &ToleranceConfig,
) -> Result<ClassVerdict> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    let params = ClassParams::k(k);
    let Some((tn, _)) = pencil::normalize(t)? else {
        return Ok(ClassVerdict::new(ClassId::AbsoluteKParanormal, 0.0, cfg.psd_tol)
            .with_params(params));
    };
    let svd = SingularSystem::new(&tn, cfg)?;
    let a = &(&tn.adjoint() * &svd.modulus_power(2.0 * k)) * &tn;
    let b = &tn.adjoint() * &tn;
    let cert = pencil::check_power_pair(a, b, k + 1.0, singular_starts(&tn, cfg)?, cfg)?;
    Ok(ClassVerdict::from_certificate(ClassId::AbsoluteKParanormal, cert, cfg).with_params(params))
}

/// `‖|T|^p|T*|^r x‖^r ≥ ‖|T*|^r x‖^{p+r}` for unit `x`.
pub fn is_absolute_pr_paranormal(
    t: &ComplexMatrix,
    p: f64,
    r: f64,
    cfg: &ToleranceConfig,
) -> Result<ClassVerdict> {
    let cert = pencil::check_abs_pr(t, p, r, cfg)?;
    Ok(ClassVerdict::from_certificate(ClassId::AbsolutePrParanormal, cert, cfg)
        .with_params(ClassParams::pr(p, r)))
}

/// `r(T) = ‖T‖`, with margin `(r(T) - ‖T‖)/‖T‖`.
pub fn is_normaloid(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    if norm == 0.0 {
        return Ok(ClassVerdict::new(ClassId::Normaloid, 0.0, cfg.psd_tol));
    }
    let radius = spectral_radius(t)?;
    Ok(ClassVerdict::new(ClassId::Normaloid, (radius - norm) / norm, cfg.psd_tol))
}

/// `T*T` commutes with `TT*`.
pub fn is_binormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let norm = operator_norm(t)?;
    let c = (&t.adjoint() * t).commutator(&(t * &t.adjoint()));
    Ok(equality(ClassId::Binormal, scaled(norm2(&c), norm, 4), cfg))
}

/// `R(T) ⊆ R(T*)`, decided by `‖(I - P)T‖/‖T‖` with `P` the projection onto
/// `R(T*)`. Members also report `λ_min = min{λ : TT* ≤ λT*T}`.
pub fn is_posinormal(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ClassVerdict> {
    let threshold = cfg.eq_rtol.max(cfg.rank_tol);
    let svd = SingularSystem::new(t, cfg)?;
    let norm = svd.norm();
    if norm == 0.0 {
        let mut v = ClassVerdict::new(ClassId::Posinormal, 0.0, threshold);
        v.lambda_min = Some(0.0);
        return Ok(v);
    }
    let outside = &ComplexMatrix::identity(t.dim()) - &svd.corange_projector();
    let leak = &outside * t;
    let residual = norm2(&leak) / norm;
    let mut v = ClassVerdict::new(ClassId::Posinormal, -residual, threshold);
    if v.member {
        v.lambda_min = Some(posinormal_constant(t, &svd)?);
    } else {
        // a column of T leaving R(T*): x = e_j with the largest leak
        let j = (0..t.dim())
            .max_by(|&a, &b| leak.column(a).norm().total_cmp(&leak.column(b).norm()))
            .unwrap_or(0);
        let mut x = CVector::zeros(t.dim());
        x[j] = 1.0.into();
        v = v.with_vector_witness(x);
    }
    Ok(v)
}

/// `λ_max(Σ⁻¹ V* TT* V Σ⁻¹)` over the retained singular pairs.
fn posinormal_constant(t: &ComplexMatrix, svd: &SingularSystem) -> Result<f64> {
    let r = svd.rank();
    if r == 0 {
        return Ok(0.0);
    }
    let v = svd.right_vectors().columns(0, r).into_owned();
    let s = svd.singular_values();
    let mut m = &v.adjoint() * (t * &t.adjoint()).inner() * &v;
    for i in 0..r {
        for j in 0..r {
            m[(i, j)] /= s[i] * s[j];
        }
    }
    let m = ComplexMatrix::from_inner(m).hermitian_part();
    let top = hermitian_eig_unchecked(&m)?.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0))
}

#[cfg(test)]
mod tests;
