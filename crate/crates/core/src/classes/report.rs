//! Aggregated classification of one matrix and the inclusion-chain check.

use serde::Serialize;

use super::*;
use crate::linalg::{rank_scaled, PolarDecomposition};

/// Parameter grids for the parametrized classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    /// Exponents for p-hyponormality (values outside `(0,1]` are skipped) and
    /// the `p` side of absolute-(p,r)-paranormality.
    pub p_list: Vec<f64>,
    pub r_list: Vec<f64>,
    /// Orders for k-paranormality (integral values only) and absolute-k-paranormality.
    pub k_list: Vec<f64>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            p_list: vec![0.5, 1.0, 2.0],
            r_list: vec![0.5, 1.0, 2.0],
            k_list: vec![1.0, 2.0],
        }
    }
}

/// One implication of the inclusion chain that failed on a classified matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub dimension: usize,
    pub norm: f64,
    pub spectral_radius: f64,
    pub ascent: usize,
    /// `U` of the polar decomposition `T = U|T|`.
    #[serde(serialize_with = "crate::serde_util::matrix")]
    pub polar_factor: ComplexMatrix,
    #[serde(serialize_with = "crate::serde_util::matrix")]
    pub gram: ComplexMatrix,
    #[serde(serialize_with = "crate::serde_util::matrix")]
    pub cogram: ComplexMatrix,
    pub verdicts: Vec<ClassVerdict>,
    pub chain_consistent: bool,
    pub chain_violations: Vec<ChainLink>,
}

impl ClassReport {
    /// First verdict for `class_id` (the only one for unparametrized classes).
    pub fn verdict(&self, class_id: ClassId) -> Option<&ClassVerdict> {
        self.verdicts.iter().find(|v| v.class_id == class_id)
    }

    pub fn verdicts_of(&self, class_id: ClassId) -> impl Iterator<Item = &ClassVerdict> {
        self.verdicts.iter().filter(move |v| v.class_id == class_id)
    }

    /// Membership in every verdict of `class_id`.
    pub fn member(&self, class_id: ClassId) -> bool {
        self.verdicts_of(class_id).all(|v| v.member)
    }
}

/// Smallest `n ≥ 1` with `N(T^n) = N(T^{n+1})`, from the ranks of successive
/// powers. Ranks are cut off relative to `‖T‖^k`.
pub fn ascent(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    let norm = operator_norm(t)?;
    let mut power = t.clone();
    let mut prev = rank_scaled(&power, norm, cfg)?;
    for k in 1..=t.dim() {
        power = &power * t;
        let next = rank_scaled(&power, norm.powi(k as i32 + 1), cfg)?;
        if next == prev {
            return Ok(k);
        }
        prev = next;
    }
    Ok(t.dim())
}

fn check_options(opts: &ClassifyOptions) -> Result<()> {
    if opts.p_list.is_empty() || opts.r_list.is_empty() || opts.k_list.is_empty() {
        return Err(Error::InvalidParameter("parameter lists must be nonempty".into()));
    }
    Ok(())
}

pub fn classify(
    t: &ComplexMatrix,
    opts: &ClassifyOptions,
    cfg: &ToleranceConfig,
) -> Result<ClassReport> {
    check_options(opts)?;
    cfg.validate()?;
    let mut verdicts = vec![
        is_self_adjoint(t, cfg)?,
        is_positive(t, cfg)?,
        is_unitary(t, cfg)?,
        is_isometry(t, cfg)?,
        is_orthogonal_projection(t, cfg)?,
        is_partial_isometry(t, cfg)?,
        is_normal(t, cfg)?,
        is_quasinormal(t, cfg)?,
        is_subnormal(t, cfg)?,
        is_hyponormal(t, cfg)?,
    ];
    for &p in opts.p_list.iter().filter(|&&p| p > 0.0 && p <= 1.0) {
        verdicts.push(is_p_hyponormal(t, p, cfg)?);
    }
    verdicts.push(is_class_a(t, cfg)?);
    verdicts.push(is_paranormal(t, cfg)?);
    for &k in opts.k_list.iter().filter(|k| k.fract() == 0.0 && **k >= 1.0) {
        verdicts.push(is_k_paranormal(t, k as u32, cfg)?);
    }
    for &k in &opts.k_list {
        verdicts.push(is_absolute_k_paranormal(t, k, cfg)?);
    }
    for &p in &opts.p_list {
        for &r in &opts.r_list {
            verdicts.push(is_absolute_pr_paranormal(t, p, r, cfg)?);
        }
    }
    verdicts.push(is_normaloid(t, cfg)?);
    verdicts.push(is_binormal(t, cfg)?);
    verdicts.push(is_posinormal(t, cfg)?);

    let chain_violations = chain_violations(&verdicts);
    let PolarDecomposition { u, .. } = crate::linalg::polar_decompose(t, cfg)?;
    Ok(ClassReport {
        dimension: t.dim(),
        norm: operator_norm(t)?,
        spectral_radius: spectral_radius(t)?,
        ascent: ascent(t, cfg)?,
        polar_factor: u,
        gram: (&t.adjoint() * t).hermitian_part(),
        cogram: (t * &t.adjoint()).hermitian_part(),
        chain_consistent: chain_violations.is_empty(),
        chain_violations,
        verdicts,
    })
}

/// Implications `from ⟹ to` between class groups; every member of the first
/// group must imply every member of the second.
const CHAIN: &[(ClassId, ClassId)] = &[
    (ClassId::Positive, ClassId::SelfAdjoint),
    (ClassId::SelfAdjoint, ClassId::Normal),
    (ClassId::Unitary, ClassId::Normal),
    (ClassId::Unitary, ClassId::Isometry),
    (ClassId::Isometry, ClassId::PartialIsometry),
    (ClassId::OrthogonalProjection, ClassId::Positive),
    (ClassId::Normal, ClassId::Quasinormal),
    (ClassId::Normal, ClassId::Binormal),
    (ClassId::Quasinormal, ClassId::Subnormal),
    (ClassId::Quasinormal, ClassId::Binormal),
    (ClassId::Subnormal, ClassId::Hyponormal),
    (ClassId::Hyponormal, ClassId::PHyponormal),
    (ClassId::Hyponormal, ClassId::ClassA),
    (ClassId::Hyponormal, ClassId::Posinormal),
    (ClassId::PHyponormal, ClassId::ClassA),
    (ClassId::ClassA, ClassId::Paranormal),
    (ClassId::Paranormal, ClassId::KParanormal),
    (ClassId::Paranormal, ClassId::AbsoluteKParanormal),
    (ClassId::AbsoluteKParanormal, ClassId::AbsolutePrParanormal),
    (ClassId::KParanormal, ClassId::Normaloid),
    (ClassId::AbsolutePrParanormal, ClassId::Normaloid),
];

fn label(v: &ClassVerdict) -> String {
    let p = &v.parameters;
    let mut s = v.class_id.as_str().to_string();
    for (name, value) in [("p", p.p), ("r", p.r), ("k", p.k)] {
        if let Some(x) = value {
            s.push_str(&format!(" {name}={x}"));
        }
    }
    s
}

/// Failed implications, ignoring those where either side is within the
/// marginal band of its threshold.
fn chain_violations(verdicts: &[ClassVerdict]) -> Vec<ChainLink> {
    let mut out = Vec::new();
    for &(from, to) in CHAIN {
        for a in verdicts.iter().filter(|v| v.class_id == from && v.member) {
            for b in verdicts.iter().filter(|v| v.class_id == to && !v.member) {
                if a.marginal || b.marginal {
                    continue;
                }
                out.push(ChainLink { from: label(a), to: label(b) });
            }
        }
    }
    out
}
