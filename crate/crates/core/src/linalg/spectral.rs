//! Spectral primitives: Hermitian eigendecomposition, SVD, Schur eigenvalues,
//! fractional powers, polar decomposition, ranks and projectors.

//!
//! Storage is nalgebra; the decompositions themselves are delegated to faer,
//! whose complex SVD stays backward stable on rank-deficient input.

use faer::{Mat, MatRef, Side};
use nalgebra::DMatrix;

use super::matrix::{CVector, ComplexMatrix, C64};
use crate::config::{ToleranceConfig, ABS_FLOOR};
use crate::error::{Error, Result};

fn to_faer(m: &DMatrix<C64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Applies `f` to the spectrum: `Q f(Λ) Q*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let q = self.eigenvectors.inner();
        let mut scaled = q.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(f(lambda));
        }
        ComplexMatrix::from_inner(scaled * q.adjoint())
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn eigenvector(&self, j: usize) -> CVector {
        self.eigenvectors.column(j).into_owned()
    }
}

fn asymmetry(a: &ComplexMatrix) -> f64 {
    let diff = (a.inner() - a.inner().adjoint()).norm();
    diff / a.inner().norm().max(ABS_FLOOR)
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first.
pub fn hermitian_eig(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<HermitianEigen> {
    let asym = asymmetry(a);
    if asym > cfg.eq_rtol {
        return Err(Error::NonHermitianInput { asymmetry: asym });
    }
    hermitian_eig_unchecked(&a.hermitian_part())
}

pub(crate) fn hermitian_eig_unchecked(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let sym = to_faer(a.hermitian_part().inner());
    let eig = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::ConvergenceFailure {
            routine: "hermitian eigendecomposition",
        })?;
    let eigenvalues = eig.S().column_vector().iter().map(|z| z.re).collect();
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_inner(from_faer(eig.U())),
    })
}

/// Singular value decomposition `T = W Σ V*` with descending singular values.
///
/// Singular values at or below `rank_tol * σ_max` are treated as zero by every
/// derived quantity (powers, polar factor, projectors).
#[derive(Debug, Clone)]
pub struct SingularSystem {
    left: DMatrix<C64>,
    sigma: Vec<f64>,
    right: DMatrix<C64>,
    rank: usize,
}

impl SingularSystem {
    pub fn new(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        Self::with_cutoff(t, |sigma_max| cfg.rank_tol * sigma_max)
    }

    /// Uses an absolute singular-value cutoff computed from `σ_max`.
    pub fn with_cutoff(t: &ComplexMatrix, cutoff: impl Fn(f64) -> f64) -> Result<Self> {
        let svd = to_faer(t.inner())
            .svd()
            .map_err(|_| Error::ConvergenceFailure { routine: "svd" })?;
        let left = from_faer(svd.U());
        let right = from_faer(svd.V());
        let sigma: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
        let sigma_max = sigma.first().copied().unwrap_or(0.0);
        let threshold = cutoff(sigma_max);
        let rank = sigma.iter().filter(|&&s| s > threshold && s > 0.0).count();
        Ok(Self {
            left,
            sigma,
            right,
            rank,
        })
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    pub fn norm(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    fn clamped(&self, j: usize) -> f64 {
        if j < self.rank {
            self.sigma[j]
        } else {
            0.0
        }
    }

    fn weighted(basis: &DMatrix<C64>, weights: impl Fn(usize) -> f64) -> ComplexMatrix {
        let mut scaled = basis.clone();
        for j in 0..basis.ncols() {
            scaled.column_mut(j).scale_mut(weights(j));
        }
        ComplexMatrix::from_inner(scaled * basis.adjoint())
    }

    fn power_weight(&self, j: usize, q: f64) -> f64 {
        let s = self.clamped(j);
        if s == 0.0 {
            0.0
        } else if q == 0.0 {
            1.0
        } else {
            s.powf(q)
        }
    }

    /// `|T|^q = V Σ^q V*`; `q = 0` yields the support projection.
    pub fn modulus_power(&self, q: f64) -> ComplexMatrix {
        Self::weighted(&self.right, |j| self.power_weight(j, q))
    }

    /// `|T*|^q = W Σ^q W*`.
    pub fn adjoint_modulus_power(&self, q: f64) -> ComplexMatrix {
        Self::weighted(&self.left, |j| self.power_weight(j, q))
    }

    /// Partial isometry `W_r V_r*` with `N(U) = N(|T|)`.
    pub fn polar_factor(&self) -> ComplexMatrix {
        let r = self.rank;
        let w = self.left.columns(0, r);
        let v = self.right.columns(0, r);
        ComplexMatrix::from_inner(w * v.adjoint())
    }

    /// Orthogonal projector onto `R(T)`.
    pub fn range_projector(&self) -> ComplexMatrix {
        Self::weighted(&self.left, |j| if j < self.rank { 1.0 } else { 0.0 })
    }

    /// Orthogonal projector onto `N(T)`.
    pub fn kernel_projector(&self) -> ComplexMatrix {
        Self::weighted(&self.right, |j| if j < self.rank { 0.0 } else { 1.0 })
    }

    /// Orthogonal projector onto `R(T*) = N(T)^⊥`.
    pub fn corange_projector(&self) -> ComplexMatrix {
        Self::weighted(&self.right, |j| if j < self.rank { 1.0 } else { 0.0 })
    }

    pub(crate) fn left_vectors(&self) -> &DMatrix<C64> {
        &self.left
    }

    pub(crate) fn right_vectors(&self) -> &DMatrix<C64> {
        &self.right
    }
}

/// Spectral norm of an arbitrary matrix.
///
/// Falls back to the Frobenius norm (an upper bound) if the SVD does not converge.
pub fn norm2(m: &DMatrix<C64>) -> f64 {
    match to_faer(m).singular_values() {
        Ok(s) => s.first().copied().unwrap_or(0.0),
        Err(_) => m.norm(),
    }
}

/// Largest singular value.
pub fn operator_norm(t: &ComplexMatrix) -> Result<f64> {
    let s = to_faer(t.inner())
        .singular_values()
        .map_err(|_| Error::ConvergenceFailure { routine: "svd" })?;
    Ok(s.first().copied().unwrap_or(0.0))
}

/// All eigenvalues with multiplicity.
pub fn general_eigenvalues(t: &ComplexMatrix) -> Result<Vec<C64>> {
    to_faer(t.inner())
        .eigenvalues()
        .map_err(|_| Error::ConvergenceFailure {
            routine: "eigenvalue decomposition",
        })
}

pub fn spectral_radius(t: &ComplexMatrix) -> Result<f64> {
    Ok(general_eigenvalues(t)?
        .iter()
        .fold(0.0, |m: f64, z| m.max(z.norm())))
}

/// Fractional power of a positive semidefinite matrix.
///
/// Eigenvalues below `rank_tol * ‖A‖` are clamped to zero first, so `α = 0`
/// returns the support projection.
pub fn psd_power(a: &ComplexMatrix, alpha: f64, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "power must be nonnegative, got {alpha}"
        )));
    }
    let eig = hermitian_eig(a, cfg)?;
    let scale = eig.max_abs();
    if eig.min() < -cfg.psd_tol * scale.max(ABS_FLOOR) {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.min() / scale.max(ABS_FLOOR),
        });
    }
    let cutoff = cfg.rank_tol * scale;
    Ok(eig.map(|lambda| {
        if lambda <= cutoff || lambda <= 0.0 {
            0.0
        } else if alpha == 0.0 {
            1.0
        } else {
            lambda.powf(alpha)
        }
    }))
}

/// `|T| = (T*T)^{1/2}`, computed from the singular system of `T`.
pub fn modulus(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    Ok(SingularSystem::new(t, cfg)?.modulus_power(1.0))
}

/// Polar decomposition `T = U P` with `P = |T|` and `N(U) = N(P)`.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub u: ComplexMatrix,
    pub p: ComplexMatrix,
}

pub fn polar_decompose(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<PolarDecomposition> {
    let svd = SingularSystem::new(t, cfg)?;
    Ok(PolarDecomposition {
        u: svd.polar_factor(),
        p: svd.modulus_power(1.0),
    })
}

pub fn rank(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    Ok(SingularSystem::new(t, cfg)?.rank())
}

/// Rank counting singular values above `rank_tol * scale` (used for powers of `T`).
pub fn rank_scaled(t: &ComplexMatrix, scale: f64, cfg: &ToleranceConfig) -> Result<usize> {
    Ok(SingularSystem::with_cutoff(t, |_| cfg.rank_tol * scale.max(ABS_FLOOR))?.rank())
}

pub fn kernel_projector(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    Ok(SingularSystem::new(t, cfg)?.kernel_projector())
}

pub fn range_projector(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    Ok(SingularSystem::new(t, cfg)?.range_projector())
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone)]
pub struct PsdCheck {
    pub member: bool,
    /// Minimum eigenvalue divided by the normalizing scale.
    pub margin: f64,
    pub min_eigenvalue: f64,
    /// Eigenvector of the minimum eigenvalue.
    pub witness: CVector,
}

/// Tests `M ≥ 0` relative to `‖M‖`.
pub fn is_psd(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<PsdCheck> {
    let eig = hermitian_eig(m, cfg)?;
    let scale = eig.max_abs();
    Ok(psd_from_eig(&eig, scale, cfg))
}

/// Tests `M ≥ 0` relative to a caller-supplied homogeneous scale.
pub fn is_psd_scaled(m: &ComplexMatrix, scale: f64, cfg: &ToleranceConfig) -> Result<PsdCheck> {
    let asym = (m.inner() - m.inner().adjoint()).norm() / scale.max(ABS_FLOOR);
    if asym > cfg.eq_rtol.max(cfg.psd_tol) {
        return Err(Error::NonHermitianInput { asymmetry: asym });
    }
    let eig = hermitian_eig_unchecked(m)?;
    Ok(psd_from_eig(&eig, scale, cfg))
}

fn psd_from_eig(eig: &HermitianEigen, scale: f64, cfg: &ToleranceConfig) -> PsdCheck {
    let margin = eig.min() / scale.max(ABS_FLOOR);
    PsdCheck {
        member: margin >= -cfg.psd_tol,
        margin,
        min_eigenvalue: eig.min(),
        witness: eig.eigenvector(0),
    }
}
