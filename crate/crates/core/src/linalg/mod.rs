//! Dense complex matrices and the spectral primitives every predicate is built on.

pub mod io;
mod matrix;
mod spectral;

pub use matrix::{normalized, vec_norm, CVector, ComplexMatrix, C64};
pub use spectral::{
    general_eigenvalues, hermitian_eig, is_psd, is_psd_scaled, kernel_projector, modulus, norm2,
    operator_norm, polar_decompose, psd_power, range_projector, rank, rank_scaled,
    spectral_radius, HermitianEigen, PolarDecomposition, PsdCheck, SingularSystem,
};
pub(crate) use spectral::hermitian_eig_unchecked;
