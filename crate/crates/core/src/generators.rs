//! Seeded random constructors for matrices inside each class.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`; complex
//! Gaussian entries have independent `N(0, 1/2)` real and imaginary parts.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, ComplexMatrix, SingularSystem, C64};
use crate::config::ToleranceConfig;

/// Recorded in results files so counterexamples can be regenerated elsewhere.
pub const GENERATOR_NAME: &str = "chacha8-seed_from_u64/standard-normal-complex";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let entries: Vec<C64> = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_row_major(n, &entries).expect("gaussian entries are finite")
}

/// Haar unitary: QR of a Gaussian matrix with the phases of `R` divided out.
pub fn unitary_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_with(n, rng).into_inner();
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    ComplexMatrix::from_row_major(n, &row_major(&q)).expect("finite")
}

fn row_major(m: &DMatrix<C64>) -> Vec<C64> {
    let n = m.nrows();
    (0..n).flat_map(|i| (0..n).map(move |j| m[(i, j)])).collect()
}

fn conjugate(w: &ComplexMatrix, core: &ComplexMatrix) -> ComplexMatrix {
    &(w * core) * &w.adjoint()
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("dimension must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_rank(n: usize, rank: usize) -> Result<()> {
    check_dim(n)?;
    if rank > n {
        Err(Error::InvalidParameter(format!("rank {rank} exceeds dimension {n}")))
    } else {
        Ok(())
    }
}

pub fn gen_random(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    Ok(random_with(n, &mut rng(seed)))
}

pub fn gen_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    Ok(unitary_with(n, &mut rng(seed)))
}

/// `W diag(z) W*` with Gaussian eigenvalues.
pub fn gen_normal(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut rng = rng(seed);
    let w = unitary_with(n, &mut rng);
    let d: Vec<C64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
    Ok(conjugate(&w, &ComplexMatrix::from_diagonal(&d)))
}

/// Normal matrix with `n - rank` zero eigenvalues.
pub fn gen_normal_rank(n: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    check_rank(n, rank)?;
    let mut rng = rng(seed);
    let w = unitary_with(n, &mut rng);
    let d: Vec<C64> = (0..n)
        .map(|i| if i < rank { complex_gaussian(&mut rng) } else { C64::new(0.0, 0.0) })
        .collect();
    Ok(conjugate(&w, &ComplexMatrix::from_diagonal(&d)))
}

/// `W diag(x) W*` with real Gaussian eigenvalues.
pub fn gen_hermitian(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut rng = rng(seed);
    let w = unitary_with(n, &mut rng);
    let d: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok(conjugate(&w, &ComplexMatrix::from_real_diagonal(&d)).hermitian_part())
}

/// `A*A` for Gaussian `A`.
pub fn gen_psd(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let a = random_with(n, &mut rng(seed));
    Ok((&a.adjoint() * &a).hermitian_part())
}

fn coordinate_projection(n: usize, rank: usize) -> ComplexMatrix {
    let d: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    ComplexMatrix::from_real_diagonal(&d)
}

/// `W₁ (I_rank ⊕ 0) W₂*` for independent Haar unitaries.
pub fn gen_partial_isometry(n: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    check_rank(n, rank)?;
    let mut rng = rng(seed);
    let w1 = unitary_with(n, &mut rng);
    let w2 = unitary_with(n, &mut rng);
    Ok(&(&w1 * &coordinate_projection(n, rank)) * &w2.adjoint())
}

/// `W (U₀ ⊕ 0) W*` with `U₀` a Haar unitary of size `rank`.
pub fn gen_quasinormal_partial_isometry(n: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    check_rank(n, rank)?;
    let mut rng = rng(seed);
    let w = unitary_with(n, &mut rng);
    let core = if rank == 0 {
        ComplexMatrix::zeros(n)
    } else if rank == n {
        unitary_with(n, &mut rng)
    } else {
        unitary_with(rank, &mut rng).direct_sum(&ComplexMatrix::zeros(n - rank))
    };
    Ok(conjugate(&w, &core))
}

/// Permutation with unimodular phases times a nonnegative diagonal.
///
/// `T = W (Π D) W*` gives `T*T = W D² W*` and `TT* = W Π D² Π* W*`, both
/// diagonal in the basis `W`. Entries of `D` lie in `[0.5, 1.5]`; the last
/// `n - rank` are set to zero.
pub fn gen_binormal_rank(n: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    check_rank(n, rank)?;
    let mut rng = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut pi = DMatrix::<C64>::zeros(n, n);
    for (col, &row) in perm.iter().enumerate() {
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        pi[(row, col)] = C64::from_polar(1.0, theta);
    }
    let d: Vec<f64> = (0..n)
        .map(|i| if i < rank { 0.5 + rng.random::<f64>() } else { 0.0 })
        .collect();
    let core = ComplexMatrix::from_row_major(n, &row_major(&pi)).expect("finite")
        * ComplexMatrix::from_real_diagonal(&d);
    let w = unitary_with(n, &mut rng);
    Ok(conjugate(&w, &core))
}

/// Invertible binormal matrix (see [`gen_binormal_rank`]).
pub fn gen_binormal(n: usize, seed: u64) -> Result<ComplexMatrix> {
    gen_binormal_rank(n, n, seed)
}

/// `W (‖A‖e^{iθ} ⊕ A) W*`: the eigenvalue `‖A‖e^{iθ}` attains the norm.
pub fn gen_normaloid(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut rng = rng(seed);
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    if n == 1 {
        return Ok(ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, theta)]));
    }
    let a = random_with(n - 1, &mut rng);
    let top = operator_norm(&a)?;
    let core = ComplexMatrix::from_diagonal(&[C64::from_polar(top, theta)]).direct_sum(&a);
    let w = unitary_with(n, &mut rng);
    Ok(conjugate(&w, &core))
}

/// Gaussian matrix resampled until `σ_min > 0.05 σ_max` (invertible, hence posinormal).
pub fn gen_posinormal(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut rng = rng(seed);
    let cfg = ToleranceConfig::default();
    loop {
        let t = random_with(n, &mut rng);
        let svd = SingularSystem::new(&t, &cfg)?;
        let s = svd.singular_values();
        if s[s.len() - 1] > 0.05 * s[0] {
            return Ok(t);
        }
    }
}

/// Gaussian matrix whose trailing singular values are set to zero.
pub fn gen_rank_deficient(n: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    check_rank(n, rank)?;
    let mut rng = rng(seed);
    let w1 = unitary_with(n, &mut rng);
    let w2 = unitary_with(n, &mut rng);
    let s: Vec<f64> = (0..n)
        .map(|i| if i < rank { 0.2 + rng.random::<f64>() } else { 0.0 })
        .collect();
    Ok(&(&w1 * &ComplexMatrix::from_real_diagonal(&s)) * &w2.adjoint())
}

/// Classes the generator front end can construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorClass {
    Random,
    Unitary,
    Normal,
    Hermitian,
    Psd,
    PartialIsometry,
    QuasinormalPartialIsometry,
    Binormal,
    Normaloid,
    Posinormal,
    RankDeficient,
}

impl GeneratorClass {
    pub const ALL: [GeneratorClass; 11] = [
        GeneratorClass::Random,
        GeneratorClass::Unitary,
        GeneratorClass::Normal,
        GeneratorClass::Hermitian,
        GeneratorClass::Psd,
        GeneratorClass::PartialIsometry,
        GeneratorClass::QuasinormalPartialIsometry,
        GeneratorClass::Binormal,
        GeneratorClass::Normaloid,
        GeneratorClass::Posinormal,
        GeneratorClass::RankDeficient,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorClass::Random => "random",
            GeneratorClass::Unitary => "unitary",
            GeneratorClass::Normal => "normal",
            GeneratorClass::Hermitian => "hermitian",
            GeneratorClass::Psd => "psd",
            GeneratorClass::PartialIsometry => "partial-isometry",
            GeneratorClass::QuasinormalPartialIsometry => "quasinormal-partial-isometry",
            GeneratorClass::Binormal => "binormal",
            GeneratorClass::Normaloid => "normaloid",
            GeneratorClass::Posinormal => "posinormal",
            GeneratorClass::RankDeficient => "rank-deficient",
        }
    }

    /// Whether the class is closed under positive scaling.
    pub fn scale_invariant(self) -> bool {
        !matches!(
            self,
            GeneratorClass::Unitary
                | GeneratorClass::PartialIsometry
                | GeneratorClass::QuasinormalPartialIsometry
        )
    }
}

impl std::str::FromStr for GeneratorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownClassId(s.to_string()))
    }
}

/// Full description of one generated matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub class_id: GeneratorClass,
    pub dimension: usize,
    pub seed: u64,
    pub rank: Option<usize>,
    /// Multiplies the output of scale-invariant classes.
    pub spectrum_scale: f64,
}

impl GeneratorSpec {
    pub fn new(class_id: GeneratorClass, dimension: usize, seed: u64) -> Self {
        Self {
            class_id,
            dimension,
            seed,
            rank: None,
            spectrum_scale: 1.0,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<ComplexMatrix> {
    let (n, seed) = (spec.dimension, spec.seed);
    check_dim(n)?;
    if !(spec.spectrum_scale > 0.0 && spec.spectrum_scale.is_finite()) {
        return Err(Error::InvalidParameter("spectrum_scale must be positive".into()));
    }
    let rank = spec.rank.unwrap_or(n);
    check_rank(n, rank)?;
    let m = match spec.class_id {
        GeneratorClass::Random => gen_random(n, seed)?,
        GeneratorClass::Unitary => gen_unitary(n, seed)?,
        GeneratorClass::Normal => gen_normal(n, seed)?,
        GeneratorClass::Hermitian => gen_hermitian(n, seed)?,
        GeneratorClass::Psd => gen_psd(n, seed)?,
        GeneratorClass::PartialIsometry => gen_partial_isometry(n, rank, seed)?,
        GeneratorClass::QuasinormalPartialIsometry => {
            gen_quasinormal_partial_isometry(n, rank, seed)?
        }
        GeneratorClass::Binormal => gen_binormal_rank(n, rank, seed)?,
        GeneratorClass::Normaloid => gen_normaloid(n, seed)?,
        GeneratorClass::Posinormal => gen_posinormal(n, seed)?,
        GeneratorClass::RankDeficient => gen_rank_deficient(n, rank, seed)?,
    };
    Ok(if spec.class_id.scale_invariant() {
        m.scale(spec.spectrum_scale)
    } else {
        m
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(gen_random(3, 1).unwrap(), gen_random(3, 1).unwrap());
        assert_ne!(gen_random(3, 1).unwrap(), gen_random(3, 2).unwrap());
        assert_eq!(gen_random(1, 5).unwrap().dim(), 1);
    }

    #[test]
    fn gaussian_entries_are_centered() {
        // 10^4 draws of a standard complex normal: the mean has std 0.01
        let m = gen_random(100, 42).unwrap();
        let mean = m.row_major().iter().sum::<C64>() / 10_000.0;
        assert!(mean.norm() < 0.03, "{mean}");
        let var = m.row_major().iter().map(|z| z.norm_sqr()).sum::<f64>() / 10_000.0;
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn unitary_and_psd() {
        for seed in 0..20 {
            let u = gen_unitary(5, seed).unwrap();
            assert!(residual(&(&u.adjoint() * &u), &ComplexMatrix::identity(5)) < 1e-12);
            let p = gen_psd(4, seed).unwrap();
            let eig = crate::linalg::hermitian_eig(&p, &ToleranceConfig::default()).unwrap();
            assert!(eig.min() >= -1e-12);
        }
    }

    #[test]
    fn partial_isometry_ranks() {
        let full = gen_partial_isometry(3, 3, 1).unwrap();
        assert!(residual(&(&full.adjoint() * &full), &ComplexMatrix::identity(3)) < 1e-12);
        assert_eq!(gen_partial_isometry(3, 0, 1).unwrap().max_abs(), 0.0);
        let v = gen_partial_isometry(3, 2, 1).unwrap();
        let g = &v.adjoint() * &v;
        assert!(residual(&(&g * &g), &g) < 1e-12);
        let cfg = ToleranceConfig::default();
        assert_eq!(crate::linalg::rank(&g, &cfg).unwrap(), 2);
        assert!(gen_partial_isometry(4, 5, 1).is_err());
    }

    #[test]
    fn quasinormal_partial_isometry_power_identity() {
        let v = gen_quasinormal_partial_isometry(5, 3, 7).unwrap();
        let v2 = &v * &v;
        let lhs = &v2.adjoint() * &v2;
        assert!(residual(&lhs, &(&v.adjoint() * &v)) < 1e-12);
    }

    #[test]
    fn binormal_construction_commutes() {
        for seed in 0..10 {
            let t = gen_binormal(4, seed).unwrap();
            let g = &t.adjoint() * &t;
            let h = &t * &t.adjoint();
            assert!(g.commutator(&h).max_abs() < 1e-12);
        }
    }

    #[test]
    fn generate_dispatch_checks_rank() {
        let spec = GeneratorSpec::new(GeneratorClass::Normal, 1, 3);
        assert_eq!(generate(&spec).unwrap().dim(), 1);
        let bad = GeneratorSpec::new(GeneratorClass::PartialIsometry, 4, 3).with_rank(5);
        assert!(generate(&bad).is_err());
        for c in GeneratorClass::ALL {
            assert_eq!(c.as_str().parse::<GeneratorClass>().unwrap(), c);
        }
    }
}
