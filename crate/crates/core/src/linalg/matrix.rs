use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;

/// Dense square matrix of complex entries.
///
/// Always square and finite when built through the checked constructors.
/// Arithmetic between matrices of equal dimension keeps the result square.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Wraps a nalgebra matrix after checking shape and finiteness.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = inner.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        for j in 0..cols {
            for i in 0..rows {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(inner))
    }

    /// Wraps a matrix produced by internal arithmetic on square operands.
    pub(crate) fn from_inner(inner: DMatrix<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self(inner)
    }

    /// Builds from `n*n` entries in row-major order.
    pub fn from_row_major(n: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Builds from real rows; panics on ragged input (intended for literals).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let entries: Vec<C64> = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), n, "ragged matrix literal");
                row.iter().map(|&x| C64::new(x, 0.0))
            })
            .collect();
        Self::from_row_major(n, &entries).expect("finite literal")
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn row_major(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(&self.0 * C64::new(c, 0.0))
    }

    pub fn scale_complex(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    /// `self + c I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..self.dim() {
            m[(i, i)] += C64::new(c, 0.0);
        }
        Self(m)
    }

    /// Integer power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &CVector) -> CVector {
        &self.0 * x
    }

    /// `<A x, x>` for Hermitian `A`; the imaginary part is discarded.
    pub fn quadratic_form(&self, x: &CVector) -> f64 {
        x.dotc(&(&self.0 * x)).re
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.0);
        out.view_mut((n, n), (m, m)).copy_from(&other.0);
        Self(out)
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<C64>;

    fn deref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }

        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(x: &CVector) -> f64 {
    x.norm()
}

/// Normalizes `x`; returns `None` for the zero vector.
pub fn normalized(x: &CVector) -> Option<CVector> {
    let n = x.norm();
    (n > 0.0 && n.is_finite()).then(|| x / C64::new(n, 0.0))
}
