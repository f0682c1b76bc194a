//! The shared matrix file format: `{"n": int, "data": [[re, im], ...]}` with
//! `n*n` entries in row-major order.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::{CVector, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Wire form of a matrix (or of a vector, where `data` has `n` entries).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            n: m.dim(),
            data: m.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_vector(x: &CVector) -> Self {
        Self {
            n: x.len(),
            data: x.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.n == 0 {
            return Err(Error::Format("n must be positive".into()));
        }
        if self.data.len() != self.n * self.n {
            return Err(Error::Format(format!(
                "expected {} entries for n = {}, found {}",
                self.n * self.n,
                self.n,
                self.data.len()
            )));
        }
        let entries: Vec<C64> = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_row_major(self.n, &entries).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_vector(&self) -> Result<CVector> {
        if self.data.len() != self.n {
            return Err(Error::Format(format!(
                "expected {} vector entries, found {}",
                self.n,
                self.data.len()
            )));
        }
        Ok(CVector::from_iterator(
            self.n,
            self.data.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }
}

/// Formats a double with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a matrix in the shared file format, one entry per line.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"n\": {},\n  \"data\": [\n", m.dim());
    let entries = m.row_major();
    for (i, z) in entries.iter().enumerate() {
        let sep = if i + 1 == entries.len() { "" } else { "," };
        let _ = writeln!(out, "    [{}, {}]{sep}", format_f64(z.re), format_f64(z.im));
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let wire: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    wire.to_matrix()
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    matrix_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, matrix_to_json(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_reference_layout() {
        let text = r#"{"n": 2, "data": [[0,0],[1,0],[0,0],[0,-1.5]]}"#;
        let m = matrix_from_json(text).unwrap();
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], C64::new(0.0, -1.5));
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            r#"{"n": 2, "data": [[0,0],[1,0],[0,0]]}"#,
            r#"{"n": 0, "data": []}"#,
            r#"{"n": 1, "data": [[0]]}"#,
            r#"{"n": 1, "data": [[0,0]], "extra": 1}"#,
            r#"{"n": 2, "data": [[0,0],[1,0]"#,
            "",
        ] {
            assert!(matches!(matrix_from_json(bad), Err(Error::Format(_))), "{bad}");
        }
    }

    #[test]
    fn writer_uses_seventeen_digits() {
        let m = ComplexMatrix::from_real_rows(&[&[0.1]]);
        let text = matrix_to_json(&m);
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(!text.contains('\r'));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            n in 1usize..5,
            seed in proptest::collection::vec((-1e6f64..1e6, -1e-300f64..1e-300), 16)
        ) {
            let entries: Vec<C64> = seed.iter().take(n * n).map(|&(a, b)| C64::new(a, b)).collect();
            let m = ComplexMatrix::from_row_major(n, &entries).unwrap();
            let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
