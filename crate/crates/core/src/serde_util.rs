//! Serde adapters for vectors in the shared matrix wire format.

use serde::{Serialize, Serializer};

use crate::linalg::io::MatrixJson;
use crate::linalg::{CVector, ComplexMatrix};

pub fn option_vector<S: Serializer>(v: &Option<CVector>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(MatrixJson::from_vector).serialize(s)
}

pub fn matrix<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
    MatrixJson::from_matrix(m).serialize(s)
}
