//! Numerical membership tests for the normaloid operator hierarchy on dense
//! complex matrices, plus the property harness that exercises them.

pub mod classes;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod harness;
pub mod linalg;
pub mod pencil;
mod serde_util;
pub mod transforms;

pub use classes::{classify, ClassId, ClassReport, ClassVerdict, ClassifyOptions};
pub use config::{Profile, ToleranceConfig};
pub use error::{Error, Result};
pub use generators::{generate, GeneratorClass, GeneratorSpec};
pub use harness::{run_all, run_suite, PropertyResult, TheoremId};
pub use linalg::{CVector, ComplexMatrix, C64};
pub use pencil::PencilCertificate;
