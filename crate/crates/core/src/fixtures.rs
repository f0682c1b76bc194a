//! Registry of hand-built matrices with known class memberships.
//!
//! The matrices live in `fixtures/` as ordinary matrix files; `registry.json`
//! lists each one with the verdicts `classify` must reproduce.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classes::{classify, ClassId, ClassReport, ClassifyOptions};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::io::matrix_from_json;
use crate::linalg::ComplexMatrix;

const REGISTRY: &str = include_str!("../fixtures/registry.json");

const FILES: &[(&str, &str)] = &[
    ("ex_normaloid.json", include_str!("../fixtures/ex_normaloid.json")),
    ("binormal_example.json", include_str!("../fixtures/binormal_example.json")),
    ("ex_non_quasi_pi.json", include_str!("../fixtures/ex_non_quasi_pi.json")),
    ("nilpotent.json", include_str!("../fixtures/nilpotent.json")),
    ("remark_normaloid_root.json", include_str!("../fixtures/remark_normaloid_root.json")),
    (
        "remark_binormal_nilpotent.json",
        include_str!("../fixtures/remark_binormal_nilpotent.json"),
    ),
    ("remark_posinormal.json", include_str!("../fixtures/remark_posinormal.json")),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryEntry {
    name: String,
    file: String,
    description: String,
    expected: BTreeMap<String, bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Registry {
    fixtures: Vec<RegistryEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub name: String,
    #[serde(serialize_with = "crate::serde_util::matrix")]
    pub matrix: ComplexMatrix,
    /// Expected membership per class; parametrized classes must agree on every
    /// default parameter.
    pub expected: BTreeMap<ClassId, bool>,
    pub description: String,
}

impl Fixture {
    /// Classifies the matrix with default parameter grids and compares
    /// against the expected verdicts.
    pub fn verify(&self, cfg: &ToleranceConfig) -> Result<ClassReport> {
        let report = classify(&self.matrix, &ClassifyOptions::default(), cfg)?;
        for (&class, &expected) in &self.expected {
            let mut verdicts = report.verdicts_of(class).peekable();
            if verdicts.peek().is_none() {
                return Err(Error::UnknownClassId(class.to_string()));
            }
            if verdicts.any(|v| v.member != expected) {
                return Err(Error::FixtureMismatch {
                    fixture: self.name.clone(),
                    class: class.to_string(),
                    expected,
                });
            }
        }
        Ok(report)
    }
}

fn parse(registry: &str, read: impl Fn(&str) -> Result<String>) -> Result<Vec<Fixture>> {
    let registry: Registry =
        serde_json::from_str(registry).map_err(|e| Error::Format(format!("registry: {e}")))?;
    registry
        .fixtures
        .into_iter()
        .map(|entry| {
            let matrix = matrix_from_json(&read(&entry.file)?)?;
            let expected = entry
                .expected
                .iter()
                .map(|(k, &v)| Ok((k.parse::<ClassId>()?, v)))
                .collect::<Result<_>>()?;
            Ok(Fixture {
                name: entry.name,
                matrix,
                expected,
                description: entry.description,
            })
        })
        .collect()
}

/// The built-in fixtures, without verification.
pub fn fixture_registry() -> Vec<Fixture> {
    parse(REGISTRY, |file| {
        FILES
            .iter()
            .find(|(name, _)| *name == file)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| Error::Format(format!("fixture file `{file}` not bundled")))
    })
    .expect("bundled fixtures are well formed")
}

/// Looks up a built-in fixture by name.
pub fn fixture(name: &str) -> Option<Fixture> {
    fixture_registry().into_iter().find(|f| f.name == name)
}

/// Built-in fixtures, each verified against its expected verdicts.
pub fn load_fixtures(cfg: &ToleranceConfig) -> Result<Vec<Fixture>> {
    verified(fixture_registry(), cfg)
}

/// Fixtures from a directory holding `registry.json` and the matrix files,
/// without verification.
pub fn read_fixtures_from(dir: &Path) -> Result<Vec<Fixture>> {
    let registry = std::fs::read_to_string(dir.join("registry.json"))?;
    parse(&registry, |file| Ok(std::fs::read_to_string(dir.join(file))?))
}

/// Like [`read_fixtures_from`], with every fixture verified.
pub fn load_fixtures_from(dir: &Path, cfg: &ToleranceConfig) -> Result<Vec<Fixture>> {
    verified(read_fixtures_from(dir)?, cfg)
}

/// Writes the bundled registry and matrix files into `dir`, in the layout
/// `load_fixtures_from` reads.
pub fn export_fixtures(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("registry.json"), REGISTRY)?;
    for (file, text) in FILES {
        std::fs::write(dir.join(file), text)?;
    }
    Ok(())
}

fn verified(fixtures: Vec<Fixture>, cfg: &ToleranceConfig) -> Result<Vec<Fixture>> {
    for f in &fixtures {
        f.verify(cfg)?;
    }
    Ok(fixtures)
}
