use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute floor used by every relative test so that the zero matrix is handled.
pub const ABS_FLOOR: f64 = 1e-14;

/// Numerical tolerance policy shared by every predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative tolerance for operator-equality tests.
    pub eq_rtol: f64,
    /// Relative slack for positive-semidefiniteness.
    pub psd_tol: f64,
    /// Relative singular-value cutoff for rank and kernel decisions.
    pub rank_tol: f64,
    /// Restart count for the unit-sphere minimization.
    pub sphere_restarts: usize,
    /// Number of points of the logarithmic lambda grid.
    pub grid_points: usize,
    /// Seed of the quasi-random restart sequence.
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_rtol: 1e-10,
            psd_tol: 1e-9,
            rank_tol: 1e-10,
            sphere_restarts: 64,
            grid_points: 200,
            seed: 0,
        }
    }
}

/// Named tolerance profiles exposed to the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Default,
    Strict,
    Loose,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Profile::Default),
            "strict" => Ok(Profile::Strict),
            "loose" => Ok(Profile::Loose),
            other => Err(Error::InvalidParameter(format!(
                "unknown tolerance profile `{other}`"
            ))),
        }
    }
}

impl ToleranceConfig {
    pub fn profile(profile: Profile) -> Self {
        match profile {
            Profile::Default => Self::default(),
            Profile::Strict => Self {
                eq_rtol: 1e-12,
                psd_tol: 1e-11,
                rank_tol: 1e-12,
                sphere_restarts: 128,
                grid_points: 400,
                seed: 0,
            },
            Profile::Loose => Self {
                eq_rtol: 1e-8,
                psd_tol: 1e-7,
                rank_tol: 1e-8,
                sphere_restarts: 32,
                grid_points: 100,
                seed: 0,
            },
        }
    }

    /// Knife-edge band around the decision threshold `-threshold`: margins
    /// within a decade of it on either side.
    pub fn is_marginal(margin: f64, threshold: f64) -> bool {
        margin >= -10.0 * threshold && margin < -0.1 * threshold
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
            }
        };
        positive("eq_rtol", self.eq_rtol)?;
        positive("psd_tol", self.psd_tol)?;
        positive("rank_tol", self.rank_tol)?;
        if self.sphere_restarts == 0 {
            return Err(Error::InvalidParameter("sphere_restarts must be >= 1".into()));
        }
        if self.grid_points == 0 {
            return Err(Error::InvalidParameter("grid_points must be >= 1".into()));
        }
        Ok(())
    }

    /// Applies `NORMALOID_*` overrides from an iterator of environment pairs.
    pub fn with_overrides<I, K, V>(mut self, vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse {key}={value}")))
        }
        for (key, value) in vars {
            let (key, value) = (key.as_ref(), value.as_ref());
            match key {
                "NORMALOID_EQ_RTOL" => self.eq_rtol = parse(key, value)?,
                "NORMALOID_PSD_TOL" => self.psd_tol = parse(key, value)?,
                "NORMALOID_RANK_TOL" => self.rank_tol = parse(key, value)?,
                "NORMALOID_SPHERE_RESTARTS" => self.sphere_restarts = parse(key, value)?,
                "NORMALOID_GRID_POINTS" => self.grid_points = parse(key, value)?,
                "NORMALOID_SEED" => self.seed = parse(key, value)?,
                _ => {}
            }
        }
        self.validate()?;
        Ok(self)
    }
}
