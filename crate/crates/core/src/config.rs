//! Tolerances and run configuration.
//!
//! Length tolerances are fractions of the characteristic scale L, squared-length
//! tolerances fractions of L². Every field can be overridden from the environment
//! through `RPR3_TOL_<FIELD>` (upper-case field name), e.g. `RPR3_TOL_EPS_PASS=5e-4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Leg line undefined / continuation zero crossing (×L).
    pub leg_degenerate: f64,
    /// Joints considered coinciding for classification (×L).
    pub serial_leg: f64,
    /// Normalized measure below which a configuration is parallel singular.
    pub parallel_measure: f64,
    /// Serial clearance at or below which a serial point is also parallel singular (×L).
    pub clearance: f64,
    /// Passage window around a serial point (×L).
    pub eps_pass: f64,
    /// Leg length below which path sampling is refined (×L).
    pub refine_radius: f64,
    /// Minimum endpoint separation for a mode change (×L).
    pub mode_change_distance: f64,
    /// Endpoint rho² agreement (×L²).
    pub joint_match: f64,
    /// Path-parameter tolerance of crossing bisection.
    pub crossing_bisection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            leg_degenerate: 1e-9,
            serial_leg: 1e-6,
            parallel_measure: 1e-9,
            clearance: 1e-6,
            eps_pass: 1e-3,
            refine_radius: 0.05,
            mode_change_distance: 1e-3,
            joint_match: 1e-9,
            crossing_bisection: 1e-10,
        }
    }
}

macro_rules! tolerance_fields {
    ($m:ident) => {
        $m!(leg_degenerate);
        $m!(serial_leg);
        $m!(parallel_measure);
        $m!(clearance);
        $m!(eps_pass);
        $m!(refine_radius);
        $m!(mode_change_distance);
        $m!(joint_match);
        $m!(crossing_bisection);
    };
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        macro_rules! check {
            ($f:ident) => {
                if !(self.$f > 0.0 && self.$f.is_finite()) {
                    return Err(Error::Config(format!(
                        "tolerance {} must be positive, got {}",
                        stringify!($f),
                        self.$f
                    )));
                }
            };
        }
        tolerance_fields!(check);
        Ok(())
    }

    /// Applies overrides from a variable lookup (the process environment in practice).
    pub fn with_overrides<F>(mut self, lookup: F) -> Result<Self>
    where
        F: Fn(&str) -> Option<String>,
    {
        macro_rules! apply {
            ($f:ident) => {
                let key = format!("RPR3_TOL_{}", stringify!($f).to_uppercase());
                if let Some(v) = lookup(&key) {
                    self.$f = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("{key}: not a number: {v}")))?;
                }
            };
        }
        tolerance_fields!(apply);
        self.validate()?;
        Ok(self)
    }

    pub fn from_env() -> Result<Self> {
        Self::default().with_overrides(|k| std::env::var(k).ok())
    }
}

/// Settings shared by the command-line front end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub oracle_grid: usize,
    /// Seed of the sample-point schedule used by conic fitting.
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_3a9a;

impl Default for RunConfig {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), oracle_grid: 4096, seed: DEFAULT_SEED }
    }
}

impl RunConfig {
    /// Defaults overridden by `RPR3_TOL_*`, `RPR3_ORACLE_GRID` and `RPR3_SEED`.
    pub fn from_lookup<F>(lookup: F) -> Result<Self>
    where
        F: Fn(&str) -> Option<String>,
    {
        let tolerances = Tolerances::default().with_overrides(&lookup)?;
        let mut cfg = RunConfig { tolerances, ..Default::default() };
        if let Some(v) = lookup("RPR3_ORACLE_GRID") {
            cfg.oracle_grid = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("RPR3_ORACLE_GRID: not an integer: {v}")))?;
        }
        if let Some(v) = lookup("RPR3_SEED") {
            cfg.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("RPR3_SEED: not an integer: {v}")))?;
        }
        if cfg.oracle_grid == 0 {
            return Err(Error::Config("oracle grid must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn from_env() -> Result<Self> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }
}
