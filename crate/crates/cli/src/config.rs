//! Run settings. Precedence: command-line flags, then the key-value file
//! named by `FROZEN_PLANET_CONFIG`, then built-in defaults.

use std::path::Path;

use frozen_planet::quadrature::QuadratureConfig;
use frozen_planet::{intersect, solver};
use serde::Deserialize;

use crate::CliError;

pub const CONFIG_ENV: &str = "FROZEN_PLANET_CONFIG";
pub const DEFAULT_SAMPLES: usize = 512;

/// Keys accepted in the config file. All optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub quad_nodes: Option<usize>,
    pub quad_max_doublings: Option<u32>,
    pub quad_tol: Option<f64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub touch_tol: Option<f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Reads the file named by `FROZEN_PLANET_CONFIG`, if set.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

/// Values given on the command line, if any.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FlagOverrides {
    pub quad_nodes: Option<usize>,
    pub quad_tol: Option<f64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub touch_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub quad: QuadratureConfig,
    pub tol: f64,
    pub samples: usize,
    pub touch_tol: f64,
}

impl Settings {
    pub fn resolve(flags: &FlagOverrides, file: &FileConfig) -> Result<Self, CliError> {
        let base = QuadratureConfig::default();
        let quad = QuadratureConfig {
            base_nodes: flags
                .quad_nodes
                .or(file.quad_nodes)
                .unwrap_or(base.base_nodes),
            max_doublings: file.quad_max_doublings.unwrap_or(base.max_doublings),
            rel_tol: flags.quad_tol.or(file.quad_tol).unwrap_or(base.rel_tol),
        };
        quad.validate()?;
        Ok(Settings {
            quad,
            tol: flags.tol.or(file.tol).unwrap_or(solver::DEFAULT_TOL),
            samples: flags.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            touch_tol: flags
                .touch_tol
                .or(file.touch_tol)
                .unwrap_or(intersect::DEFAULT_TOUCH_TOL),
        })
    }
}
