use std::path::{Path, PathBuf};

use blocknorm::linalg::SchattenP;
use blocknorm::numrange::DEFAULT_GRID;
use blocknorm::tolerance::Tolerances;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CONFIG_SCHEMA: &str = "runconfig/1";

/// Optional `--config` file. Every field has a default; unknown keys are
/// rejected, including unknown tolerance names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<SchattenP>,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: usize,
}

fn default_p_grid() -> Vec<SchattenP> {
    blocknorm::verify::default_p_grid()
}

fn default_theta_grid() -> usize {
    DEFAULT_GRID
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema: CONFIG_SCHEMA.to_string(),
            tolerances: Tolerances::default(),
            seed: 0,
            output_dir: None,
            p_grid: default_p_grid(),
            theta_grid: default_theta_grid(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(CliError::Config(format!(
                "schema {:?}, expected {CONFIG_SCHEMA:?}",
                cfg.schema
            )));
        }
        if cfg.p_grid.is_empty() {
            return Err(CliError::Config("p_grid is empty".into()));
        }
        Ok(cfg)
    }

    /// Resolves a relative output path against `output_dir`.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg =
            RunConfig::parse(r#"{"schema":"runconfig/1","tolerances":{"normality":1e-7},"p_grid":[1,"inf"]}"#).unwrap();
        assert_eq!(cfg.tolerances.normality, 1e-7);
        assert_eq!(cfg.tolerances.psd, Tolerances::default().psd);
        assert_eq!(cfg.p_grid, vec![SchattenP::ONE, SchattenP::INF]);
        assert_eq!(cfg.theta_grid, DEFAULT_GRID);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse(r#"{"schema":"runconfig/1","colour":1}"#).is_err());
        assert!(RunConfig::parse(r#"{"schema":"runconfig/1","tolerances":{"nope":1}}"#).is_err());
        assert!(RunConfig::parse(r#"{"schema":"runconfig/2"}"#).is_err());
    }
}
