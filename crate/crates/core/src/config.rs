//! Run configuration: solver bounds, seeds, metric parameters and the
//! translator, read from a TOML file.
//!
//! ```toml
//! [solver]
//! atom_bound = 22
//!
//! [seeds]
//! generation = 7
//!
//! [translator]
//! kind = "external-process"
//! command = ["python3", "adapter.py", "--echo"]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::DEFAULT_RETRY_CAP;
use crate::metrics::MetricConfig;
use crate::pipeline::TranslatorSpec;
use crate::solver::SolverConfig;

/// Environment variable naming the config file when no path is given.
pub const CONFIG_ENV: &str = "CNLASP_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Seeds {
    pub generation: u64,
    /// Seed for random fact-set sampling in equivalence checks.
    pub sampling: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds {
            generation: 2024,
            sampling: 17,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetSettings {
    pub retry_cap: usize,
    /// Paraphrases per record.
    pub rephrase_k: usize,
}

impl Default for DatasetSettings {
    fn default() -> Self {
        DatasetSettings {
            retry_cap: DEFAULT_RETRY_CAP,
            rephrase_k: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub solver: SolverConfig,
    pub seeds: Seeds,
    pub dataset: DatasetSettings,
    pub metrics: MetricConfig,
    pub translator: TranslatorSpec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            solver: SolverConfig::default(),
            seeds: Seeds::default(),
            dataset: DatasetSettings::default(),
            metrics: MetricConfig::default(),
            translator: TranslatorSpec::BuiltinRetrieval,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Config = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: PathBuf::from("<inline>"),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Config::from_toml(&text).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Loads `path` if given, else the file named by `CNLASP_CONFIG`, else
    /// the defaults.
    pub fn resolve(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            Some(p) => Config::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
                _ => Ok(Config::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.solver.atom_bound == 0 || self.solver.atom_bound > 62 {
            return Err(ConfigError::Invalid(format!(
                "solver.atom_bound must be in 1..=62, got {}",
                self.solver.atom_bound
            )));
        }
        if self.solver.grounding_limit == 0 {
            return Err(ConfigError::Invalid(
                "solver.grounding_limit must be positive".into(),
            ));
        }
        if self.dataset.retry_cap == 0 {
            return Err(ConfigError::Invalid(
                "dataset.retry_cap must be positive".into(),
            ));
        }
        self.metrics
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
