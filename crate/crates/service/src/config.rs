use std::path::PathBuf;

use thiserror::Error;

pub const DEFAULT_PORT: u16 = 8080;
/// Playlist length when a request omits `k`.
pub const DEFAULT_K: usize = 5;
pub const DEFAULT_MAX_K: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub port: u16,
    pub dataset_path: PathBuf,
    pub default_k: usize,
    pub max_k: usize,
    /// Directory holding the built web UI; served at `/` when present.
    pub webui_dir: Option<PathBuf>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("need 1 <= default_k ({default_k}) <= max_k ({max_k})")]
pub struct ConfigError {
    pub default_k: usize,
    pub max_k: usize,
}

impl ServiceConfig {
    pub fn new(dataset_path: impl Into<PathBuf>) -> Self {
        Self {
            port: DEFAULT_PORT,
            dataset_path: dataset_path.into(),
            default_k: DEFAULT_K,
            max_k: DEFAULT_MAX_K,
            webui_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.default_k == 0 || self.default_k > self.max_k {
            return Err(ConfigError {
                default_k: self.default_k,
                max_k: self.max_k,
            });
        }
        Ok(())
    }
}
