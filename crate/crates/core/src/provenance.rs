//! Run configuration and the reproducibility header every output carries.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub top_n: usize,
    pub k: usize,
    pub settling_window: u32,
    pub bin_count: usize,
    pub lookback_days: Option<u32>,
    pub seed: u64,
    pub adopted_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 0.97,
            top_n: 3,
            k: 1,
            settling_window: 60,
            bin_count: 5,
            lookback_days: None,
            seed: 0,
            adopted_threshold: 0.6,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_owned()));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if self.top_n == 0 {
            return bad("top-n must be positive");
        }
        if self.k == 0 {
            return bad("k must be positive");
        }
        if self.settling_window == 0 {
            return bad("settling window must be positive");
        }
        if self.bin_count == 0 {
            return bad("bin count must be positive");
        }
        if !(self.adopted_threshold > 0.0 && self.adopted_threshold <= 1.0) {
            return bad("adopted threshold must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_bytes(name: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            name: name.into(),
            sha256: sha256_hex(bytes),
        }
    }

    /// Digest of a file, labelled by its file name.
    pub fn of_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Ok(Self::of_bytes(name, &bytes))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Header line written first in every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub kind: String,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
}

impl ReportHeader {
    pub fn new(kind: &str, config: &RunConfig, inputs: Vec<InputDigest>) -> Self {
        Self {
            tool: concat!("iot-conflict ", env!("CARGO_PKG_VERSION")).to_owned(),
            kind: kind.to_owned(),
            config: config.clone(),
            inputs,
        }
    }
}
