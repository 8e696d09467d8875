//! Pipeline configuration, read from a JSON file. Every field has a default.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::community::LeidenConfig;
use crate::error::{Error, Result};
use crate::evaluation::{RegressionConfig, SweepConfig};
use crate::io::LayoutConfig;
use crate::pruning::PruneConfig;
use crate::selector::{CobaltConfig, StoppingMode};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectorConfig {
    pub stopping: StoppingMode,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub pruning: PruneConfig,
    pub leiden: LeidenConfig,
    pub selector: SelectorConfig,
    pub sweep: SweepConfig,
    pub regression: RegressionConfig,
    pub layout: LayoutConfig,
}

impl PipelineConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.pruning.validate()?;
        self.leiden.validate()?;
        self.sweep.validate()?;
        self.regression.validate()?;
        if self.layout.iterations == 0 || !(self.layout.initial_temperature > 0.0) {
            return Err(Error::InvalidInput("layout needs iterations > 0 and a positive temperature".into()));
        }
        Ok(())
    }

    /// Overrides every seed; sweep and regression seeds follow the master.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.leiden.seed = seed;
        self.sweep.master_seed = seed;
        self.regression.seed = seed;
        self
    }

    pub fn cobalt(&self) -> CobaltConfig {
        CobaltConfig { pruning: self.pruning, leiden: self.leiden, stopping: self.selector.stopping }
    }
}
