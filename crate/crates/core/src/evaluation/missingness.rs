//! Robustness of the selection to entities dropping out of every layer.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EntityId, LayerId, ScoreTable};
use crate::scalar::Scalar;
use crate::selector::{run_cobalt, CobaltConfig, StoppingMode};

/// Fewest present entities a layer may keep for a ratio to count.
pub const MIN_LAYER_ENTITIES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub grid: Vec<f64>,
    pub master_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { grid: (1..=9).map(|i| i as f64 / 10.0).collect(), master_seed: 0 }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.grid.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidInput(format!("missingness ratio {r} is outside (0, 1)")));
        }
        Ok(())
    }
}

/// Seed of the `index`-th grid ratio.
pub fn derive_seed(master: u64, index: usize) -> u64 {
    // splitmix64 step on master + index
    let mut z = master.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Removes `round(ratio * n)` entities chosen uniformly at random from every
/// layer. Returns the reduced table and the removed ids in table order.
pub fn inject_missingness<T: Scalar>(
    table: &ScoreTable<T>,
    ratio: f64,
    seed: u64,
) -> Result<(ScoreTable<T>, Vec<EntityId>)> {
    if table.missing_count() > 0 {
        return Err(Error::InvalidInput(format!(
            "missingness injection needs a complete table, found {} missing cells",
            table.missing_count()
        )));
    }
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::InvalidInput(format!("missingness ratio {ratio} is outside [0, 1)")));
    }
    let n = table.n_entities();
    let k = (ratio * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut removed: Vec<usize> = sample(&mut rng, n, k).into_vec();
    removed.sort_unstable();
    let ids = removed.iter().map(|&e| table.entities()[e].clone()).collect();
    let set: HashSet<usize> = removed.into_iter().collect();
    Ok((table.without_entities(&set), ids))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub ratio: f64,
    pub seed: u64,
    pub removed: Vec<EntityId>,
    /// Selected layers in order.
    pub layers: Vec<LayerId>,
    /// Modularity after every iteration.
    pub modularity: Vec<f64>,
    /// Index into `modularity` of the best iteration.
    pub best_iteration: Option<usize>,
    /// Reason the ratio could not be evaluated.
    pub failure: Option<String>,
}

impl SweepEntry {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn best_modularity(&self) -> Option<f64> {
        self.best_iteration.map(|i| self.modularity[i])
    }

    pub fn final_modularity(&self) -> Option<f64> {
        self.modularity.last().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingnessSweepReport {
    pub master_seed: u64,
    /// The complete table, nothing removed.
    pub reference: SweepEntry,
    pub entries: Vec<SweepEntry>,
}

fn evaluate<T: Scalar>(table: &ScoreTable<T>, ratio: f64, seed: u64, cfg: &CobaltConfig) -> Result<SweepEntry> {
    let (reduced, removed) = inject_missingness(table, ratio, seed)?;
    let mut entry = SweepEntry {
        ratio,
        seed,
        removed,
        layers: Vec::new(),
        modularity: Vec::new(),
        best_iteration: None,
        failure: None,
    };
    if reduced.n_entities() < MIN_LAYER_ENTITIES {
        entry.failure = Some(format!(
            "only {} entities remain, at least {MIN_LAYER_ENTITIES} are required per layer",
            reduced.n_entities()
        ));
        return Ok(entry);
    }
    match run_cobalt(&reduced, &CobaltConfig { stopping: StoppingMode::None, ..*cfg }) {
        Ok(run) => {
            entry.layers = run.trace.layers();
            entry.modularity = run.trace.modularities().into_iter().map(Scalar::as_f64).collect();
            entry.best_iteration = run.trace.best_iteration();
        }
        Err(e) => entry.failure = Some(e.to_string()),
    }
    Ok(entry)
}

/// Runs the full selection (no stopping rule) on the complete table and on
/// one reduced copy per grid ratio. Ratios are independent, each with its
/// own seed derived from the master seed.
pub fn missingness_sweep<T: Scalar>(
    table: &ScoreTable<T>,
    sweep: &SweepConfig,
    cfg: &CobaltConfig,
) -> Result<MissingnessSweepReport> {
    sweep.validate()?;
    if table.missing_count() > 0 {
        return Err(Error::InvalidInput("the sweep needs a complete table".into()));
    }
    let reference = evaluate(table, 0.0, sweep.master_seed, cfg)?;
    if let Some(reason) = &reference.failure {
        return Err(Error::InvalidInput(format!("the complete table cannot be evaluated: {reason}")));
    }
    let entries = sweep
        .grid
        .par_iter()
        .enumerate()
        .map(|(i, &r)| evaluate(table, r, derive_seed(sweep.master_seed, i), cfg))
        .collect::<Result<_>>()?;
    Ok(MissingnessSweepReport { master_seed: sweep.master_seed, reference, entries })
}
