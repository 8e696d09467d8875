//! Planted-community score tables.
//!
//! Each layer assigns every entity a group; its score is the group's center
//! plus Gaussian noise, so entities of one group end up close in z-score and
//! strongly connected in the layer graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::model::{EntityId, LayerId, ScoreTable};

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub entities: usize,
    pub layers: usize,
    /// Groups per layer; entity `i` belongs to group `i % groups`.
    pub groups: usize,
    /// Distance between neighbouring group centers.
    pub separation: f64,
    /// Standard deviation of the per-cell noise.
    pub noise: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self { entities: 200, layers: 3, groups: 4, separation: 10.0, noise: 0.5, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedTable {
    pub table: ScoreTable<f64>,
    /// `labels[layer][entity]`.
    pub labels: Vec<Vec<usize>>,
}

pub fn entity_names(n: usize) -> Vec<EntityId> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| EntityId(format!("p{i:0width$}"))).collect()
}

/// Table with explicit per-layer group labels (`None` leaves a cell missing).
pub fn planted_layers(
    layer_names: &[&str],
    labels: &[Vec<Option<usize>>],
    separation: f64,
    noise: f64,
    seed: u64,
) -> Result<PlantedTable> {
    if layer_names.len() != labels.len() || labels.is_empty() {
        return Err(Error::InvalidInput("one label vector per layer is required".into()));
    }
    let n = labels[0].len();
    if labels.iter().any(|l| l.len() != n) {
        return Err(Error::InvalidInput("label vectors differ in length".into()));
    }
    let normal = Normal::new(0.0, noise).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![Vec::with_capacity(labels.len()); n];
    for layer in labels {
        for (row, g) in rows.iter_mut().zip(layer) {
            row.push(g.map(|g| g as f64 * separation + normal.sample(&mut rng)));
        }
    }
    let table = ScoreTable::new(
        entity_names(n),
        layer_names.iter().map(|&s| LayerId::from(s)).collect(),
        rows,
    )?;
    let labels = labels.iter().map(|l| l.iter().map(|g| g.unwrap_or(usize::MAX)).collect()).collect();
    Ok(PlantedTable { table, labels })
}

/// Complete table where every layer shares the same planted groups.
pub fn planted_table(cfg: &PlantedConfig) -> Result<PlantedTable> {
    if cfg.groups == 0 || cfg.layers == 0 {
        return Err(Error::InvalidInput("need at least one group and one layer".into()));
    }
    let names: Vec<String> = (0..cfg.layers).map(|l| format!("L{l}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let labels: Vec<Vec<Option<usize>>> =
        vec![(0..cfg.entities).map(|i| Some(i % cfg.groups)).collect(); cfg.layers];
    planted_layers(&names, &labels, cfg.separation, cfg.noise, cfg.seed)
}
