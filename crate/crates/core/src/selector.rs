//! Greedy layer selection.
//!
//! The first layer is the one whose own community structure is strongest.
//! Every later step scores each remaining layer by `1/A + CS`, where `A` is
//! the fraction of incumbent entities the layer covers and `CS` the
//! similarity between its communities and the incumbent ones, and adds the
//! cheapest layer to the incumbent network.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::community::{leiden, LeidenConfig, SupraGraph};
use crate::compare::bidirectional_f;
use crate::error::{Error, Result};
use crate::model::{EntityId, EntityPartition, LayerId, MultiLayerNetwork, Partition, ScoreTable};
use crate::network::build_network;
use crate::pruning::{prune_mln, PruneConfig, PruningReport};
use crate::scalar::{Fraction, Scalar};

fn finite_or_null<T: Scalar, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(v.as_f64())
    } else {
        s.serialize_none()
    }
}

fn null_is_infinite<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> std::result::Result<T, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.map_or(T::infinity(), T::lit))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerCostBreakdown<T: Scalar> {
    pub layer: LayerId,
    pub availability: T,
    pub community_similarity: T,
    /// Infinite (serialized as `null`) when the layer shares no entity with
    /// the incumbent.
    #[serde(serialize_with = "finite_or_null", deserialize_with = "null_is_infinite")]
    pub cost: T,
}

impl<T: Scalar> LayerCostBreakdown<T> {
    pub fn new(layer: LayerId, availability: T, community_similarity: T) -> Self {
        let cost = if availability > T::zero() {
            availability.recip() + community_similarity
        } else {
            T::infinity()
        };
        Self { layer, availability, community_similarity, cost }
    }

    pub fn is_selectable(&self) -> bool {
        self.cost.is_finite()
    }
}

/// `|candidate ∩ incumbent| / |incumbent|`.
pub fn availability_ratio<T: Fraction>(incumbent: &BTreeSet<EntityId>, candidate: &BTreeSet<EntityId>) -> Result<T> {
    if incumbent.is_empty() {
        return Err(Error::InvalidInput("availability needs a non-empty incumbent".into()));
    }
    let shared = incumbent.intersection(candidate).count();
    Ok(T::count(shared) / T::count(incumbent.len()))
}

/// Bidirectional F between entity-level partitions; `0` if they share no
/// entity.
pub fn community_similarity<T: Fraction>(incumbent: &EntityPartition, candidate: &EntityPartition) -> T {
    match bidirectional_f(incumbent, candidate) {
        Ok(f) => f,
        Err(_) => T::zero(),
    }
}

pub fn layer_cost<T: Scalar>(
    layer: &LayerId,
    incumbent: &BTreeSet<EntityId>,
    candidate: &BTreeSet<EntityId>,
    incumbent_partition: &EntityPartition,
    candidate_partition: &EntityPartition,
) -> Result<LayerCostBreakdown<T>> {
    let a = availability_ratio(incumbent, candidate)?;
    let cs = community_similarity(incumbent_partition, candidate_partition);
    Ok(LayerCostBreakdown::new(layer.clone(), a, cs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StoppingMode {
    /// Run until every layer is selected.
    #[default]
    None,
    /// Stop once availability drops.
    Sc1,
    /// Stop once availability drops while similarity rises.
    Sc2,
}

impl FromStr for StoppingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NONE" => Ok(Self::None),
            "SC1" => Ok(Self::Sc1),
            "SC2" => Ok(Self::Sc2),
            _ => Err(Error::InvalidInput(format!("unknown stopping mode {s:?}"))),
        }
    }
}

impl fmt::Display for StoppingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "NONE",
            Self::Sc1 => "SC1",
            Self::Sc2 => "SC2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord<T: Scalar> {
    /// Starts at 1.
    pub iteration: usize,
    pub layer: LayerId,
    /// Absent for the first layer.
    pub cost: Option<LayerCostBreakdown<T>>,
    /// Every candidate evaluated in this iteration, in input order.
    pub candidates: Vec<LayerCostBreakdown<T>>,
    pub modularity: T,
    pub node_count: usize,
    pub edge_count: usize,
    pub partition: Partition<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace<T: Scalar> {
    pub records: Vec<IterationRecord<T>>,
}

impl<T: Scalar> IterationTrace<T> {
    pub fn layers(&self) -> Vec<LayerId> {
        self.records.iter().map(|r| r.layer.clone()).collect()
    }

    pub fn modularities(&self) -> Vec<T> {
        self.records.iter().map(|r| r.modularity).collect()
    }

    /// Index of the highest-modularity iteration (earliest on ties).
    pub fn best_iteration(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, r) in self.records.iter().enumerate() {
            if best.map_or(true, |b| r.modularity > self.records[b].modularity) {
                best = Some(i);
            }
        }
        best
    }

    pub fn last(&self) -> Option<&IterationRecord<T>> {
        self.records.last()
    }
}

/// Compares the last two iterations that carry a cost.
pub fn stopping_condition<T: Scalar>(trace: &IterationTrace<T>, mode: StoppingMode) -> bool {
    let costs: Vec<&LayerCostBreakdown<T>> = trace.records.iter().filter_map(|r| r.cost.as_ref()).collect();
    let [.., prev, last] = costs.as_slice() else {
        return false;
    };
    let dropped = last.availability < prev.availability;
    match mode {
        StoppingMode::None => false,
        StoppingMode::Sc1 => dropped,
        StoppingMode::Sc2 => dropped && last.community_similarity > prev.community_similarity,
    }
}

/// Single-layer partitions and the index of the strongest one.
#[derive(Debug, Clone, PartialEq)]
pub struct CobaltInit<T: Scalar> {
    pub best: usize,
    pub partitions: Vec<Partition<T>>,
}

fn detect<T: Scalar>(net: &MultiLayerNetwork<T>, cfg: &LeidenConfig) -> Result<Partition<T>> {
    Ok(leiden(&SupraGraph::from_network(net), cfg)?.0)
}

/// Runs Leiden on every single-layer network and picks the highest
/// modularity, earliest on ties.
pub fn cobalt_init<T: Scalar>(graphs: &[MultiLayerNetwork<T>], cfg: &LeidenConfig) -> Result<CobaltInit<T>> {
    if graphs.is_empty() {
        return Err(Error::InvalidInput("no layers to select from".into()));
    }
    let partitions: Vec<Partition<T>> = graphs.par_iter().map(|g| detect(g, cfg)).collect::<Result<_>>()?;
    let mut best = 0;
    for (i, p) in partitions.iter().enumerate() {
        if p.quality() > partitions[best].quality() {
            best = i;
        }
    }
    Ok(CobaltInit { best, partitions })
}

/// Orders candidates: lower cost, then higher availability. Equal keys keep
/// input order because the scan takes the first minimum.
fn better<T: Scalar>(a: &LayerCostBreakdown<T>, b: &LayerCostBreakdown<T>) -> bool {
    match a.cost.partial_cmp(&b.cost) {
        Some(Ordering::Less) => true,
        Some(Ordering::Equal) => a.availability > b.availability,
        _ => false,
    }
}

/// Greedy selection over the layers of `network`, which must be the
/// (pruned) network over all layers; `init` must come from its single-layer
/// sub-networks in layer order.
pub fn cobalt_select<T: Scalar>(
    network: &MultiLayerNetwork<T>,
    init: &CobaltInit<T>,
    cfg: &LeidenConfig,
    mode: StoppingMode,
) -> Result<IterationTrace<T>> {
    let layers = network.layers();
    if init.partitions.len() != layers.len() || init.best >= layers.len() {
        return Err(Error::InvalidInput(format!(
            "initialization covers {} layers, network has {}",
            init.partitions.len(),
            layers.len()
        )));
    }
    let entity_sets: Vec<BTreeSet<EntityId>> =
        layers.iter().map(|l| network.layer_entities(l).into_iter().collect()).collect();
    let projections: Vec<EntityPartition> = init.partitions.iter().map(Partition::entity_projection).collect();

    let mut selected = vec![layers[init.best].clone()];
    let mut incumbent_entities = entity_sets[init.best].clone();
    let first = network.induced(&selected)?;
    let mut partition = init.partitions[init.best].clone();
    let mut trace = IterationTrace {
        records: vec![IterationRecord {
            iteration: 1,
            layer: selected[0].clone(),
            cost: None,
            candidates: Vec::new(),
            modularity: partition.quality(),
            node_count: first.node_count(),
            edge_count: first.edge_count(),
            partition: partition.clone(),
        }],
    };
    let mut remaining: Vec<usize> = (0..layers.len()).filter(|&i| i != init.best).collect();

    while !remaining.is_empty() && !stopping_condition(&trace, mode) {
        let incumbent_projection = partition.entity_projection();
        let candidates: Vec<LayerCostBreakdown<T>> = remaining
            .par_iter()
            .map(|&i| {
                layer_cost(&layers[i], &incumbent_entities, &entity_sets[i], &incumbent_projection, &projections[i])
            })
            .collect::<Result<_>>()?;
        let mut pick = 0;
        for k in 1..candidates.len() {
            if better(&candidates[k], &candidates[pick]) {
                pick = k;
            }
        }
        if !candidates[pick].is_selectable() {
            break;
        }
        let chosen = remaining.remove(pick);
        selected.push(layers[chosen].clone());
        incumbent_entities.extend(entity_sets[chosen].iter().cloned());
        let net = network.induced(&selected)?;
        partition = detect(&net, cfg)?;
        trace.records.push(IterationRecord {
            iteration: trace.records.len() + 1,
            layer: layers[chosen].clone(),
            cost: Some(candidates[pick].clone()),
            candidates,
            modularity: partition.quality(),
            node_count: net.node_count(),
            edge_count: net.edge_count(),
            partition: partition.clone(),
        });
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CobaltConfig {
    pub pruning: PruneConfig,
    pub leiden: LeidenConfig,
    pub stopping: StoppingMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CobaltRun<T: Scalar> {
    /// Pruned network over every layer of the table.
    pub network: MultiLayerNetwork<T>,
    pub pruning: PruningReport,
    pub init: CobaltInit<T>,
    pub trace: IterationTrace<T>,
}

/// Single-layer detection plus greedy selection on an already pruned
/// network over all layers.
pub fn select_on_network<T: Scalar>(
    network: &MultiLayerNetwork<T>,
    leiden: &LeidenConfig,
    stopping: StoppingMode,
) -> Result<(CobaltInit<T>, IterationTrace<T>)> {
    leiden.validate()?;
    let singles: Vec<MultiLayerNetwork<T>> =
        network.layers().iter().map(|l| network.induced(std::slice::from_ref(l))).collect::<Result<_>>()?;
    let init = cobalt_init(&singles, leiden)?;
    let trace = cobalt_select(network, &init, leiden, stopping)?;
    Ok((init, trace))
}

/// Builds and prunes the full network, then selects layers.
pub fn run_cobalt<T: Scalar>(table: &ScoreTable<T>, cfg: &CobaltConfig) -> Result<CobaltRun<T>> {
    cfg.leiden.validate()?;
    let (network, pruning) = prune_mln(&build_network(table)?, &cfg.pruning)?;
    let (init, trace) = select_on_network(&network, &cfg.leiden, cfg.stopping)?;
    Ok(CobaltRun { network, pruning, init, trace })
}
