//! Domain types shared across the pipeline: identifiers, score tables,
//! covariates, multi-layer networks and partitions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Opaque entity (patient) key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub String);

/// Layer (feature / questionnaire) name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayerId(pub String);

macro_rules! string_id {
    ($t:ty) => {
        impl $t {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
        impl From<String> for $t {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}
string_id!(EntityId);
string_id!(LayerId);

/// A single problem found by [`ScoreTable::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    TooSmall { entities: usize, layers: usize },
    EmptyEntityId { row: usize },
    EmptyLayerId { column: usize },
    DuplicateEntity { entity: String },
    DuplicateLayer { layer: String },
    NonFinite { entity: String, layer: String },
    OutOfRange { entity: String, layer: String, value: f64, lo: f64, hi: f64 },
    InvalidRange { layer: String, lo: f64, hi: f64 },
    AllMissing { entity: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooSmall { entities, layers } => write!(
                f,
                "table has {entities} entities and {layers} layers (need >= 2 and >= 1)"
            ),
            Violation::EmptyEntityId { row } => write!(f, "row {row} has an empty entity id"),
            Violation::EmptyLayerId { column } => write!(f, "column {column} has an empty layer name"),
            Violation::DuplicateEntity { entity } => write!(f, "entity `{entity}` appears more than once"),
            Violation::DuplicateLayer { layer } => write!(f, "layer `{layer}` appears more than once"),
            Violation::NonFinite { entity, layer } => {
                write!(f, "cell ({entity}, {layer}) is not a finite number")
            }
            Violation::OutOfRange { entity, layer, value, lo, hi } => write!(
                f,
                "cell ({entity}, {layer}) = {value} is outside the declared range [{lo}, {hi}]"
            ),
            Violation::InvalidRange { layer, lo, hi } => {
                write!(f, "layer `{layer}` declares an empty range [{lo}, {hi}]")
            }
            Violation::AllMissing { entity } => write!(f, "entity `{entity}` is missing in every layer"),
        }
    }
}

/// Entities x layers matrix of scores. `None` is an explicit MISSING cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable<T> {
    entities: Vec<EntityId>,
    layers: Vec<LayerId>,
    cells: Vec<Option<T>>,
    ranges: Vec<Option<(T, T)>>,
}

impl<T: Scalar> ScoreTable<T> {
    /// Builds a table from row-major cells. Only the shape is checked here;
    /// call [`validate`](Self::validate) for the content invariants.
    pub fn new(entities: Vec<EntityId>, layers: Vec<LayerId>, rows: Vec<Vec<Option<T>>>) -> Result<Self> {
        if rows.len() != entities.len() {
            return Err(Error::InvalidInput(format!(
                "{} entity ids but {} rows",
                entities.len(),
                rows.len()
            )));
        }
        let mut cells = Vec::with_capacity(entities.len() * layers.len());
        for (row, entity) in rows.into_iter().zip(&entities) {
            if row.len() != layers.len() {
                return Err(Error::InvalidInput(format!(
                    "row `{entity}` has {} cells, expected {}",
                    row.len(),
                    layers.len()
                )));
            }
            cells.extend(row);
        }
        let ranges = vec![None; layers.len()];
        Ok(Self { entities, layers, cells, ranges })
    }

    /// Declares the admissible score range of a layer.
    pub fn with_range(mut self, layer: &LayerId, lo: T, hi: T) -> Result<Self> {
        let l = self.layer_index(layer)?;
        self.ranges[l] = Some((lo, hi));
        Ok(self)
    }

    pub fn entities(&self) -> &[EntityId] {
        &self.entities
    }

    pub fn layers(&self) -> &[LayerId] {
        &self.layers
    }

    pub fn range(&self, layer: usize) -> Option<(T, T)> {
        self.ranges[layer]
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    #[inline]
    pub fn get(&self, entity: usize, layer: usize) -> Option<T> {
        self.cells[entity * self.layers.len() + layer]
    }

    pub fn layer_index(&self, layer: &LayerId) -> Result<usize> {
        self.layers
            .iter()
            .position(|l| l == layer)
            .ok_or_else(|| Error::UnknownLayer(layer.0.clone()))
    }

    pub fn entity_index(&self, entity: &EntityId) -> Result<usize> {
        self.entities
            .iter()
            .position(|e| e == entity)
            .ok_or_else(|| Error::UnknownEntity(entity.0.clone()))
    }

    pub fn score(&self, entity: &EntityId, layer: &LayerId) -> Result<Option<T>> {
        Ok(self.get(self.entity_index(entity)?, self.layer_index(layer)?))
    }

    /// Present `(entity index, score)` pairs of a layer, in table order.
    pub fn column(&self, layer: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        (0..self.entities.len()).filter_map(move |e| self.get(e, layer).map(|s| (e, s)))
    }

    /// Entities whose cell in `layer` is not MISSING, in table order.
    pub fn layer_node_set(&self, layer: &LayerId) -> Result<Vec<EntityId>> {
        let l = self.layer_index(layer)?;
        Ok(self.column(l).map(|(e, _)| self.entities[e].clone()).collect())
    }

    pub fn missing_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    /// Copy of the table without the given entity rows.
    pub fn without_entities(&self, removed: &HashSet<usize>) -> Self {
        let nl = self.layers.len();
        let mut entities = Vec::new();
        let mut cells = Vec::new();
        for (e, id) in self.entities.iter().enumerate() {
            if removed.contains(&e) {
                continue;
            }
            entities.push(id.clone());
            cells.extend_from_slice(&self.cells[e * nl..(e + 1) * nl]);
        }
        Self { entities, layers: self.layers.clone(), cells, ranges: self.ranges.clone() }
    }

    /// Every invariant breach of the table. Empty iff the table is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.entities.len() < 2 || self.layers.is_empty() {
            out.push(Violation::TooSmall { entities: self.entities.len(), layers: self.layers.len() });
        }
        let mut seen = HashSet::new();
        for (row, e) in self.entities.iter().enumerate() {
            if e.0.is_empty() {
                out.push(Violation::EmptyEntityId { row });
            } else if !seen.insert(e) {
                out.push(Violation::DuplicateEntity { entity: e.0.clone() });
            }
        }
        let mut seen = HashSet::new();
        for (column, l) in self.layers.iter().enumerate() {
            if l.0.is_empty() {
                out.push(Violation::EmptyLayerId { column });
            } else if !seen.insert(l) {
                out.push(Violation::DuplicateLayer { layer: l.0.clone() });
            }
        }
        for (l, range) in self.ranges.iter().enumerate() {
            if let Some((lo, hi)) = range {
                if !(lo <= hi) {
                    out.push(Violation::InvalidRange {
                        layer: self.layers[l].0.clone(),
                        lo: lo.as_f64(),
                        hi: hi.as_f64(),
                    });
                }
            }
        }
        for (e, entity) in self.entities.iter().enumerate() {
            let mut present = 0;
            for (l, layer) in self.layers.iter().enumerate() {
                let Some(v) = self.get(e, l) else { continue };
                present += 1;
                if !v.is_finite() {
                    out.push(Violation::NonFinite { entity: entity.0.clone(), layer: layer.0.clone() });
                } else if let Some((lo, hi)) = self.ranges[l] {
                    if v < lo || v > hi {
                        out.push(Violation::OutOfRange {
                            entity: entity.0.clone(),
                            layer: layer.0.clone(),
                            value: v.as_f64(),
                            lo: lo.as_f64(),
                            hi: hi.as_f64(),
                        });
                    }
                }
            }
            if present == 0 && !self.layers.is_empty() {
                out.push(Violation::AllMissing { entity: entity.0.clone() });
            }
        }
        out
    }

    /// Fails with [`Error::Validation`] unless [`validate`](Self::validate) is clean.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

/// Age and gender per entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covariates {
    pub age: f64,
    pub gender: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CovariateTable {
    rows: BTreeMap<EntityId, Covariates>,
}

impl CovariateTable {
    pub fn new(rows: impl IntoIterator<Item = (EntityId, Covariates)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (id, c) in rows {
            if !c.age.is_finite() || c.age < 0.0 {
                return Err(Error::InvalidInput(format!("entity `{id}` has invalid age {}", c.age)));
            }
            if map.insert(id.clone(), c).is_some() {
                return Err(Error::InvalidInput(format!("duplicate covariate row for `{id}`")));
            }
        }
        Ok(Self { rows: map })
    }

    pub fn get(&self, entity: &EntityId) -> Option<&Covariates> {
        self.rows.get(entity)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct gender codes in sorted order.
    pub fn gender_codes(&self) -> Vec<String> {
        let mut codes: Vec<String> = self.rows.values().map(|c| c.gender.clone()).collect();
        codes.sort();
        codes.dedup();
        codes
    }
}

/// Post-treatment (t1) scores per entity and layer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TargetTable {
    layers: Vec<LayerId>,
    rows: BTreeMap<EntityId, Vec<Option<f64>>>,
}

impl TargetTable {
    pub fn new(layers: Vec<LayerId>, rows: impl IntoIterator<Item = (EntityId, Vec<Option<f64>>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (id, cells) in rows {
            if cells.len() != layers.len() {
                return Err(Error::InvalidInput(format!("target row `{id}` has wrong width")));
            }
            if map.insert(id.clone(), cells).is_some() {
                return Err(Error::InvalidInput(format!("duplicate target row for `{id}`")));
            }
        }
        Ok(Self { layers, rows: map })
    }

    pub fn layers(&self) -> &[LayerId] {
        &self.layers
    }

    pub fn has_layer(&self, layer: &LayerId) -> bool {
        self.layers.contains(layer)
    }

    pub fn get(&self, entity: &EntityId, layer: &LayerId) -> Option<f64> {
        let l = self.layers.iter().position(|x| x == layer)?;
        self.rows.get(entity).and_then(|r| r[l])
    }

    /// Checks that every target layer exists in the score table.
    pub fn check_against<T: Scalar>(&self, table: &ScoreTable<T>) -> Result<()> {
        for l in &self.layers {
            table.layer_index(l)?;
        }
        Ok(())
    }
}

/// A node-layer vertex: the copy of `entity` inside `layer`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeRef {
    pub entity: EntityId,
    pub layer: LayerId,
}

impl NodeRef {
    pub fn new(entity: impl Into<EntityId>, layer: impl Into<LayerId>) -> Self {
        Self { entity: entity.into(), layer: layer.into() }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.entity, self.layer)
    }
}

/// Undirected weighted edge between node indices, stored with `source < target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge<T> {
    pub source: usize,
    pub target: usize,
    pub weight: T,
}

impl<T> Edge<T> {
    pub fn new(a: usize, b: usize, weight: T) -> Self {
        let (source, target) = if a <= b { (a, b) } else { (b, a) };
        Self { source, target, weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Intra,
    Inter,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Intra => "intra",
            EdgeKind::Inter => "inter",
        }
    }
}

/// Node-layer vertices with weighted intra-layer and inter-layer edges.
///
/// Nodes are stored layer by layer in the order layers were added, and each
/// node carries the normalized score it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLayerNetwork<T> {
    layers: Vec<LayerId>,
    nodes: Vec<NodeRef>,
    scores: Vec<T>,
    index: HashMap<NodeRef, usize>,
    intra: Vec<Edge<T>>,
    inter: Vec<Edge<T>>,
}

impl<T: Scalar> Default for MultiLayerNetwork<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> MultiLayerNetwork<T> {
    pub fn new() -> Self {
        Self {
            layers: Vec::new(),
            nodes: Vec::new(),
            scores: Vec::new(),
            index: HashMap::new(),
            intra: Vec::new(),
            inter: Vec::new(),
        }
    }

    /// Assembles a network from raw parts, checking every structural invariant.
    pub fn from_parts(
        layers: Vec<LayerId>,
        nodes: Vec<(NodeRef, T)>,
        intra: Vec<Edge<T>>,
        inter: Vec<Edge<T>>,
    ) -> Result<Self> {
        let mut net = Self::new();
        for l in &layers {
            if net.layers.contains(l) {
                return Err(Error::DuplicateLayer(l.0.clone()));
            }
            net.layers.push(l.clone());
        }
        for (node, score) in nodes {
            if !net.layers.contains(&node.layer) {
                return Err(Error::UnknownLayer(node.layer.0.clone()));
            }
            net.push_node(node, score)?;
        }
        for e in intra {
            net.push_edge(EdgeKind::Intra, e.source, e.target, e.weight)?;
        }
        for e in inter {
            net.push_edge(EdgeKind::Inter, e.source, e.target, e.weight)?;
        }
        Ok(net)
    }

    pub fn layers(&self) -> &[LayerId] {
        &self.layers
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.intra.len() + self.inter.len()
    }

    pub fn score(&self, node: usize) -> T {
        self.scores[node]
    }

    pub fn intra_edges(&self) -> &[Edge<T>] {
        &self.intra
    }

    pub fn inter_edges(&self) -> &[Edge<T>] {
        &self.inter
    }

    pub fn node_index(&self, node: &NodeRef) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn has_layer(&self, layer: &LayerId) -> bool {
        self.layers.contains(layer)
    }

    /// Node indices of one layer, in insertion order.
    pub fn layer_nodes(&self, layer: &LayerId) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| &self.nodes[i].layer == layer).collect()
    }

    /// Entities present in one layer, in insertion order.
    pub fn layer_entities(&self, layer: &LayerId) -> Vec<EntityId> {
        self.nodes.iter().filter(|n| &n.layer == layer).map(|n| n.entity.clone()).collect()
    }

    /// Union of entities over all layers, in first-appearance order.
    pub fn entities(&self) -> Vec<EntityId> {
        let mut seen = HashSet::new();
        self.nodes
            .iter()
            .filter(|n| seen.insert(&n.entity))
            .map(|n| n.entity.clone())
            .collect()
    }

    pub(crate) fn push_layer(&mut self, layer: LayerId) -> Result<()> {
        if self.layers.contains(&layer) {
            return Err(Error::DuplicateLayer(layer.0));
        }
        self.layers.push(layer);
        Ok(())
    }

    pub(crate) fn push_node(&mut self, node: NodeRef, score: T) -> Result<usize> {
        if self.index.contains_key(&node) {
            return Err(Error::InvalidInput(format!("duplicate node {node}")));
        }
        let i = self.nodes.len();
        self.index.insert(node.clone(), i);
        self.nodes.push(node);
        self.scores.push(score);
        Ok(i)
    }

    pub(crate) fn push_edge(&mut self, kind: EdgeKind, a: usize, b: usize, weight: T) -> Result<()> {
        let n = self.nodes.len();
        if a >= n || b >= n {
            return Err(Error::InvalidInput(format!("edge ({a}, {b}) references a missing node")));
        }
        if a == b {
            return Err(Error::InvalidInput(format!("self-loop on {}", self.nodes[a])));
        }
        if !(weight > T::zero()) || !weight.is_finite() {
            return Err(Error::InvalidInput(format!("edge ({a}, {b}) has non-positive weight")));
        }
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        match kind {
            EdgeKind::Intra if na.layer != nb.layer => {
                return Err(Error::InvalidInput(format!("intra edge {na} - {nb} crosses layers")));
            }
            EdgeKind::Inter if na.entity != nb.entity || na.layer == nb.layer => {
                return Err(Error::InvalidInput(format!(
                    "inter edge {na} - {nb} must join one entity across two layers"
                )));
            }
            _ => {}
        }
        let e = Edge::new(a, b, weight);
        match kind {
            EdgeKind::Intra => self.intra.push(e),
            EdgeKind::Inter => self.inter.push(e),
        }
        Ok(())
    }

    /// Replaces the edge sets, keeping nodes. Used after pruning.
    pub(crate) fn with_edges(&self, intra: Vec<Edge<T>>, inter: Vec<Edge<T>>) -> Self {
        Self {
            layers: self.layers.clone(),
            nodes: self.nodes.clone(),
            scores: self.scores.clone(),
            index: self.index.clone(),
            intra,
            inter,
        }
    }

    /// Sub-network on `layers`, with nodes ordered by the given layer order.
    pub fn induced(&self, layers: &[LayerId]) -> Result<Self> {
        let mut out = Self::new();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        for l in layers {
            if !self.has_layer(l) {
                return Err(Error::UnknownLayer(l.0.clone()));
            }
            out.push_layer(l.clone())?;
            for i in self.layer_nodes(l) {
                remap[i] = out.push_node(self.nodes[i].clone(), self.scores[i])?;
            }
        }
        let map_edges = |edges: &[Edge<T>]| -> Vec<Edge<T>> {
            edges
                .iter()
                .filter(|e| remap[e.source] != usize::MAX && remap[e.target] != usize::MAX)
                .map(|e| Edge::new(remap[e.source], remap[e.target], e.weight))
                .collect()
        };
        out.intra = map_edges(&self.intra);
        out.inter = map_edges(&self.inter);
        Ok(out)
    }
}

/// Entity -> community id, used when comparing partitions across layers.
pub type EntityPartition = BTreeMap<EntityId, usize>;

/// Community assignment of node-layer vertices plus its modularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition<T> {
    vertices: Vec<NodeRef>,
    membership: Vec<usize>,
    quality: T,
}

impl<T: Scalar> Partition<T> {
    /// Ids are relabeled densely by first appearance.
    pub fn new(vertices: Vec<NodeRef>, membership: Vec<usize>, quality: T) -> Result<Self> {
        if vertices.len() != membership.len() {
            return Err(Error::InvalidInput(format!(
                "{} vertices but {} community labels",
                vertices.len(),
                membership.len()
            )));
        }
        Ok(Self { vertices, membership: canonical_labels(&membership), quality })
    }

    pub fn vertices(&self) -> &[NodeRef] {
        &self.vertices
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn quality(&self) -> T {
        self.quality
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.membership.iter().max().map_or(0, |m| m + 1)
    }

    pub fn community_of(&self, node: &NodeRef) -> Option<usize> {
        self.vertices.iter().position(|v| v == node).map(|i| self.membership[i])
    }

    /// Entity-level view: each entity takes the community of its vertex in
    /// the latest layer (vertex order is layer-addition order).
    pub fn entity_projection(&self) -> EntityPartition {
        let mut out = EntityPartition::new();
        for (v, &c) in self.vertices.iter().zip(&self.membership) {
            out.insert(v.entity.clone(), c);
        }
        out
    }
}

/// Relabels ids densely from 0 in order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}
