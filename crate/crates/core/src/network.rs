//! Turns a score table into weighted single-layer graphs and grows
//! multi-layer networks from them.
//!
//! Scores are z-normalized per layer over the present entities. Two
//! vertices are joined with weight `1 / |s_i - s_j|`; the same formula
//! couples an entity's vertices across layers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeKind, EntityId, LayerId, MultiLayerNetwork, NodeRef, ScoreTable};
use crate::scalar::Scalar;

/// Differences below this are treated as identical scores.
pub const WEIGHT_EPSILON: f64 = 1e-9;
/// Weight assigned to (near) ties, `1 / WEIGHT_EPSILON`.
pub const MAX_WEIGHT: f64 = 1e9;

/// One layer's z-scores over its present entities.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedColumn<T> {
    pub layer: LayerId,
    pub entities: Vec<EntityId>,
    pub values: Vec<T>,
    pub mean: T,
    /// Population standard deviation.
    pub std: T,
}

pub fn normalize_layer<T: Scalar>(table: &ScoreTable<T>, layer: &LayerId) -> Result<NormalizedColumn<T>> {
    let l = table.layer_index(layer)?;
    let (idx, raw): (Vec<usize>, Vec<T>) = table.column(l).unzip();
    if raw.len() < 2 {
        return Err(Error::InsufficientData { layer: layer.0.clone(), present: raw.len() });
    }
    let n = T::from_count(raw.len());
    let mean = raw.iter().copied().sum::<T>() / n;
    let var = raw.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n;
    let std = var.sqrt();
    if !(std > T::zero()) {
        return Err(Error::DegenerateLayer { layer: layer.0.clone() });
    }
    Ok(NormalizedColumn {
        layer: layer.clone(),
        entities: idx.iter().map(|&e| table.entities()[e].clone()).collect(),
        values: raw.iter().map(|&x| (x - mean) / std).collect(),
        mean,
        std,
    })
}

/// `1 / |s_i - s_j|`, capped at `1 / WEIGHT_EPSILON` for (near) ties.
#[inline]
pub fn intra_layer_weight<T: Scalar>(s_i: T, s_j: T) -> T {
    let eps = T::lit(WEIGHT_EPSILON);
    let d = (s_i - s_j).abs();
    if d < eps {
        T::lit(MAX_WEIGHT)
    } else {
        d.recip()
    }
}

/// Coupling weight between one entity's normalized scores in two layers.
#[inline]
pub fn inter_layer_weight<T: Scalar>(s_alpha: T, s_beta: T) -> T {
    intra_layer_weight(s_alpha, s_beta)
}

/// Complete weighted graph over the present entities of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGraph<T> {
    pub column: NormalizedColumn<T>,
    /// Edges over indices into `column.entities`.
    pub edges: Vec<Edge<T>>,
}

impl<T: Scalar> LayerGraph<T> {
    pub fn layer(&self) -> &LayerId {
        &self.column.layer
    }

    pub fn node_count(&self) -> usize {
        self.column.entities.len()
    }

    pub fn entities(&self) -> &[EntityId] {
        &self.column.entities
    }

    /// The graph as a one-layer network.
    pub fn to_network(&self) -> MultiLayerNetwork<T> {
        extend_with_graph(&MultiLayerNetwork::new(), self).expect("a fresh network has no layers")
    }
}

pub fn build_layer_graph<T: Scalar>(table: &ScoreTable<T>, layer: &LayerId) -> Result<LayerGraph<T>> {
    let column = normalize_layer(table, layer)?;
    let n = column.values.len();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(Edge::new(i, j, intra_layer_weight(column.values[i], column.values[j])));
        }
    }
    Ok(LayerGraph { column, edges })
}

/// Builds every layer graph of the table, in table order.
pub fn build_all_layer_graphs<T: Scalar>(table: &ScoreTable<T>) -> Result<Vec<LayerGraph<T>>> {
    table.layers().par_iter().map(|l| build_layer_graph(table, l)).collect()
}

/// Adds `layer` from the table: its complete graph plus a coupling edge from
/// each of its entities to the same entity in every existing layer.
pub fn extend_mln<T: Scalar>(
    mln: &MultiLayerNetwork<T>,
    table: &ScoreTable<T>,
    layer: &LayerId,
) -> Result<MultiLayerNetwork<T>> {
    if mln.has_layer(layer) {
        return Err(Error::DuplicateLayer(layer.0.clone()));
    }
    extend_with_graph(mln, &build_layer_graph(table, layer)?)
}

/// As [`extend_mln`], from an already built (possibly pruned) layer graph.
pub fn extend_with_graph<T: Scalar>(
    mln: &MultiLayerNetwork<T>,
    graph: &LayerGraph<T>,
) -> Result<MultiLayerNetwork<T>> {
    let layer = graph.layer().clone();
    let mut out = mln.clone();
    out.push_layer(layer.clone())?;
    let existing: Vec<LayerId> = mln.layers().to_vec();

    let mut local = Vec::with_capacity(graph.node_count());
    for (entity, &score) in graph.column.entities.iter().zip(&graph.column.values) {
        local.push(out.push_node(NodeRef { entity: entity.clone(), layer: layer.clone() }, score)?);
    }
    for e in &graph.edges {
        out.push_edge(EdgeKind::Intra, local[e.source], local[e.target], e.weight)?;
    }
    for (k, entity) in graph.column.entities.iter().enumerate() {
        for other in &existing {
            let key = NodeRef { entity: entity.clone(), layer: other.clone() };
            if let Some(j) = mln.node_index(&key) {
                let w = inter_layer_weight(mln.score(j), graph.column.values[k]);
                out.push_edge(EdgeKind::Inter, j, local[k], w)?;
            }
        }
    }
    Ok(out)
}

/// Unpruned network over all layers of the table, in table order.
pub fn build_network<T: Scalar>(table: &ScoreTable<T>) -> Result<MultiLayerNetwork<T>> {
    let graphs = build_all_layer_graphs(table)?;
    graphs.iter().try_fold(MultiLayerNetwork::new(), |net, g| extend_with_graph(&net, g))
}
