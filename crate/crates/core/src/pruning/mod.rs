//! Maximum likelihood edge filter.
//!
//! Real weights are quantized to integer multiplicities. Under the null
//! model each of the `E` weight units lands on the pair `(i, j)` with
//! probability `k_i k_j / (2 E^2)`, where `k` are the quantized strengths,
//! so an edge's weight is `Binomial(E, p)`. Edges whose upper-tail p-value
//! exceeds `alpha` are removed.

pub mod binomial;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, MultiLayerNetwork};
use crate::network::LayerGraph;
use crate::scalar::Scalar;

pub use binomial::{binomial_pmf, binomial_sf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PruneConfig {
    /// Significance level; edges with a larger p-value are dropped.
    pub alpha: f64,
    /// Weight units per integer count.
    pub quantization: f64,
}

impl Default for PruneConfig {
    fn default() -> Self {
        Self { alpha: 0.05, quantization: 1000.0 }
    }
}

impl PruneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidInput(format!("alpha must be in (0, 1], got {}", self.alpha)));
        }
        if !(self.quantization > 0.0 && self.quantization.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "quantization must be positive, got {}",
                self.quantization
            )));
        }
        Ok(())
    }
}

/// Edge list with integer multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedGraph {
    pub node_count: usize,
    /// `(source, target, count)`; zero-count edges are absent.
    pub edges: Vec<(usize, usize, u64)>,
    /// Position of each surviving edge in the input edge list.
    pub origin: Vec<usize>,
    pub scale: f64,
}

/// Degree sequence and total weight of a quantized graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullModelContext {
    /// `E = (1/2) sum_i k_i`.
    pub total: u64,
    /// Quantized strength of every node.
    pub degrees: Vec<u64>,
    pub scale: f64,
}

pub fn quantize_weights<T: Scalar>(node_count: usize, edges: &[Edge<T>], scale: f64) -> Result<QuantizedGraph> {
    if !(scale > 0.0) {
        return Err(Error::InvalidInput(format!("quantization scale must be positive, got {scale}")));
    }
    let mut out = Vec::with_capacity(edges.len());
    let mut origin = Vec::with_capacity(edges.len());
    let mut total: u64 = 0;
    for (k, e) in edges.iter().enumerate() {
        let q = (e.weight.as_f64() * scale).round();
        if !(q < i64::MAX as f64) {
            return Err(Error::WeightOverflow);
        }
        let q = q as u64;
        if q == 0 {
            continue;
        }
        total = total.checked_add(q).filter(|&t| t <= i64::MAX as u64).ok_or(Error::WeightOverflow)?;
        out.push((e.source, e.target, q));
        origin.push(k);
    }
    Ok(QuantizedGraph { node_count, edges: out, origin, scale })
}

impl QuantizedGraph {
    /// `None` when no edge survived quantization.
    pub fn context(&self) -> Option<NullModelContext> {
        let mut degrees = vec![0u64; self.node_count];
        let mut total = 0u64;
        for &(a, b, w) in &self.edges {
            degrees[a] += w;
            degrees[b] += w;
            total += w;
        }
        (total > 0).then_some(NullModelContext { total, degrees, scale: self.scale })
    }
}

fn null_probability(k_i: u64, k_j: u64, total: u64) -> Result<f64> {
    let e = total as f64;
    let p = (k_i as f64) * (k_j as f64) / (2.0 * e * e);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(p)
}

/// `Pr(sigma_ij = m | k_i, k_j, E) = C(E, m) p^m (1 - p)^(E - m)`.
pub fn edge_null_probability(m: u64, k_i: u64, k_j: u64, total: u64) -> Result<f64> {
    if total == 0 || m > total {
        return Err(Error::InvalidInput(format!("multiplicity {m} outside [0, {total}]")));
    }
    let p = null_probability(k_i, k_j, total)?;
    Ok(binomial_pmf(m, total, p))
}

/// Upper tail `sum_{m >= w} Pr(sigma_ij = m | k_i, k_j, E)`.
pub fn edge_p_value(w: u64, k_i: u64, k_j: u64, total: u64) -> Result<f64> {
    if w == 0 || w > total {
        return Err(Error::InvalidInput(format!("edge weight {w} outside [1, {total}]")));
    }
    let p = null_probability(k_i, k_j, total)?;
    binomial_sf(w, total, p)
        .ok_or_else(|| Error::Numerical(format!("binomial tail did not converge (w={w}, E={total}, p={p})")))
}

/// Result of filtering one edge population.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneOutcome<T> {
    /// Surviving edges with their original weights.
    pub kept: Vec<Edge<T>>,
    /// p-value of every input edge; `1.0` for edges that quantize to zero.
    pub p_values: Vec<f64>,
    pub context: Option<NullModelContext>,
}

/// Filters one edge population against its own null model.
pub fn prune_edges<T: Scalar>(node_count: usize, edges: &[Edge<T>], cfg: &PruneConfig) -> Result<PruneOutcome<T>> {
    cfg.validate()?;
    let q = quantize_weights(node_count, edges, cfg.quantization)?;
    let context = q.context();
    let mut out = match &context {
        Some(ctx) => prune_with_context(edges, &q, ctx, cfg.alpha)?,
        None => PruneOutcome { kept: Vec::new(), p_values: vec![1.0; edges.len()], context: None },
    };
    out.context = context;
    Ok(out)
}

/// Filters with a fixed null context instead of one derived from `edges`.
pub fn prune_with_context<T: Scalar>(
    edges: &[Edge<T>],
    quantized: &QuantizedGraph,
    ctx: &NullModelContext,
    alpha: f64,
) -> Result<PruneOutcome<T>> {
    let pv: Vec<f64> = quantized
        .edges
        .par_iter()
        .map(|&(a, b, w)| edge_p_value(w, ctx.degrees[a], ctx.degrees[b], ctx.total))
        .collect::<Result<_>>()?;
    let mut p_values = vec![1.0; edges.len()];
    let mut kept = Vec::new();
    for (&k, &p) in quantized.origin.iter().zip(&pv) {
        p_values[k] = p;
        if p <= alpha {
            kept.push(edges[k]);
        }
    }
    Ok(PruneOutcome { kept, p_values, context: Some(ctx.clone()) })
}

/// Pruned copy of a single-layer graph; the node set is unchanged.
pub fn prune_graph<T: Scalar>(graph: &LayerGraph<T>, cfg: &PruneConfig) -> Result<LayerGraph<T>> {
    let out = prune_edges(graph.node_count(), &graph.edges, cfg)?;
    Ok(LayerGraph { column: graph.column.clone(), edges: out.kept })
}

/// Edge counts before and after filtering one population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniverseStats {
    /// Layer name, or `a|b` for the couplings between two layers.
    pub universe: String,
    pub edges_before: usize,
    pub edges_after: usize,
    pub total_weight_units: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruningReport {
    pub alpha: f64,
    pub quantization: f64,
    /// How node degrees in the null model are measured.
    pub degree_convention: String,
    pub universes: Vec<UniverseStats>,
}

/// Prunes intra edges per layer and inter edges per unordered layer pair,
/// each population against its own null model.
pub fn prune_mln<T: Scalar>(
    mln: &MultiLayerNetwork<T>,
    cfg: &PruneConfig,
) -> Result<(MultiLayerNetwork<T>, PruningReport)> {
    cfg.validate()?;
    let layer_of: Vec<usize> = mln
        .nodes()
        .iter()
        .map(|n| mln.layers().iter().position(|l| *l == n.layer).expect("node layer is registered"))
        .collect();

    let mut intra_groups: BTreeMap<usize, Vec<Edge<T>>> = BTreeMap::new();
    for e in mln.intra_edges() {
        intra_groups.entry(layer_of[e.source]).or_default().push(*e);
    }
    let mut inter_groups: BTreeMap<(usize, usize), Vec<Edge<T>>> = BTreeMap::new();
    for e in mln.inter_edges() {
        let (a, b) = (layer_of[e.source], layer_of[e.target]);
        inter_groups.entry((a.min(b), a.max(b))).or_default().push(*e);
    }

    let mut universes = Vec::new();
    let mut run = |name: String, edges: &[Edge<T>]| -> Result<Vec<Edge<T>>> {
        let out = prune_edges(mln.node_count(), edges, cfg)?;
        universes.push(UniverseStats {
            universe: name,
            edges_before: edges.len(),
            edges_after: out.kept.len(),
            total_weight_units: out.context.as_ref().map_or(0, |c| c.total),
        });
        Ok(out.kept)
    };

    let mut intra = Vec::new();
    for (l, edges) in &intra_groups {
        intra.extend(run(mln.layers()[*l].0.clone(), edges)?);
    }
    let mut inter = Vec::new();
    for ((a, b), edges) in &inter_groups {
        let name = format!("{}|{}", mln.layers()[*a], mln.layers()[*b]);
        inter.extend(run(name, edges)?);
    }
    let report = PruningReport {
        alpha: cfg.alpha,
        quantization: cfg.quantization,
        degree_convention: "quantized strength".into(),
        universes,
    };
    Ok((mln.with_edges(intra, inter), report))
}
