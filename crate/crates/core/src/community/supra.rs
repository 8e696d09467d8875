use crate::error::{Error, Result};
use crate::model::{Edge, LayerId, MultiLayerNetwork, NodeRef};
use crate::network::LayerGraph;
use crate::scalar::Scalar;

/// Symmetric adjacency over node-layer vertices combining intra-layer
/// weights and inter-layer couplings, with the per-layer strengths needed
/// by the multislice null model.
#[derive(Debug, Clone, PartialEq)]
pub struct SupraGraph<T> {
    vertices: Vec<NodeRef>,
    layers: Vec<LayerId>,
    layer_of: Vec<usize>,
    adjacency: Vec<Vec<(usize, T)>>,
    intra_strength: Vec<T>,
    two_m: Vec<T>,
    two_mu: T,
}

impl<T: Scalar> SupraGraph<T> {
    /// Validates edge placement: intra edges stay inside a layer, couplings
    /// join one entity across two layers, weights are non-negative.
    pub fn from_edges(vertices: Vec<NodeRef>, intra: &[Edge<T>], coupling: &[Edge<T>]) -> Result<Self> {
        let mut layers: Vec<LayerId> = Vec::new();
        let layer_of: Vec<usize> = vertices
            .iter()
            .map(|v| match layers.iter().position(|l| *l == v.layer) {
                Some(i) => i,
                None => {
                    layers.push(v.layer.clone());
                    layers.len() - 1
                }
            })
            .collect();
        let n = vertices.len();
        let mut adjacency: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        let mut intra_strength = vec![T::zero(); n];
        let mut two_m = vec![T::zero(); layers.len()];
        let mut two_mu = T::zero();

        let check = |e: &Edge<T>| -> Result<()> {
            if e.source >= n || e.target >= n || e.source == e.target {
                return Err(Error::InvalidInput(format!("bad edge ({}, {})", e.source, e.target)));
            }
            if !(e.weight >= T::zero()) || !e.weight.is_finite() {
                return Err(Error::InvalidInput(format!("edge ({}, {}) has a negative weight", e.source, e.target)));
            }
            Ok(())
        };
        for e in intra {
            check(e)?;
            if layer_of[e.source] != layer_of[e.target] {
                return Err(Error::InvalidInput(format!(
                    "intra edge {} - {} crosses layers",
                    vertices[e.source], vertices[e.target]
                )));
            }
            adjacency[e.source].push((e.target, e.weight));
            adjacency[e.target].push((e.source, e.weight));
            intra_strength[e.source] = intra_strength[e.source] + e.weight;
            intra_strength[e.target] = intra_strength[e.target] + e.weight;
            let l = layer_of[e.source];
            two_m[l] = two_m[l] + e.weight + e.weight;
        }
        two_mu = two_m.iter().fold(two_mu, |acc, &x| acc + x);
        for e in coupling {
            check(e)?;
            let (a, b) = (&vertices[e.source], &vertices[e.target]);
            if a.entity != b.entity || layer_of[e.source] == layer_of[e.target] {
                return Err(Error::InvalidInput(format!("coupling {a} - {b} must join one entity across layers")));
            }
            adjacency[e.source].push((e.target, e.weight));
            adjacency[e.target].push((e.source, e.weight));
            two_mu = two_mu + e.weight + e.weight;
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(u, _)| u);
            // merge parallel edges
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
            for &(u, w) in row.iter() {
                match merged.last_mut() {
                    Some((last, acc)) if *last == u => *acc = *acc + w,
                    _ => merged.push((u, w)),
                }
            }
            *row = merged;
        }
        Ok(Self { vertices, layers, layer_of, adjacency, intra_strength, two_m, two_mu })
    }

    pub fn from_network(net: &MultiLayerNetwork<T>) -> Self {
        Self::from_edges(net.nodes().to_vec(), net.intra_edges(), net.inter_edges())
            .expect("network invariants imply a valid supra-graph")
    }

    pub fn from_layer_graph(graph: &LayerGraph<T>) -> Self {
        let vertices = graph
            .entities()
            .iter()
            .map(|e| NodeRef { entity: e.clone(), layer: graph.layer().clone() })
            .collect();
        Self::from_edges(vertices, &graph.edges, &[]).expect("layer graph edges are valid")
    }

    /// Single-layer graph on vertices `v0..v{n-1}` of layer `L`.
    pub fn single_layer(n: usize, edges: &[Edge<T>]) -> Result<Self> {
        let vertices = (0..n).map(|i| NodeRef::new(format!("v{i}"), "L")).collect();
        Self::from_edges(vertices, edges, &[])
    }

    pub fn vertices(&self) -> &[NodeRef] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn layers(&self) -> &[LayerId] {
        &self.layers
    }

    /// Layer index of each vertex.
    pub fn layer_of(&self) -> &[usize] {
        &self.layer_of
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, T)] {
        &self.adjacency[v]
    }

    /// Intra-layer strength `k_{i alpha}`.
    pub fn intra_strength(&self, v: usize) -> T {
        self.intra_strength[v]
    }

    /// `2 m_alpha` for each layer.
    pub fn two_m(&self) -> &[T] {
        &self.two_m
    }

    /// Total intra plus coupling weight, each edge counted from both ends.
    pub fn two_mu(&self) -> T {
        self.two_mu
    }
}
