//! Self-describing JSON form of a (pruned) multi-layer network.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeKind, EntityId, LayerId, MultiLayerNetwork, NodeRef};
use crate::pruning::PruningReport;
use crate::scalar::Scalar;

pub const NETWORK_FORMAT: &str = "cobalt-network";
pub const NETWORK_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub entity: EntityId,
    pub layer: LayerId,
    /// Normalized score.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkArtifact {
    pub format: String,
    pub version: u32,
    pub layers: Vec<LayerId>,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pruning: Option<PruningReport>,
}

impl NetworkArtifact {
    pub fn from_network<T: Scalar>(net: &MultiLayerNetwork<T>, pruning: Option<PruningReport>) -> Self {
        let nodes = net
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| NodeRecord { entity: n.entity.clone(), layer: n.layer.clone(), score: net.score(i).as_f64() })
            .collect();
        let record = |kind: EdgeKind| {
            move |e: &Edge<T>| EdgeRecord { source: e.source, target: e.target, weight: e.weight.as_f64(), kind }
        };
        let edges = net
            .intra_edges()
            .iter()
            .map(record(EdgeKind::Intra))
            .chain(net.inter_edges().iter().map(record(EdgeKind::Inter)))
            .collect();
        Self {
            format: NETWORK_FORMAT.into(),
            version: NETWORK_VERSION,
            layers: net.layers().to_vec(),
            nodes,
            edges,
            pruning,
        }
    }

    pub fn to_network<T: Scalar>(&self) -> Result<MultiLayerNetwork<T>> {
        if self.format != NETWORK_FORMAT || self.version != NETWORK_VERSION {
            return Err(Error::InvalidInput(format!(
                "expected a {NETWORK_FORMAT} v{NETWORK_VERSION} file, found {} v{}",
                self.format, self.version
            )));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|n| (NodeRef { entity: n.entity.clone(), layer: n.layer.clone() }, T::lit(n.score)))
            .collect();
        let (mut intra, mut inter) = (Vec::new(), Vec::new());
        for e in &self.edges {
            let edge = Edge::new(e.source, e.target, T::lit(e.weight));
            match e.kind {
                EdgeKind::Intra => intra.push(edge),
                EdgeKind::Inter => inter.push(edge),
            }
        }
        MultiLayerNetwork::from_parts(self.layers.clone(), nodes, intra, inter)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
