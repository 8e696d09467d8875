//! Weighted multi-layer networks from score tables, significance pruning,
//! multilayer Leiden communities and cost-driven layer selection.
//!
//! The numeric core is generic over the float type; the aliases below fix
//! it to `f64`.

pub mod community;
pub mod compare;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod model;
pub mod network;
pub mod pruning;
pub mod scalar;
pub mod selector;
pub mod synthetic;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use model::{EdgeKind, EntityId, EntityPartition, LayerId, NodeRef};
pub use scalar::{Fraction, Scalar};

pub type Table = model::ScoreTable<f64>;
pub type Network = model::MultiLayerNetwork<f64>;
pub type Communities = model::Partition<f64>;
pub type LayerGraph = network::LayerGraph<f64>;
pub type Supra = community::SupraGraph<f64>;
pub type Trace = selector::IterationTrace<f64>;
pub type CostBreakdown = selector::LayerCostBreakdown<f64>;
pub type Run = selector::CobaltRun<f64>;

pub type Table32 = model::ScoreTable<f32>;
pub type Network32 = model::MultiLayerNetwork<f32>;
