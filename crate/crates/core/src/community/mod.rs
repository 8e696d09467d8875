//! Community detection on single- and multi-layer networks.

mod leiden;
mod modularity;
mod supra;

pub use leiden::{leiden, leiden_with_trace, split_disconnected, LeidenConfig, LeidenRun};
pub use modularity::multislice_modularity;
pub use supra::SupraGraph;

use crate::model::Partition;
use crate::scalar::Scalar;

/// Relabels communities densely in order of first appearance.
pub fn canonicalize<T: Scalar>(partition: &Partition<T>) -> Partition<T> {
    Partition::new(partition.vertices().to_vec(), partition.membership().to_vec(), partition.quality())
        .expect("lengths already match")
}
