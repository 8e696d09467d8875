//! File formats: CSV tables, JSON network artifacts, GraphML/DOT export,
//! and SVG rendering.

mod artifact;
mod graphml;
mod layout;
mod svg;
mod tables;

pub use artifact::{EdgeRecord, NetworkArtifact, NodeRecord, NETWORK_FORMAT, NETWORK_VERSION};
pub use graphml::{node_communities, read_graphml, write_dot, write_graphml, GraphmlNetwork};
pub use layout::{fr_layout, LayoutConfig};
pub use svg::{community_style, render_layers, Marker, PALETTE};
pub use tables::{read_covariates, read_score_table, read_targets, write_regression_csv, write_score_table};
