//! One SVG panel per layer with nodes colored by community.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{LayerId, MultiLayerNetwork};
use crate::scalar::Scalar;

use super::layout::{fr_layout, LayoutConfig};

/// Qualitative palette; community `c` gets `PALETTE[c % 12]`.
pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78",
];
const UNASSIGNED: &str = "#d9d9d9";
const SIZE: f64 = 600.0;
const MARGIN: f64 = 30.0;
const RADIUS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Circle,
    Square,
    Triangle,
    Diamond,
}

/// Color and marker of a community. Markers only vary once ids exceed the
/// palette, so small partitions are all circles.
pub fn community_style(community: usize, community_count: usize) -> (&'static str, Marker) {
    let color = PALETTE[community % PALETTE.len()];
    if community_count <= PALETTE.len() {
        return (color, Marker::Circle);
    }
    let marker = match (community / PALETTE.len()) % 4 {
        0 => Marker::Circle,
        1 => Marker::Square,
        2 => Marker::Triangle,
        _ => Marker::Diamond,
    };
    (color, marker)
}

fn shape(s: &mut String, marker: Marker, x: f64, y: f64, fill: &str) {
    let r = RADIUS;
    let _ = match marker {
        Marker::Circle => writeln!(s, r##"  <circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{fill}" stroke="#222" stroke-width="0.5"/>"##),
        Marker::Square => writeln!(
            s,
            r##"  <rect x="{:.2}" y="{:.2}" width="{}" height="{}" fill="{fill}" stroke="#222" stroke-width="0.5"/>"##,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        Marker::Triangle => writeln!(
            s,
            r##"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="#222" stroke-width="0.5"/>"##,
            x,
            y - r,
            x - r,
            y + r,
            x + r,
            y + r
        ),
        Marker::Diamond => writeln!(
            s,
            r##"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="#222" stroke-width="0.5"/>"##,
            x,
            y - r,
            x + r,
            y,
            x,
            y + r,
            x - r,
            y
        ),
    };
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders every layer of `net`; `communities` is indexed like
/// `net.nodes()`. Each layer gets its own layout of its intra-layer graph.
pub fn render_layers<T: Scalar>(
    net: &MultiLayerNetwork<T>,
    communities: &[Option<usize>],
    seed: u64,
    layout: &LayoutConfig,
) -> Result<Vec<(LayerId, String)>> {
    if communities.len() != net.node_count() {
        return Err(Error::InvalidInput(format!(
            "{} community labels for {} nodes",
            communities.len(),
            net.node_count()
        )));
    }
    if communities.iter().all(Option::is_none) {
        return Err(Error::InvalidInput("the partition assigns no node to a community".into()));
    }
    let count = communities.iter().flatten().max().map_or(0, |m| m + 1);
    let mut out = Vec::with_capacity(net.layers().len());
    for layer in net.layers() {
        let single = net.induced(std::slice::from_ref(layer))?;
        let global = net.layer_nodes(layer);
        let pos = fr_layout(single.node_count(), single.intra_edges(), seed, layout);
        let extent = pos.iter().flatten().fold(1e-9f64, |m, v| m.max(v.abs()));
        let scale = (SIZE / 2.0 - MARGIN) / extent;
        let to_px = |p: [f64; 2]| (SIZE / 2.0 + p[0] * scale, SIZE / 2.0 - p[1] * scale);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"  <text x="10" y="20" font-family="sans-serif" font-size="14">{}</text>"#, escape(layer.as_str()));
        for e in single.intra_edges() {
            let (x1, y1) = to_px(pos[e.source]);
            let (x2, y2) = to_px(pos[e.target]);
            let _ = writeln!(
                s,
                r##"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#999" stroke-opacity="0.3" stroke-width="0.5"/>"##
            );
        }
        for (local, &g) in global.iter().enumerate() {
            let (x, y) = to_px(pos[local]);
            let (fill, marker) = match communities[g] {
                Some(c) => community_style(c, count),
                None => (UNASSIGNED, Marker::Circle),
            };
            shape(&mut s, marker, x, y, fill);
        }
        s.push_str("</svg>\n");
        out.push((layer.clone(), s));
    }
    Ok(out)
}
