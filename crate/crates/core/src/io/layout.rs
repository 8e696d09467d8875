//! Fruchterman-Reingold force-directed layout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::Edge;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutConfig {
    pub iterations: usize,
    /// Starting temperature as a fraction of the unit frame.
    pub initial_temperature: f64,
    /// Cap on a normalized edge weight's pull.
    pub max_weight_factor: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self { iterations: 500, initial_temperature: 0.1, max_weight_factor: 10.0 }
    }
}

/// Positions of `n` nodes, centered on their centroid. Attraction along an
/// edge is `w d^2 / k` with `w` the weight relative to the mean weight
/// (capped), repulsion between every pair is `k^2 / d`, and the step length
/// is bounded by a temperature that cools linearly to zero.
pub fn fr_layout<T: Scalar>(n: usize, edges: &[Edge<T>], seed: u64, cfg: &LayoutConfig) -> Vec<[f64; 2]> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)]).collect();
    let k = (1.0 / n as f64).sqrt();
    let mean_w = if edges.is_empty() {
        1.0
    } else {
        edges.iter().map(|e| e.weight.as_f64()).sum::<f64>() / edges.len() as f64
    };
    let pull: Vec<f64> = edges
        .iter()
        .map(|e| (e.weight.as_f64() / mean_w).min(cfg.max_weight_factor))
        .collect();

    let mut disp = vec![[0.0f64; 2]; n];
    for it in 0..cfg.iterations {
        let temperature = cfg.initial_temperature * (1.0 - it as f64 / cfg.iterations as f64);
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for i in 0..n {
            for j in i + 1..n {
                let mut dx = pos[i][0] - pos[j][0];
                let mut dy = pos[i][1] - pos[j][1];
                let mut d = (dx * dx + dy * dy).sqrt();
                if d < 1e-9 {
                    // coincident nodes: push apart along a fixed direction
                    let a = (i * 31 + j * 17) as f64;
                    dx = a.cos() * 1e-6;
                    dy = a.sin() * 1e-6;
                    d = 1e-6;
                }
                let f = k * k / d;
                let (ux, uy) = (dx / d * f, dy / d * f);
                disp[i][0] += ux;
                disp[i][1] += uy;
                disp[j][0] -= ux;
                disp[j][1] -= uy;
            }
        }
        for (e, &w) in edges.iter().zip(&pull) {
            let (a, b) = (e.source, e.target);
            let dx = pos[a][0] - pos[b][0];
            let dy = pos[a][1] - pos[b][1];
            let d = (dx * dx + dy * dy).sqrt();
            if d < 1e-12 {
                continue;
            }
            let f = w * d * d / k;
            let (ux, uy) = (dx / d * f, dy / d * f);
            disp[a][0] -= ux;
            disp[a][1] -= uy;
            disp[b][0] += ux;
            disp[b][1] += uy;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(temperature);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
    }
    let cx = pos.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let cy = pos.iter().map(|p| p[1]).sum::<f64>() / n as f64;
    pos.iter().map(|p| [p[0] - cx, p[1] - cy]).collect()
}
