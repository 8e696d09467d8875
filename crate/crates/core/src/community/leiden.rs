//! Leiden optimisation of multislice modularity.
//!
//! Each iteration runs fast local moving, refines every community by
//! randomised merging of well-connected singletons, aggregates the refined
//! communities and repeats on the aggregate until local moving leaves every
//! aggregate node in its own community. Aggregate nodes keep one strength
//! per layer so the null model stays layer-local at every level.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{canonical_labels, Partition};
use crate::scalar::Scalar;

use super::{multislice_modularity, SupraGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeidenConfig {
    /// Resolution of the null-model term.
    pub gamma: f64,
    /// Randomness of the refinement merge; `0` makes it greedy.
    pub theta: f64,
    pub seed: u64,
    /// Upper bound on full Leiden iterations.
    pub max_passes: usize,
}

impl Default for LeidenConfig {
    fn default() -> Self {
        Self { gamma: 1.0, theta: 0.01, seed: 0, max_passes: 20 }
    }
}

impl LeidenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidInput(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidInput(format!("theta must be non-negative, got {}", self.theta)));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidInput("max_passes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Partition plus the modularity after every accepted pass.
#[derive(Debug, Clone, PartialEq)]
pub struct LeidenRun<T> {
    pub partition: Partition<T>,
    pub pass_qualities: Vec<T>,
}

/// Runs Leiden and returns the partition with its modularity.
pub fn leiden<T: Scalar>(supra: &SupraGraph<T>, cfg: &LeidenConfig) -> Result<(Partition<T>, T)> {
    let run = leiden_with_trace(supra, cfg)?;
    let q = run.partition.quality();
    Ok((run.partition, q))
}

pub fn leiden_with_trace<T: Scalar>(supra: &SupraGraph<T>, cfg: &LeidenConfig) -> Result<LeidenRun<T>> {
    cfg.validate()?;
    let n = supra.len();
    if n == 0 {
        return Err(Error::InvalidInput("Leiden needs at least one vertex".into()));
    }
    let gamma = T::lit(cfg.gamma);
    if !(supra.two_mu() > T::zero()) {
        let partition = Partition::new(supra.vertices().to_vec(), (0..n).collect(), T::zero())?;
        return Ok(LeidenRun { partition, pass_qualities: vec![T::zero()] });
    }

    let ctx = Context::new(supra, cfg);
    let base = Level::from_supra(supra);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut membership: Vec<usize> = (0..n).collect();
    let mut best = multislice_modularity(supra, &membership, gamma)?;
    let mut pass_qualities = Vec::new();
    for _ in 0..cfg.max_passes {
        let candidate = canonical_labels(&split_disconnected(supra, &iterate(&base, &membership, &ctx, &mut rng)));
        let q = multislice_modularity(supra, &candidate, gamma)?;
        let tol = T::lit(1e-12) * (T::one() + best.abs());
        if q > best + tol {
            membership = candidate;
            best = q;
            pass_qualities.push(q);
        } else {
            break;
        }
    }
    if pass_qualities.is_empty() {
        pass_qualities.push(best);
    }
    let partition = Partition::new(supra.vertices().to_vec(), membership, best)?;
    Ok(LeidenRun { partition, pass_qualities })
}

/// Splits every community into its connected components in the supra-graph.
/// Splitting an edge-free cut never lowers modularity.
pub fn split_disconnected<T: Scalar>(supra: &SupraGraph<T>, membership: &[usize]) -> Vec<usize> {
    let n = supra.len();
    let mut out = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if out[s] != usize::MAX {
            continue;
        }
        out[s] = next;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &(u, w) in supra.neighbors(v) {
                if out[u] == usize::MAX && membership[u] == membership[s] && w > T::zero() {
                    out[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    out
}

struct Context<T> {
    layers: usize,
    /// `1 / 2m_alpha`, zero for layers without intra weight.
    inv_two_m: Vec<T>,
    gamma: T,
    two_mu: T,
    theta: f64,
}

impl<T: Scalar> Context<T> {
    fn new(supra: &SupraGraph<T>, cfg: &LeidenConfig) -> Self {
        Self {
            layers: supra.layers().len(),
            inv_two_m: supra
                .two_m()
                .iter()
                .map(|&m| if m > T::zero() { m.recip() } else { T::zero() })
                .collect(),
            gamma: T::lit(cfg.gamma),
            two_mu: supra.two_mu(),
            theta: cfg.theta,
        }
    }

    /// `gamma * sum_alpha a_alpha b_alpha / 2m_alpha`.
    #[inline]
    fn null(&self, a: &[T], b: &[T]) -> T {
        let mut s = T::zero();
        for l in 0..self.layers {
            s = s + a[l] * b[l] * self.inv_two_m[l];
        }
        self.gamma * s
    }
}

/// One aggregation level.
#[derive(Clone)]
struct Level<T> {
    adj: Vec<Vec<(usize, T)>>,
    /// Internal weight of each aggregate node.
    self_w: Vec<T>,
    /// Per-layer strengths, `n * layers`.
    deg: Vec<T>,
    layers: usize,
}

impl<T: Scalar> Level<T> {
    fn from_supra(supra: &SupraGraph<T>) -> Self {
        let n = supra.len();
        let layers = supra.layers().len();
        let mut deg = vec![T::zero(); n * layers];
        for v in 0..n {
            deg[v * layers + supra.layer_of()[v]] = supra.intra_strength(v);
        }
        Self {
            adj: (0..n).map(|v| supra.neighbors(v).to_vec()).collect(),
            self_w: vec![T::zero(); n],
            deg,
            layers,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    fn deg(&self, v: usize) -> &[T] {
        &self.deg[v * self.layers..(v + 1) * self.layers]
    }

    /// Collapses nodes with equal `labels` (dense ids) into single nodes.
    fn aggregate(&self, labels: &[usize]) -> Self {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let nl = self.layers;
        let mut deg = vec![T::zero(); k * nl];
        let mut self_w = vec![T::zero(); k];
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); k];
        for v in 0..self.len() {
            let a = labels[v];
            for l in 0..nl {
                deg[a * nl + l] = deg[a * nl + l] + self.deg[v * nl + l];
            }
            self_w[a] = self_w[a] + self.self_w[v];
            for &(u, w) in &self.adj[v] {
                let b = labels[u];
                if a == b {
                    self_w[a] = self_w[a] + w;
                } else {
                    rows[a].push((b, w));
                }
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(u, _)| u);
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
            for &(u, w) in row.iter() {
                match merged.last_mut() {
                    Some((last, acc)) if *last == u => *acc = *acc + w,
                    _ => merged.push((u, w)),
                }
            }
            *row = merged;
        }
        Self { adj: rows, self_w, deg, layers: nl }
    }
}

fn distinct(labels: &[usize]) -> usize {
    let mut seen = vec![false; labels.len()];
    let mut count = 0;
    for &c in labels {
        if !seen[c] {
            seen[c] = true;
            count += 1;
        }
    }
    count
}

/// One full Leiden iteration starting from `initial` on the base graph.
fn iterate<T: Scalar>(base: &Level<T>, initial: &[usize], ctx: &Context<T>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut level = base.clone();
    let mut membership = canonical_labels(initial);
    let mut node_of: Vec<usize> = (0..base.len()).collect();
    loop {
        move_nodes_fast(&level, &mut membership, ctx, rng);
        membership = canonical_labels(&membership);
        if distinct(&membership) == level.len() {
            break;
        }
        let refined = canonical_labels(&refine(&level, &membership, ctx, rng));
        // without any merge the aggregate would not shrink; fall back to the
        // unrefined communities
        let agg = if distinct(&refined) == level.len() { membership.clone() } else { refined };
        let k = distinct(&agg);
        let mut next_membership = vec![0; k];
        for v in 0..level.len() {
            next_membership[agg[v]] = membership[v];
        }
        for x in node_of.iter_mut() {
            *x = agg[*x];
        }
        level = level.aggregate(&agg);
        membership = canonical_labels(&next_membership);
    }
    node_of.iter().map(|&x| membership[x]).collect()
}

fn move_nodes_fast<T: Scalar>(level: &Level<T>, membership: &mut [usize], ctx: &Context<T>, rng: &mut ChaCha8Rng) {
    let n = level.len();
    let nl = level.layers;
    let mut comm_deg = vec![T::zero(); n * nl];
    let mut count = vec![0usize; n];
    for v in 0..n {
        let c = membership[v];
        count[c] += 1;
        for l in 0..nl {
            comm_deg[c * nl + l] = comm_deg[c * nl + l] + level.deg[v * nl + l];
        }
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| count[c] == 0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut queue: VecDeque<usize> = order.into_iter().collect();
    let mut queued = vec![true; n];
    let mut weight_to = vec![T::zero(); n];
    let mut touched_flag = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();

    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let old = membership[v];
        for &(u, w) in &level.adj[v] {
            let c = membership[u];
            if !touched_flag[c] {
                touched_flag[c] = true;
                touched.push(c);
            }
            weight_to[c] = weight_to[c] + w;
        }
        let dv = level.deg(v);
        for l in 0..nl {
            comm_deg[old * nl + l] = comm_deg[old * nl + l] - dv[l];
        }
        count[old] -= 1;

        let gain = |c: usize, comm_deg: &[T]| weight_to[c] - ctx.null(dv, &comm_deg[c * nl..(c + 1) * nl]);
        let mut best = old;
        let mut best_gain = gain(old, &comm_deg);
        for &c in &touched {
            if c == old {
                continue;
            }
            let g = gain(c, &comm_deg);
            if g > best_gain || (g == best_gain && c < best) {
                best = c;
                best_gain = g;
            }
        }
        if count[old] > 0 {
            if let Some(&e) = empty.last() {
                if T::zero() > best_gain {
                    best = e;
                    best_gain = T::zero();
                }
            }
        }
        let _ = best_gain;

        for l in 0..nl {
            comm_deg[best * nl + l] = comm_deg[best * nl + l] + dv[l];
        }
        if count[best] == 0 && empty.last() == Some(&best) {
            empty.pop();
        }
        count[best] += 1;
        membership[v] = best;
        if best != old {
            if count[old] == 0 {
                empty.push(old);
            }
            for &(u, _) in &level.adj[v] {
                if !queued[u] && membership[u] != best {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
        for &c in &touched {
            weight_to[c] = T::zero();
            touched_flag[c] = false;
        }
        touched.clear();
    }
}

/// Refined partition: singletons merged within each community, only into
/// well-connected subsets, choosing among non-negative gains at random with
/// weight `exp(dQ / theta)`.
fn refine<T: Scalar>(level: &Level<T>, membership: &[usize], ctx: &Context<T>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = level.len();
    let nl = level.layers;
    let k = membership.iter().max().map_or(0, |m| m + 1);
    let mut comm_deg = vec![T::zero(); k * nl];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in 0..n {
        let c = membership[v];
        members[c].push(v);
        for l in 0..nl {
            comm_deg[c * nl + l] = comm_deg[c * nl + l] + level.deg[v * nl + l];
        }
    }
    // weight from each node to the rest of its community
    let ext: Vec<T> = (0..n)
        .map(|v| {
            level.adj[v]
                .iter()
                .filter(|&&(u, _)| membership[u] == membership[v])
                .fold(T::zero(), |acc, &(_, w)| acc + w)
        })
        .collect();

    let mut refined: Vec<usize> = (0..n).collect();
    let mut ref_deg = level.deg.clone();
    let mut ref_count = vec![1usize; n];
    let mut ref_ext = ext.clone();
    let mut weight_to = vec![T::zero(); n];
    let mut touched_flag = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    let scale = 2.0 / ctx.two_mu.as_f64();

    for c in 0..k {
        let cd = &comm_deg[c * nl..(c + 1) * nl];
        let mut nodes = members[c].clone();
        nodes.shuffle(rng);
        for &v in &nodes {
            if ref_count[refined[v]] != 1 {
                continue;
            }
            let dv = level.deg(v);
            if ext[v] < ctx.null(dv, cd) - ctx.null(dv, dv) {
                continue;
            }
            for &(u, w) in &level.adj[v] {
                if membership[u] != c {
                    continue;
                }
                let r = refined[u];
                if !touched_flag[r] {
                    touched_flag[r] = true;
                    touched.push(r);
                }
                weight_to[r] = weight_to[r] + w;
            }
            let own = refined[v];
            for l in 0..nl {
                ref_deg[own * nl + l] = ref_deg[own * nl + l] - dv[l];
            }
            ref_count[own] = 0;

            candidates.clear();
            candidates.push((own, 0.0));
            for &r in &touched {
                if r == own {
                    continue;
                }
                let rd = &ref_deg[r * nl..(r + 1) * nl];
                if ref_ext[r] < ctx.null(rd, cd) - ctx.null(rd, rd) {
                    continue;
                }
                let g = weight_to[r] - ctx.null(dv, rd);
                if g >= T::zero() {
                    candidates.push((r, g.as_f64() * scale));
                }
            }
            let chosen = choose(&candidates, ctx.theta, rng);

            for l in 0..nl {
                ref_deg[chosen * nl + l] = ref_deg[chosen * nl + l] + dv[l];
            }
            if chosen == own {
                ref_count[own] = 1;
            } else {
                ref_count[chosen] += 1;
                ref_ext[chosen] = ref_ext[chosen] + ext[v] - weight_to[chosen] - weight_to[chosen];
                refined[v] = chosen;
            }
            for &r in &touched {
                weight_to[r] = T::zero();
                touched_flag[r] = false;
            }
            touched.clear();
        }
    }
    refined
}

/// Samples a candidate with probability proportional to `exp(gain / theta)`;
/// greedy (lowest id on ties) when `theta == 0`.
fn choose(candidates: &[(usize, f64)], theta: f64, rng: &mut ChaCha8Rng) -> usize {
    let (mut best, mut best_gain) = candidates[0];
    for &(c, g) in &candidates[1..] {
        if g > best_gain || (g == best_gain && c < best) {
            best = c;
            best_gain = g;
        }
    }
    if theta == 0.0 || candidates.len() == 1 {
        return best;
    }
    let weights: Vec<f64> = candidates.iter().map(|&(_, g)| ((g - best_gain) / theta).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (&(c, _), &w) in candidates.iter().zip(&weights) {
        if x < w {
            return c;
        }
        x -= w;
    }
    best
}
