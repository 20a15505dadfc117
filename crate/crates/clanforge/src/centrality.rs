//! PageRank power iteration and Brandes-style betweenness centrality.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;

/// One real score per node plus provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub algorithm: String,
    pub iterations: usize,
    pub converged: bool,
}

/// PageRank by power iteration on the undirected graph; each edge acts as
/// two directed links and degree-0 nodes redistribute their mass uniformly.
/// Stops when the L1 change drops below `tol` or `max_iter` is reached
/// (non-convergence is flagged, not an error). Scores sum to 1.
pub fn pagerank(g: &Graph, damping: f64, tol: f64, max_iter: usize) -> Result<ScoreVector> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0 < damping && damping < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "damping must be in (0,1), got {damping}"
        )));
    }
    let inv_n = 1.0 / n as f64;
    let mut scores = vec![inv_n; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let dangling: f64 = (0..n)
            .filter(|&v| g.degree(v) == 0)
            .map(|v| scores[v])
            .sum();
        let base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
        for (v, slot) in next.iter_mut().enumerate() {
            let inbound: f64 = g
                .neighbors(v)
                .iter()
                .map(|&u| {
                    let u = u as usize;
                    scores[u] / g.degree(u) as f64
                })
                .sum();
            *slot = base + damping * inbound;
        }
        let delta: f64 = scores
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut scores, &mut next);
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(ScoreVector {
        scores,
        algorithm: format!("pagerank(damping={damping})"),
        iterations,
        converged,
    })
}

/// Exact betweenness centrality: per-source shortest-path counting with
/// dependency back-propagation, unordered pairs counted once. Normalized
/// mode divides by (n-1)(n-2)/2.
pub fn betweenness(g: &Graph, normalized: bool) -> ScoreVector {
    let n = g.node_count();
    // Sources are processed in fixed-size chunks and the chunk results are
    // summed in chunk order, so parallel and sequential builds agree.
    const CHUNK: usize = 64;
    let chunk_count = n.div_ceil(CHUNK.max(1)).max(if n == 0 { 0 } else { 1 });
    let partials = par::map_indexed(chunk_count, |ci| {
        let mut local = vec![0.0f64; n];
        for s in ci * CHUNK..((ci + 1) * CHUNK).min(n) {
            accumulate_from_source(g, s, &mut local);
        }
        local
    });
    let mut scores = vec![0.0f64; n];
    for partial in &partials {
        for (total, v) in scores.iter_mut().zip(partial) {
            *total += v;
        }
    }
    // Each unordered pair was counted from both endpoints.
    for v in &mut scores {
        *v /= 2.0;
    }
    if normalized && n > 2 {
        let scale = 2.0 / ((n - 1) as f64 * (n - 2) as f64);
        for v in &mut scores {
            *v *= scale;
        }
    }
    ScoreVector {
        scores,
        algorithm: format!("betweenness(normalized={normalized})"),
        iterations: n,
        converged: true,
    }
}

fn accumulate_from_source(g: &Graph, s: usize, out: &mut [f64]) {
    let n = g.node_count();
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    sigma[s] = 1.0;
    dist[s] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v as u32);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    while let Some(w) = stack.pop() {
        for &v in &preds[w] {
            let v = v as usize;
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if w != s {
            out[w] += delta[w];
        }
    }
}

/// Node indices ranked by descending score, ties by ascending external id.
pub fn ranked_nodes(g: &Graph, scores: &ScoreVector) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| {
        scores.scores[b]
            .partial_cmp(&scores.scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| g.ext_id(a).cmp(&g.ext_id(b)))
    });
    order
}
