//! Structural statistics: degree distribution, connected components,
//! clustering, average shortest path, small-world check.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::par;
use crate::partition::Partition;

/// Empirical degree distribution over all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    /// Fraction of nodes with exactly degree k, over observed degrees.
    pub pmf: BTreeMap<usize, f64>,
    /// Fraction of nodes with degree >= k, over observed degrees.
    pub ccdf: BTreeMap<usize, f64>,
    pub mean_degree: f64,
}

pub fn degree_distribution(g: &Graph) -> Result<DegreeDistribution> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for d in g.degrees() {
        *counts.entry(d).or_insert(0) += 1;
    }
    let pmf: BTreeMap<usize, f64> = counts
        .iter()
        .map(|(&k, &c)| (k, c as f64 / n as f64))
        .collect();
    let mut ccdf = BTreeMap::new();
    let mut tail = 0usize;
    for (&k, &c) in counts.iter().rev() {
        tail += c;
        ccdf.insert(k, tail as f64 / n as f64);
    }
    Ok(DegreeDistribution {
        pmf,
        ccdf,
        mean_degree: g.mean_degree(),
    })
}

/// Connected components with the largest one singled out.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub partition: Partition,
    pub component_count: usize,
    pub largest_size: usize,
    pub largest_edge_count: usize,
    /// Internal nodes of the largest component.
    pub largest_nodes: NodeSet,
}

pub fn connected_components(g: &Graph) -> ComponentReport {
    let n = g.node_count();
    let mut label = vec![u64::MAX; n];
    let mut next = 0u64;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != u64::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                let w = w as usize;
                if label[w] == u64::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    let partition = Partition::from_dense(&label);
    let sizes = partition.block_sizes();
    let (largest_block, largest_size) = sizes
        .iter()
        .enumerate()
        .max_by_key(|&(block, &size)| (size, std::cmp::Reverse(block)))
        .map(|(block, &size)| (block as u32, size))
        .unwrap_or((0, 0));
    let largest_nodes: NodeSet = partition
        .iter()
        .filter(|&(_, b)| b == largest_block)
        .map(|(v, _)| v)
        .collect();
    let largest_edge_count = g
        .edges()
        .iter()
        .filter(|(u, _)| largest_nodes.contains(u))
        .count();
    ComponentReport {
        partition,
        component_count: next as usize,
        largest_size,
        largest_edge_count,
        largest_nodes,
    }
}

/// Mean local clustering coefficient; nodes of degree < 2 contribute 0.
pub fn average_clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let locals = par::map_indexed(n, |v| {
        let nbrs = g.neighbors(v);
        let d = nbrs.len();
        if d < 2 {
            return 0.0;
        }
        let mut links = 0usize;
        for (i, &a) in nbrs.iter().enumerate() {
            let a_nbrs = g.neighbors(a as usize);
            for &b in &nbrs[i + 1..] {
                if a_nbrs.binary_search(&b).is_ok() {
                    links += 1;
                }
            }
        }
        2.0 * links as f64 / (d as f64 * (d - 1) as f64)
    });
    locals.iter().sum::<f64>() / n as f64
}

/// How to compute the average shortest path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    /// Breadth-first search from every node of the set.
    Exact,
    /// Mean over pairs rooted at `sources` seeded-uniform source nodes.
    Sampled { sources: usize, seed: u64 },
}

/// Mean shortest-path length over unordered pairs of `nodes`, within the
/// induced subgraph. Errors if any pair is unreachable.
pub fn average_shortest_path(g: &Graph, nodes: &NodeSet, mode: PathMode) -> Result<f64> {
    let n = g.node_count();
    if let Some(&bad) = nodes.iter().find(|&&v| v >= n) {
        return Err(Error::NodeOutOfRange {
            index: bad,
            node_count: n,
        });
    }
    let members: Vec<usize> = nodes.iter().copied().collect();
    let set_size = members.len();
    if set_size < 2 {
        return Err(Error::InvalidArgument(
            "average shortest path needs at least two nodes".into(),
        ));
    }
    let mut in_set = vec![false; n];
    for &v in &members {
        in_set[v] = true;
    }

    let sources: Vec<usize> = match mode {
        PathMode::Exact => members.clone(),
        PathMode::Sampled { sources, seed } => {
            if sources == 0 {
                return Err(Error::InvalidArgument("sampled mode needs sources > 0".into()));
            }
            let mut picks = members.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            picks.shuffle(&mut rng);
            picks.truncate(sources.min(set_size));
            picks.sort_unstable();
            picks
        }
    };

    // Per-source BFS restricted to the node set; integer sums keep the
    // ordered reduction exact in both parallel and sequential builds.
    let per_source = par::map_indexed(sources.len(), |i| {
        let s = sources[i];
        let mut dist = vec![-1i64; n];
        dist[s] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(s);
        let mut sum = 0u64;
        let mut reached = 1usize;
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                let w = w as usize;
                if in_set[w] && dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    sum += dist[w] as u64;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        let unreachable = if reached < set_size {
            members.iter().find(|&&v| dist[v] < 0).copied()
        } else {
            None
        };
        (sum, unreachable)
    });

    let mut total = 0u64;
    for (i, &(sum, unreachable)) in per_source.iter().enumerate() {
        if let Some(t) = unreachable {
            return Err(Error::Unreachable(g.ext_id(sources[i]), g.ext_id(t)));
        }
        total += sum;
    }
    // Each source contributes distances to all other set members.
    let pair_count = sources.len() as u64 * (set_size as u64 - 1);
    Ok(total as f64 / pair_count as f64)
}

/// Thresholds operationalizing the qualitative small-world test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldThresholds {
    /// Measured path must be within this factor of ln(n)/ln(<k>).
    pub path_factor: f64,
    /// Measured clustering must exceed random clustering by this factor.
    pub clustering_factor: f64,
}

impl Default for SmallWorldThresholds {
    fn default() -> Self {
        SmallWorldThresholds {
            path_factor: 2.0,
            clustering_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldReport {
    pub measured_avg_path: f64,
    /// ln(n) / ln(<k>).
    pub expected_avg_path: f64,
    pub measured_clustering: f64,
    pub random_clustering: f64,
    pub verdict: bool,
}

/// Evaluate the small-world verdict from already-measured quantities.
pub fn evaluate_small_world(
    n: usize,
    mean_degree: f64,
    measured_avg_path: f64,
    measured_clustering: f64,
    random_clustering: f64,
    thresholds: SmallWorldThresholds,
) -> Result<SmallWorldReport> {
    if mean_degree <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "mean degree {mean_degree} <= 1: expected path length undefined"
        )));
    }
    let expected_avg_path = (n as f64).ln() / mean_degree.ln();
    let verdict = measured_avg_path <= thresholds.path_factor * expected_avg_path
        && measured_clustering >= thresholds.clustering_factor * random_clustering;
    Ok(SmallWorldReport {
        measured_avg_path,
        expected_avg_path,
        measured_clustering,
        random_clustering,
        verdict,
    })
}

/// Measure path length (on the largest component) and clustering of `g`,
/// then evaluate the small-world verdict against `random_clustering`.
pub fn small_world_report(
    g: &Graph,
    random_clustering: f64,
    mode: PathMode,
    thresholds: SmallWorldThresholds,
) -> Result<SmallWorldReport> {
    let components = connected_components(g);
    let measured_avg_path = average_shortest_path(g, &components.largest_nodes, mode)?;
    evaluate_small_world(
        g.node_count(),
        g.mean_degree(),
        measured_avg_path,
        average_clustering(g),
        random_clustering,
        thresholds,
    )
}
