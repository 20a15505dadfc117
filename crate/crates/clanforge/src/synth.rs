//! Seeded synthetic network generation: uniform G(n,m) baselines and
//! configuration-model graphs with power-law degrees.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph};

fn max_pairs(n: usize) -> u64 {
    n as u64 * (n as u64 - 1) / 2
}

/// Uniform random simple graph: `m` distinct edges sampled without
/// replacement among all unordered pairs. Deterministic per seed.
pub fn generate_uniform(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let limit = max_pairs(n);
    if m as u64 > limit {
        return Err(Error::InvalidArgument(format!(
            "m = {m} exceeds the {limit} unordered pairs of {n} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u64, u64)> = Vec::with_capacity(m);
    if limit <= 4 * m as u64 {
        // dense request: materialize all pairs and take a seeded sample
        let mut pairs = Vec::with_capacity(limit as usize);
        for u in 0..n as u64 {
            for v in (u + 1)..n as u64 {
                pairs.push((u, v));
            }
        }
        pairs.shuffle(&mut rng);
        edges.extend(pairs.into_iter().take(m));
    } else {
        let mut chosen = HashSet::with_capacity(m);
        while edges.len() < m {
            let u = rng.gen_range(0..n as u64);
            let v = rng.gen_range(0..n as u64);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if chosen.insert(key) {
                edges.push(key);
            }
        }
    }
    // All n nodes must exist even when isolated; self-pairs register the
    // node and are dropped by the builder.
    for v in 0..n as u64 {
        edges.push((v, v));
    }
    Ok(build_graph(&edges))
}

/// Configuration-model graph with power-law degrees: each node's degree is
/// an inverse-CDF sample of the continuous law p(x) ~ x^-exponent (x >= 1)
/// rounded to the nearest integer and capped at n-1; the stub pairing
/// drops self-loops and multi-edges. Deterministic per seed.
pub fn generate_powerlaw(n: usize, exponent: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if exponent <= 2.0 {
        return Err(Error::InvalidArgument(format!(
            "exponent must exceed 2 for a realizable simple graph, got {exponent}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = (n - 1).max(1);
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let x = (1.0 - u).powf(-1.0 / (exponent - 1.0));
            (x.round() as usize).clamp(1, cap)
        })
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        // make the stub count even by incrementing one degree
        let slot = degrees
            .iter()
            .position(|&d| d < cap)
            .unwrap_or(0);
        degrees[slot] += 1;
    }

    let mut stubs: Vec<u64> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v as u64, d))
        .collect();
    stubs.shuffle(&mut rng);
    let mut edges: Vec<(u64, u64)> = stubs
        .chunks_exact(2)
        .map(|pair| (pair[0], pair[1]))
        .collect();
    for v in 0..n as u64 {
        edges.push((v, v)); // register isolated nodes
    }
    Ok(build_graph(&edges))
}
