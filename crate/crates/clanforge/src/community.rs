//! Map-equation community detection and normalized mutual information.
//!
//! Communities minimize the two-level map-equation codelength
//! L(M) = q H(Q) + sum_i p_i H(P^i), measured in bits. Node visit rates
//! come from PageRank with damping (1 - teleport) on the undirected graph;
//! module exit rates from inter-block edge flow.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centrality::pagerank;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet, PlayerTable};
use crate::partition::Partition;

/// Default teleportation probability for visit-rate computation.
pub const DEFAULT_TELEPORT: f64 = 0.15;

const MOVE_THRESHOLD: f64 = 1e-10;
const VISIT_RATE_TOL: f64 = 1e-12;
const VISIT_RATE_MAX_ITER: usize = 500;

/// Two-level map-equation codelength split into its index and module parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapScore {
    pub codelength: f64,
    pub index_codelength: f64,
    pub module_codelength: f64,
}

fn plogp(x: f64) -> f64 {
    if x > 1e-15 {
        x * x.log2()
    } else {
        0.0
    }
}

fn visit_rates(g: &Graph, teleport: f64) -> Result<Vec<f64>> {
    if !(0.0 < teleport && teleport < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "teleport must be in (0,1), got {teleport}"
        )));
    }
    Ok(pagerank(g, 1.0 - teleport, VISIT_RATE_TOL, VISIT_RATE_MAX_ITER)?.scores)
}

/// Evaluate the map equation for a given partition of all nodes.
pub fn map_equation(g: &Graph, partition: &Partition, teleport: f64) -> Result<MapScore> {
    let n = g.node_count();
    if !partition.covers_contiguous(n) {
        return Err(Error::InvalidArgument(
            "partition must cover every node of the graph".into(),
        ));
    }
    if n == 0 {
        return Ok(MapScore {
            codelength: 0.0,
            index_codelength: 0.0,
            module_codelength: 0.0,
        });
    }
    let rates = visit_rates(g, teleport)?;
    let block_count = partition.block_count();
    let mut module_p = vec![0.0f64; block_count];
    let mut module_q = vec![0.0f64; block_count];
    for (v, block) in partition.iter() {
        let block = block as usize;
        module_p[block] += rates[v];
        let degree = g.degree(v);
        if degree == 0 {
            continue;
        }
        let flow_per_edge = rates[v] / degree as f64;
        for &w in g.neighbors(v) {
            if partition.block_of(w as usize) != Some(block as u32) {
                module_q[block] += flow_per_edge;
            }
        }
    }
    if module_p.iter().any(|&p| p <= 0.0) {
        return Err(Error::InvalidArgument("partition has an empty block".into()));
    }

    let q_total: f64 = module_q.iter().sum();
    let index_codelength = plogp(q_total) - module_q.iter().map(|&q| plogp(q)).sum::<f64>();
    let mut module_codelength = 0.0;
    for b in 0..block_count {
        module_codelength += plogp(module_q[b] + module_p[b]) - plogp(module_q[b]);
    }
    module_codelength -= rates.iter().map(|&p| plogp(p)).sum::<f64>();
    Ok(MapScore {
        codelength: index_codelength + module_codelength,
        index_codelength,
        module_codelength,
    })
}

// Working representation during optimization: units start as nodes and
// become module super-nodes after each aggregation. Flows internal to a
// unit are dropped; they can never cross a module boundary again.
struct Units {
    rate: Vec<f64>,
    // (other unit, flow out to it, flow in from it)
    links: Vec<Vec<(usize, f64, f64)>>,
    total_out: Vec<f64>,
}

impl Units {
    fn from_graph(g: &Graph, rates: &[f64]) -> Units {
        let n = g.node_count();
        let mut links = vec![Vec::new(); n];
        let mut total_out = vec![0.0; n];
        for v in 0..n {
            let degree = g.degree(v);
            if degree == 0 {
                continue;
            }
            let out = rates[v] / degree as f64;
            for &w in g.neighbors(v) {
                let w = w as usize;
                let back = rates[w] / g.degree(w) as f64;
                links[v].push((w, out, back));
            }
            total_out[v] = rates[v];
        }
        Units {
            rate: rates.to_vec(),
            links,
            total_out,
        }
    }

    fn len(&self) -> usize {
        self.rate.len()
    }

    /// Collapse units into their modules, dropping intra-module flows.
    fn aggregate(&self, module_of: &[usize], module_count: usize) -> Units {
        let mut rate = vec![0.0; module_count];
        for (u, &m) in module_of.iter().enumerate() {
            rate[m] += self.rate[u];
        }
        let mut flows: HashMap<(usize, usize), f64> = HashMap::new();
        for (u, links) in self.links.iter().enumerate() {
            let mu = module_of[u];
            for &(w, out, _) in links {
                let mw = module_of[w];
                if mu != mw {
                    *flows.entry((mu, mw)).or_insert(0.0) += out;
                }
            }
        }
        let mut links = vec![Vec::new(); module_count];
        let mut ordered: Vec<((usize, usize), f64)> = flows.iter().map(|(&k, &v)| (k, v)).collect();
        ordered.sort_by_key(|&(key, _)| key);
        let mut total_out = vec![0.0; module_count];
        for ((a, b), out) in ordered {
            let back = flows.get(&(b, a)).copied().unwrap_or(0.0);
            links[a].push((b, out, back));
            total_out[a] += out;
        }
        Units {
            rate,
            links,
            total_out,
        }
    }
}

// Module aggregates and the running codelength terms for a level.
struct LevelState {
    module_of: Vec<usize>,
    module_q: Vec<f64>,
    module_p: Vec<f64>,
    q_total: f64,
    sum_plogp_q: f64,
    sum_plogp_pq: f64,
    node_term: f64, // sum of plogp over original node visit rates
}

impl LevelState {
    fn singletons(units: &Units, node_term: f64) -> LevelState {
        let count = units.len();
        let module_of: Vec<usize> = (0..count).collect();
        let module_q = units.total_out.clone();
        let module_p = units.rate.clone();
        let q_total = module_q.iter().sum();
        let sum_plogp_q = module_q.iter().map(|&q| plogp(q)).sum();
        let sum_plogp_pq = module_q
            .iter()
            .zip(&module_p)
            .map(|(&q, &p)| plogp(q + p))
            .sum();
        LevelState {
            module_of,
            module_q,
            module_p,
            q_total,
            sum_plogp_q,
            sum_plogp_pq,
            node_term,
        }
    }

    fn codelength(&self) -> f64 {
        plogp(self.q_total) - 2.0 * self.sum_plogp_q + self.sum_plogp_pq - self.node_term
    }
}

fn optimize_level(
    units: &Units,
    state: &mut LevelState,
    rng: &mut ChaCha8Rng,
    trace: &mut Vec<f64>,
) -> bool {
    let count = units.len();
    let mut improved_any = false;
    let mut order: Vec<usize> = (0..count).collect();
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &u in &order {
            let from = state.module_of[u];
            // Flow between u and each adjacent module, merged by module id.
            let mut adj: Vec<(usize, f64, f64)> = Vec::with_capacity(units.links[u].len());
            for &(w, out, back) in &units.links[u] {
                adj.push((state.module_of[w], out, back));
            }
            adj.sort_by_key(|&(m, _, _)| m);
            adj.dedup_by(|a, b| {
                if a.0 == b.0 {
                    b.1 += a.1;
                    b.2 += a.2;
                    true
                } else {
                    false
                }
            });
            let flow_with = |m: usize| -> (f64, f64) {
                adj.binary_search_by_key(&m, |&(b, _, _)| b)
                    .map(|i| (adj[i].1, adj[i].2))
                    .unwrap_or((0.0, 0.0))
            };
            let (to_from_out, to_from_in) = flow_with(from);
            let q_from_new =
                state.module_q[from] - units.total_out[u] + to_from_out + to_from_in;
            let p_from_new = state.module_p[from] - units.rate[u];

            let mut best: Option<(f64, usize, f64)> = None; // (delta, module, q_to_new)
            for &(to, to_out, to_in) in &adj {
                if to == from {
                    continue;
                }
                let q_to_new = state.module_q[to] + units.total_out[u] - to_out - to_in;
                let p_to_new = state.module_p[to] + units.rate[u];
                let q_total_new = state.q_total
                    + (q_from_new - state.module_q[from])
                    + (q_to_new - state.module_q[to]);
                let delta = (plogp(q_total_new) - plogp(state.q_total))
                    - 2.0
                        * (plogp(q_from_new) + plogp(q_to_new)
                            - plogp(state.module_q[from])
                            - plogp(state.module_q[to]))
                    + (plogp(q_from_new + p_from_new) + plogp(q_to_new + p_to_new)
                        - plogp(state.module_q[from] + state.module_p[from])
                        - plogp(state.module_q[to] + state.module_p[to]));
                if delta < -MOVE_THRESHOLD && best.is_none_or(|(bd, _, _)| delta < bd) {
                    best = Some((delta, to, q_to_new));
                }
            }
            if let Some((_, to, q_to_new)) = best {
                state.q_total += (q_from_new - state.module_q[from]) + (q_to_new - state.module_q[to]);
                state.sum_plogp_q += plogp(q_from_new) + plogp(q_to_new)
                    - plogp(state.module_q[from])
                    - plogp(state.module_q[to]);
                state.sum_plogp_pq += plogp(q_from_new + p_from_new)
                    + plogp(q_to_new + state.module_p[to] + units.rate[u])
                    - plogp(state.module_q[from] + state.module_p[from])
                    - plogp(state.module_q[to] + state.module_p[to]);
                state.module_q[from] = q_from_new;
                state.module_q[to] = q_to_new;
                state.module_p[from] = p_from_new;
                state.module_p[to] += units.rate[u];
                state.module_of[u] = to;
                trace.push(state.codelength());
                moved = true;
                improved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    improved_any
}

/// Detect communities by seeded greedy map-equation optimization: local
/// node moves, then aggregation into super-nodes, repeated until no move
/// improves the codelength. Deterministic for a given seed.
pub fn detect_communities(g: &Graph, seed: u64, teleport: f64) -> Result<Partition> {
    Ok(detect_communities_traced(g, seed, teleport)?.0)
}

/// As [`detect_communities`], also returning the optimization trace: the
/// initial singleton codelength followed by the codelength after every
/// accepted move (strictly decreasing).
pub fn detect_communities_traced(
    g: &Graph,
    seed: u64,
    teleport: f64,
) -> Result<(Partition, Vec<f64>)> {
    let n = g.node_count();
    if n == 0 {
        return Ok((Partition::from_assignments(Vec::new()), Vec::new()));
    }
    let rates = visit_rates(g, teleport)?;
    let node_term: f64 = rates.iter().map(|&p| plogp(p)).sum();
    let mut units = Units::from_graph(g, &rates);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // node -> module composed across levels
    let mut assignment: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();
    trace.push(LevelState::singletons(&units, node_term).codelength());

    loop {
        let mut state = LevelState::singletons(&units, node_term);
        let improved = optimize_level(&units, &mut state, &mut rng, &mut trace);
        if !improved {
            break;
        }
        // Relabel modules contiguously, ordered by lowest member unit.
        let mut relabel = vec![usize::MAX; units.len()];
        let mut module_count = 0;
        for &m in &state.module_of {
            if relabel[m] == usize::MAX {
                relabel[m] = module_count;
                module_count += 1;
            }
        }
        let module_of: Vec<usize> = state.module_of.iter().map(|&m| relabel[m]).collect();
        for slot in assignment.iter_mut() {
            *slot = module_of[*slot];
        }
        if module_count == units.len() {
            break;
        }
        units = units.aggregate(&module_of, module_count);
    }

    let partition =
        Partition::from_assignments(assignment.iter().enumerate().map(|(v, &m)| (v, m as u64)).collect());
    Ok((partition, trace))
}

/// NMI normalization variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmiNormalization {
    /// 2 I / (H1 + H2), the default.
    Average,
    /// I / max(H1, H2).
    Max,
}

/// Normalized mutual information between two partitions of the same node
/// set, natural logarithms, range [0,1]. Two zero-entropy partitions
/// (both single-block) compare as 1.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    nmi_with(a, b, NmiNormalization::Average)
}

pub fn nmi_with(a: &Partition, b: &Partition, norm: NmiNormalization) -> Result<f64> {
    if a.nodes() != b.nodes() {
        return Err(Error::MismatchedNodeSets);
    }
    let n = a.len();
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let mut joint: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for ((_, ba), (_, bb)) in a.iter().zip(b.iter()) {
        *joint.entry((ba, bb)).or_insert(0) += 1;
    }
    let sizes_a = a.block_sizes();
    let sizes_b = b.block_sizes();
    let entropy = |sizes: &[usize]| -> f64 {
        -sizes
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / nf;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let h_a = entropy(&sizes_a);
    let h_b = entropy(&sizes_b);
    if h_a == 0.0 && h_b == 0.0 {
        return Ok(1.0);
    }
    let mut mutual = 0.0;
    for (&(ba, bb), &count) in &joint {
        let pij = count as f64 / nf;
        let pa = sizes_a[ba as usize] as f64 / nf;
        let pb = sizes_b[bb as usize] as f64 / nf;
        mutual += pij * (pij / (pa * pb)).ln();
    }
    let value = match norm {
        NmiNormalization::Average => 2.0 * mutual / (h_a + h_b),
        NmiNormalization::Max => mutual / h_a.max(h_b),
    };
    Ok(value.clamp(0.0, 1.0))
}

/// How clanless nodes enter the clan partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClanlessPolicy {
    /// Each clanless node becomes its own block.
    Singleton,
    /// Clanless nodes are excluded from the partition.
    Drop,
    /// All clanless nodes share one block.
    OneBlock,
}

/// Partition of `nodes` by clan membership from the metadata table.
pub fn clans_to_partition(
    g: &Graph,
    table: &PlayerTable,
    nodes: &NodeSet,
    policy: ClanlessPolicy,
) -> Result<Partition> {
    // Disjoint label spaces: clans, then per-node singletons, then the
    // shared clanless block.
    let singleton_base = 1u64 << 40;
    let clanless_block = u64::MAX;
    let mut pairs = Vec::new();
    for &v in nodes {
        if v >= g.node_count() {
            return Err(Error::NodeOutOfRange {
                index: v,
                node_count: g.node_count(),
            });
        }
        let id = g.ext_id(v);
        let record = table.get(id).ok_or(Error::MissingMetadata(id))?;
        match (record.clan_id, policy) {
            (Some(clan), _) => pairs.push((v, clan)),
            (None, ClanlessPolicy::Singleton) => pairs.push((v, singleton_base + v as u64)),
            (None, ClanlessPolicy::Drop) => {}
            (None, ClanlessPolicy::OneBlock) => pairs.push((v, clanless_block)),
        }
    }
    Ok(Partition::from_assignments(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, CharId, PlayerRecord};
    use approx::assert_relative_eq;

    fn two_cliques(size: usize) -> Graph {
        let mut edges = Vec::new();
        for base in [0u64, 100] {
            for i in 0..size as u64 {
                for j in (i + 1)..size as u64 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((0, 100)); // bridge
        build_graph(&edges)
    }

    #[test]
    fn one_block_has_zero_index_codelength() {
        let g = build_graph(&[(1, 2), (2, 3), (3, 1), (3, 4)]);
        let score = map_equation(&g, &Partition::single_block(4), 0.15).unwrap();
        assert_relative_eq!(score.index_codelength, 0.0);
        // codelength = entropy of visit rates
        let rates = visit_rates(&g, 0.15).unwrap();
        let entropy: f64 = -rates.iter().map(|&p| plogp(p)).sum::<f64>();
        assert_relative_eq!(score.codelength, entropy, epsilon = 1e-12);
        assert_relative_eq!(
            score.codelength,
            score.index_codelength + score.module_codelength,
            epsilon = 1e-12
        );
    }

    #[test]
    fn singletons_on_an_edge_cost_more_than_one_block() {
        let g = build_graph(&[(1, 2)]);
        let single = map_equation(&g, &Partition::single_block(2), 0.15).unwrap();
        let split = map_equation(&g, &Partition::singletons(2), 0.15).unwrap();
        assert!(split.codelength > single.codelength);
    }

    #[test]
    fn planted_two_clique_partition_beats_one_block() {
        let g = two_cliques(5);
        let planted = Partition::from_dense(
            &(0..10)
                .map(|v| if g.ext_id(v) < 100 { 0 } else { 1 })
                .collect::<Vec<u64>>(),
        );
        let planted_score = map_equation(&g, &planted, 0.15).unwrap();
        let one_block = map_equation(&g, &Partition::single_block(10), 0.15).unwrap();
        assert!(planted_score.codelength < one_block.codelength);
    }

    #[test]
    fn map_equation_input_validation() {
        let g = build_graph(&[(1, 2)]);
        assert!(map_equation(&g, &Partition::single_block(3), 0.15).is_err());
        assert!(map_equation(&g, &Partition::single_block(2), 1.5).is_err());
    }

    #[test]
    fn disjoint_triangles_separate() {
        let g = build_graph(&[(1, 2), (2, 3), (3, 1), (10, 11), (11, 12), (12, 10)]);
        let p = detect_communities(&g, 42, 0.15).unwrap();
        assert_eq!(p.block_count(), 2);
        // blocks coincide with the triangles
        for v in 0..6 {
            for w in 0..6 {
                let same_triangle = (g.ext_id(v) < 10) == (g.ext_id(w) < 10);
                assert_eq!(p.block_of(v) == p.block_of(w), same_triangle);
            }
        }
    }

    #[test]
    fn two_8_cliques_recovered_for_every_seed() {
        let g = two_cliques(8);
        for seed in 0..10 {
            let p = detect_communities(&g, seed, 0.15).unwrap();
            assert_eq!(p.block_count(), 2, "seed {seed}");
            for v in 0..16 {
                let expected = u32::from(g.ext_id(v) >= 100);
                let block = p.block_of(v).unwrap();
                let base = p.block_of(if expected == 0 { 0 } else { 15 }).unwrap();
                assert_eq!(block, base, "seed {seed} node {v}");
            }
        }
    }

    #[test]
    fn empty_edge_graph_stays_singleton() {
        // 5 isolated nodes enter through self-loops that get dropped
        let g = build_graph(&[(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]);
        assert_eq!(g.edge_count(), 0);
        let p = detect_communities(&g, 3, 0.15).unwrap();
        assert_eq!(p.block_count(), 5);
    }

    #[test]
    fn detection_trace_is_strictly_decreasing() {
        let g = two_cliques(8);
        let (p, trace) = detect_communities_traced(&g, 7, 0.15).unwrap();
        for pair in trace.windows(2) {
            assert!(pair[1] < pair[0], "trace not strictly decreasing: {pair:?}");
        }
        // final codelength agrees with a direct map-equation evaluation
        let score = map_equation(&g, &p, 0.15).unwrap();
        assert_relative_eq!(score.codelength, *trace.last().unwrap(), epsilon = 1e-9);
        // and beats both trivial partitions
        let one = map_equation(&g, &Partition::single_block(16), 0.15).unwrap();
        let singles = map_equation(&g, &Partition::singletons(16), 0.15).unwrap();
        assert!(score.codelength <= one.codelength);
        assert!(score.codelength <= singles.codelength);
    }

    #[test]
    fn nmi_identity_and_zero_cases() {
        let p = Partition::from_dense(&[0, 0, 1, 1]);
        assert_relative_eq!(nmi(&p, &p).unwrap(), 1.0);
        // one block vs singletons
        let one = Partition::single_block(4);
        let singles = Partition::singletons(4);
        assert_relative_eq!(nmi(&one, &singles).unwrap(), 0.0);
        // {a,b|c,d} vs {a,c|b,d}: joint counts all equal -> I = 0
        let cross = Partition::from_dense(&[0, 1, 0, 1]);
        assert_relative_eq!(nmi(&p, &cross).unwrap(), 0.0);
    }

    #[test]
    fn nmi_both_single_block_is_one() {
        let a = Partition::single_block(3);
        let b = Partition::single_block(3);
        assert_relative_eq!(nmi(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn nmi_rejects_mismatched_node_sets() {
        let a = Partition::from_dense(&[0, 1]);
        let b = Partition::from_assignments(vec![(0, 0), (2, 1)]);
        assert!(matches!(nmi(&a, &b).unwrap_err(), Error::MismatchedNodeSets));
    }

    #[test]
    fn nmi_max_normalization_selectable() {
        let a = Partition::from_dense(&[0, 0, 1, 1, 2, 2]);
        let b = Partition::from_dense(&[0, 0, 0, 1, 1, 1]);
        let avg = nmi_with(&a, &b, NmiNormalization::Average).unwrap();
        let max = nmi_with(&a, &b, NmiNormalization::Max).unwrap();
        assert!(max <= avg + 1e-12);
    }

    fn table_with_clans(entries: &[(CharId, Option<u64>)]) -> PlayerTable {
        let mut t = PlayerTable::new();
        for &(id, clan) in entries {
            t.insert(
                id,
                PlayerRecord {
                    clan_id: clan,
                    online_time: 0,
                    kills: 0,
                    level: 1,
                    status: String::new(),
                },
            )
            .unwrap();
        }
        t
    }

    #[test]
    fn clans_partition_policies() {
        let g = build_graph(&[(1, 2), (2, 3), (3, 4)]);
        let t = table_with_clans(&[(1, Some(7)), (2, Some(7)), (3, Some(9)), (4, None)]);
        let all: NodeSet = (0..4).collect();
        let single = clans_to_partition(&g, &t, &all, ClanlessPolicy::Singleton).unwrap();
        assert_eq!(single.block_count(), 3);
        assert_eq!(single.len(), 4);
        let dropped = clans_to_partition(&g, &t, &all, ClanlessPolicy::Drop).unwrap();
        assert_eq!(dropped.block_count(), 2);
        assert_eq!(dropped.len(), 3);
        let one = clans_to_partition(&g, &t, &all, ClanlessPolicy::OneBlock).unwrap();
        assert_eq!(one.block_count(), 3);
        assert_eq!(one.len(), 4);
    }

    #[test]
    fn clans_partition_requires_metadata() {
        let g = build_graph(&[(1, 2)]);
        let t = table_with_clans(&[(1, Some(7))]);
        let all: NodeSet = (0..2).collect();
        assert!(matches!(
            clans_to_partition(&g, &t, &all, ClanlessPolicy::Singleton).unwrap_err(),
            Error::MissingMetadata(2)
        ));
    }
}
