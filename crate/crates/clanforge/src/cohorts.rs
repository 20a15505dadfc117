//! Hardcore/Casual/Peripheral classification by hub removal, the
//! score-ranking variant, and cohort/score correlations with activity.

use std::collections::VecDeque;

use crate::centrality::{ranked_nodes, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet, PlayerTable};

/// One recorded hub removal: the removed node and the residual graph's
/// largest-component size and disconnected-node count after the removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemovalStep {
    pub removed: usize,
    pub scc_size: usize,
    pub disconnected: usize,
}

/// Disjoint three-way split of the node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohortAssignment {
    pub hardcore: NodeSet,
    pub casual: NodeSet,
    pub peripheral: NodeSet,
    pub removal_trace: Vec<RemovalStep>,
}

/// Loop condition for hub removal: keep removing while the largest
/// component is at least (or strictly larger than) the disconnected count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopRule {
    #[default]
    NonStrict,
    Strict,
}

#[derive(Debug, Clone, Copy)]
struct ResidualStats {
    alive: usize,
    largest_component: usize,
    disconnected: usize,
}

fn residual_stats(g: &Graph, removed: &[bool]) -> ResidualStats {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut largest = 0;
    let mut disconnected = 0;
    let mut alive = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if removed[start] || seen[start] {
            continue;
        }
        alive += 1;
        let mut degree = 0;
        seen[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in g.neighbors(v) {
                let w = w as usize;
                if removed[w] {
                    continue;
                }
                if v == start {
                    degree += 1;
                }
                if !seen[w] {
                    seen[w] = true;
                    alive += 1;
                    queue.push_back(w);
                }
            }
        }
        largest = largest.max(size);
        if size == 1 && degree == 0 {
            disconnected += 1;
        }
    }
    ResidualStats {
        alive,
        largest_component: largest,
        disconnected,
    }
}

/// Hub-removal classification: repeatedly remove the highest-degree node
/// of the residual graph (degree recomputed each round, ties by ascending
/// external id) while the largest component is at least as large as the
/// disconnected-node count. Removed hubs are Hardcore, residual degree-0
/// nodes Peripheral, the rest Casual.
pub fn classify_groups(g: &Graph, rule: LoopRule) -> CohortAssignment {
    let n = g.node_count();
    let mut removed = vec![false; n];
    let mut hardcore = NodeSet::new();
    let mut removal_trace = Vec::new();

    loop {
        let stats = residual_stats(g, &removed);
        if stats.alive == 0 {
            break;
        }
        let keep_going = match rule {
            LoopRule::NonStrict => stats.largest_component >= stats.disconnected,
            LoopRule::Strict => stats.largest_component > stats.disconnected,
        };
        if !keep_going {
            break;
        }
        // highest residual degree, ties by ascending external id
        let best = (0..n)
            .filter(|&v| !removed[v])
            .map(|v| {
                let degree = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| !removed[w as usize])
                    .count();
                (v, degree)
            })
            .max_by(|&(a, da), &(b, db)| {
                da.cmp(&db)
                    .then_with(|| g.ext_id(b).cmp(&g.ext_id(a)))
            })
            .map(|(v, _)| v)
            .expect("residual graph non-empty");
        removed[best] = true;
        hardcore.insert(best);
        let after = residual_stats(g, &removed);
        removal_trace.push(RemovalStep {
            removed: best,
            scc_size: after.largest_component,
            disconnected: after.disconnected,
        });
    }

    let mut peripheral = NodeSet::new();
    let mut casual = NodeSet::new();
    for v in 0..n {
        if removed[v] {
            continue;
        }
        let degree = g
            .neighbors(v)
            .iter()
            .filter(|&&w| !removed[w as usize])
            .count();
        if degree == 0 {
            peripheral.insert(v);
        } else {
            casual.insert(v);
        }
    }
    CohortAssignment {
        hardcore,
        casual,
        peripheral,
        removal_trace,
    }
}

fn ceil_fraction(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Rank nodes by descending score (ties by ascending external id); the top
/// `hardcore_fraction` become Hardcore, the bottom `peripheral_fraction`
/// Peripheral, the middle Casual. Fraction counts round up.
pub fn classify_by_score(
    g: &Graph,
    scores: &ScoreVector,
    hardcore_fraction: f64,
    peripheral_fraction: f64,
) -> Result<CohortAssignment> {
    if !(0.0 < hardcore_fraction
        && hardcore_fraction < 1.0
        && 0.0 < peripheral_fraction
        && peripheral_fraction < 1.0
        && hardcore_fraction + peripheral_fraction < 1.0)
    {
        return Err(Error::InvalidArgument(format!(
            "fractions must lie in (0,1) and sum below 1, got {hardcore_fraction} and {peripheral_fraction}"
        )));
    }
    let n = g.node_count();
    if scores.scores.len() != n {
        return Err(Error::InvalidArgument(
            "score vector length does not match graph".into(),
        ));
    }
    let order = ranked_nodes(g, scores);
    let hardcore_count = ceil_fraction(hardcore_fraction, n);
    let peripheral_count = ceil_fraction(peripheral_fraction, n).min(n - hardcore_count);
    let hardcore: NodeSet = order[..hardcore_count].iter().copied().collect();
    let peripheral: NodeSet = order[n - peripheral_count..].iter().copied().collect();
    let casual: NodeSet = order[hardcore_count..n - peripheral_count]
        .iter()
        .copied()
        .collect();
    Ok(CohortAssignment {
        hardcore,
        casual,
        peripheral,
        removal_trace: Vec::new(),
    })
}

/// Activity metric drawn from the metadata table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    OnlineTime,
    Kills,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::OnlineTime => "online_time",
            Metric::Kills => "kills",
        }
    }

    fn value(self, record: &crate::graph::PlayerRecord) -> f64 {
        match self {
            Metric::OnlineTime => record.online_time as f64,
            Metric::Kills => record.kills as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cohort {
    Hardcore,
    Casual,
    Peripheral,
}

impl Cohort {
    pub fn name(self) -> &'static str {
        match self {
            Cohort::Hardcore => "hardcore",
            Cohort::Casual => "casual",
            Cohort::Peripheral => "peripheral",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub r: f64,
    pub metric: Metric,
    pub method: String,
}

pub(crate) fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mean_x) * (b - mean_y);
        var_x += (a - mean_x).powi(2);
        var_y += (b - mean_y).powi(2);
    }
    if var_x == 0.0 {
        return Err(Error::ZeroVariance("first vector".into()));
    }
    if var_y == 0.0 {
        return Err(Error::ZeroVariance("second vector".into()));
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

fn metric_values(g: &Graph, table: &PlayerTable, metric: Metric) -> Result<Vec<f64>> {
    (0..g.node_count())
        .map(|v| {
            let id = g.ext_id(v);
            table
                .get(id)
                .map(|record| metric.value(record))
                .ok_or(Error::MissingMetadata(id))
        })
        .collect()
}

/// Point-biserial Pearson correlation between membership in the named
/// cohort and the metric values, over all graph nodes.
pub fn correlate_cohort(
    assignment: &CohortAssignment,
    cohort: Cohort,
    g: &Graph,
    table: &PlayerTable,
    metric: Metric,
) -> Result<CorrelationReport> {
    let members = match cohort {
        Cohort::Hardcore => &assignment.hardcore,
        Cohort::Casual => &assignment.casual,
        Cohort::Peripheral => &assignment.peripheral,
    };
    let indicator: Vec<f64> = (0..g.node_count())
        .map(|v| if members.contains(&v) { 1.0 } else { 0.0 })
        .collect();
    let values = metric_values(g, table, metric)?;
    Ok(CorrelationReport {
        r: pearson(&indicator, &values)?,
        metric,
        method: format!("point-biserial({})", cohort.name()),
    })
}

/// Pearson correlation between raw scores and the metric values.
pub fn correlate_scores(
    scores: &ScoreVector,
    g: &Graph,
    table: &PlayerTable,
    metric: Metric,
) -> Result<CorrelationReport> {
    let values = metric_values(g, table, metric)?;
    Ok(CorrelationReport {
        r: pearson(&scores.scores, &values)?,
        metric,
        method: format!("pearson({})", scores.algorithm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, PlayerRecord};
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn star_hand_trace() {
        // K1,5: first pass removes the center (SCC 6 >= DISS 0), then
        // SCC 1 < DISS 5 stops the loop.
        let g = build_graph(&[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let center = g.node_of(0).unwrap();
        let result = classify_groups(&g, LoopRule::NonStrict);
        assert_eq!(result.hardcore, NodeSet::from([center]));
        assert!(result.casual.is_empty());
        assert_eq!(result.peripheral.len(), 5);
        assert_eq!(result.removal_trace.len(), 1);
        let step = result.removal_trace[0];
        assert_eq!(step.removed, center);
        assert_eq!(step.scc_size, 1);
        assert_eq!(step.disconnected, 5);
    }

    #[test]
    fn two_disjoint_edges_hand_trace() {
        // edges (1,2),(3,4): remove 1 (tie by lowest id), then 3, then stop
        // with SCC 1 < DISS 2.
        let g = build_graph(&[(1, 2), (3, 4)]);
        let result = classify_groups(&g, LoopRule::NonStrict);
        let ids = |set: &NodeSet| -> Vec<u64> { set.iter().map(|&v| g.ext_id(v)).collect() };
        assert_eq!(ids(&result.hardcore), vec![1, 3]);
        assert!(result.casual.is_empty());
        assert_eq!(ids(&result.peripheral), vec![2, 4]);
        assert_eq!(result.removal_trace.len(), 2);
        assert_eq!(result.removal_trace[0].scc_size, 2);
        assert_eq!(result.removal_trace[0].disconnected, 1);
        assert_eq!(result.removal_trace[1].scc_size, 1);
        assert_eq!(result.removal_trace[1].disconnected, 2);
    }

    #[test]
    fn empty_graph_gives_empty_sets() {
        let g = build_graph(&[]);
        let result = classify_groups(&g, LoopRule::NonStrict);
        assert!(result.hardcore.is_empty());
        assert!(result.casual.is_empty());
        assert!(result.peripheral.is_empty());
        assert!(result.removal_trace.is_empty());
    }

    #[test]
    fn cohorts_cover_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..25 {
            let n = rng.gen_range(2..30u64);
            let m = rng.gen_range(0..60);
            let edges: Vec<(u64, u64)> = (0..m)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            let g = build_graph(&edges);
            let result = classify_groups(&g, LoopRule::NonStrict);
            let total =
                result.hardcore.len() + result.casual.len() + result.peripheral.len();
            assert_eq!(total, g.node_count());
            assert!(result.hardcore.is_disjoint(&result.casual));
            assert!(result.hardcore.is_disjoint(&result.peripheral));
            assert!(result.casual.is_disjoint(&result.peripheral));
            assert!(result.removal_trace.len() <= g.node_count());
            // trace SCC sizes are non-increasing; intermediate steps keep
            // the loop condition satisfied
            for pair in result.removal_trace.windows(2) {
                assert!(pair[1].scc_size <= pair[0].scc_size);
                assert!(pair[0].scc_size >= pair[0].disconnected);
            }
        }
    }

    #[test]
    fn strict_rule_stops_earlier_or_equal() {
        let g = build_graph(&[(1, 2), (3, 4), (1, 3)]);
        let non_strict = classify_groups(&g, LoopRule::NonStrict);
        let strict = classify_groups(&g, LoopRule::Strict);
        assert!(strict.hardcore.len() <= non_strict.hardcore.len());
    }

    fn uniform_scores(n: usize) -> ScoreVector {
        ScoreVector {
            scores: vec![1.0; n],
            algorithm: "test".into(),
            iterations: 0,
            converged: true,
        }
    }

    #[test]
    fn score_split_counts() {
        let edges: Vec<(u64, u64)> = (0..9).map(|i| (i, i + 1)).collect();
        let g = build_graph(&edges);
        let scores = ScoreVector {
            scores: (0..10).map(|v| 10.0 - v as f64).collect(),
            algorithm: "test".into(),
            iterations: 0,
            converged: true,
        };
        let result = classify_by_score(&g, &scores, 0.2, 0.3).unwrap();
        assert_eq!(result.hardcore.len(), 2);
        assert_eq!(result.casual.len(), 5);
        assert_eq!(result.peripheral.len(), 3);
        assert!(result.removal_trace.is_empty());
    }

    #[test]
    fn uniform_scores_fall_back_to_id_order() {
        let edges: Vec<(u64, u64)> = (0..9).map(|i| (i, i + 1)).collect();
        let g = build_graph(&edges);
        let result = classify_by_score(&g, &uniform_scores(10), 0.2, 0.3).unwrap();
        let hardcore_ids: Vec<u64> = result.hardcore.iter().map(|&v| g.ext_id(v)).collect();
        assert_eq!(hardcore_ids, vec![0, 1]);
        let peripheral_ids: Vec<u64> = result.peripheral.iter().map(|&v| g.ext_id(v)).collect();
        assert_eq!(peripheral_ids, vec![7, 8, 9]);
    }

    #[test]
    fn default_fractions_use_ceiling() {
        let edges: Vec<(u64, u64)> = (0..99).map(|i| (i, i + 1)).collect();
        let g = build_graph(&edges); // n = 100
        let result = classify_by_score(&g, &uniform_scores(100), 0.07, 0.14).unwrap();
        assert_eq!(result.hardcore.len(), 7);
        assert_eq!(result.peripheral.len(), 14);
    }

    #[test]
    fn score_split_is_rank_invariant() {
        let edges: Vec<(u64, u64)> = (0..19).map(|i| (i, i + 1)).collect();
        let g = build_graph(&edges);
        let raw: Vec<f64> = (0..20).map(|v| (v as f64 * 0.37).sin() + 2.0).collect();
        let transformed: Vec<f64> = raw.iter().map(|&s| s.exp() * 3.0).collect();
        let make = |scores: Vec<f64>| ScoreVector {
            scores,
            algorithm: "test".into(),
            iterations: 0,
            converged: true,
        };
        let a = classify_by_score(&g, &make(raw), 0.1, 0.2).unwrap();
        let b = classify_by_score(&g, &make(transformed), 0.1, 0.2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fraction_bounds_enforced() {
        let g = build_graph(&[(1, 2)]);
        assert!(classify_by_score(&g, &uniform_scores(2), 0.0, 0.1).is_err());
        assert!(classify_by_score(&g, &uniform_scores(2), 0.6, 0.5).is_err());
    }

    fn table_for(g: &Graph, values: impl Fn(u64) -> (u64, u64)) -> PlayerTable {
        let mut t = PlayerTable::new();
        for v in 0..g.node_count() {
            let id = g.ext_id(v);
            let (online_time, kills) = values(id);
            t.insert(
                id,
                PlayerRecord {
                    clan_id: None,
                    online_time,
                    kills,
                    level: 1,
                    status: String::new(),
                },
            )
            .unwrap();
        }
        t
    }

    #[test]
    fn perfect_indicator_correlation() {
        let g = build_graph(&[(1, 2), (2, 3), (3, 4)]);
        let t = table_for(&g, |id| (u64::from(id <= 2), 0));
        let assignment = CohortAssignment {
            hardcore: (0..g.node_count()).filter(|&v| g.ext_id(v) <= 2).collect(),
            casual: (0..g.node_count()).filter(|&v| g.ext_id(v) > 2).collect(),
            peripheral: NodeSet::new(),
            removal_trace: Vec::new(),
        };
        let report =
            correlate_cohort(&assignment, Cohort::Hardcore, &g, &t, Metric::OnlineTime).unwrap();
        assert_relative_eq!(report.r, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_metric_is_degenerate() {
        let g = build_graph(&[(1, 2), (2, 3)]);
        let t = table_for(&g, |_| (5, 5));
        let assignment = classify_groups(&g, LoopRule::NonStrict);
        assert!(matches!(
            correlate_cohort(&assignment, Cohort::Hardcore, &g, &t, Metric::Kills).unwrap_err(),
            Error::ZeroVariance(_)
        ));
    }

    #[test]
    fn planted_shift_yields_strong_correlation() {
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges: Vec<(u64, u64)> = (0..59).map(|i| (i, i + 1)).collect();
            let g = build_graph(&edges);
            let hardcore: NodeSet = (0..12).collect();
            let mut t = PlayerTable::new();
            for v in 0..g.node_count() {
                let noise: u64 = rng.gen_range(0..100);
                let shift = if hardcore.contains(&v) { 1000 } else { 0 };
                t.insert(
                    g.ext_id(v),
                    PlayerRecord {
                        clan_id: None,
                        online_time: shift + noise,
                        kills: 0,
                        level: 1,
                        status: String::new(),
                    },
                )
                .unwrap();
            }
            let assignment = CohortAssignment {
                hardcore: hardcore.clone(),
                casual: (12..60).collect(),
                peripheral: NodeSet::new(),
                removal_trace: Vec::new(),
            };
            let report =
                correlate_cohort(&assignment, Cohort::Hardcore, &g, &t, Metric::OnlineTime)
                    .unwrap();
            assert!(report.r > 0.5, "seed {seed}: r = {}", report.r);
        }
    }

    #[test]
    fn score_correlation_extremes() {
        let g = build_graph(&[(1, 2), (2, 3), (3, 4)]);
        let t = table_for(&g, |id| (id * 10, 100 - id * 10));
        let scores = ScoreVector {
            scores: (0..g.node_count()).map(|v| g.ext_id(v) as f64).collect(),
            algorithm: "test".into(),
            iterations: 0,
            converged: true,
        };
        let online = correlate_scores(&scores, &g, &t, Metric::OnlineTime).unwrap();
        assert_relative_eq!(online.r, 1.0, epsilon = 1e-12);
        let kills = correlate_scores(&scores, &g, &t, Metric::Kills).unwrap();
        assert_relative_eq!(kills.r, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn pearson_matches_brute_force_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let len = rng.gen_range(3..100);
            let x: Vec<f64> = (0..len).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let y: Vec<f64> = (0..len).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let got = pearson(&x, &y).unwrap();
            // direct covariance formula: E[xy] - E[x]E[y] over sqrt of the
            // corresponding variance products
            let nf = len as f64;
            let exy = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / nf;
            let ex = x.iter().sum::<f64>() / nf;
            let ey = y.iter().sum::<f64>() / nf;
            let ex2 = x.iter().map(|a| a * a).sum::<f64>() / nf;
            let ey2 = y.iter().map(|b| b * b).sum::<f64>() / nf;
            let want = (exy - ex * ey) / ((ex2 - ex * ex).sqrt() * (ey2 - ey * ey).sqrt());
            assert_relative_eq!(got, want, epsilon = 1e-12);
        }
    }
}
