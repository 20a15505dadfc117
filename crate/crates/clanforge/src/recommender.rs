//! Clan recommendation from community structure: pick the dominant clan in
//! the player's community, with full-clan removal-and-retry and an optional
//! points-balance filter.

use std::collections::BTreeMap;

use crate::community::{detect_communities, DEFAULT_TELEPORT};
use crate::error::{Error, Result};
use crate::graph::{remove_nodes, CharId, Graph, NodeSet, PlayerTable};
use crate::par;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecommendConfig {
    pub max_clan_size: usize,
    /// Clans with more points than this are never recommended.
    pub points_balance: Option<u64>,
    pub max_rounds: usize,
    /// Seed for community detection, reused on residual re-detection.
    pub seed: u64,
    pub teleport: f64,
    /// Restrict the original partition to the residual graph instead of
    /// re-detecting communities after a clan removal.
    pub reuse_partition: bool,
}

impl RecommendConfig {
    pub fn new(max_clan_size: usize, seed: u64) -> Self {
        RecommendConfig {
            max_clan_size,
            points_balance: None,
            max_rounds: 10,
            seed,
            teleport: DEFAULT_TELEPORT,
            reuse_partition: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoRecReason {
    /// The player's residual community contains no clan members.
    NoCommunitySignal,
    RoundsExhausted,
}

impl NoRecReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NoRecReason::NoCommunitySignal => "no-community-signal",
            NoRecReason::RoundsExhausted => "rounds-exhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clan(u64),
    AlreadyInClan(u64),
    NoRecommendation(NoRecReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recommendation {
    pub player: CharId,
    pub outcome: Outcome,
    pub rounds_used: usize,
}

fn validate(cfg: &RecommendConfig) -> Result<()> {
    if cfg.max_clan_size == 0 {
        return Err(Error::InvalidArgument("max_clan_size must be >= 1".into()));
    }
    if cfg.max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be >= 1".into()));
    }
    Ok(())
}

/// Recommend a clan for one player. `communities` is a partition of the
/// full graph; `clan_sizes` and `clan_points` describe the whole clan
/// population. Each call works on its own residual copy of the graph.
pub fn recommend_clan(
    g: &Graph,
    table: &PlayerTable,
    communities: &Partition,
    clan_sizes: &BTreeMap<u64, usize>,
    clan_points: &BTreeMap<u64, u64>,
    player: CharId,
    cfg: &RecommendConfig,
) -> Result<Recommendation> {
    validate(cfg)?;
    if g.node_of(player).is_none() {
        return Err(Error::UnknownCharacter(player));
    }
    if !communities.covers_contiguous(g.node_count()) {
        return Err(Error::InvalidArgument(
            "community partition must cover the graph".into(),
        ));
    }
    if let Some(clan) = table.clan_of(player) {
        return Ok(Recommendation {
            player,
            outcome: Outcome::AlreadyInClan(clan),
            rounds_used: 0,
        });
    }

    let mut residual = g.clone();
    let mut partition = communities.clone();
    for round in 1..=cfg.max_rounds {
        let node = residual
            .node_of(player)
            .expect("clanless player is never removed");
        let block = partition.block_of(node).expect("partition covers residual");

        // Count clan membership inside the player's community; clanless
        // members do not vote.
        let mut votes: BTreeMap<u64, usize> = BTreeMap::new();
        for (v, b) in partition.iter() {
            if b != block || v == node {
                continue;
            }
            if let Some(clan) = table.clan_of(residual.ext_id(v)) {
                *votes.entry(clan).or_insert(0) += 1;
            }
        }
        let Some((&best_clan, _)) = votes
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        else {
            return Ok(Recommendation {
                player,
                outcome: Outcome::NoRecommendation(NoRecReason::NoCommunitySignal),
                rounds_used: round,
            });
        };

        let size = clan_sizes.get(&best_clan).copied().unwrap_or(0);
        let too_many_points = cfg
            .points_balance
            .map(|limit| clan_points.get(&best_clan).copied().unwrap_or(0) > limit)
            .unwrap_or(false);
        if size < cfg.max_clan_size && !too_many_points {
            return Ok(Recommendation {
                player,
                outcome: Outcome::Clan(best_clan),
                rounds_used: round,
            });
        }

        // Clan rejected: remove its members from the residual graph and
        // redo the community step.
        let to_remove: NodeSet = (0..residual.node_count())
            .filter(|&v| table.clan_of(residual.ext_id(v)) == Some(best_clan))
            .collect();
        if cfg.reuse_partition {
            // Surviving nodes keep their block from the original partition,
            // reindexed onto the shrunken residual graph.
            let keep: Vec<usize> = (0..residual.node_count())
                .filter(|v| !to_remove.contains(v))
                .collect();
            let old_partition = partition;
            residual = remove_nodes(&residual, &to_remove)?;
            partition = Partition::from_assignments(
                keep.iter()
                    .enumerate()
                    .map(|(new, &old)| (new, old_partition.block_of(old).unwrap() as u64))
                    .collect(),
            );
        } else {
            residual = remove_nodes(&residual, &to_remove)?;
            partition = detect_communities(&residual, cfg.seed, cfg.teleport)?;
        }
    }
    Ok(Recommendation {
        player,
        outcome: Outcome::NoRecommendation(NoRecReason::RoundsExhausted),
        rounds_used: cfg.max_rounds,
    })
}

/// Recommendations for every clanless character in the graph. Communities
/// are detected once on the full graph; each query owns its residual state,
/// so batch order cannot affect outcomes.
pub fn batch_recommend(
    g: &Graph,
    table: &PlayerTable,
    cfg: &RecommendConfig,
) -> Result<Vec<Recommendation>> {
    validate(cfg)?;
    let communities = detect_communities(g, cfg.seed, cfg.teleport)?;
    let clan_sizes = table.clan_sizes();
    let clan_points = table.clan_points();
    let clanless: Vec<CharId> = (0..g.node_count())
        .map(|v| g.ext_id(v))
        .filter(|&id| table.clan_of(id).is_none())
        .collect();
    let results = par::map_indexed(clanless.len(), |i| {
        recommend_clan(
            g,
            table,
            &communities,
            &clan_sizes,
            &clan_points,
            clanless[i],
            cfg,
        )
    });
    results.into_iter().collect()
}
