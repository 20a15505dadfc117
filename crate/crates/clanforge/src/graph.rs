//! Graph construction, edge-list and metadata ingestion, node-removal views.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use crate::error::{Error, Result};

/// External character id as it appears in the input files.
pub type CharId = u64;

/// Set of internal node indices.
pub type NodeSet = BTreeSet<usize>;

/// Immutable undirected simple graph with contiguous internal indices
/// and a bijection to external character ids.
///
/// Invariants: neighbor lists are symmetric and sorted, no self-loops,
/// no duplicate neighbors, `edge_count` is half the sum of list lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    ext_ids: Vec<CharId>, // sorted ascending; index == internal node id
    edge_count: usize,
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.ext_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adj[node]
    }

    /// External character id of an internal node.
    pub fn ext_id(&self, node: usize) -> CharId {
        self.ext_ids[node]
    }

    /// Internal index for an external id, if present.
    pub fn node_of(&self, id: CharId) -> Option<usize> {
        self.ext_ids.binary_search(&id).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.ext_ids.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.ext_ids.len() as f64
        }
    }

    /// Undirected edges as (u, v) internal pairs with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &w in nbrs {
                let w = w as usize;
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out
    }
}

/// Counts of input anomalies collapsed during graph construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestSummary {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

/// Build a simple undirected graph from id pairs.
///
/// Self-loops are dropped; duplicate and reversed-duplicate pairs collapse
/// to one edge. Internal indices are assigned by ascending external id, so
/// the result is independent of input order.
pub fn build_graph(edges: &[(CharId, CharId)]) -> Graph {
    build_graph_with_summary(edges).0
}

pub fn build_graph_with_summary(edges: &[(CharId, CharId)]) -> (Graph, IngestSummary) {
    let mut ids = BTreeSet::new();
    for &(a, b) in edges {
        ids.insert(a);
        ids.insert(b);
    }
    let ext_ids: Vec<CharId> = ids.into_iter().collect();
    let index: BTreeMap<CharId, u32> = ext_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i as u32))
        .collect();

    let mut summary = IngestSummary::default();
    let mut edge_set = BTreeSet::new();
    for &(a, b) in edges {
        if a == b {
            summary.self_loops += 1;
            continue;
        }
        let (u, v) = (index[&a], index[&b]);
        let key = (u.min(v), u.max(v));
        if !edge_set.insert(key) {
            summary.duplicate_edges += 1;
        }
    }

    let mut adj = vec![Vec::new(); ext_ids.len()];
    for &(u, v) in &edge_set {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
    }

    (
        Graph {
            adj,
            ext_ids,
            edge_count: edge_set.len(),
        },
        summary,
    )
}

/// View of `g` with the nodes in `s` (and their incident edges) removed.
/// External ids of the remaining nodes are retained; `g` is unchanged.
pub fn remove_nodes(g: &Graph, s: &NodeSet) -> Result<Graph> {
    let n = g.node_count();
    if let Some(&bad) = s.iter().find(|&&v| v >= n) {
        return Err(Error::NodeOutOfRange {
            index: bad,
            node_count: n,
        });
    }
    let keep: Vec<usize> = (0..n).filter(|v| !s.contains(v)).collect();
    let mut new_index = vec![u32::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        new_index[v] = i as u32;
    }
    let mut adj = vec![Vec::new(); keep.len()];
    let mut edge_count = 0;
    for (i, &v) in keep.iter().enumerate() {
        for &w in g.neighbors(v) {
            let w = w as usize;
            if new_index[w] != u32::MAX {
                adj[i].push(new_index[w]);
                if v < w {
                    edge_count += 1;
                }
            }
        }
    }
    let ext_ids = keep.iter().map(|&v| g.ext_id(v)).collect();
    Ok(Graph {
        adj,
        ext_ids,
        edge_count,
    })
}

/// Parse a two-column edge list: whitespace- or comma-separated integer
/// ids, `#`-prefixed lines ignored. Preserves input order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Vec<(CharId, CharId)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two columns, found {}", tokens.len()),
            });
        }
        let parse = |tok: &str| -> Result<CharId> {
            tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("non-integer token '{tok}'"),
            })
        };
        pairs.push((parse(tokens[0])?, parse(tokens[1])?));
    }
    Ok(pairs)
}

/// Per-character metadata record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerRecord {
    pub clan_id: Option<u64>,
    pub online_time: u64,
    pub kills: u64,
    pub level: u32,
    pub status: String,
}

/// Metadata records keyed by character id. Characters may appear here
/// without appearing in the graph and vice versa.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlayerTable {
    records: BTreeMap<CharId, PlayerRecord>,
}

impl PlayerTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: CharId, record: PlayerRecord) -> Result<()> {
        if self.records.contains_key(&id) {
            return Err(Error::DuplicateCharacter(id));
        }
        self.records.insert(id, record);
        Ok(())
    }

    pub fn get(&self, id: CharId) -> Option<&PlayerRecord> {
        self.records.get(&id)
    }

    pub fn clan_of(&self, id: CharId) -> Option<u64> {
        self.records.get(&id).and_then(|r| r.clan_id)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CharId, &PlayerRecord)> {
        self.records.iter()
    }

    /// Total member count per clan over the whole table.
    pub fn clan_sizes(&self) -> BTreeMap<u64, usize> {
        let mut sizes = BTreeMap::new();
        for record in self.records.values() {
            if let Some(clan) = record.clan_id {
                *sizes.entry(clan).or_insert(0) += 1;
            }
        }
        sizes
    }

    /// Clan points, taken as the sum of member kills (the input data
    /// carries no dedicated points column).
    pub fn clan_points(&self) -> BTreeMap<u64, u64> {
        let mut points = BTreeMap::new();
        for record in self.records.values() {
            if let Some(clan) = record.clan_id {
                *points.entry(clan).or_insert(0) += record.kills;
            }
        }
        points
    }
}

/// Parse metadata CSV with a header row naming columns
/// `char_id,clan_id,online_time,kills,level,status`. An empty clan_id
/// field means no clan.
pub fn load_metadata<R: BufRead>(reader: R) -> Result<PlayerTable> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "missing header row".into(),
                })
            }
        }
    };
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let col = |name: &str| -> Result<usize> {
        columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing column '{name}'"),
            })
    };
    let (ci, cl, ot, ki, lv, st) = (
        col("char_id")?,
        col("clan_id")?,
        col("online_time")?,
        col("kills")?,
        col("level")?,
        col("status")?,
    );

    let mut table = PlayerTable::new();
    for (lineno, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns.len() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!(
                    "expected {} fields, found {}",
                    columns.len(),
                    fields.len()
                ),
            });
        }
        let parse_err = |msg: String| Error::Parse {
            line: lineno + 1,
            message: msg,
        };
        let id: CharId = fields[ci]
            .parse()
            .map_err(|_| parse_err(format!("bad char_id '{}'", fields[ci])))?;
        let clan_id = if fields[cl].is_empty() {
            None
        } else {
            Some(
                fields[cl]
                    .parse()
                    .map_err(|_| parse_err(format!("bad clan_id '{}'", fields[cl])))?,
            )
        };
        let nonneg = |field: &str, name: &str| -> Result<u64> {
            let v: i64 = field
                .parse()
                .map_err(|_| parse_err(format!("bad {name} '{field}'")))?;
            if v < 0 {
                return Err(parse_err(format!("negative {name} {v}")));
            }
            Ok(v as u64)
        };
        let record = PlayerRecord {
            clan_id,
            online_time: nonneg(fields[ot], "online_time")?,
            kills: nonneg(fields[ki], "kills")?,
            level: fields[lv]
                .parse()
                .map_err(|_| parse_err(format!("bad level '{}'", fields[lv])))?,
            status: fields[st].to_string(),
        };
        table.insert(id, record)?;
    }
    Ok(table)
}
