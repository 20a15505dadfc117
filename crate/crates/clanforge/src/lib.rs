//! Friendship-network analytics for MMORPG-style player graphs.
//!
//! The crate covers the full pipeline: edge-list and metadata ingestion,
//! structural metrics (components, clustering, path lengths, small-world
//! check), power-law degree fitting, PageRank and betweenness centrality,
//! map-equation community detection with NMI, activity-cohort
//! classification, community-based clan recommendation, and seeded
//! synthetic graph generation for baselines and recovery tests.
//!
//! Per-source loops (breadth-first searches, betweenness accumulation,
//! batch recommendation) run on rayon when the default `parallel` feature
//! is enabled and sequentially otherwise; outputs are identical either way.

pub mod centrality;
pub mod cohorts;
pub mod community;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod par;
pub mod partition;
pub mod powerlaw;
pub mod recommender;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{build_graph, load_edge_list, load_metadata, remove_nodes};
pub use graph::{CharId, Graph, NodeSet, PlayerRecord, PlayerTable};
pub use partition::Partition;
