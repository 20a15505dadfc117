//! Partition of a node set into disjoint blocks (communities, components,
//! clans, cohorts). Block ids are normalized to 0..block_count-1 in order
//! of first appearance over the sorted node list.

use crate::graph::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    nodes: Vec<usize>, // sorted ascending
    blocks: Vec<u32>,  // parallel to nodes
    block_count: u32,
}

impl Partition {
    /// Build from (node, raw block label) pairs. Labels may be arbitrary;
    /// they are relabeled contiguously. Panics on duplicate nodes.
    pub fn from_assignments(mut pairs: Vec<(usize, u64)>) -> Self {
        pairs.sort_unstable_by_key(|&(node, _)| node);
        for window in pairs.windows(2) {
            assert_ne!(window[0].0, window[1].0, "duplicate node in partition");
        }
        let mut relabel = std::collections::HashMap::new();
        let mut blocks = Vec::with_capacity(pairs.len());
        let mut next = 0u32;
        for &(_, raw) in &pairs {
            let id = *relabel.entry(raw).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            blocks.push(id);
        }
        Partition {
            nodes: pairs.into_iter().map(|(node, _)| node).collect(),
            blocks,
            block_count: next,
        }
    }

    /// Build over nodes 0..n from a dense label vector.
    pub fn from_dense(labels: &[u64]) -> Self {
        Self::from_assignments(labels.iter().enumerate().map(|(v, &b)| (v, b)).collect())
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_assignments((0..n).map(|v| (v, v as u64)).collect())
    }

    pub fn single_block(n: usize) -> Self {
        Self::from_assignments((0..n).map(|v| (v, 0)).collect())
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.block_count as usize
    }

    pub fn block_of(&self, node: usize) -> Option<u32> {
        self.nodes
            .binary_search(&node)
            .ok()
            .map(|i| self.blocks[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.nodes.iter().copied().zip(self.blocks.iter().copied())
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count as usize];
        for &b in &self.blocks {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Member nodes of every block, indexed by block id.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count as usize];
        for (node, block) in self.iter() {
            out[block as usize].push(node);
        }
        out
    }

    /// True when the partition covers exactly the nodes 0..n.
    pub fn covers_contiguous(&self, n: usize) -> bool {
        self.nodes.len() == n && self.nodes.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Sub-partition over `keep ∩ nodes`, with block ids renormalized.
    pub fn restrict(&self, keep: &NodeSet) -> Partition {
        Partition::from_assignments(
            self.iter()
                .filter(|(node, _)| keep.contains(node))
                .map(|(node, block)| (node, block as u64))
                .collect(),
        )
    }
}
