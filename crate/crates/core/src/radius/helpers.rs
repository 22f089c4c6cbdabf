//! Small subroutines of the radius pipeline: sparsifying a strongly
//! connected digraph and cutting a weighted path into short pieces.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::scc::is_strongly_connected;

fn bfs_tree(adj: &[Vec<usize>], root: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

/// Union of a BFS out-tree and a BFS in-tree rooted at `root`: at most
/// `2(n - 1)` arcs that keep the digraph strongly connected.
pub fn scc_sparsify(adj: &[Vec<usize>], root: usize) -> Result<Vec<(usize, usize)>> {
    if root >= adj.len() {
        return Err(Error::InvalidVertex {
            vertex: root,
            n: adj.len(),
        });
    }
    if !is_strongly_connected(adj) {
        return Err(Error::NotStronglyConnected);
    }
    let mut reverse = vec![Vec::new(); adj.len()];
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            reverse[v].push(u);
        }
    }
    let mut kept = BTreeSet::new();
    for (v, p) in bfs_tree(adj, root).into_iter().enumerate() {
        if let Some(p) = p {
            kept.insert((p, v));
        }
    }
    for (v, p) in bfs_tree(&reverse, root).into_iter().enumerate() {
        if let Some(p) = p {
            kept.insert((v, p));
        }
    }
    Ok(kept.into_iter().collect())
}

/// Greedy subdivision of a path whose `i`-th arc has weight `weights[i]`.
///
/// Returns the positions (indices into the vertex sequence, excluding both
/// endpoints) of the emitted anchors. Consecutive anchors, endpoints
/// included, are at most `limit` apart along the path. A path of length at
/// most `z * limit` yields at most `2z - 1` anchors.
pub fn subdivide_path(weights: &[u64], limit: u64) -> Result<Vec<usize>> {
    if let Some(&weight) = weights.iter().find(|&&w| w > limit) {
        return Err(Error::EdgeExceedsLimit { weight, limit });
    }
    let mut prefix = Vec::with_capacity(weights.len() + 1);
    prefix.push(0u64);
    for &w in weights {
        prefix.push(prefix.last().unwrap() + w);
    }
    let last = weights.len();
    let mut anchors = Vec::new();
    let mut cur = 0;
    while prefix[last] - prefix[cur] > limit {
        let mut next = cur;
        while next < last && prefix[next + 1] - prefix[cur] <= limit {
            next += 1;
        }
        debug_assert!(next > cur);
        anchors.push(next);
        cur = next;
    }
    Ok(anchors)
}
