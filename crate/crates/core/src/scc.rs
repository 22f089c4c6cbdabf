//! Strongly connected components (iterative Tarjan) and a deterministic
//! topological order of the condensation.

use crate::graph::Graph;

/// Adjacency-list digraph used for the small auxiliary graphs of the
/// radius pipeline.
pub type Digraph = Vec<Vec<usize>>;

pub fn digraph_of(g: &Graph) -> Digraph {
    g.vertices().map(|u| g.out_edges(u).map(|(v, _)| v).collect()).collect()
}

/// Component id of each vertex. Ids follow Tarjan completion order, which
/// is a reverse topological order of the condensation.
pub fn tarjan(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut count = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*edge) {
                *edge += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (count, comp)
}

/// Strongly connected components, each sorted, listed in a topological
/// order of the condensation (sources first). Ties between unrelated
/// components are broken by smallest member.
pub fn components_topological(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let (count, comp) = tarjan(adj);
    let mut members = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    let mut succ = vec![Vec::new(); count];
    let mut indeg = vec![0usize; count];
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            let (a, b) = (comp[u], comp[v]);
            if a != b {
                succ[a].push(b);
            }
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
        for &b in s.iter() {
            indeg[b] += 1;
        }
    }
    // Kahn's algorithm keyed by smallest member for determinism.
    let key = |c: usize| members[c][0];
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<(usize, usize)>> = (0..count)
        .filter(|&c| indeg[c] == 0)
        .map(|c| std::cmp::Reverse((key(c), c)))
        .collect();
    let mut order = Vec::with_capacity(count);
    while let Some(std::cmp::Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &b in &succ[c] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.push(std::cmp::Reverse((key(b), b)));
            }
        }
    }
    debug_assert_eq!(order.len(), count);
    order.into_iter().map(|c| std::mem::take(&mut members[c])).collect()
}

pub fn is_strongly_connected(adj: &[Vec<usize>]) -> bool {
    adj.is_empty() || tarjan(adj).0 == 1
}

pub fn graph_is_strongly_connected(g: &Graph) -> bool {
    is_strongly_connected(&digraph_of(g))
}
