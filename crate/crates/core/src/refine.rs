//! Partition refinement and strongly connected components over small
//! membership graphs.
//!
//! Edges point from a set to its elements. An edge may also end in an
//! opaque label: a node that lives outside the graph being refined and whose
//! identity is already settled (a canonical store node). Two nodes end up in
//! the same block iff they are bisimilar, with labels compared by equality.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Edge {
    Node(usize),
    Label(u32),
}

/// Coarsest stable partition of the graph, starting from a single block.
///
/// Returns the block of every node and the number of blocks. Block ids are
/// assigned in order of first appearance, so the result is deterministic for
/// a given node order.
pub(crate) fn coarsest_partition(children: &[Vec<Edge>]) -> (Vec<usize>, usize) {
    let n = children.len();
    let mut block = vec![0usize; n];
    let mut count = usize::from(n > 0);
    let mut sig: Vec<u64> = Vec::new();

    loop {
        let mut table: HashMap<(usize, Vec<u64>), usize> = HashMap::with_capacity(n);
        let mut next = vec![0usize; n];
        for v in 0..n {
            sig.clear();
            sig.extend(children[v].iter().map(|e| match *e {
                Edge::Node(c) => (block[c] as u64) << 1,
                Edge::Label(l) => (u64::from(l) << 1) | 1,
            }));
            sig.sort_unstable();
            sig.dedup();
            let len = table.len();
            next[v] = *table.entry((block[v], sig.clone())).or_insert(len);
        }
        let new_count = table.len();
        block = next;
        if new_count == count {
            return (block, count);
        }
        count = new_count;
    }
}

/// Tarjan's algorithm. Components come out in reverse topological order:
/// every component is emitted after all components it has edges into.
pub(crate) fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0usize;
    // explicit call stack of (node, next child position)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        calls.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = calls.last() {
            if pos < adj[v].len() {
                let w = adj[v][pos];
                if let Some(top) = calls.last_mut() {
                    top.1 += 1;
                }
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(v: &[usize]) -> Vec<Edge> {
        v.iter().map(|&c| Edge::Node(c)).collect()
    }

    #[test]
    fn two_cycle_collapses_with_self_loop() {
        // 0 <-> 1, 2 -> 2
        let g = vec![nodes(&[1]), nodes(&[0]), nodes(&[2])];
        let (block, count) = coarsest_partition(&g);
        assert_eq!(count, 1);
        assert!(block.iter().all(|&b| b == 0));
    }

    #[test]
    fn empty_and_singleton_split() {
        // 0 = {}, 1 = {0}, 2 = {}
        let g = vec![vec![], nodes(&[0]), vec![]];
        let (block, count) = coarsest_partition(&g);
        assert_eq!(count, 2);
        assert_eq!(block[0], block[2]);
        assert_ne!(block[0], block[1]);
    }

    #[test]
    fn labels_distinguish() {
        let g = vec![vec![Edge::Label(3)], vec![Edge::Label(4)], vec![Edge::Label(3)]];
        let (block, count) = coarsest_partition(&g);
        assert_eq!(count, 2);
        assert_eq!(block[0], block[2]);
    }

    #[test]
    fn scc_order_is_reverse_topological() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3
        let adj = vec![vec![1], vec![2], vec![1, 3], vec![]];
        let comps = tarjan_scc(&adj);
        assert_eq!(comps, vec![vec![3], vec![1, 2], vec![0]]);
    }
}
