use std::collections::BTreeSet;

use super::embed::embed_graph;
use super::graph::Graph;
use crate::error::{Error, Result};
use crate::store::{Hyperset, Store, Target};

/// The `n`-flower `a = {{a, i} : i < n}`: a loop-free set with exactly `n`
/// D-neighbours, each of which is a leaf.
pub fn flower(store: &mut Store, n: usize) -> Result<Hyperset> {
    if n == 0 {
        return Err(Error::NotPositive);
    }
    let tags: Vec<u32> = (0..n as u32).map(|i| store.hf_encode(i).node()).collect();
    let mut locals = vec![(1..=n).map(Target::Local).collect::<Vec<_>>()];
    for tag in tags {
        locals.push(vec![Target::Local(0), Target::Stored(tag)]);
    }
    let nodes = store.insert(&locals);
    Ok(store.handle(nodes[0]))
}

/// An `A`-bouquet: a loop-free `b` whose D-neighbours are exactly one
/// `n`-flower for each `n` in `a`. Built by embedding the tree that joins
/// `b` to an apex per `n`, the apex carrying `n - 1` further leaves.
pub fn bouquet(store: &mut Store, a: &BTreeSet<usize>) -> Result<Hyperset> {
    if a.contains(&0) {
        return Err(Error::NotPositive);
    }
    let mut edges = Vec::new();
    let mut next = 1;
    for &n in a {
        let apex = next;
        edges.push((0, apex));
        for leaf in apex + 1..apex + n {
            edges.push((apex, leaf));
        }
        next = apex + n;
    }
    let tree = Graph::from_edges(next, &edges)?;
    Ok(embed_graph(store, &tree)[0])
}
