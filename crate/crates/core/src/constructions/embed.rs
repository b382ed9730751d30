//! Graphs realised as double-membership graphs.

use std::collections::{BTreeSet, HashSet};

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::iso::is_isomorphism;
use crate::reducts::{d_graph, d_neighbors, Slice};
use crate::store::{Hyperset, Store, Target};

/// Solves `x_i = {i} ∪ {x_j : R(i,j)}` and returns `x_i` for every vertex.
pub fn embed_graph(store: &mut Store, g: &Graph) -> Vec<Hyperset> {
    let tags: Vec<Hyperset> = (0..g.size() as u32).map(|i| store.hf_encode(i)).collect();
    embed_graph_tagged(store, g, &tags).expect("naturals are distinct well-founded tags")
}

/// Solves `x_i = {tags[i]} ∪ {x_j : R(i,j)}`. Tags must be distinct and
/// well-founded; distinct tag families give disjoint copies.
pub fn embed_graph_tagged(store: &mut Store, g: &Graph, tags: &[Hyperset]) -> Result<Vec<Hyperset>> {
    if tags.len() != g.size() {
        return Err(Error::TupleLength(g.size(), tags.len()));
    }
    let mut seen = HashSet::new();
    for &t in tags {
        store.check(t)?;
        if !store.is_well_founded(t) {
            return Err(Error::TagCondition { condition: "well-founded", detail: "tag is not well-founded".into() });
        }
        if !seen.insert(t) {
            return Err(Error::TagCondition { condition: "distinct", detail: "two vertices share a tag".into() });
        }
    }
    let locals: Vec<Vec<Target>> = (0..g.size())
        .map(|i| {
            std::iter::once(Target::Stored(tags[i].node()))
                .chain(g.row(i).into_iter().map(Target::Local))
                .collect()
        })
        .collect();
    Ok(store.insert(&locals).into_iter().map(|v| store.handle(v)).collect())
}

/// Outcome of checking an embedding `i ↦ image[i]` of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingCheck {
    pub injective: bool,
    /// The D-graph of the image is isomorphic to `g` via the embedding.
    pub isomorphic: bool,
    /// No set outside the image is D-adjacent to a set in it.
    pub d_closed: bool,
}

impl EmbeddingCheck {
    pub fn passed(&self) -> bool {
        self.injective && self.isomorphic && self.d_closed
    }
}

pub fn check_embedding(store: &Store, g: &Graph, image: &[Hyperset]) -> EmbeddingCheck {
    let distinct: BTreeSet<Hyperset> = image.iter().copied().collect();
    let injective = distinct.len() == image.len() && image.len() == g.size();
    let slice = Slice::new(store, image.iter().copied()).expect("handles from this store");
    let isomorphic = injective && {
        let map: Vec<usize> = image.iter().map(|&h| slice.index_of(h).expect("in slice")).collect();
        is_isomorphism(g.as_structure(), &d_graph(store, &slice), &map)
    };
    let d_closed = image
        .iter()
        .all(|&h| d_neighbors(store, h).into_iter().all(|x| distinct.contains(&x)));
    EmbeddingCheck { injective, isomorphic, d_closed }
}
