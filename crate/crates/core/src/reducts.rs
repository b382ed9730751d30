//! S/D reducts of finite slices of the store, regions and connected
//! components.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::store::{Hyperset, Store, StoreId};
use crate::structure::{FiniteStructure, Language, Symbol};
use crate::unionfind::UnionFind;

/// A finite set of hypersets from one store, kept sorted. Position `i` in
/// [`Slice::members`] is vertex `i` of the reducts built from it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slice {
    store: StoreId,
    members: Vec<Hyperset>,
}

impl Slice {
    pub fn new<I: IntoIterator<Item = Hyperset>>(store: &Store, members: I) -> Result<Slice> {
        let mut members: Vec<Hyperset> = members.into_iter().collect();
        for &h in &members {
            store.check(h)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(Slice { store: store.id(), members })
    }

    pub fn empty(store: &Store) -> Slice {
        Slice { store: store.id(), members: Vec::new() }
    }

    pub fn store_id(&self) -> StoreId {
        self.store
    }

    pub fn members(&self) -> &[Hyperset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, h: Hyperset) -> Option<usize> {
        self.members.binary_search(&h).ok()
    }

    pub fn contains(&self, h: Hyperset) -> bool {
        self.index_of(h).is_some()
    }

    pub fn union(&self, other: &Slice) -> Slice {
        assert_eq!(self.store, other.store, "slices from different stores");
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Slice { store: self.store, members }
    }

    fn assert_store(&self, store: &Store) {
        assert_eq!(self.store, store.id(), "slice used with a foreign store");
    }
}

/// Double membership in the whole store.
pub fn double_member(store: &Store, x: Hyperset, y: Hyperset) -> bool {
    store.contains(y, x) && store.contains(x, y)
}

fn reduct(store: &Store, slice: &Slice, lang: Language) -> FiniteStructure {
    slice.assert_store(store);
    let mut out = FiniteStructure::new(lang, slice.len());
    for (j, &y) in slice.members.iter().enumerate() {
        for x in store.elements(y) {
            let Some(i) = slice.index_of(x) else { continue };
            if lang == Language::L0 {
                out.add_edge(Symbol::S, i, j).expect("in range");
            }
            if store.contains(x, y) {
                out.add_edge(Symbol::D, i, j).expect("in range");
            }
        }
    }
    out
}

/// The D-graph of a slice: `D(x, y)` iff `x ∈ y` and `y ∈ x`.
///
/// # Panics
///
/// If the slice comes from another store.
pub fn d_graph(store: &Store, slice: &Slice) -> FiniteStructure {
    reduct(store, slice, Language::L1)
}

/// The SD-graph of a slice: D as in [`d_graph`] plus `S(x, y)` iff `x ∈ y`
/// or `y ∈ x`.
pub fn sd_graph(store: &Store, slice: &Slice) -> FiniteStructure {
    reduct(store, slice, Language::L0)
}

/// D-neighbours of `h` in the whole store (loops excluded).
pub fn d_neighbors(store: &Store, h: Hyperset) -> Vec<Hyperset> {
    store.elements(h).filter(|&x| x != h && store.contains(x, h)).collect()
}

/// Saturates a slice under D-neighbours in the store. Terminates because
/// every D-neighbour of a set is one of its elements.
pub fn d_closure(store: &Store, slice: &Slice) -> Slice {
    slice.assert_store(store);
    let mut members = slice.members.clone();
    let mut seen: std::collections::HashSet<Hyperset> = members.iter().copied().collect();
    let mut queue: VecDeque<Hyperset> = members.iter().copied().collect();
    while let Some(h) = queue.pop_front() {
        for x in d_neighbors(store, h) {
            if seen.insert(x) {
                members.push(x);
                queue.push_back(x);
            }
        }
    }
    members.sort_unstable();
    Slice { store: slice.store, members }
}

/// The D-connected component of `h` inside `within`.
pub fn region(store: &Store, h: Hyperset, within: &Slice) -> Result<Slice> {
    within.assert_store(store);
    store.check(h)?;
    if !within.contains(h) {
        return Err(Error::NotInSlice);
    }
    let mut seen = vec![h];
    let mut queue = VecDeque::from([h]);
    while let Some(v) = queue.pop_front() {
        for x in d_neighbors(store, v) {
            if within.contains(x) && !seen.contains(&x) {
                seen.push(x);
                queue.push_back(x);
            }
        }
    }
    seen.sort_unstable();
    Ok(Slice { store: within.store, members: seen })
}

/// Connectivity classes of a structure: under D for L1 and L0, under the
/// symmetrised E for LNBG. Classes are sorted and ordered by least element.
pub fn components(g: &FiniteStructure) -> Vec<Vec<usize>> {
    let sym = match g.language() {
        Language::L1 | Language::L0 => Symbol::D,
        Language::Lnbg => Symbol::E,
    };
    let mut uf = UnionFind::new(g.size());
    for (u, v) in g.edges(sym) {
        uf.union(u, v);
    }
    uf.classes()
}
