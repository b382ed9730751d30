//! Permutation models: membership twisted by a finite-support involution.
//!
//! For a graph on `0..n` without isolated vertices, `a_i = (n+1) \ {i}` and
//! `b_j = {j} ∪ {a_i : R(i,j)}`. Swapping every `a_i` with `b_i` gives a new
//! membership `x ∈_N y ⟺ x ∈ π(y)` whose double-membership graph restricted
//! to the `a_i` is the input graph.

use std::collections::HashMap;

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::reducts::Slice;
use crate::store::{Hyperset, Store, StoreId};
use crate::structure::{FiniteStructure, Language, Symbol};

/// The membership `x ∈_N y ⟺ x ∈ π(y)` for an involution `π` of finite
/// support.
#[derive(Debug, Clone)]
pub struct PermutedMembership {
    store: StoreId,
    swap: HashMap<Hyperset, Hyperset>,
}

impl PermutedMembership {
    /// The involution swapping `pairs[k].0` with `pairs[k].1`. All sets must
    /// be distinct.
    pub fn swapping(store: &Store, pairs: &[(Hyperset, Hyperset)]) -> Result<PermutedMembership> {
        let mut swap = HashMap::new();
        for &(x, y) in pairs {
            store.check(x)?;
            store.check(y)?;
            if x == y || swap.insert(x, y).is_some() || swap.insert(y, x).is_some() {
                return Err(Error::InvalidStructure("swapped sets are not pairwise distinct".into()));
            }
        }
        Ok(PermutedMembership { store: store.id(), swap })
    }

    pub fn pi(&self, h: Hyperset) -> Hyperset {
        self.swap.get(&h).copied().unwrap_or(h)
    }

    pub fn is_fixed(&self, h: Hyperset) -> bool {
        !self.swap.contains_key(&h)
    }

    /// Sets moved by `π`, sorted.
    pub fn support(&self) -> Vec<Hyperset> {
        let mut s: Vec<_> = self.swap.keys().copied().collect();
        s.sort_unstable();
        s
    }

    fn assert_store(&self, store: &Store) {
        assert_eq!(self.store, store.id(), "permutation used with a foreign store");
    }

    /// `x ∈_N y`.
    pub fn member(&self, store: &Store, x: Hyperset, y: Hyperset) -> bool {
        self.assert_store(store);
        store.contains(self.pi(y), x)
    }

    /// The `N`-elements of `y`, that is the elements of `π(y)`.
    pub fn elements<'s>(&self, store: &'s Store, y: Hyperset) -> impl Iterator<Item = Hyperset> + 's {
        self.assert_store(store);
        store.elements(self.pi(y))
    }

    pub fn double_member(&self, store: &Store, x: Hyperset, y: Hyperset) -> bool {
        self.member(store, x, y) && self.member(store, y, x)
    }

    /// The D-graph of a slice under `∈_N`.
    pub fn d_graph(&self, store: &Store, slice: &Slice) -> FiniteStructure {
        let mut g = FiniteStructure::new(Language::L1, slice.len());
        for (j, &y) in slice.members().iter().enumerate() {
            for x in self.elements(store, y) {
                if let Some(i) = slice.index_of(x) {
                    if self.member(store, y, x) {
                        g.add_edge(Symbol::D, i, j).expect("in range");
                    }
                }
            }
        }
        g
    }
}

#[derive(Debug, Clone)]
pub struct RiegerModel {
    pub membership: PermutedMembership,
    pub a: Vec<Hyperset>,
    pub b: Vec<Hyperset>,
}

/// Builds the permutation model realising `g` on the `a_i`.
pub fn rieger(store: &mut Store, g: &Graph) -> Result<RiegerModel> {
    let n = g.size();
    if n < 2 {
        return Err(Error::TooFewVertices(2));
    }
    if let Some(v) = g.isolated_vertex() {
        return Err(Error::IsolatedVertex(v));
    }
    let naturals: Vec<Hyperset> = (0..=n as u32).map(|i| store.hf_encode(i)).collect();
    let a: Vec<Hyperset> = (0..n)
        .map(|i| store.set_of(naturals.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &h)| h)))
        .collect::<Result<_>>()?;
    let b: Vec<Hyperset> = (0..n)
        .map(|j| {
            let column = (0..n).filter(|&i| g.adjacent(i, j)).map(|i| a[i]);
            store.set_of(column.chain([naturals[j]]))
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<_> = a.iter().copied().zip(b.iter().copied()).collect();
    let membership = PermutedMembership::swapping(store, &pairs)?;
    Ok(RiegerModel { membership, a, b })
}

/// Result of scanning a slice for `∈_N`-memberships that could carry a
/// D-edge, classified by the containing set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RiegerReport {
    pub slice_len: usize,
    /// Memberships `x ∈_N y` with `x` and `y` both fixed by `π`.
    pub fixed_cases: usize,
    /// Memberships `x ∈_N a_i`.
    pub a_cases: usize,
    /// Memberships `x ∈_N b_i`.
    pub b_cases: usize,
    /// D-edges other than those between `a_i` and `a_j` with `R(i,j)`.
    pub violations: Vec<(Hyperset, Hyperset)>,
    /// The D-graph on the `a_i` is the input graph via `i ↦ a_i`.
    pub realises_graph: bool,
}

impl RiegerReport {
    pub fn passed(&self) -> bool {
        self.realises_graph && self.violations.is_empty()
    }
}

impl RiegerModel {
    /// Rank of the `b_i`: every tracked set has rank at most this.
    pub fn top_rank(&self, store: &Store) -> u32 {
        self.b.iter().map(|&h| store.rank(h).expect("well-founded")).max().unwrap_or(0)
    }

    /// The test slice: everything hereditarily below the `a_i` and `b_i`,
    /// plus every well-founded store member of rank at most `rank_bound`.
    pub fn test_slice(&self, store: &Store, rank_bound: u32) -> Slice {
        let mut members = store.hereditary_closure(self.a.iter().chain(&self.b).copied());
        members.extend(store.iter().filter(|&h| store.rank(h).is_ok_and(|r| r <= rank_bound)));
        Slice::new(store, members).expect("store handles")
    }

    /// Checks that the only D-edges under `∈_N` within the test slice are
    /// the ones copying `g`.
    pub fn check_slice(&self, store: &Store, g: &Graph, rank_bound: u32) -> RiegerReport {
        let slice = self.test_slice(store, rank_bound);
        let pm = &self.membership;
        let index_a: HashMap<Hyperset, usize> = self.a.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let index_b: HashMap<Hyperset, usize> = self.b.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let mut report = RiegerReport { slice_len: slice.len(), ..Default::default() };

        for &y in slice.members() {
            for x in pm.elements(store, y) {
                if !slice.contains(x) {
                    continue;
                }
                if index_a.contains_key(&y) {
                    report.a_cases += 1;
                } else if index_b.contains_key(&y) {
                    report.b_cases += 1;
                } else if pm.is_fixed(x) {
                    report.fixed_cases += 1;
                }
                if !pm.member(store, y, x) {
                    continue;
                }
                let expected = match (index_a.get(&x), index_a.get(&y)) {
                    (Some(&i), Some(&j)) => g.adjacent(i, j),
                    _ => false,
                };
                if !expected {
                    report.violations.push((x, y));
                }
            }
        }

        let on_a = Slice::new(store, self.a.iter().copied()).expect("store handles");
        let map: Vec<usize> = self.a.iter().map(|&h| on_a.index_of(h).expect("in slice")).collect();
        report.realises_graph = crate::iso::is_isomorphism(g.as_structure(), &pm.d_graph(store, &on_a), &map);
        report
    }
}

/// Adds every set of rank below `k` (the cumulative level `V_k`) to the
/// store. `k` is capped at 4, where `V_4` has 16 members.
pub fn populate_cumulative(store: &mut Store, k: u32) -> Vec<Hyperset> {
    let mut level: Vec<Hyperset> = Vec::new();
    for _ in 0..k.min(4) {
        let n = level.len();
        let mut next = Vec::with_capacity(1 << n);
        for bits in 0u32..(1u32 << n) {
            let elems = (0..n).filter(|&i| bits >> i & 1 == 1).map(|i| level[i]);
            next.push(store.set_of(elems).expect("store handles"));
        }
        level = next;
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_realised() {
        let mut store = Store::new();
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = rieger(&mut store, &g).unwrap();
        let pm = &m.membership;
        assert!(pm.double_member(&store, m.a[0], m.a[1]));
        assert!(!pm.double_member(&store, m.a[0], m.a[0]));
        assert!(!pm.double_member(&store, m.a[1], m.a[1]));
        assert_eq!(pm.pi(pm.pi(m.a[0])), m.a[0]);
        populate_cumulative(&mut store, 4);
        let report = m.check_slice(&store, &g, m.top_rank(&store) + 1);
        assert!(report.passed(), "{report:?}");
        assert!(report.fixed_cases > 0 && report.a_cases > 0 && report.b_cases > 0);
    }

    #[test]
    fn loops_and_twins() {
        let mut store = Store::new();
        // 0 and 2 have the same neighbourhood; 1 is looped
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (1, 1)]).unwrap();
        let m = rieger(&mut store, &g).unwrap();
        assert!(m.membership.double_member(&store, m.a[1], m.a[1]));
        assert_ne!(m.b[0], m.b[2]);
        let report = m.check_slice(&store, &g, m.top_rank(&store) + 1);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn fixed_sets_keep_their_elements() {
        let mut store = Store::new();
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = rieger(&mut store, &g).unwrap();
        let three = store.hf_encode(3);
        let mut mine: Vec<_> = m.membership.elements(&store, three).collect();
        mine.sort();
        let mut theirs: Vec<_> = store.elements(three).collect();
        theirs.sort();
        assert_eq!(mine, theirs);
    }

    #[test]
    fn preconditions() {
        let mut store = Store::new();
        assert_eq!(
            rieger(&mut store, &Graph::from_edges(1, &[(0, 0)]).unwrap()).unwrap_err(),
            Error::TooFewVertices(2)
        );
        assert_eq!(
            rieger(&mut store, &Graph::from_edges(3, &[(0, 1)]).unwrap()).unwrap_err(),
            Error::IsolatedVertex(2)
        );
        assert_eq!(populate_cumulative(&mut store, 3).len(), 4);
    }
}
