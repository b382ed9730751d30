//! The canonical store of hereditarily finite hypersets.
//!
//! Every set lives in a [`Store`] as a node whose children are its elements.
//! The store is kept bisimulation-collapsed: no two nodes are bisimilar, so
//! two handles denote the same set iff they name the same node. New graphs
//! are merged in by partition refinement followed by hash-consing over their
//! strongly connected components.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};
use crate::refine::{coarsest_partition, tarjan_scc, Edge};

static NEXT_STORE: AtomicU32 = AtomicU32::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StoreId(u32);

/// Handle to a canonical node. Cheap to copy; equality is set equality for
/// handles coming from the same store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperset {
    store: StoreId,
    node: u32,
}

impl Hyperset {
    pub fn store_id(self) -> StoreId {
        self.store
    }

    /// Position of the node in its store. Stable for the lifetime of the store.
    pub fn node(self) -> u32 {
        self.node
    }
}

/// An accessible pointed graph: the raw, possibly cyclic, membership picture
/// of a set. Nodes are `0..len()`, edges go from a set to its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apg {
    children: Vec<Vec<usize>>,
    point: usize,
}

impl Apg {
    pub fn new(children: Vec<Vec<usize>>, point: usize) -> Self {
        Apg { children, point }
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Checks that every edge ends at a declared node and every node is
    /// reachable from the point.
    pub fn validate(&self) -> Result<()> {
        let n = self.children.len();
        if self.point >= n {
            return Err(Error::VertexOutOfRange { vertex: self.point, size: n });
        }
        for (from, ch) in self.children.iter().enumerate() {
            if let Some(&to) = ch.iter().find(|&&to| to >= n) {
                return Err(Error::UndeclaredNode { from, to });
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.point];
        seen[self.point] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.children[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(node) => Err(Error::Inaccessible { node }),
            None => Ok(()),
        }
    }
}

/// Where an edge of a graph being inserted ends: at another node of the same
/// graph, or at a node already in the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Target {
    Local(usize),
    Stored(u32),
}

#[derive(Debug, Clone)]
struct Scc {
    members: Vec<u32>,
}

/// Per-node signature of a cyclic component, used to find candidate matches:
/// (number of children inside the component, children outside it).
type SccKey = Vec<(u32, Box<[u32]>)>;

#[derive(Debug)]
pub struct Store {
    id: StoreId,
    children: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, u32>,
    // None for sets that are not well-founded
    rank: Vec<Option<u32>>,
    natural: Vec<Option<u32>>,
    naturals: Vec<u32>,
    scc_of: Vec<u32>,
    sccs: Vec<Scc>,
    cyclic_index: HashMap<SccKey, Vec<u32>>,
}

impl Default for Store {
    fn default() -> Self {
        Self::new()
    }
}

impl Store {
    pub fn new() -> Self {
        Store {
            id: StoreId(NEXT_STORE.fetch_add(1, Ordering::Relaxed)),
            children: Vec::new(),
            index: HashMap::new(),
            rank: Vec::new(),
            natural: Vec::new(),
            naturals: Vec::new(),
            scc_of: Vec::new(),
            sccs: Vec::new(),
            cyclic_index: HashMap::new(),
        }
    }

    pub fn id(&self) -> StoreId {
        self.id
    }

    /// Number of canonical nodes.
    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    /// All sets in the store, in node order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = Hyperset> + '_ {
        (0..self.children.len() as u32).map(move |node| self.handle(node))
    }

    pub fn get(&self, node: u32) -> Option<Hyperset> {
        ((node as usize) < self.children.len()).then(|| self.handle(node))
    }

    pub(crate) fn handle(&self, node: u32) -> Hyperset {
        Hyperset { store: self.id, node }
    }

    pub(crate) fn check(&self, h: Hyperset) -> Result<u32> {
        if h.store == self.id {
            Ok(h.node)
        } else {
            Err(Error::ForeignHandle)
        }
    }

    fn node_of(&self, h: Hyperset) -> usize {
        assert_eq!(h.store, self.id, "hyperset handle used with a foreign store");
        h.node as usize
    }

    /// The elements of `h`.
    ///
    /// # Panics
    ///
    /// If `h` belongs to another store.
    pub fn elements(&self, h: Hyperset) -> impl ExactSizeIterator<Item = Hyperset> + '_ {
        let node = self.node_of(h);
        self.children[node].iter().map(move |&c| self.handle(c))
    }

    /// Whether `x ∈ y`.
    pub fn member(&self, x: Hyperset, y: Hyperset) -> Result<bool> {
        let x = self.check(x)?;
        let y = self.check(y)?;
        Ok(self.children[y as usize].binary_search(&x).is_ok())
    }

    /// Unchecked `x ∈ y` for handles already known to be local.
    pub(crate) fn contains(&self, y: Hyperset, x: Hyperset) -> bool {
        debug_assert!(x.store == self.id && y.store == self.id);
        self.children[y.node as usize].binary_search(&x.node).is_ok()
    }

    pub fn is_well_founded(&self, h: Hyperset) -> bool {
        self.rank[self.node_of(h)].is_some()
    }

    /// Foundational rank: 0 for the empty set, otherwise one more than the
    /// largest rank of an element.
    pub fn rank(&self, h: Hyperset) -> Result<u32> {
        let node = self.check(h)?;
        self.rank[node as usize].ok_or(Error::NotWellFounded)
    }

    /// The von Neumann natural `h` encodes, if any.
    pub fn as_natural(&self, h: Hyperset) -> Option<u32> {
        self.natural[self.node_of(h)]
    }

    /// Largest von Neumann natural present in the store.
    pub fn max_natural(&self) -> Option<u32> {
        self.naturals.len().checked_sub(1).map(|n| n as u32)
    }

    pub fn empty_set(&mut self) -> Hyperset {
        let node = self.intern_acyclic(Vec::new());
        self.handle(node)
    }

    /// The set whose elements are exactly `elems`.
    pub fn set_of<I: IntoIterator<Item = Hyperset>>(&mut self, elems: I) -> Result<Hyperset> {
        let mut ch = elems
            .into_iter()
            .map(|h| self.check(h))
            .collect::<Result<Vec<_>>>()?;
        ch.sort_unstable();
        ch.dedup();
        let node = self.intern_acyclic(ch);
        Ok(self.handle(node))
    }

    /// The von Neumann natural `n = {0, ..., n-1}`.
    pub fn hf_encode(&mut self, n: u32) -> Hyperset {
        while self.naturals.len() <= n as usize {
            let mut ch = self.naturals.clone();
            ch.sort_unstable();
            self.intern_acyclic(ch);
        }
        self.handle(self.naturals[n as usize])
    }

    /// Inserts an APG and returns the canonical set bisimilar to its point.
    pub fn canonicalize(&mut self, g: &Apg) -> Result<Hyperset> {
        g.validate()?;
        let locals: Vec<Vec<Target>> = g
            .children
            .iter()
            .map(|ch| ch.iter().map(|&c| Target::Local(c)).collect())
            .collect();
        let nodes = self.insert(&locals);
        Ok(self.handle(nodes[g.point]))
    }

    /// Inserts a whole membership graph and returns the canonical set of every
    /// node. Unlike [`Store::canonicalize`] there is no single point, so any
    /// node may be unreachable from the others.
    pub fn realize(&mut self, children: &[Vec<usize>]) -> Result<Vec<Hyperset>> {
        let n = children.len();
        let mut locals = Vec::with_capacity(n);
        for (from, ch) in children.iter().enumerate() {
            let mut row = Vec::with_capacity(ch.len());
            for &to in ch {
                if to >= n {
                    return Err(Error::UndeclaredNode { from, to });
                }
                row.push(Target::Local(to));
            }
            locals.push(row);
        }
        let nodes = self.insert(&locals);
        Ok(nodes.into_iter().map(|v| self.handle(v)).collect())
    }

    /// The membership picture of `h`: its hereditary closure with `h` as point.
    pub fn membership_apg(&self, h: Hyperset) -> Apg {
        let closure = self.hereditary_closure([h]);
        let pos: HashMap<u32, usize> =
            closure.iter().enumerate().map(|(i, s)| (s.node, i)).collect();
        let children = closure
            .iter()
            .map(|s| self.children[s.node as usize].iter().map(|c| pos[c]).collect())
            .collect();
        Apg::new(children, pos[&h.node])
    }

    /// The given sets together with everything hereditarily below them,
    /// sorted by node.
    pub fn hereditary_closure<I: IntoIterator<Item = Hyperset>>(&self, roots: I) -> Vec<Hyperset> {
        let mut seen = vec![false; self.children.len()];
        let mut stack: Vec<u32> = Vec::new();
        for h in roots {
            let v = self.node_of(h);
            if !seen[v] {
                seen[v] = true;
                stack.push(v as u32);
            }
        }
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.children[v as usize].iter() {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(|v| self.handle(v)).collect()
    }

    /// Scans for two nodes with identical child sets. Always false for a
    /// store built through the public API.
    pub fn has_extensional_duplicates(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        !self.children.iter().all(|ch| seen.insert(ch))
    }

    pub(crate) fn children_of(&self, node: u32) -> &[u32] {
        &self.children[node as usize]
    }

    /// Merges a graph into the store and returns the canonical node of every
    /// local node.
    pub(crate) fn insert(&mut self, locals: &[Vec<Target>]) -> Vec<u32> {
        let l = locals.len();

        // Stored nodes reachable from the graph take part in the refinement,
        // so local nodes bisimilar to them are recognised directly.
        let mut closure: Vec<u32> = Vec::new();
        let mut closure_pos: HashMap<u32, usize> = HashMap::new();
        for t in locals.iter().flatten() {
            if let Target::Stored(s) = *t {
                if let std::collections::hash_map::Entry::Vacant(e) = closure_pos.entry(s) {
                    e.insert(closure.len());
                    closure.push(s);
                }
            }
        }
        let mut i = 0;
        while i < closure.len() {
            let s = closure[i];
            for &c in self.children[s as usize].iter() {
                if let std::collections::hash_map::Entry::Vacant(e) = closure_pos.entry(c) {
                    e.insert(closure.len());
                    closure.push(c);
                }
            }
            i += 1;
        }

        let mut graph: Vec<Vec<Edge>> = Vec::with_capacity(l + closure.len());
        for ch in locals {
            graph.push(
                ch.iter()
                    .map(|t| match *t {
                        Target::Local(v) => Edge::Node(v),
                        Target::Stored(s) => Edge::Node(l + closure_pos[&s]),
                    })
                    .collect(),
            );
        }
        for &s in &closure {
            graph.push(
                self.children[s as usize]
                    .iter()
                    .map(|c| Edge::Node(l + closure_pos[c]))
                    .collect(),
            );
        }
        let (block, nblocks) = coarsest_partition(&graph);

        let mut block_store: Vec<Option<u32>> = vec![None; nblocks];
        for (i, &s) in closure.iter().enumerate() {
            block_store[block[l + i]] = Some(s);
        }

        // Blocks made only of local nodes are the candidate new sets.
        let mut class_of_block: Vec<Option<usize>> = vec![None; nblocks];
        let mut reps: Vec<usize> = Vec::new();
        for (v, &b) in block.iter().enumerate().take(l) {
            if block_store[b].is_none() && class_of_block[b].is_none() {
                class_of_block[b] = Some(reps.len());
                reps.push(v);
            }
        }
        let k = reps.len();
        let mut internal: Vec<Vec<usize>> = Vec::with_capacity(k);
        let mut external: Vec<Vec<u32>> = Vec::with_capacity(k);
        for &v in &reps {
            let mut int = Vec::new();
            let mut ext = Vec::new();
            for e in &graph[v] {
                let Edge::Node(w) = *e else { unreachable!() };
                match block_store[block[w]] {
                    Some(s) => ext.push(s),
                    None => int.push(class_of_block[block[w]].expect("local block")),
                }
            }
            int.sort_unstable();
            int.dedup();
            ext.sort_unstable();
            ext.dedup();
            internal.push(int);
            external.push(ext);
        }

        let mut assigned: Vec<Option<u32>> = vec![None; k];
        for comp in tarjan_scc(&internal) {
            let first = comp[0];
            let cyclic = comp.len() > 1 || internal[first].contains(&first);
            if cyclic {
                self.intern_cyclic(&comp, &internal, &external, &mut assigned);
            } else {
                let mut ch = external[first].clone();
                ch.extend(internal[first].iter().map(|&d| assigned[d].expect("child interned")));
                ch.sort_unstable();
                ch.dedup();
                assigned[first] = Some(self.intern_acyclic(ch));
            }
        }

        block
            .iter()
            .take(l)
            .map(|&b| match block_store[b] {
                Some(s) => s,
                None => assigned[class_of_block[b].expect("local block")].expect("interned"),
            })
            .collect()
    }

    /// Hash-conses a node whose children are already canonical and which is
    /// not on a cycle. `children` must be sorted and deduplicated.
    fn intern_acyclic(&mut self, children: Vec<u32>) -> u32 {
        if let Some(&node) = self.index.get(children.as_slice()) {
            return node;
        }
        let node = self.children.len() as u32;
        let rank = children
            .iter()
            .map(|&c| self.rank[c as usize])
            .try_fold(0u32, |acc, r| r.map(|r| acc.max(r + 1)));
        let natural = self.natural_value(&children);
        if let Some(n) = natural {
            debug_assert_eq!(n as usize, self.naturals.len());
            self.naturals.push(node);
        }
        let boxed: Box<[u32]> = children.into_boxed_slice();
        self.index.insert(boxed.clone(), node);
        self.children.push(boxed);
        self.rank.push(rank);
        self.natural.push(natural);
        self.scc_of.push(self.sccs.len() as u32);
        self.sccs.push(Scc { members: vec![node] });
        node
    }

    fn natural_value(&self, children: &[u32]) -> Option<u32> {
        let mut values = children
            .iter()
            .map(|&c| self.natural[c as usize])
            .collect::<Option<Vec<u32>>>()?;
        values.sort_unstable();
        values
            .iter()
            .enumerate()
            .all(|(i, &v)| i as u32 == v)
            .then_some(values.len() as u32)
    }

    /// Resolves one cyclic component of the quotient: either it is bisimilar
    /// to an entire stored component, or all its nodes are new.
    fn intern_cyclic(
        &mut self,
        comp: &[usize],
        internal: &[Vec<usize>],
        external: &[Vec<u32>],
        assigned: &mut [Option<u32>],
    ) {
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let m = comp.len();
        let mut inside: Vec<Vec<usize>> = Vec::with_capacity(m);
        let mut outside: Vec<Vec<u32>> = Vec::with_capacity(m);
        for &c in comp {
            let mut ins = Vec::new();
            let mut out = external[c].clone();
            for &d in &internal[c] {
                match pos.get(&d) {
                    Some(&j) => ins.push(j),
                    None => out.push(assigned[d].expect("lower component interned")),
                }
            }
            out.sort_unstable();
            out.dedup();
            inside.push(ins);
            outside.push(out);
        }
        let mut key: SccKey = inside
            .iter()
            .zip(&outside)
            .map(|(ins, out)| (ins.len() as u32, out.clone().into_boxed_slice()))
            .collect();
        key.sort_unstable();

        if let Some(candidates) = self.cyclic_index.get(&key) {
            for &scc in candidates {
                if let Some(image) = self.match_component(&inside, &outside, scc) {
                    for (i, &c) in comp.iter().enumerate() {
                        assigned[c] = Some(image[i]);
                    }
                    return;
                }
            }
        }

        let base = self.children.len() as u32;
        let scc_id = self.sccs.len() as u32;
        let mut members = Vec::with_capacity(m);
        for i in 0..m {
            let node = base + i as u32;
            let mut ch = outside[i].clone();
            ch.extend(inside[i].iter().map(|&j| base + j as u32));
            ch.sort_unstable();
            let boxed: Box<[u32]> = ch.into_boxed_slice();
            let prev = self.index.insert(boxed.clone(), node);
            debug_assert!(prev.is_none(), "extensionality violated");
            self.children.push(boxed);
            self.rank.push(None);
            self.natural.push(None);
            self.scc_of.push(scc_id);
            members.push(node);
            assigned[comp[i]] = Some(node);
        }
        self.sccs.push(Scc { members });
        self.cyclic_index.entry(key).or_default().push(scc_id);
    }

    /// Tries to map a quotient component onto stored component `scc`. Returns
    /// the image of every component node on success.
    fn match_component(&self, inside: &[Vec<usize>], outside: &[Vec<u32>], scc: u32) -> Option<Vec<u32>> {
        let members = &self.sccs[scc as usize].members;
        let m = inside.len();
        let member_pos: HashMap<u32, usize> =
            members.iter().enumerate().map(|(i, &s)| (s, m + i)).collect();
        let mut graph: Vec<Vec<Edge>> = Vec::with_capacity(m + members.len());
        for (ins, out) in inside.iter().zip(outside) {
            let mut row: Vec<Edge> = ins.iter().map(|&j| Edge::Node(j)).collect();
            row.extend(out.iter().map(|&s| Edge::Label(s)));
            graph.push(row);
        }
        for &s in members {
            graph.push(
                self.children[s as usize]
                    .iter()
                    .map(|c| match member_pos.get(c) {
                        Some(&j) => Edge::Node(j),
                        None => Edge::Label(*c),
                    })
                    .collect(),
            );
        }
        let (block, _) = coarsest_partition(&graph);
        let mut by_block: HashMap<usize, u32> = HashMap::new();
        for (i, &s) in members.iter().enumerate() {
            by_block.insert(block[m + i], s);
        }
        (0..m).map(|i| by_block.get(&block[i]).copied()).collect()
    }
}
