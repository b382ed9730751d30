//! Canonical dump format for sets in a store.
//!
//! ```text
//! 0: {}
//! 1: {0}
//! 2: {0,1,2}
//! c = 2
//! ```
//!
//! Nodes are renumbered independently of the store: by stratum (height of
//! the strongly connected component in the condensation, leaves first), then
//! by the sorted list of already numbered children. Named points follow the
//! node listing in the order they were given.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::refine::tarjan_scc;
use crate::store::{Hyperset, Store};

/// A parsed dump: the membership graph on nodes `0..children.len()` plus the
/// named points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dump {
    pub children: Vec<Vec<usize>>,
    pub points: Vec<(String, usize)>,
}

impl Store {
    /// Renders the hereditary closure of the given points.
    pub fn dump<S: AsRef<str>>(&self, points: &[(S, Hyperset)]) -> String {
        let (order, renumber) = self.dump_order(points.iter().map(|(_, h)| *h));
        let mut out = String::new();
        for (new_id, &node) in order.iter().enumerate() {
            let mut ch: Vec<usize> = self.children_of(node).iter().map(|c| renumber[c]).collect();
            ch.sort_unstable();
            let list = ch.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(out, "{new_id}: {{{list}}}");
        }
        for (name, h) in points {
            let _ = writeln!(out, "{} = {}", name.as_ref(), renumber[&h.node()]);
        }
        out
    }

    /// Dump position of every set in the closure of `roots`.
    pub fn dump_numbering<I: IntoIterator<Item = Hyperset>>(&self, roots: I) -> HashMap<Hyperset, usize> {
        let (order, _) = self.dump_order(roots);
        order.into_iter().enumerate().map(|(i, node)| (self.handle(node), i)).collect()
    }

    fn dump_order<I: IntoIterator<Item = Hyperset>>(&self, roots: I) -> (Vec<u32>, HashMap<u32, usize>) {
        let closure: Vec<u32> = self.hereditary_closure(roots).into_iter().map(|h| h.node()).collect();
        let local: HashMap<u32, usize> = closure.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<usize>> = closure
            .iter()
            .map(|&v| self.children_of(v).iter().map(|c| local[c]).collect())
            .collect();

        let comps = tarjan_scc(&adj);
        let mut comp_of = vec![0usize; closure.len()];
        for (ci, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = ci;
            }
        }
        // components arrive children first
        let mut stratum = vec![0usize; comps.len()];
        for (ci, comp) in comps.iter().enumerate() {
            let mut s = 0;
            for &v in comp {
                for &w in &adj[v] {
                    if comp_of[w] != ci {
                        s = s.max(stratum[comp_of[w]] + 1);
                    }
                }
            }
            stratum[ci] = s;
        }

        let label = refinement_labels(&adj);
        let max_stratum = stratum.iter().copied().max().unwrap_or(0);
        let mut renumber: HashMap<u32, usize> = HashMap::with_capacity(closure.len());
        let mut order: Vec<u32> = Vec::with_capacity(closure.len());
        for s in 0..=max_stratum {
            let mut layer: Vec<(Vec<usize>, usize, usize, u32)> = Vec::new();
            for (v, &node) in closure.iter().enumerate() {
                if stratum[comp_of[v]] != s {
                    continue;
                }
                let mut lower = Vec::new();
                let mut same = 0usize;
                for &w in &adj[v] {
                    if stratum[comp_of[w]] < s {
                        lower.push(renumber[&closure[w]]);
                    } else {
                        same += 1;
                    }
                }
                lower.sort_unstable();
                layer.push((lower, same, label[v], node));
            }
            layer.sort();
            for (_, _, _, node) in layer {
                renumber.insert(node, order.len());
                order.push(node);
            }
        }
        (order, renumber)
    }

    /// Inserts every node of a parsed dump and returns the named points.
    pub fn load_dump(&mut self, dump: &Dump) -> Result<Vec<(String, Hyperset)>> {
        let sets = self.realize(&dump.children)?;
        Ok(dump.points.iter().map(|(name, i)| (name.clone(), sets[*i])).collect())
    }
}

/// Labels from iterated refinement by the set of children's labels, ranked
/// by signature so they do not depend on node ids. On a collapsed graph the
/// final partition is discrete.
fn refinement_labels(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut label = vec![0usize; adj.len()];
    let mut classes = 1;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = adj
            .iter()
            .enumerate()
            .map(|(v, ch)| {
                let mut c: Vec<usize> = ch.iter().map(|&w| label[w]).collect();
                c.sort_unstable();
                c.dedup();
                (label[v], c)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
        label = next;
        if distinct.len() == classes {
            return label;
        }
        classes = distinct.len();
    }
}

impl Dump {
    pub fn parse(text: &str) -> Result<Dump> {
        let mut rows: Vec<Option<Vec<usize>>> = Vec::new();
        let mut points = Vec::new();
        let mut named: Vec<(usize, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") || line.starts_with('%') {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            if let Some((id, rest)) = line.split_once(':') {
                let id: usize = id.trim().parse().map_err(|_| err("expected a node number"))?;
                let rest = rest.trim();
                let inner = rest
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(|| err("expected `{...}`"))?;
                let mut ch = Vec::new();
                for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    ch.push(part.parse::<usize>().map_err(|_| err("expected a node number"))?);
                }
                if rows.len() <= id {
                    rows.resize(id + 1, None);
                }
                if rows[id].is_some() {
                    return Err(err("node listed twice"));
                }
                rows[id] = Some(ch);
            } else if let Some((name, id)) = line.split_once('=') {
                let name = name.trim();
                if name.is_empty() {
                    return Err(err("empty point name"));
                }
                let id: usize = id.trim().parse().map_err(|_| err("expected a node number"))?;
                named.push((line_no, name.to_string(), id));
            } else {
                return Err(err("expected `id: {...}` or `name = id`"));
            }
        }
        let n = rows.len();
        let mut children = Vec::with_capacity(n);
        for (id, row) in rows.into_iter().enumerate() {
            let row = row.ok_or(Error::Parse { line: 0, msg: format!("node {id} is missing") })?;
            if let Some(&to) = row.iter().find(|&&c| c >= n) {
                return Err(Error::UndeclaredNode { from: id, to });
            }
            children.push(row);
        }
        for (line, name, id) in named {
            if id >= n {
                return Err(Error::Parse { line, msg: format!("point {name} refers to unknown node {id}") });
            }
            points.push((name, id));
        }
        Ok(Dump { children, points })
    }
}
