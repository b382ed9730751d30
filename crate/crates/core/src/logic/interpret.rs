//! Digraphs interpreted in graphs.
//!
//! Vertex `v` of the digraph becomes node `v` of the graph, marked by a
//! D-loop. A directed edge `(u, v)` becomes three loop-free nodes: a middle
//! node `m` joined to `u`, a pendant leaf on `m`, and a node `p` joined to
//! `m` and `v`. The leaf tells the middle node apart from `p`, and the path
//! `u - m - p - v` fixes the direction.

use std::collections::BTreeSet;

use super::eval::eval;
use super::formula::{fresh_among, Formula};
use super::phi::relativize_with;
use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, Language, Symbol};

/// The gadget graph of a digraph. Digraph vertex `v` is graph vertex `v`;
/// edges are encoded in lexicographic order after the vertices.
pub fn interpret_digraph(d: &FiniteStructure) -> Result<FiniteStructure> {
    if d.language() != Language::Lnbg {
        return Err(Error::LanguageMismatch { expected: Language::Lnbg, found: d.language() });
    }
    let edges = d.edges(Symbol::E);
    let n = d.size();
    let mut g = FiniteStructure::new(Language::L1, n + 3 * edges.len());
    for v in 0..n {
        g.add_edge(Symbol::D, v, v)?;
    }
    for (k, &(u, v)) in edges.iter().enumerate() {
        let (m, leaf, p) = (n + 3 * k, n + 3 * k + 1, n + 3 * k + 2);
        g.add_edge(Symbol::D, m, u)?;
        g.add_edge(Symbol::D, m, leaf)?;
        g.add_edge(Symbol::D, m, p)?;
        g.add_edge(Symbol::D, p, v)?;
    }
    Ok(g)
}

/// Names used by the edge gadget formula, chosen to avoid `used`.
struct GadgetVars {
    m: String,
    p: String,
    leaf: String,
    w: String,
}

impl GadgetVars {
    fn avoiding(used: &BTreeSet<String>) -> GadgetVars {
        let mut used = used.clone();
        let mut pick = |base: &str| {
            let v = fresh_among(&used, base);
            used.insert(v.clone());
            v
        };
        GadgetVars { m: pick("m"), p: pick("p"), leaf: pick("l"), w: pick("w") }
    }

    /// `¬D(t,t) ∧ ∃l(D(t,l) ∧ ¬D(l,l) ∧ ∀w(D(l,w) → w=t))`
    fn middle(&self, t: &str) -> Formula {
        let (l, w) = (&self.leaf, &self.w);
        Formula::and(
            Formula::not(Formula::d(t, t)),
            Formula::exists(
                l,
                Formula::conj([
                    Formula::d(t, l),
                    Formula::not(Formula::d(l, l)),
                    Formula::forall(w, Formula::implies(Formula::d(l, w), Formula::eq(w, t))),
                ]),
            ),
        )
    }

    /// `∃m(D(m,s) ∧ middle(m) ∧ ∃p(D(m,p) ∧ D(p,t) ∧ ¬D(p,p) ∧ ¬middle(p)))`
    fn edge(&self, s: &str, t: &str) -> Formula {
        let (m, p) = (&self.m, &self.p);
        Formula::exists(
            m,
            Formula::conj([
                Formula::d(m, s),
                self.middle(m),
                Formula::exists(
                    p,
                    Formula::conj([
                        Formula::d(m, p),
                        Formula::d(p, t),
                        Formula::not(Formula::d(p, p)),
                        Formula::not(self.middle(p)),
                    ]),
                ),
            ]),
        )
    }
}

/// Translates an LNBG formula into L1: quantifiers range over looped nodes
/// and `E(s, t)` asserts an edge gadget from `s` to `t`.
pub fn translate(theta: &Formula) -> Result<Formula> {
    if let Some(&s) = theta.symbols().iter().find(|&&s| s != Symbol::E) {
        return Err(Error::SymbolNotInLanguage { symbol: s, language: Language::Lnbg });
    }
    let vars = GadgetVars::avoiding(&theta.all_vars());
    let relativized = relativize_with(theta, &|v| Formula::d(v, v));
    Ok(rewrite_edges(&relativized, &vars))
}

fn rewrite_edges(f: &Formula, vars: &GadgetVars) -> Formula {
    let r = |a: &Formula| rewrite_edges(a, vars);
    match f {
        Formula::Rel(Symbol::E, s, t) => vars.edge(s, t),
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(r(a)),
        Formula::And(a, b) => Formula::and(r(a), r(b)),
        Formula::Or(a, b) => Formula::or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::implies(r(a), r(b)),
        Formula::Exists(v, a) => Formula::exists(v, r(a)),
        Formula::Forall(v, a) => Formula::forall(v, r(a)),
    }
}

/// The digraph a graph interprets: its looped nodes, in increasing order,
/// with `E(i, j)` whenever the edge gadget formula holds between them.
/// Returns the digraph and the graph node of each digraph vertex.
pub fn interpreted_digraph(g: &FiniteStructure) -> Result<(FiniteStructure, Vec<usize>)> {
    if g.language() != Language::L1 {
        return Err(Error::LanguageMismatch { expected: Language::L1, found: g.language() });
    }
    let nodes: Vec<usize> = (0..g.size()).filter(|&v| g.holds(Symbol::D, v, v)).collect();
    let vars = GadgetVars::avoiding(&["s".to_string(), "t".to_string()].into());
    let edge = vars.edge("s", "t");
    let mut d = FiniteStructure::new(Language::Lnbg, nodes.len());
    for (i, &s) in nodes.iter().enumerate() {
        for (j, &t) in nodes.iter().enumerate() {
            if eval(g, &edge, &[("s", s), ("t", t)])? {
                d.add_edge(Symbol::E, i, j)?;
            }
        }
    }
    Ok((d, nodes))
}
