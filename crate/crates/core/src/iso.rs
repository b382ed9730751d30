//! Isomorphism of small finite structures by backtracking with degree
//! refinement. Intended for domains of about ten elements.

use crate::structure::{FiniteStructure, Symbol};

/// Per-vertex invariant: for every symbol, (loop, out-degree, in-degree).
fn invariant(g: &FiniteStructure, v: usize) -> Vec<(bool, usize, usize)> {
    g.language()
        .symbols()
        .iter()
        .map(|&sym| {
            let out = (0..g.size()).filter(|&w| w != v && g.holds(sym, v, w)).count();
            let inn = (0..g.size()).filter(|&w| w != v && g.holds(sym, w, v)).count();
            (g.holds(sym, v, v), out, inn)
        })
        .collect()
}

/// A bijection `f` with `f[v]` the image of vertex `v` of `g`, preserving and
/// reflecting every relation, or `None` if the structures are not
/// isomorphic (or are in different languages).
pub fn is_isomorphic(g: &FiniteStructure, h: &FiniteStructure) -> Option<Vec<usize>> {
    if g.language() != h.language() || g.size() != h.size() {
        return None;
    }
    let n = g.size();
    let inv_g: Vec<_> = (0..n).map(|v| invariant(g, v)).collect();
    let inv_h: Vec<_> = (0..n).map(|v| invariant(h, v)).collect();
    let mut sorted_g = inv_g.clone();
    let mut sorted_h = inv_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return None;
    }

    // Assign vertices adjacent to already placed ones first so conflicts
    // surface early.
    let syms = g.language().symbols();
    let adjacent = |u: usize, v: usize| syms.iter().any(|&s| g.holds(s, u, v) || g.holds(s, v, u));
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&u| adjacent(u, v)).count();
                (links, std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(g, h, syms, &order, &inv_g, &inv_h, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &FiniteStructure,
    h: &FiniteStructure,
    syms: &[Symbol],
    order: &[usize],
    inv_g: &[Vec<(bool, usize, usize)>],
    inv_h: &[Vec<(bool, usize, usize)>],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.size() {
        if used[w] || inv_g[v] != inv_h[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let fu = map[u];
            syms.iter()
                .all(|&s| g.holds(s, u, v) == h.holds(s, fu, w) && g.holds(s, v, u) == h.holds(s, w, fu))
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(g, h, syms, order, inv_g, inv_h, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Whether `f` is an isomorphism from `g` onto `h`.
pub fn is_isomorphism(g: &FiniteStructure, h: &FiniteStructure, f: &[usize]) -> bool {
    if g.language() != h.language() || g.size() != h.size() || f.len() != g.size() {
        return false;
    }
    let mut seen = vec![false; h.size()];
    for &w in f {
        if w >= h.size() || std::mem::replace(&mut seen[w], true) {
            return false;
        }
    }
    g.language().symbols().iter().all(|&s| {
        (0..g.size()).all(|u| (0..g.size()).all(|v| g.holds(s, u, v) == h.holds(s, f[u], f[v])))
    })
}
