//! Oracles and generators shared by the integration tests. Nothing here
//! calls the library's refinement, isomorphism or game code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hyperset::constructions::fresh_tags;
use hyperset::logic::{eval, Formula};
use hyperset::reducts::d_neighbors;
use hyperset::{solve, BallSpec, FiniteStructure, FlatSystem, Graph, Hyperset, Language, Slice, Store, Symbol};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- bisimulation

/// Greatest bisimulation on a membership graph, by deleting violating pairs
/// until nothing changes.
pub fn greatest_bisimulation(children: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = children.len();
    let mut rel = vec![vec![true; n]; n];
    loop {
        let mut changed = false;
        for u in 0..n {
            for v in 0..n {
                if !rel[u][v] {
                    continue;
                }
                let forth = children[u].iter().all(|&a| children[v].iter().any(|&b| rel[a][b]));
                let back = children[v].iter().all(|&b| children[u].iter().any(|&a| rel[a][b]));
                if !(forth && back) {
                    rel[u][v] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

pub fn random_membership_graph(rng: &mut TestRng, max_nodes: usize) -> Vec<Vec<usize>> {
    let n = rng.gen_range(1..=max_nodes);
    let density = rng.gen_range(0.05..0.5);
    (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect()
}

/// A random flat system over `x0..` with natural-number atoms `#0..#2`.
pub fn random_system(rng: &mut TestRng, store: &mut Store, max_vars: usize) -> FlatSystem {
    let k = rng.gen_range(1..=max_vars);
    let mut sys = FlatSystem::new();
    let atoms: Vec<String> = (0..3).map(|i| format!("#{i}")).collect();
    for (i, name) in atoms.iter().enumerate() {
        sys.bind_atom(name.clone(), store.hf_encode(i as u32));
    }
    let density = rng.gen_range(0.1..0.6);
    for i in 0..k {
        let mut members: Vec<String> = (0..k).filter(|_| rng.gen_bool(density)).map(|j| format!("x{j}")).collect();
        members.extend(atoms.iter().filter(|_| rng.gen_bool(0.25)).cloned());
        sys.add_equation(format!("x{i}"), members);
    }
    sys
}

/// `x_i = {#i} ∪ {x_j : R(i,j)}` for a graph.
pub fn graph_system(store: &mut Store, g: &Graph) -> FlatSystem {
    let mut sys = FlatSystem::new();
    for i in 0..g.size() {
        sys.bind_atom(format!("#{i}"), store.hf_encode(i as u32));
        let members = std::iter::once(format!("#{i}")).chain(g.row(i).into_iter().map(|j| format!("x{j}")));
        sys.add_equation(format!("x{i}"), members.collect::<Vec<_>>());
    }
    sys
}

/// The same equations in another order.
pub fn shuffled(rng: &mut TestRng, sys: &FlatSystem) -> FlatSystem {
    let mut out = FlatSystem::new();
    for (name, &h) in sys.atoms() {
        out.bind_atom(name.clone(), h);
    }
    let mut eqs = sys.equations().to_vec();
    eqs.shuffle(rng);
    for (x, mut members) in eqs {
        members.shuffle(rng);
        out.add_equation(x, members);
    }
    out
}

// ---------------------------------------------------------------- graphs

fn symmetric_cells(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect()
}

/// Every graph on `0..n`, loops allowed.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let cells = symmetric_cells(n);
    (0u64..1 << cells.len())
        .map(|bits| {
            let edges: Vec<_> = cells.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least adjacency bit-string over all relabellings.
pub fn canonical_form(g: &Graph, perms: &[Vec<usize>]) -> Vec<bool> {
    let n = g.size();
    perms
        .iter()
        .map(|p| {
            let mut bits = Vec::with_capacity(n * n);
            for u in 0..n {
                for v in 0..n {
                    bits.push(g.adjacent(p[u], p[v]));
                }
            }
            bits
        })
        .min()
        .unwrap_or_default()
}

/// One representative per isomorphism class of graphs on `n` vertices.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    all_graphs(n)
        .into_iter()
        .filter(|g| seen.insert(canonical_form(g, &perms)))
        .collect()
}

pub fn same_graph_up_to_iso(g: &Graph, h: &Graph) -> bool {
    g.size() == h.size() && {
        let perms = permutations(g.size());
        canonical_form(g, &perms) == canonical_form(h, &perms)
    }
}

pub fn random_graph(rng: &mut TestRng, n: usize, density: f64) -> Graph {
    let mut g = Graph::new(n);
    for (u, v) in symmetric_cells(n) {
        if rng.gen_bool(density) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.size();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if g.adjacent(u, v) && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn disjoint_copies(g: &Graph, k: usize) -> Graph {
    let mut s = FiniteStructure::new(Language::L1, 0);
    for _ in 0..k {
        s = s.disjoint_union(g.as_structure()).unwrap();
    }
    Graph::from_structure(s).unwrap()
}

/// Every digraph on `0..n`.
pub fn all_digraphs(n: usize) -> Vec<FiniteStructure> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    (0u64..1 << cells.len())
        .map(|bits| {
            let mut d = FiniteStructure::new(Language::Lnbg, n);
            for (i, &(u, v)) in cells.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    d.add_edge(Symbol::E, u, v).unwrap();
                }
            }
            d
        })
        .collect()
}

// ---------------------------------------------------------------- formulas

/// A random formula over `syms`, free variables among `scope`, quantifier
/// rank at most `rank`. Bound variables are drawn from `names`.
pub fn random_formula(
    rng: &mut TestRng,
    syms: &[Symbol],
    names: &[&str],
    scope: &[String],
    rank: usize,
    size: usize,
) -> Formula {
    let atom = |rng: &mut TestRng| {
        if scope.is_empty() {
            return if rng.gen_bool(0.5) { Formula::True } else { Formula::False };
        }
        let x = scope.choose(rng).unwrap().clone();
        let y = scope.choose(rng).unwrap().clone();
        if rng.gen_bool(0.25) {
            Formula::Eq(x, y)
        } else {
            Formula::Rel(*syms.choose(rng).unwrap(), x, y)
        }
    };
    let quantify = rank > 0 && (scope.is_empty() || rng.gen_bool(0.45));
    if size == 0 && !quantify {
        return atom(rng);
    }
    if quantify {
        let v = names.choose(rng).unwrap().to_string();
        let mut inner: Vec<String> = scope.to_vec();
        if !inner.contains(&v) {
            inner.push(v.clone());
        }
        let body = random_formula(rng, syms, names, &inner, rank - 1, size.saturating_sub(1));
        return if rng.gen_bool(0.5) { Formula::exists(v, body) } else { Formula::forall(v, body) };
    }
    let sub = |rng: &mut TestRng| random_formula(rng, syms, names, scope, rank, size / 2);
    match rng.gen_range(0..5) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        _ => atom(rng),
    }
}

pub fn random_sentence(rng: &mut TestRng, syms: &[Symbol], rank: usize, size: usize) -> Formula {
    random_formula(rng, syms, &["x", "y", "z"], &[], rank, size)
}

// ---------------------------------------------------------------- EF oracle

/// Partitions tuples of a structure pool by the formulas of bounded
/// quantifier rank they satisfy. Formulas are built explicitly: at rank 0
/// the atoms over `v0..`, at rank `r + 1` the rank-`r` generators plus
/// `∃v_m` of every rank-`r` class formula in one more variable. Points are
/// grouped by the truth values of the generators, and each group gets a
/// conjunction of signed generators that holds on exactly that group.
pub struct TypeOracle<'p> {
    pool: &'p [FiniteStructure],
    memo: HashMap<(usize, usize), Classes>,
}

#[derive(Clone)]
pub struct Classes {
    /// One formula per class, free variables `v0..v{m-1}`.
    pub formulas: Vec<Formula>,
    /// Class of every point, keyed by (structure, tuple).
    pub class_of: HashMap<(usize, Vec<usize>), usize>,
}

fn var(i: usize) -> String {
    format!("v{i}")
}

fn tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

impl<'p> TypeOracle<'p> {
    pub fn new(pool: &'p [FiniteStructure]) -> Self {
        TypeOracle { pool, memo: HashMap::new() }
    }

    fn points(&self, m: usize) -> Vec<(usize, Vec<usize>)> {
        self.pool
            .iter()
            .enumerate()
            .flat_map(|(s, st)| tuples(st.size(), m).into_iter().map(move |t| (s, t)))
            .collect()
    }

    fn truth(&self, f: &Formula, (s, t): &(usize, Vec<usize>)) -> bool {
        let asg: Vec<(String, usize)> = t.iter().enumerate().map(|(i, &x)| (var(i), x)).collect();
        eval(&self.pool[*s], f, &asg).unwrap()
    }

    fn generators(&mut self, m: usize, rank: usize) -> Vec<Formula> {
        if rank == 0 {
            let lang = self.pool.first().map_or(Language::L1, |s| s.language());
            let mut out = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    for &sym in lang.symbols() {
                        out.push(Formula::Rel(sym, var(i), var(j)));
                    }
                    if i < j {
                        out.push(Formula::eq(var(i), var(j)));
                    }
                }
            }
            return out;
        }
        let mut out = self.generators(m, rank - 1);
        let deeper = self.classes(m + 1, rank - 1);
        out.extend(deeper.formulas.into_iter().map(|f| Formula::exists(var(m), f)));
        out
    }

    pub fn classes(&mut self, m: usize, rank: usize) -> Classes {
        if let Some(c) = self.memo.get(&(m, rank)) {
            return c.clone();
        }
        let gens = self.generators(m, rank);
        let points = self.points(m);
        let table: Vec<Vec<bool>> = gens.iter().map(|g| points.iter().map(|p| self.truth(g, p)).collect()).collect();
        // drop generators with a repeated truth column
        let mut kept: Vec<usize> = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, col) in table.iter().enumerate() {
            if seen.insert(col.clone()) {
                kept.push(i);
            }
        }
        let mut by_signature: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut sigs: Vec<Vec<bool>> = Vec::new();
        let mut class_of = HashMap::new();
        for (pi, p) in points.iter().enumerate() {
            let sig: Vec<bool> = kept.iter().map(|&g| table[g][pi]).collect();
            let next = by_signature.len();
            let c = *by_signature.entry(sig.clone()).or_insert(next);
            if c == sigs.len() {
                sigs.push(sig);
            }
            class_of.insert(p.clone(), c);
        }
        // Each class keeps only literals that, between them, some other
        // class violates, chosen greedily. The formula then holds on its
        // class and fails on every other one.
        let formulas: Vec<Formula> = (0..sigs.len())
            .map(|c| {
                let mut rest: Vec<usize> = (0..sigs.len()).filter(|&d| d != c).collect();
                let mut chosen = Vec::new();
                while !rest.is_empty() {
                    let best = (0..kept.len())
                        .max_by_key(|&g| rest.iter().filter(|&&d| sigs[d][g] != sigs[c][g]).count())
                        .expect("distinct signatures");
                    rest.retain(|&d| sigs[d][best] == sigs[c][best]);
                    chosen.push(best);
                }
                chosen.sort_unstable();
                Formula::conj(chosen.into_iter().map(|g| {
                    let f = gens[kept[g]].clone();
                    if sigs[c][g] { f } else { Formula::not(f) }
                }))
            })
            .collect();
        // the formulas must still describe the classes
        for (pi, p) in points.iter().enumerate() {
            assert!(self.truth(&formulas[class_of[p]], p), "point {pi} fails its class formula");
        }
        for c in (0..formulas.len()).step_by(7) {
            for (pi, p) in points.iter().enumerate().step_by(5) {
                assert_eq!(self.truth(&formulas[c], p), class_of[p] == c, "class {c} at point {pi}");
            }
        }
        let out = Classes { formulas, class_of };
        self.memo.insert((m, rank), out.clone());
        out
    }

    /// Whether the two points satisfy the same formulas of rank `rank`.
    pub fn equivalent(&mut self, a: usize, at: &[usize], b: usize, bt: &[usize], rank: usize) -> bool {
        let c = self.classes(at.len(), rank);
        c.class_of[&(a, at.to_vec())] == c.class_of[&(b, bt.to_vec())]
    }
}

/// Every L1 structure (symmetric D, loops allowed) with at most `max`
/// elements, the empty one included.
pub fn l1_pool(max: usize) -> Vec<FiniteStructure> {
    (0..=max).flat_map(|n| all_graphs(n).into_iter().map(Graph::into_structure)).collect()
}

// ---------------------------------------------------------------- grafting

pub struct GraftInstance {
    pub ball: BallSpec,
    pub target: Slice,
    pub tags: Vec<Hyperset>,
    pub s_targets: Vec<Vec<Hyperset>>,
}

fn random_ball(rng: &mut TestRng, store: &Store, points: &[Hyperset], max_len: usize) -> BallSpec {
    let center = *points.choose(rng).unwrap();
    let mut radius = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=2) };
    loop {
        let ball = BallSpec::around(store, center, radius).unwrap();
        if ball.len() <= max_len || radius == 0 {
            return ball;
        }
        radius -= 1;
    }
}

fn separated(store: &Store, ball: &BallSpec, target: &Slice) -> bool {
    ball.slice.members().iter().all(|&d| {
        !target.contains(d) && d_neighbors(store, d).iter().all(|x| !target.contains(*x))
    })
}

/// A ball of radius at most 2 with at most 6 sets, taken from a random
/// solved system, together with a separated target ball, fresh tags and
/// random S-edge prescriptions.
pub fn random_graft_instance(rng: &mut TestRng, store: &mut Store) -> GraftInstance {
    loop {
        let from_graph = rng.gen_bool(0.75);
        let sys = if !from_graph {
            random_system(rng, store, 6)
        } else {
            let n = rng.gen_range(2..=6);
            let density = rng.gen_range(0.2..0.7);
            graph_system(store, &random_graph(rng, n, density))
        };
        let sol = solve(store, &sys).unwrap();
        let points: Vec<Hyperset> = sol.values().copied().collect();
        let ball = random_ball(rng, store, &points, 6);
        if ball.len() > 6 {
            continue;
        }
        // the target comes from the same system or from a second one
        let other: Vec<Hyperset> = if !from_graph && rng.gen_bool(0.5) {
            points.clone()
        } else {
            let sys = random_system(rng, store, 6);
            solve(store, &sys).unwrap().values().copied().collect()
        };
        let target = random_ball(rng, store, &other, 8).slice;
        if !separated(store, &ball, &target) {
            continue;
        }
        let tags = fresh_tags(store, ball.len());
        let p = rng.gen_range(0.0..0.6);
        let s_targets = (0..ball.len())
            .map(|_| target.members().iter().copied().filter(|_| rng.gen_bool(p)).collect())
            .collect();
        return GraftInstance { ball, target, tags, s_targets };
    }
}

// ---------------------------------------------------------------- APGs

/// A random APG on at most `max_nodes` nodes, every node reachable from the
/// point 0.
pub fn random_apg(rng: &mut TestRng, max_nodes: usize) -> Vec<Vec<usize>> {
    let g = random_membership_graph(rng, max_nodes);
    let mut order = vec![0];
    let mut pos = vec![usize::MAX; g.len()];
    pos[0] = 0;
    let mut i = 0;
    while i < order.len() {
        for &c in &g[order[i]] {
            if pos[c] == usize::MAX {
                pos[c] = order.len();
                order.push(c);
            }
        }
        i += 1;
    }
    order.iter().map(|&v| g[v].iter().map(|&c| pos[c]).collect()).collect()
}

/// A bisimilar copy: one node duplicated, some edges into it redirected to
/// the copy, then everything but the point relabelled.
pub fn bisimilar_variant(rng: &mut TestRng, g: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = g.len();
    let dup = rng.gen_range(0..n);
    let mut h: Vec<Vec<usize>> = g.to_vec();
    h.push(g[dup].clone());
    for row in h.iter_mut() {
        for c in row.iter_mut() {
            if *c == dup && rng.gen_bool(0.5) {
                *c = n;
            }
        }
    }
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    perm.insert(0, 0);
    let mut out = vec![Vec::new(); n + 1];
    for (v, row) in h.iter().enumerate() {
        out[perm[v]] = row.iter().map(|&c| perm[c]).collect();
    }
    // the copy may be unreachable; keep only what the point reaches
    let mut seen = vec![false; n + 1];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &c in &out[v] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    let keep: Vec<usize> = (0..=n).filter(|&v| seen[v]).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    keep.iter().map(|&v| out[v].iter().map(|c| pos[c]).collect()).collect()
}

/// Two membership graphs side by side, the second shifted past the first.
pub fn side_by_side(g: &[Vec<usize>], h: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let k = g.len();
    g.iter().cloned().chain(h.iter().map(|row| row.iter().map(|c| c + k).collect())).collect()
}

/// `g` plus a loop-free apex adjacent to every vertex; the apex is last.
pub fn with_apex(g: &Graph) -> Graph {
    let n = g.size();
    let mut edges = g.edges();
    edges.extend((0..n).map(|v| (v, n)));
    Graph::from_edges(n + 1, &edges).unwrap()
}
