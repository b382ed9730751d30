//! Copying a D-ball next to a target slice with prescribed S-edges.
//!
//! For every `d` in the ball the system `x_d = {h_d} ∪ P_d ∪ Q_d` is solved,
//! where `P_d = {x_e : e ∈ d}` copies membership inside the ball, `Q_d` is the
//! prescribed set of target members, and `h_d` is a well-founded tag.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::iso::is_isomorphism;
use crate::reducts::{d_graph, d_neighbors, sd_graph, Slice};
use crate::store::{Hyperset, Store, Target};
use crate::structure::FiniteStructure;

/// The D-ball of radius `radius` around `center`, with its SD-structure.
#[derive(Debug, Clone)]
pub struct BallSpec {
    pub center: Hyperset,
    pub radius: usize,
    pub slice: Slice,
    pub structure: FiniteStructure,
}

impl BallSpec {
    /// Collects everything within `radius` D-steps of `center` in the store.
    pub fn around(store: &Store, center: Hyperset, radius: usize) -> Result<BallSpec> {
        store.check(center)?;
        let mut seen: HashSet<Hyperset> = HashSet::from([center]);
        let mut queue = VecDeque::from([(center, 0)]);
        while let Some((h, dist)) = queue.pop_front() {
            if dist == radius {
                continue;
            }
            for x in d_neighbors(store, h) {
                if seen.insert(x) {
                    queue.push_back((x, dist + 1));
                }
            }
        }
        let slice = Slice::new(store, seen)?;
        let structure = sd_graph(store, &slice);
        Ok(BallSpec { center, radius, slice, structure })
    }

    pub fn len(&self) -> usize {
        self.slice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slice.is_empty()
    }
}

/// `count` tags `{m}`, `{m+1}`, ... with `m` above every natural in the
/// store. Singletons avoid `h ∈ h'`, which plain naturals would give.
pub fn fresh_tags(store: &mut Store, count: usize) -> Vec<Hyperset> {
    let m = store.max_natural().map_or(0, |k| k + 1);
    (0..count as u32)
        .map(|k| {
            let n = store.hf_encode(m + k);
            store.set_of([n]).expect("store handle")
        })
        .collect()
}

fn tag_error(condition: &'static str, detail: String) -> Error {
    Error::TagCondition { condition, detail }
}

/// Checks the tag conditions and the separation of ball and target.
pub fn check_graft_preconditions(
    store: &Store,
    ball: &BallSpec,
    target: &Slice,
    tags: &[Hyperset],
    s_targets: &[Vec<Hyperset>],
) -> Result<()> {
    let n = ball.len();
    if tags.len() != n {
        return Err(Error::TupleLength(n, tags.len()));
    }
    if s_targets.len() != n {
        return Err(Error::TupleLength(n, s_targets.len()));
    }
    for &t in tags {
        store.check(t)?;
        if !store.is_well_founded(t) {
            return Err(tag_error("well-founded", "a tag is not well-founded".into()));
        }
    }
    for (i, &t0) in tags.iter().enumerate() {
        for (j, &t1) in tags.iter().enumerate() {
            if store.contains(t1, t0) {
                return Err(tag_error("tags-nested", format!("tag {i} is an element of tag {j}")));
            }
            if i != j && t0 == t1 {
                return Err(tag_error("tags-distinct", format!("vertices {i} and {j} share a tag")));
            }
        }
    }
    let members: HashSet<Hyperset> = target.members().iter().copied().collect();
    let union: HashSet<Hyperset> = members.iter().flat_map(|&m| store.elements(m)).collect();
    let union2: HashSet<Hyperset> = union.iter().flat_map(|&m| store.elements(m)).collect();
    for (i, t) in tags.iter().enumerate() {
        if members.contains(t) {
            return Err(tag_error("tag-outside-target", format!("tag {i} is in the target")));
        }
        if union.contains(t) {
            return Err(tag_error("tag-outside-members", format!("tag {i} is an element of a target member")));
        }
        if union2.contains(t) {
            return Err(tag_error("tag-outside-second-level", format!("tag {i} is two levels below a target member")));
        }
    }
    for &d in ball.slice.members() {
        if members.contains(&d) {
            return Err(Error::NotSeparated("ball and target share a set".into()));
        }
        if d_neighbors(store, d).iter().any(|x| members.contains(x)) {
            return Err(Error::NotSeparated("a D-edge joins ball and target".into()));
        }
    }
    for q in s_targets.iter().flatten() {
        store.check(*q)?;
        if !members.contains(q) {
            return Err(Error::NotInSlice);
        }
    }
    Ok(())
}

/// Solves the grafting system. `tags[i]` and `s_targets[i]` belong to ball
/// vertex `i`, the `i`-th member of `ball.slice`. Returns the image of each
/// ball vertex in the same order.
pub fn graft_ball(
    store: &mut Store,
    ball: &BallSpec,
    target: &Slice,
    tags: &[Hyperset],
    s_targets: &[Vec<Hyperset>],
) -> Result<Vec<Hyperset>> {
    check_graft_preconditions(store, ball, target, tags, s_targets)?;
    let members = ball.slice.members();
    let locals: Vec<Vec<Target>> = members
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut row = vec![Target::Stored(tags[i].node())];
            row.extend(store.elements(d).filter_map(|e| ball.slice.index_of(e)).map(Target::Local));
            row.extend(s_targets[i].iter().map(|q| Target::Stored(q.node())));
            row
        })
        .collect();
    Ok(store.insert(&locals).into_iter().map(|v| store.handle(v)).collect())
}

/// Outcome of checking a graft against its specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraftCheck {
    pub injective: bool,
    /// `h_e ∈ image[d]` exactly when `e = d`.
    pub tags_recovered: bool,
    /// The image's SD-structure copies the ball's via `d ↦ image[d]`.
    pub isomorphic: bool,
    /// S-edges between image and target are exactly the prescribed ones.
    pub s_edges_exact: bool,
    pub no_d_to_target: bool,
    /// The image is disjoint from the target and closed under D-neighbours.
    pub separate_component: bool,
}

impl GraftCheck {
    pub fn passed(&self) -> bool {
        self.injective
            && self.tags_recovered
            && self.isomorphic
            && self.s_edges_exact
            && self.no_d_to_target
            && self.separate_component
    }
}

pub fn check_graft(
    store: &Store,
    ball: &BallSpec,
    target: &Slice,
    tags: &[Hyperset],
    s_targets: &[Vec<Hyperset>],
    image: &[Hyperset],
) -> GraftCheck {
    let image_set: BTreeSet<Hyperset> = image.iter().copied().collect();
    let injective = image_set.len() == image.len() && image.len() == ball.len();
    let tags_recovered = image
        .iter()
        .enumerate()
        .all(|(d, &x)| tags.iter().enumerate().all(|(e, &t)| store.contains(x, t) == (d == e)));

    let img_slice = Slice::new(store, image.iter().copied()).expect("store handles");
    let isomorphic = injective && {
        let map: Vec<usize> = image.iter().map(|&h| img_slice.index_of(h).expect("in slice")).collect();
        is_isomorphism(&ball.structure, &sd_graph(store, &img_slice), &map)
            && is_isomorphism(&d_graph(store, &ball.slice), &d_graph(store, &img_slice), &map)
    };

    let mut s_edges_exact = true;
    let mut no_d_to_target = true;
    for (d, &x) in image.iter().enumerate() {
        let want: BTreeSet<Hyperset> = s_targets[d].iter().copied().collect();
        let got: BTreeSet<Hyperset> = target
            .members()
            .iter()
            .copied()
            .filter(|&t| store.contains(x, t) || store.contains(t, x))
            .collect();
        s_edges_exact &= want == got;
        no_d_to_target &= !target.members().iter().any(|&t| store.contains(x, t) && store.contains(t, x));
    }
    let separate_component = image.iter().all(|&x| {
        !target.contains(x) && d_neighbors(store, x).iter().all(|y| image_set.contains(y))
    });
    GraftCheck { injective, tags_recovered, isomorphic, s_edges_exact, no_d_to_target, separate_component }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{embed_graph, Graph};
    use crate::reducts::components;

    #[test]
    fn single_vertex_with_one_s_edge() {
        let mut store = Store::new();
        let lone = store.set_of([]).unwrap();
        let ell = store.hf_encode(1);
        let ball = BallSpec::around(&store, lone, 1).unwrap();
        assert_eq!(ball.len(), 1);
        let target = Slice::new(&store, [ell]).unwrap();
        let tags = fresh_tags(&mut store, 1);
        let s_targets = vec![vec![ell]];
        let img = graft_ball(&mut store, &ball, &target, &tags, &s_targets).unwrap();
        let mut want = vec![tags[0], ell];
        want.sort();
        assert_eq!(store.elements(img[0]).collect::<Vec<_>>(), want);
        assert!(store.member(ell, img[0]).unwrap());
        assert!(!store.member(img[0], ell).unwrap());
        assert!(check_graft(&store, &ball, &target, &tags, &s_targets, &img).passed());
    }

    #[test]
    fn edge_pair_copied_as_fresh_component() {
        let mut store = Store::new();
        let pair = embed_graph(&mut store, &Graph::from_edges(2, &[(0, 1)]).unwrap());
        let ball = BallSpec::around(&store, pair[0], 2).unwrap();
        assert_eq!(ball.len(), 2);
        let target = Slice::empty(&store);
        let tags = fresh_tags(&mut store, 2);
        let img = graft_ball(&mut store, &ball, &target, &tags, &[vec![], vec![]]).unwrap();
        assert!(img.iter().all(|h| !pair.contains(h)));
        assert!(store.member(img[0], img[1]).unwrap() && store.member(img[1], img[0]).unwrap());
        let slice = Slice::new(&store, img.iter().copied()).unwrap();
        assert_eq!(components(&d_graph(&store, &slice)), vec![vec![0, 1]]);
        assert!(check_graft(&store, &ball, &target, &tags, &[vec![], vec![]], &img).passed());
    }

    #[test]
    fn tag_conditions_are_enforced() {
        let mut store = Store::new();
        let pair = embed_graph(&mut store, &Graph::from_edges(2, &[(0, 1)]).unwrap());
        let ball = BallSpec::around(&store, pair[0], 1).unwrap();
        let n: Vec<Hyperset> = (0..6).map(|i| store.hf_encode(i)).collect();
        let s4 = store.set_of([n[4]]).unwrap();
        let s5 = store.set_of([n[5]]).unwrap();
        let s3 = store.set_of([n[3]]).unwrap();
        let target = Slice::new(&store, [n[4]]).unwrap();
        let wrapped = Slice::new(&store, [s4]).unwrap();
        let none = [vec![], vec![]];
        let check = |target: &Slice, tags: [Hyperset; 2]| check_graft_preconditions(&store, &ball, target, &tags, &none);
        let violated = |r: Result<()>| match r {
            Err(Error::TagCondition { condition, .. }) => condition,
            other => panic!("expected a tag violation, got {other:?}"),
        };
        assert_eq!(violated(check(&target, [n[5], s5])), "tags-nested");
        assert_eq!(violated(check(&target, [s5, s5])), "tags-distinct");
        assert_eq!(violated(check(&target, [n[4], s5])), "tag-outside-target");
        assert_eq!(violated(check(&target, [n[3], s5])), "tag-outside-members");
        assert_eq!(violated(check(&wrapped, [n[2], s5])), "tag-outside-second-level");
        assert!(check(&wrapped, [n[5], s3]).is_ok());

        let touching = Slice::new(&store, [pair[1]]).unwrap();
        let far = BallSpec::around(&store, pair[0], 0).unwrap();
        assert!(matches!(
            check_graft_preconditions(&store, &far, &touching, &[s5], &[vec![]]),
            Err(Error::NotSeparated(_))
        ));
        assert_eq!(
            check_graft_preconditions(&store, &ball, &target, &[s4, s5], &[vec![n[0]], vec![]]),
            Err(Error::NotInSlice)
        );
    }
}
