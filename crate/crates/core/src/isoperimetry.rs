//! Isoperimetric ratios, the tree boundary lower bound, brute-force anchored
//! isoperimetry on finite rooted graphs, thinness reports, and the path
//! boundary identity.

use crate::graph::{Graph, RootedGraph, VertexSet};
use crate::{Error, Rat, Result};
use num_traits::Zero;
use serde::Serialize;

pub const ANCHORED_CAP: usize = 18;

/// `|boundary(S)| / |S|`, exact.
pub fn isoperimetric_ratio(graph: &Graph, subset: &VertexSet) -> Result<Rat> {
    if subset.is_empty() {
        return Err(Error::BadSubset("isoperimetric ratio of empty set".into()));
    }
    let b = graph.boundary_of(subset).len() as i64;
    Ok(crate::rat_int(b) / crate::rat_int(subset.len() as i64))
}

/// Visit every connected induced subset that contains `anchor`, uses only
/// vertices allowed by `allowed`, and has at most `max_size` vertices.
/// Each subset is visited exactly once.
pub fn for_each_connected_subset_containing(
    graph: &Graph,
    anchor: usize,
    allowed: &VertexSet,
    max_size: usize,
    visit: &mut impl FnMut(&VertexSet),
) {
    if max_size == 0 || !allowed.contains(anchor) {
        return;
    }
    let n = graph.vertex_count();
    let mut s = VertexSet::empty(n);
    s.insert(anchor);
    let banned = VertexSet::empty(n);
    let cand: Vec<usize> = graph
        .neighbors(anchor)
        .filter(|&w| allowed.contains(w))
        .collect();
    rec_subsets(graph, allowed, &mut s, cand, banned, max_size, visit);
}

fn rec_subsets(
    graph: &Graph,
    allowed: &VertexSet,
    s: &mut VertexSet,
    cand: Vec<usize>,
    banned: VertexSet,
    max_size: usize,
    visit: &mut impl FnMut(&VertexSet),
) {
    visit(s);
    if s.len() == max_size {
        return;
    }
    let mut banned = banned;
    for (i, &v) in cand.iter().enumerate() {
        if banned.contains(v) {
            continue;
        }
        let mut in_cand = VertexSet::empty(graph.vertex_count());
        let mut new_cand: Vec<usize> = Vec::new();
        for &w in &cand[i + 1..] {
            if !banned.contains(w) {
                in_cand.insert(w);
                new_cand.push(w);
            }
        }
        for w in graph.neighbors(v) {
            if allowed.contains(w) && !s.contains(w) && !banned.contains(w) && !in_cand.contains(w)
            {
                in_cand.insert(w);
                new_cand.push(w);
            }
        }
        s.insert(v);
        rec_subsets(graph, allowed, s, new_cand, banned.clone(), max_size, visit);
        s.remove(v);
        banned.insert(v);
    }
}

/// Visit every nonempty connected induced subset of `allowed` with at most
/// `max_size` vertices, each exactly once (anchored at its smallest vertex).
pub fn for_each_connected_subset(
    graph: &Graph,
    allowed: &VertexSet,
    max_size: usize,
    visit: &mut impl FnMut(&VertexSet),
) {
    let mut remaining = allowed.clone();
    for v in allowed.iter() {
        for_each_connected_subset_containing(graph, v, &remaining, max_size, visit);
        remaining.remove(v);
    }
}

/// `|boundary(S)| >= |S| (delta - 2) + 2` for every connected subset whose
/// vertices all have tree-degree at least `delta`; checked exhaustively.
pub fn tree_boundary_bound_check(tree: &Graph, delta: usize) -> Result<bool> {
    if !tree.is_tree() {
        return Err(Error::NotATree("the boundary bound is for trees".into()));
    }
    let n = tree.vertex_count();
    let mut allowed = VertexSet::empty(n);
    for v in 0..n {
        if tree.degree(v) >= delta {
            allowed.insert(v);
        }
    }
    let mut ok = true;
    let d = delta as i64;
    for_each_connected_subset(tree, &allowed, n, &mut |s| {
        let b = tree.boundary_of(s).len() as i64;
        if b < s.len() as i64 * (d - 2) + 2 {
            ok = false;
        }
    });
    Ok(ok)
}

/// Sampled variant for trees too large to enumerate: grows `samples` seeded
/// random connected subsets inside the qualifying vertex set and checks the
/// bound on each.
pub fn tree_boundary_bound_check_sampled(
    tree: &Graph,
    delta: usize,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    if !tree.is_tree() {
        return Err(Error::NotATree("the boundary bound is for trees".into()));
    }
    let n = tree.vertex_count();
    let mut allowed = VertexSet::empty(n);
    for v in 0..n {
        if tree.degree(v) >= delta {
            allowed.insert(v);
        }
    }
    if allowed.is_empty() {
        return Ok(true);
    }
    let (sub, map) = tree.induced(&allowed);
    if sub.vertex_count() == 0 {
        return Ok(true);
    }
    let mut rng = crate::corpus::rng(seed);
    let d = delta as i64;
    for _ in 0..samples {
        let target = 1 + rand::Rng::gen_range(&mut rng, 0..sub.vertex_count());
        let local = crate::corpus::random_connected_subset(&sub, &mut rng, target);
        let mut s = VertexSet::empty(n);
        for v in local.iter() {
            s.insert(map[v]);
        }
        let b = tree.boundary_of(&s).len() as i64;
        if b < s.len() as i64 * (d - 2) + 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimum of `|boundary| / |S|` over connected subsets containing the root
/// with `min_size <= |S| <= max_size`. This is the finite surrogate of the
/// inner infimum in the anchored isoperimetric constant; the outer limit is
/// not computable from finite data.
pub fn anchored_constant_bruteforce(
    rg: &RootedGraph,
    min_size: usize,
    max_size: usize,
) -> Result<Rat> {
    let profile = anchored_profile(rg, max_size)?;
    let mut best: Option<Rat> = None;
    for size in min_size..=max_size {
        if let Some(Some(r)) = profile.get(size) {
            if best.as_ref().map(|b| r < b).unwrap_or(true) {
                best = Some(r.clone());
            }
        }
    }
    best.ok_or_else(|| Error::BadSubset("no connected subset in the size window".into()))
}

/// Per-size minima of the anchored ratio: entry `s` is the smallest
/// `|boundary|/|S|` over connected root-containing subsets of exactly `s`
/// vertices (`None` when no such subset exists).
pub fn anchored_profile(rg: &RootedGraph, max_size: usize) -> Result<Vec<Option<Rat>>> {
    if max_size > ANCHORED_CAP {
        return Err(Error::CapExceeded {
            what: "anchored subset enumeration size",
            cap: ANCHORED_CAP,
            got: max_size,
        });
    }
    if max_size == 0 {
        return Err(Error::OutOfRange("max_size must be >= 1".into()));
    }
    let n = rg.graph.vertex_count();
    let mut profile: Vec<Option<Rat>> = vec![None; max_size + 1];
    let allowed = VertexSet::full(n);
    for_each_connected_subset_containing(&rg.graph, rg.root, &allowed, max_size, &mut |s| {
        let size = s.len();
        let r = crate::rat_int(rg.graph.boundary_of(s).len() as i64)
            / crate::rat_int(size as i64);
        let slot = &mut profile[size];
        if slot.as_ref().map(|b| r < *b).unwrap_or(true) {
            *slot = Some(r);
        }
    });
    Ok(profile)
}

/// Exact thinness data of `(graph, subset)` under uniform rooting: density,
/// minimum internal degree, and conditional mean excess total degree.
#[derive(Debug, Clone, Serialize)]
pub struct ThinnessReport {
    pub density: String,
    pub min_internal_degree: Option<usize>,
    pub mean_excess: Option<String>,
    #[serde(skip)]
    pub values: (Rat, Option<usize>, Option<Rat>),
}

pub fn thinness_report(graph: &Graph, subset: &VertexSet) -> Result<ThinnessReport> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let size = subset.len();
    let density = crate::rat_int(size as i64) / crate::rat_int(n as i64);
    if size == 0 {
        return Ok(ThinnessReport {
            density: crate::field::rat_string(&density),
            min_internal_degree: None,
            mean_excess: None,
            values: (density, None, None),
        });
    }
    let mut min_internal = usize::MAX;
    let mut excess = Rat::zero();
    for v in subset.iter() {
        min_internal = min_internal.min(graph.degree_in(v, subset));
        excess += crate::rat_int(graph.degree(v) as i64 - 2);
    }
    let mean_excess = excess / crate::rat_int(size as i64);
    Ok(ThinnessReport {
        density: crate::field::rat_string(&density),
        min_internal_degree: Some(min_internal),
        mean_excess: Some(crate::field::rat_string(&mean_excess)),
        values: (density, Some(min_internal), Some(mean_excess)),
    })
}

/// Both sides of the path boundary identity `sum_{x in S}(deg x - 2) =
/// |boundary(S)| - 2` for a subset inducing a simple path in a tree, plus a
/// flag per path endpoint recording whether it has a neighbor outside `S`
/// (the identity is an exact statement about finite trees either way; the
/// flags mark the degenerate endpoints the infinite-path reading cares
/// about).
#[derive(Debug, Clone, Serialize)]
pub struct PathBoundaryReport {
    pub lhs: i64,
    pub rhs: i64,
    pub endpoints_with_outside_neighbor: usize,
    pub endpoint_count: usize,
}

pub fn path_boundary_identity(
    tree: &Graph,
    path_subset: &VertexSet,
) -> Result<PathBoundaryReport> {
    if !tree.is_tree() {
        return Err(Error::NotATree("the path identity is for trees".into()));
    }
    if path_subset.is_empty() {
        return Err(Error::BadSubset("empty path".into()));
    }
    // induced-path validation: connected, degrees within the subset <= 2
    if tree.components_of(path_subset).len() != 1 {
        return Err(Error::BadSubset("subset is not connected".into()));
    }
    let mut endpoints = Vec::new();
    for v in path_subset.iter() {
        let d = tree.degree_in(v, path_subset);
        if d > 2 {
            return Err(Error::BadSubset(format!(
                "vertex {v} has {d} subset neighbors; not a path"
            )));
        }
        if d <= 1 {
            endpoints.push(v);
        }
    }
    let lhs: i64 = path_subset
        .iter()
        .map(|v| tree.degree(v) as i64 - 2)
        .sum();
    let rhs = tree.boundary_of(path_subset).len() as i64 - 2;
    let with_outside = endpoints
        .iter()
        .filter(|&&v| tree.degree(v) > tree.degree_in(v, path_subset))
        .count();
    Ok(PathBoundaryReport {
        lhs,
        rhs,
        endpoints_with_outside_neighbor: with_outside,
        endpoint_count: endpoints.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;
    use num_traits::One;

    fn vs(n: usize, idx: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, idx).unwrap()
    }

    #[test]
    fn ratio_examples() {
        let star = Graph::star(3);
        assert_eq!(
            isoperimetric_ratio(&star, &vs(4, &[0])).unwrap(),
            rat_int(3)
        );
        let p5 = Graph::path(5);
        assert_eq!(
            isoperimetric_ratio(&p5, &VertexSet::full(5)).unwrap(),
            Rat::zero()
        );
        assert!(isoperimetric_ratio(&p5, &VertexSet::empty(5)).is_err());
    }

    #[test]
    fn subset_enumeration_counts() {
        // all connected subsets of P3: {0},{1},{2},{01},{12},{012} = 6
        let p3 = Graph::path(3);
        let mut count = 0;
        for_each_connected_subset(&p3, &VertexSet::full(3), 3, &mut |_| count += 1);
        assert_eq!(count, 6);
        // brute-force cross-check on the 3-star: every subset containing the
        // center is connected (8), leaves alone are 3 singletons
        let star = Graph::star(3);
        let mut got = std::collections::HashSet::new();
        for_each_connected_subset(&star, &VertexSet::full(4), 4, &mut |s| {
            assert!(got.insert(s.indices()), "duplicate {:?}", s.indices());
        });
        let mut brute = 0;
        for mask in 1u32..16 {
            let idx: Vec<usize> = (0..4).filter(|&i| mask >> i & 1 == 1).collect();
            let set = vs(4, &idx);
            if star.components_of(&set).len() == 1 {
                brute += 1;
            }
        }
        assert_eq!(got.len(), brute);
    }

    #[test]
    fn boundary_bound_on_star_and_small_trees() {
        assert!(tree_boundary_bound_check(&Graph::star(3), 3).unwrap());
        for n in 2..=8 {
            for t in crate::graph::enumerate_free_trees(n).unwrap() {
                assert!(tree_boundary_bound_check(&t, 3).unwrap());
            }
        }
    }

    #[test]
    fn boundary_bound_sampled_on_larger_trees() {
        let mut rng = crate::corpus::rng(77);
        for _ in 0..10 {
            let t = crate::corpus::random_tree(&mut rng, 60);
            assert!(tree_boundary_bound_check_sampled(&t, 3, 200, 5).unwrap());
        }
    }

    #[test]
    fn anchored_on_k13() {
        let rg = RootedGraph::new(Graph::star(3), 0).unwrap();
        let profile = anchored_profile(&rg, 4).unwrap();
        assert_eq!(profile[1], Some(rat_int(3)));
        assert_eq!(profile[4], Some(Rat::zero()));
        assert_eq!(
            anchored_constant_bruteforce(&rg, 1, 4).unwrap(),
            Rat::zero()
        );
        assert_eq!(
            anchored_constant_bruteforce(&rg, 1, 1).unwrap(),
            rat_int(3)
        );
    }

    #[test]
    fn anchored_on_truncated_three_regular_matches_tree_knapsack_oracle() {
        // depth-5 truncation of the 3-regular tree, rooted at the center;
        // oracle: for connected subsets of a tree, |boundary| equals
        // (degree sum) - 2(|S|-1), so the minimum ratio per size comes from
        // a min-degree-sum subtree knapsack
        let mut edges = Vec::new();
        let mut next = 1usize;
        let mut frontier = vec![0usize];
        for depth in 0..5 {
            let mut newf = Vec::new();
            for &v in &frontier {
                let kids = if depth == 0 { 3 } else { 2 };
                for _ in 0..kids {
                    edges.push((v, next));
                    newf.push(next);
                    next += 1;
                }
            }
            frontier = newf;
        }
        let tree = Graph::from_edges(next, &edges).unwrap();
        assert_eq!(next, 94);
        let rg = RootedGraph::new(tree.clone(), 0).unwrap();
        let (min_size, max_size) = (3usize, 12usize);
        let got = anchored_constant_bruteforce(&rg, min_size, max_size).unwrap();

        // tree knapsack: best[v][k] = min degree sum of a k-vertex subtree
        // of the rooted tree containing v
        let n = tree.vertex_count();
        let mut order = vec![0usize];
        let mut parent = vec![usize::MAX; n];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for w in tree.neighbors(v) {
                if w != parent[v] && parent[w] == usize::MAX && w != 0 {
                    parent[w] = v;
                    order.push(w);
                }
            }
            i += 1;
        }
        const INF: i64 = i64::MAX / 4;
        let mut best = vec![vec![INF; max_size + 1]; n];
        for &v in order.iter().rev() {
            let mut acc = vec![INF; max_size + 1];
            acc[1] = tree.degree(v) as i64;
            for w in tree.neighbors(v) {
                if parent[w] == v {
                    let mut merged = acc.clone();
                    for take in 1..=max_size {
                        if best[w][take] == INF {
                            continue;
                        }
                        for have in 1..=max_size - take {
                            if acc[have] < INF {
                                let cand = acc[have] + best[w][take];
                                if cand < merged[have + take] {
                                    merged[have + take] = cand;
                                }
                            }
                        }
                    }
                    acc = merged;
                }
            }
            best[v] = acc;
        }
        let mut oracle: Option<Rat> = None;
        for k in min_size..=max_size {
            if best[0][k] == INF {
                continue;
            }
            let boundary = best[0][k] - 2 * (k as i64 - 1);
            let r = rat_int(boundary) / rat_int(k as i64);
            if oracle.as_ref().map(|b| r < *b).unwrap_or(true) {
                oracle = Some(r);
            }
        }
        assert_eq!(Some(got), oracle);
    }

    #[test]
    fn anchored_whole_path_is_zero() {
        let rg = RootedGraph::new(Graph::path(6), 0).unwrap();
        assert_eq!(
            anchored_constant_bruteforce(&rg, 6, 6).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn anchored_monotone_in_max_size() {
        let rg = RootedGraph::new(Graph::path(7), 3).unwrap();
        let mut prev: Option<Rat> = None;
        for max in 1..=7 {
            let v = anchored_constant_bruteforce(&rg, 1, max).unwrap();
            if let Some(p) = &prev {
                assert!(v <= *p);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn thinness_of_cycle_and_path_interior() {
        let c6 = Graph::cycle(6);
        let r = thinness_report(&c6, &VertexSet::full(6)).unwrap();
        assert_eq!(r.values.0, Rat::one());
        assert_eq!(r.values.1, Some(2));
        assert_eq!(r.values.2, Some(Rat::zero()));

        let p10 = Graph::path(10);
        let interior = vs(10, &[1, 2, 3, 4, 5, 6, 7, 8]);
        let r2 = thinness_report(&p10, &interior).unwrap();
        assert_eq!(r2.values.0, rat_int(8) / rat_int(10));
        // endpoints of the interior have one subset neighbor: fails (ii)
        assert_eq!(r2.values.1, Some(1));
    }

    #[test]
    fn path_identity_cases() {
        let p5 = Graph::path(5);
        let mid = vs(5, &[1, 2, 3]);
        let rep = path_boundary_identity(&p5, &mid).unwrap();
        assert_eq!(rep.lhs, 0);
        assert_eq!(rep.rhs, 0);
        assert_eq!(rep.endpoints_with_outside_neighbor, 2);
        // non-path subsets rejected
        let star = Graph::star(3);
        assert!(path_boundary_identity(&star, &VertexSet::full(4)).is_err());
        let p4 = Graph::path(4);
        assert!(path_boundary_identity(&p4, &vs(4, &[0, 2])).is_err());
    }

    #[test]
    fn path_identity_holds_for_every_connected_tree_subset() {
        // in finite trees the identity is exact for any induced path
        for n in 2..=8 {
            for t in crate::graph::enumerate_free_trees(n).unwrap() {
                for_each_connected_subset(&t, &VertexSet::full(n), n, &mut |s| {
                    if s.iter().all(|v| t.degree_in(v, s) <= 2) {
                        let rep = path_boundary_identity(&t, s).unwrap();
                        assert_eq!(rep.lhs, rep.rhs);
                    }
                });
            }
        }
    }
}
