//! Seeded random instances for the verification suites: trees, forests,
//! subsets, rational measures, and transport tables. Everything is a
//! deterministic function of the seed.

use crate::cavity::rational_measure;
use crate::field::AlgebraicNumber;
use crate::graph::{Graph, VertexSet};
use crate::spectral::SpectralMeasure;
use crate::{Int, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform labeled tree on `n` vertices via a random Pruefer sequence.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    if n == 1 {
        return Graph::k1();
    }
    if n == 2 {
        return Graph::path(2);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Graph::from_pruefer(n, &seq).expect("valid Pruefer sequence")
}

/// Forest with a few random tree components, at most `max_n` vertices total.
pub fn random_forest(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let pieces = rng.gen_range(1..=3usize);
    let mut sizes = Vec::new();
    let mut left = max_n;
    for i in 0..pieces {
        if left == 0 {
            break;
        }
        let hi = if i + 1 == pieces { left } else { left.min(1 + left / 2) };
        let s = rng.gen_range(1..=hi);
        sizes.push(s);
        left -= s;
    }
    let mut edges = Vec::new();
    let mut offset = 0usize;
    for s in &sizes {
        let t = random_tree(rng, *s);
        for (u, v) in t.edges() {
            edges.push((u + offset, v + offset));
        }
        offset += s;
    }
    Graph::from_edges(offset, &edges).expect("forest is simple")
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    let mut s = VertexSet::empty(n);
    for v in 0..n {
        if rng.gen_bool(0.5) {
            s.insert(v);
        }
    }
    s
}

/// Grow a connected subset of `target` vertices from a random start.
pub fn random_connected_subset(g: &Graph, rng: &mut ChaCha8Rng, target: usize) -> VertexSet {
    let n = g.vertex_count();
    let mut s = VertexSet::empty(n);
    let start = rng.gen_range(0..n);
    s.insert(start);
    let mut frontier: Vec<usize> = g.neighbors(start).collect();
    while s.len() < target && !frontier.is_empty() {
        let i = rng.gen_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        if s.contains(v) {
            continue;
        }
        s.insert(v);
        for w in g.neighbors(v) {
            if !s.contains(w) {
                frontier.push(w);
            }
        }
    }
    s
}

/// Random induced path in a tree: a random walk without backtracking.
pub fn random_tree_path(tree: &Graph, rng: &mut ChaCha8Rng, max_len: usize) -> VertexSet {
    let n = tree.vertex_count();
    let mut s = VertexSet::empty(n);
    let mut cur = rng.gen_range(0..n);
    s.insert(cur);
    let mut prev = usize::MAX;
    for _ in 1..max_len {
        let next: Vec<usize> = tree.neighbors(cur).filter(|&w| w != prev).collect();
        if next.is_empty() {
            break;
        }
        let w = next[rng.gen_range(0..next.len())];
        s.insert(w);
        prev = cur;
        cur = w;
    }
    s
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rat {
    let num = rng.gen_range(-max_num..=max_num);
    let den = rng.gen_range(1..=max_den);
    Rat::new(Int::from(num), Int::from(den))
}

/// Probability measure with up to `max_atoms` integer atoms and positive
/// rational masses summing to one.
pub fn random_rational_probability_measure(
    rng: &mut ChaCha8Rng,
    max_atoms: usize,
) -> SpectralMeasure {
    let k = rng.gen_range(1..=max_atoms);
    let mut atoms: Vec<i64> = Vec::new();
    while atoms.len() < k {
        let a = rng.gen_range(-3..=3i64);
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6i64)).collect();
    let total: i64 = weights.iter().sum();
    let pairs: Vec<(Rat, Rat)> = atoms
        .into_iter()
        .zip(weights)
        .map(|(a, w)| {
            (
                Rat::from_integer(Int::from(a)),
                Rat::new(Int::from(w), Int::from(total)),
            )
        })
        .collect();
    rational_measure(&pairs)
}

/// A random transport table on ordered vertex pairs, as a closure.
pub fn random_transport_table(
    rng: &mut ChaCha8Rng,
    n: usize,
) -> impl Fn(&Graph, usize, usize) -> Rat {
    let mut table: HashMap<(usize, usize), Rat> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            table.insert((x, y), random_rational(rng, 9, 5));
        }
    }
    move |_g: &Graph, x: usize, y: usize| {
        table.get(&(x, y)).cloned().unwrap_or_else(|| Rat::from_integer(Int::from(0)))
    }
}

/// Standard spectral locations used across suites: 0, +-1, sqrt2, golden.
pub fn standard_lambdas() -> Vec<AlgebraicNumber> {
    let mut out = vec![
        AlgebraicNumber::from_int(Int::from(0)),
        AlgebraicNumber::from_int(Int::from(1)),
        AlgebraicNumber::from_int(Int::from(-1)),
    ];
    out.extend(AlgebraicNumber::roots_of_irreducible(
        &crate::IntPoly::from_coeffs(vec![Int::from(-2), Int::from(0), Int::from(1)]),
    ));
    out.push(
        AlgebraicNumber::roots_of_irreducible(&crate::IntPoly::from_coeffs(vec![
            Int::from(-1),
            Int::from(-1),
            Int::from(1),
        ]))
        .pop()
        .unwrap(),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trees_and_forests_are_what_they_claim() {
        let mut r = rng(42);
        for n in 1..=20 {
            assert!(random_tree(&mut r, n).is_tree());
        }
        for _ in 0..20 {
            let f = random_forest(&mut r, 25);
            assert!(f.is_forest());
            assert!(f.vertex_count() <= 25);
        }
    }

    #[test]
    fn connected_subsets_are_connected() {
        let mut r = rng(7);
        for _ in 0..50 {
            let t = random_tree(&mut r, 20);
            let s = random_connected_subset(&t, &mut r, 8);
            assert_eq!(t.components_of(&s).len(), 1);
        }
    }

    #[test]
    fn tree_paths_are_induced_paths() {
        let mut r = rng(8);
        for _ in 0..50 {
            let t = random_tree(&mut r, 15);
            let p = random_tree_path(&t, &mut r, 6);
            assert!(p.iter().all(|v| t.degree_in(v, &p) <= 2));
            assert_eq!(t.components_of(&p).len(), 1);
        }
    }

    #[test]
    fn measures_are_probability_measures() {
        let mut r = rng(9);
        for _ in 0..50 {
            let m = random_rational_probability_measure(&mut r, 5);
            assert_eq!(m.total_mass(), Rat::from_integer(Int::from(1)));
        }
    }
}
