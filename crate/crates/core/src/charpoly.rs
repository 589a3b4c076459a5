//! Exact characteristic polynomials `det(zI - A)` of adjacency matrices.
//!
//! Trees use the classical subtree recursion. General graphs go through a
//! Chinese-remainder scheme: the characteristic polynomial is computed modulo
//! enough 62-bit primes (Hessenberg reduction, then the Hessenberg determinant
//! recurrence) to exceed a proven Hadamard-style coefficient bound, which
//! makes the reconstruction certified, not heuristic.

use crate::factor::factor_over_z_capped;
use crate::field::AlgebraicNumber;
use crate::graph::{CanonicalTreeCode, Graph};
use crate::{Error, Int, IntPoly, Result};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

pub const DEFAULT_DENSE_CAP: usize = 600;

/// Characteristic polynomial of a tree via the subtree recursion.
pub fn charpoly_tree(tree: &Graph) -> Result<IntPoly> {
    if !tree.is_tree() {
        return Err(Error::NotATree(format!(
            "{} vertices, {} edges, connected: {}",
            tree.vertex_count(),
            tree.edge_count(),
            tree.is_connected()
        )));
    }
    Ok(charpoly_tree_unchecked(tree, 0))
}

fn charpoly_tree_unchecked(tree: &Graph, root: usize) -> IntPoly {
    let n = tree.vertex_count();
    // iterative postorder
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for w in tree.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    // with_vertex[v]: charpoly of the subtree rooted at v
    // without_vertex[v]: charpoly of that subtree minus v
    let mut with_vertex: Vec<Option<IntPoly>> = vec![None; n];
    let mut without_vertex: Vec<Option<IntPoly>> = vec![None; n];
    let z = IntPoly::var();
    for &v in order.iter().rev() {
        let kids: Vec<usize> = tree.neighbors(v).filter(|&w| parent[w] == v).collect();
        if kids.is_empty() {
            with_vertex[v] = Some(z.clone());
            without_vertex[v] = Some(IntPoly::one());
            continue;
        }
        let k = kids.len();
        let a: Vec<&IntPoly> = kids.iter().map(|&c| with_vertex[c].as_ref().unwrap()).collect();
        // prefix[i] = a_0 ... a_{i-1}, suffix[i] = a_i ... a_{k-1}
        let mut prefix = vec![IntPoly::one(); k + 1];
        for i in 0..k {
            prefix[i + 1] = prefix[i].mul(a[i]);
        }
        let mut suffix = vec![IntPoly::one(); k + 1];
        for i in (0..k).rev() {
            suffix[i] = a[i].mul(&suffix[i + 1]);
        }
        let b_v = prefix[k].clone();
        let mut acc = z.mul(&b_v);
        for (i, &c) in kids.iter().enumerate() {
            let others = prefix[i].mul(&suffix[i + 1]);
            let term = without_vertex[c].as_ref().unwrap().mul(&others);
            acc = acc.sub(&term);
        }
        with_vertex[v] = Some(acc);
        without_vertex[v] = Some(b_v);
    }
    with_vertex[root].take().unwrap()
}

/// Characteristic polynomial of a forest: product over tree components.
pub fn charpoly_forest(forest: &Graph) -> Result<IntPoly> {
    if !forest.is_forest() {
        return Err(Error::NotAForest(format!(
            "{} vertices, {} edges, {} components",
            forest.vertex_count(),
            forest.edge_count(),
            forest.components().len()
        )));
    }
    let mut acc = IntPoly::one();
    for comp in forest.components() {
        let (tree, _) = forest.induced(&comp);
        acc = acc.mul(&charpoly_tree_unchecked(&tree, 0));
    }
    Ok(acc)
}

/// Characteristic polynomial of any graph: forests go through the tree
/// recursion, everything else through the certified dense method.
pub fn charpoly(graph: &Graph) -> Result<IntPoly> {
    if graph.vertex_count() == 0 {
        return Ok(IntPoly::one());
    }
    if graph.is_forest() {
        charpoly_forest(graph)
    } else {
        charpoly_dense(graph)
    }
}

pub fn charpoly_dense(graph: &Graph) -> Result<IntPoly> {
    charpoly_dense_capped(graph, DEFAULT_DENSE_CAP)
}

pub fn charpoly_dense_capped(graph: &Graph, cap: usize) -> Result<IntPoly> {
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "dense characteristic polynomial order",
            cap,
            got: n,
        });
    }
    if n == 0 {
        return Ok(IntPoly::one());
    }
    // certified coefficient bound: |c_k| <= C(n, j) * Delta^{j/2} <= 2^n * (Delta+1)^{n/2 + 1}
    let delta = graph.max_degree().max(1);
    let bound: Int =
        (Int::one() << n) * Int::from(delta as u64 + 1).pow((n / 2 + 1) as u32);
    let target: Int = &bound << 1;
    let mut primes = Vec::new();
    let mut modulus = Int::one();
    let mut candidate: u64 = (1 << 62) + 1;
    while modulus <= target {
        while !is_prime_u64(candidate) {
            candidate += 2;
        }
        primes.push(candidate);
        modulus *= Int::from(candidate);
        candidate += 2;
    }
    // residues per prime
    let mut coeff_residues: Vec<Vec<u64>> = Vec::with_capacity(primes.len());
    for &p in &primes {
        coeff_residues.push(charpoly_mod_p(graph, p));
    }
    // CRT per coefficient with symmetric lift
    let mut coeffs = Vec::with_capacity(n + 1);
    let half = &modulus >> 1;
    for k in 0..=n {
        let mut x = Int::zero();
        let mut m = Int::one();
        for (i, &p) in primes.iter().enumerate() {
            let pi = Int::from(p);
            let r = Int::from(coeff_residues[i][k]);
            let diff = (&r - &x) % &pi;
            let minv = mod_inverse_int(&m, &pi);
            let t: Int = ((diff * minv) % &pi + &pi) % &pi;
            x += &m * t;
            m *= pi;
        }
        if x > half {
            x -= &modulus;
        }
        coeffs.push(x);
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

fn mod_inverse_int(a: &Int, p: &Int) -> Int {
    let g = num_integer::Integer::extended_gcd(&a.mod_floor_ref(p), p);
    debug_assert!(g.gcd.is_one());
    ((g.x % p) + p) % p
}

trait ModFloorRef {
    fn mod_floor_ref(&self, p: &Int) -> Int;
}

impl ModFloorRef for Int {
    fn mod_floor_ref(&self, p: &Int) -> Int {
        num_integer::Integer::mod_floor(self, p)
    }
}

// ---- word-size modular arithmetic ----

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn modinv_u64(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Monic `det(zI - A) mod p` via Hessenberg reduction (ascending coefficients).
fn charpoly_mod_p(graph: &Graph, p: u64) -> Vec<u64> {
    let n = graph.vertex_count();
    let mut h = vec![vec![0u64; n]; n];
    for u in 0..n {
        for v in graph.neighbors(u) {
            h[u][v] = 1;
        }
    }
    // similarity reduction to upper Hessenberg with pivoting
    for j in 0..n.saturating_sub(2) {
        let pivot = (j + 1..n).find(|&r| h[r][j] != 0);
        let Some(r) = pivot else { continue };
        if r != j + 1 {
            h.swap(r, j + 1);
            for row in h.iter_mut() {
                row.swap(r, j + 1);
            }
        }
        let inv = modinv_u64(h[j + 1][j], p);
        for i in j + 2..n {
            if h[i][j] == 0 {
                continue;
            }
            let f = mulmod(h[i][j], inv, p);
            // row_i -= f * row_{j+1}
            for k in 0..n {
                let sub = mulmod(f, h[j + 1][k], p);
                h[i][k] = (h[i][k] + p - sub) % p;
            }
            // col_{j+1} += f * col_i
            for row in h.iter_mut() {
                row[j + 1] = (row[j + 1] + mulmod(f, row[i], p)) % p;
            }
        }
    }
    // Hessenberg charpoly recurrence:
    // c_k = (z - h[k-1][k-1]) c_{k-1}
    //       - sum_{i=0}^{k-2} h[i][k-1] (prod_{j=i+1}^{k-1} h[j][j-1]) c_i
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut c = vec![0u64; k + 1];
        // z * c_{k-1}
        for (i, &a) in prev.iter().enumerate() {
            c[i + 1] = a;
        }
        // - h[k-1][k-1] * c_{k-1}
        let d = h[k - 1][k - 1] % p;
        if d != 0 {
            for (i, &a) in prev.iter().enumerate() {
                c[i] = (c[i] + p - mulmod(d, a, p)) % p;
            }
        }
        let mut beta = 1u64;
        for i in (0..k - 1).rev() {
            beta = mulmod(beta, h[i + 1][i], p);
            if beta == 0 {
                break;
            }
            let coeff = mulmod(h[i][k - 1] % p, beta, p);
            if coeff == 0 {
                continue;
            }
            for (t, &a) in polys[i].iter().enumerate() {
                c[t] = (c[t] + p - mulmod(coeff, a, p)) % p;
            }
        }
        polys.push(c);
    }
    polys.pop().unwrap()
}

/// Largest `k` with `minpoly(lambda)^k` dividing `p` (exact divisions).
pub fn root_multiplicity(p: &IntPoly, lambda: &AlgebraicNumber) -> usize {
    assert!(!p.is_zero(), "root multiplicity of the zero polynomial");
    let m = lambda.minpoly();
    let mut k = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.div_exact(m) {
        k += 1;
        cur = q;
    }
    k
}

/// One irreducible factor of a characteristic polynomial together with its
/// multiplicity and its real roots (all of them, for totally real inputs).
#[derive(Debug, Clone)]
pub struct SpectrumFactor {
    pub minpoly: IntPoly,
    pub multiplicity: usize,
    pub roots: Vec<AlgebraicNumber>,
}

/// Factor a characteristic polynomial and isolate every eigenvalue.
pub fn spectrum_of_charpoly(p: &IntPoly) -> Result<Vec<SpectrumFactor>> {
    let cap = p.degree_or_zero().max(crate::factor::DEFAULT_FACTOR_CAP);
    let fac = factor_over_z_capped(p, cap)?;
    let mut out = Vec::new();
    for (m, mult) in fac.factors {
        let roots = AlgebraicNumber::roots_of_irreducible(&m);
        out.push(SpectrumFactor {
            minpoly: m,
            multiplicity: mult,
            roots,
        });
    }
    Ok(out)
}

/// All distinct eigenvalues of a graph, ascending.
pub fn eigenvalues(graph: &Graph) -> Result<Vec<AlgebraicNumber>> {
    let p = charpoly(graph)?;
    let mut out = Vec::new();
    for f in spectrum_of_charpoly(&p)? {
        out.extend(f.roots);
    }
    out.sort_by(|a, b| a.cmp_real(b));
    Ok(out)
}

/// One representative eigenvalue per irreducible factor of the
/// characteristic polynomial. Everything decided symbolically in
/// Q[z]/(minpoly) (multiplicities, supports, decompositions, cavity fields,
/// formula identities) is invariant across conjugate roots, so checking one
/// representative checks the whole conjugate class.
pub fn eigenvalue_classes(graph: &Graph) -> Result<Vec<AlgebraicNumber>> {
    let p = charpoly(graph)?;
    let mut out = Vec::new();
    for f in spectrum_of_charpoly(&p)? {
        if let Some(r) = f.roots.into_iter().next() {
            out.push(r);
        }
    }
    Ok(out)
}

/// Concurrent memo table for tree characteristic polynomials, keyed by
/// canonical code.
#[derive(Default)]
pub struct CharpolyCache {
    map: Mutex<HashMap<CanonicalTreeCode, IntPoly>>,
}

impl CharpolyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charpoly_tree(&self, tree: &Graph) -> Result<IntPoly> {
        let code = tree.canonical_code();
        if let Some(p) = self.map.lock().unwrap().get(&code) {
            return Ok(p.clone());
        }
        let p = charpoly_tree(tree)?;
        self.map.lock().unwrap().insert(code, p.clone());
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_free_trees;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(cs.iter().map(|&c| Int::from(c)).collect())
    }

    #[test]
    fn small_tree_charpolys() {
        assert_eq!(charpoly_tree(&Graph::path(2)).unwrap(), ip(&[-1, 0, 1]));
        assert_eq!(charpoly_tree(&Graph::path(3)).unwrap(), ip(&[0, -2, 0, 1]));
        assert_eq!(charpoly_tree(&Graph::star(3)).unwrap(), ip(&[0, 0, -3, 0, 1]));
        assert_eq!(charpoly_tree(&Graph::k1()).unwrap(), ip(&[0, 1]));
    }

    #[test]
    fn dense_matches_hand_determinants() {
        assert_eq!(charpoly_dense(&Graph::cycle(3)).unwrap(), ip(&[-2, -3, 0, 1]));
        assert_eq!(charpoly_dense(&Graph::k1()).unwrap(), ip(&[0, 1]));
    }

    #[test]
    fn dense_equals_tree_recursion_exhaustively() {
        for n in 1..=10 {
            for t in enumerate_free_trees(n).unwrap() {
                assert_eq!(charpoly_tree(&t).unwrap(), charpoly_dense(&t).unwrap());
            }
        }
    }

    #[test]
    fn forest_charpoly_multiplies_components() {
        let forest = Graph::from_edges(5, &[(0, 1), (2, 3), (2, 4)]).unwrap();
        let p = charpoly_forest(&forest).unwrap();
        let p2 = charpoly_tree(&Graph::path(2)).unwrap();
        let p3 = charpoly_tree(&Graph::path(3)).unwrap();
        assert_eq!(p, p2.mul(&p3));
    }

    #[test]
    fn rejects_non_trees() {
        assert!(charpoly_tree(&Graph::cycle(4)).is_err());
        assert!(charpoly_forest(&Graph::cycle(4)).is_err());
    }

    #[test]
    fn multiplicity_of_roots() {
        let star = charpoly_tree(&Graph::star(3)).unwrap(); // z^4 - 3z^2 = z^2(z^2-3)
        let zero = AlgebraicNumber::from_int(Int::zero());
        assert_eq!(root_multiplicity(&star, &zero), 2);
        let sqrt2 = AlgebraicNumber::roots_of_irreducible(&ip(&[-2, 0, 1]))
            .pop()
            .unwrap();
        assert_eq!(root_multiplicity(&ip(&[-1, 0, 1]), &sqrt2), 0);
        // (z^2-2)^3 (z-1)
        let p = ip(&[-2, 0, 1]);
        let q = p.mul(&p).mul(&p).mul(&ip(&[-1, 1]));
        assert_eq!(root_multiplicity(&q, &sqrt2), 3);
    }

    #[test]
    fn spectrum_listing() {
        let evs = eigenvalues(&Graph::path(3)).unwrap();
        assert_eq!(evs.len(), 3); // -sqrt2, 0, sqrt2
        assert!(evs[0].cmp_real(&evs[1]).is_lt());
        assert!(evs[1].is_zero());
    }

    #[test]
    fn charpoly_cache_hits() {
        let cache = CharpolyCache::new();
        let t = Graph::path(5);
        let a = cache.charpoly_tree(&t).unwrap();
        let b = cache.charpoly_tree(&t).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn u64_primality_matches_sieve() {
        let mut sieve = vec![true; 2000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..2000usize {
            if sieve[i] {
                for j in (i * i..2000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &is_p) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(i as u64), is_p, "primality of {i}");
        }
        // the dense charpoly prime scan starts above 2^62; it must find one
        let mut c: u64 = (1 << 62) + 1;
        while !is_prime_u64(c) {
            c += 2;
        }
        assert!(c - (1 << 62) < 2000);
    }
}
