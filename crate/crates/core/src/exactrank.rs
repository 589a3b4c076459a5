//! Certified exact eigenvalue multiplicities of integer matrices at rational
//! locations, at scales where a dense exact characteristic polynomial would
//! be wasteful.
//!
//! The multiplicity of a rational eigenvalue `num/den` in a graph's adjacency
//! spectrum is the nullity over Q of `M = den*A - num*I`. The certificate is
//! two-sided: a reduction of `M` modulo a prime gives `nullity_Q <= nullity_p`
//! (a nonvanishing minor mod p is nonvanishing over Z), and explicit rational
//! kernel vectors, recovered by Dixon p-adic lifting and verified by exact
//! integer multiplication, give `nullity_Q >= nullity_p`. An unlucky prime
//! can only make verification fail, which triggers a retry with a new prime,
//! never a wrong answer.

use crate::charpoly::{is_prime_u64, root_multiplicity};
use crate::field::AlgebraicNumber;
use crate::graph::Graph;
use crate::{Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse symmetric integer matrix rows.
struct SparseInt {
    n: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseInt {
    /// `den * A - num * I` for a graph.
    fn shifted_adjacency(graph: &Graph, num: i64, den: i64) -> Self {
        let n = graph.vertex_count();
        let mut rows = Vec::with_capacity(n);
        for u in 0..n {
            let mut row: Vec<(usize, i64)> = Vec::with_capacity(graph.degree(u) + 1);
            let mut diag_done = false;
            for v in graph.neighbors(u) {
                if !diag_done && v > u {
                    if num != 0 {
                        row.push((u, -num));
                    }
                    diag_done = true;
                }
                row.push((v, den));
            }
            if !diag_done && num != 0 {
                row.push((u, -num));
            }
            row.sort_unstable_by_key(|&(c, _)| c);
            rows.push(row);
        }
        SparseInt { n, rows }
    }

    fn mul_bigint(&self, x: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.n];
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Int::zero();
            for &(j, v) in row {
                acc += Int::from(v) * &x[j];
            }
            out[i] = acc;
        }
        out
    }
}

/// Dense GF(p) elimination: returns (rank, pivot rows, pivot cols) of the
/// reduction mod p. `p` must be below 2^31 so products fit in u64.
fn rank_mod_p(m: &SparseInt, p: u64) -> (usize, Vec<usize>, Vec<usize>) {
    let n = m.n;
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in m.rows.iter().enumerate() {
        for &(j, v) in row {
            a[i][j] = v.rem_euclid(p as i64) as u64;
        }
    }
    let mut row_of = (0..n).collect::<Vec<_>>(); // original index per current row
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        row_of.swap(r, pr);
        let inv = modinv31(a[r][c], p);
        for i in r + 1..n {
            if a[i][c] == 0 {
                continue;
            }
            let f = a[i][c] * inv % p;
            for k in c..n {
                let sub = f * a[r][k] % p;
                a[i][k] = (a[i][k] + p - sub) % p;
            }
        }
        pivot_rows.push(row_of[r]);
        pivot_cols.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    (r, pivot_rows, pivot_cols)
}

fn modinv31(a: u64, p: u64) -> u64 {
    // p prime, p < 2^31
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dense LU mod p with partial pivoting for repeated solves.
struct LuModP {
    n: usize,
    lu: Vec<Vec<u64>>,
    perm: Vec<usize>,
    p: u64,
}

impl LuModP {
    fn new(mut a: Vec<Vec<u64>>, p: u64) -> Option<Self> {
        let n = a.len();
        let mut perm = (0..n).collect::<Vec<_>>();
        for c in 0..n {
            let pr = (c..n).find(|&i| a[i][c] != 0)?;
            a.swap(c, pr);
            perm.swap(c, pr);
            let inv = modinv31(a[c][c], p);
            for i in c + 1..n {
                if a[i][c] == 0 {
                    continue;
                }
                let f = a[i][c] * inv % p;
                a[i][c] = f; // store multiplier
                for k in c + 1..n {
                    let sub = f * a[c][k] % p;
                    a[i][k] = (a[i][k] + p - sub) % p;
                }
            }
        }
        Some(LuModP { n, lu: a, perm, p })
    }

    fn solve(&self, b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let n = self.n;
        let mut y = vec![0u64; n];
        for i in 0..n {
            let mut acc = b[self.perm[i]] % p;
            for k in 0..i {
                let sub = self.lu[i][k] * y[k] % p;
                acc = (acc + p - sub) % p;
            }
            y[i] = acc;
        }
        let mut x = vec![0u64; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in i + 1..n {
                let sub = self.lu[i][k] * x[k] % p;
                acc = (acc + p - sub) % p;
            }
            x[i] = acc * modinv31(self.lu[i][i], p) % p;
        }
        x
    }
}

/// Rational reconstruction of `x mod m`: the unique `a/b` with
/// `|a|, b <= bound`, if it exists.
fn rational_reconstruct(x: &Int, m: &Int, bound: &Int) -> Option<Rat> {
    let mut r0 = m.clone();
    let mut r1 = x.mod_floor(m);
    let mut t0 = Int::zero();
    let mut t1 = Int::one();
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    if t1.is_negative() {
        Some(Rat::new(-r1, -t1))
    } else {
        Some(Rat::new(r1, t1))
    }
}

/// Certified nullity over Q of `den*A - num*I`.
pub fn rational_shift_nullity(graph: &Graph, num: i64, den: i64) -> Result<usize> {
    assert!(den > 0);
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(0);
    }
    let m = SparseInt::shifted_adjacency(graph, num, den);
    let mut prime: u64 = 2_147_483_647; // 2^31 - 1
    'prime_loop: for _attempt in 0..8 {
        while !is_prime_u64(prime) {
            prime -= 2;
        }
        let p = prime;
        prime -= 2;

        let (rank, pivot_rows, pivot_cols) = rank_mod_p(&m, p);
        let k = n - rank;
        if k == 0 {
            return Ok(0); // nullity_Q <= nullity_p = 0
        }
        // Hadamard bound on r x r minors of the pivot submatrix
        let max_entry = den.abs().max(num.abs()).max(1);
        let row_norm_sq =
            Int::from((graph.max_degree() as i64 + 1) * max_entry * max_entry);
        let mut had_sq = Int::one();
        for _ in 0..rank {
            had_sq *= &row_norm_sq;
        }
        let bound = had_sq.sqrt() + 1;
        let target: Int = (&bound * &bound) << 1;
        let mut lift_steps = 1usize;
        let mut modulus = Int::from(p);
        while modulus < target {
            modulus *= Int::from(p);
            lift_steps += 1;
        }

        // pivot submatrix, dense for LU, sparse for residual updates
        let is_pivot_col: Vec<bool> = {
            let mut v = vec![false; n];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let col_pos: Vec<usize> = {
            let mut v = vec![usize::MAX; n];
            for (i, &c) in pivot_cols.iter().enumerate() {
                v[c] = i;
            }
            v
        };
        let mut dense = vec![vec![0u64; rank]; rank];
        let mut sparse_sub: Vec<Vec<(usize, i64)>> = Vec::with_capacity(rank);
        for (ri, &orig_row) in pivot_rows.iter().enumerate() {
            let mut srow = Vec::new();
            for &(c, v) in &m.rows[orig_row] {
                if is_pivot_col[c] {
                    dense[ri][col_pos[c]] = v.rem_euclid(p as i64) as u64;
                    srow.push((col_pos[c], v));
                }
            }
            sparse_sub.push(srow);
        }
        let Some(lu) = LuModP::new(dense, p) else {
            continue 'prime_loop; // pivot submatrix singular mod p: bookkeeping says retry
        };

        let free_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot_col[c]).collect();
        debug_assert_eq!(free_cols.len(), k);
        let mut kernel: Vec<Vec<Rat>> = Vec::with_capacity(k);
        for &fc in &free_cols {
            // b = -M[pivot_rows, fc]
            let mut b: Vec<i64> = vec![0; rank];
            for (ri, &orig_row) in pivot_rows.iter().enumerate() {
                for &(c, v) in &m.rows[orig_row] {
                    if c == fc {
                        b[ri] = -v;
                    }
                }
            }
            // Dixon lifting: x = sum x_i p^i with residual r -> (r - B x_i)/p
            let mut residual: Vec<i128> = b.iter().map(|&v| v as i128).collect();
            let mut x_acc: Vec<Int> = vec![Int::zero(); rank];
            let mut p_pow = Int::one();
            for _ in 0..lift_steps {
                let rhs: Vec<u64> = residual
                    .iter()
                    .map(|&v| (v.rem_euclid(p as i128)) as u64)
                    .collect();
                let xi = lu.solve(&rhs);
                for i in 0..rank {
                    x_acc[i] += &p_pow * Int::from(xi[i]);
                }
                // residual = (residual - B xi) / p
                let mut next = vec![0i128; rank];
                for i in 0..rank {
                    let mut acc = residual[i];
                    for &(j, v) in &sparse_sub[i] {
                        acc -= v as i128 * xi[j] as i128;
                    }
                    debug_assert_eq!(acc % p as i128, 0);
                    next[i] = acc / p as i128;
                }
                residual = next;
                p_pow *= Int::from(p);
            }
            // rational reconstruction per coordinate
            let mut xq: Vec<Rat> = Vec::with_capacity(rank);
            let mut ok = true;
            for v in &x_acc {
                match rational_reconstruct(v, &p_pow, &bound) {
                    Some(r) => xq.push(r),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue 'prime_loop;
            }
            // assemble the full kernel vector and verify exactly
            let mut full = vec![Rat::zero(); n];
            for (i, &c) in pivot_cols.iter().enumerate() {
                full[c] = xq[i].clone();
            }
            full[fc] = Rat::one();
            // clear denominators
            let mut lcm = Int::one();
            for r in &full {
                lcm = lcm.lcm(r.denom());
            }
            let ints: Vec<Int> = full
                .iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect();
            let image = m.mul_bigint(&ints);
            if image.iter().any(|v| !v.is_zero()) {
                continue 'prime_loop; // unlucky prime inflated the nullity
            }
            kernel.push(full);
        }
        // k exact independent kernel vectors verified: nullity is exactly k
        debug_assert_eq!(kernel.len(), k);
        return Ok(k);
    }
    Err(Error::Internal(
        "exact nullity did not certify within the prime budget".into(),
    ))
}

pub const EXACT_MULT_CAP: usize = 4000;

/// Exact multiplicity of an algebraic eigenvalue in a graph's adjacency
/// spectrum. Rational locations go through the certified modular route;
/// higher-degree algebraic numbers fall back to the exact dense
/// characteristic polynomial (capped).
pub fn exact_multiplicity(
    graph: &Graph,
    lambda: &AlgebraicNumber,
    dense_cap: usize,
) -> Result<usize> {
    if let Some(r) = lambda.as_rat() {
        if graph.vertex_count() > EXACT_MULT_CAP {
            return Err(Error::CapExceeded {
                what: "certified modular nullity order",
                cap: EXACT_MULT_CAP,
                got: graph.vertex_count(),
            });
        }
        let num: i64 = r
            .numer()
            .try_into()
            .map_err(|_| Error::OutOfRange("eigenvalue numerator too large".into()))?;
        let den: i64 = r
            .denom()
            .try_into()
            .map_err(|_| Error::OutOfRange("eigenvalue denominator too large".into()))?;
        rational_shift_nullity(graph, num, den)
    } else {
        let chi = crate::charpoly::charpoly_dense_capped(graph, dense_cap)?;
        Ok(root_multiplicity(&chi, lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{charpoly, root_multiplicity};
    use crate::graph::enumerate_free_trees;
    use crate::Int;

    fn alg_int(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_int(Int::from(n))
    }

    #[test]
    fn matches_charpoly_on_small_trees() {
        for n in 1..=8 {
            for t in enumerate_free_trees(n).unwrap() {
                let chi = charpoly(&t).unwrap();
                for lam in [-2i64, -1, 0, 1, 2] {
                    let want = root_multiplicity(&chi, &alg_int(lam));
                    let got = rational_shift_nullity(&t, lam, 1).unwrap();
                    assert_eq!(got, want, "tree {t:?} lambda {lam}");
                }
            }
        }
    }

    #[test]
    fn matches_charpoly_on_cycles() {
        for n in 3..=10 {
            let c = Graph::cycle(n);
            let chi = charpoly(&c).unwrap();
            for lam in [-2i64, -1, 0, 1, 2] {
                let want = root_multiplicity(&chi, &alg_int(lam));
                let got = rational_shift_nullity(&c, lam, 1).unwrap();
                assert_eq!(got, want, "cycle {n} lambda {lam}");
            }
        }
    }

    #[test]
    fn non_integer_rational_location() {
        // no tree has eigenvalue 1/2 (algebraic integers only)
        let t = Graph::path(6);
        assert_eq!(rational_shift_nullity(&t, 1, 2).unwrap(), 0);
    }

    #[test]
    fn dispatches_algebraic_locations_through_charpoly() {
        let sqrt2 = AlgebraicNumber::roots_of_irreducible(&crate::IntPoly::from_coeffs(vec![
            Int::from(-2),
            Int::from(0),
            Int::from(1),
        ]))
        .pop()
        .unwrap();
        assert_eq!(exact_multiplicity(&Graph::path(3), &sqrt2, 100).unwrap(), 1);
        assert_eq!(exact_multiplicity(&Graph::path(3), &alg_int(0), 100).unwrap(), 1);
    }

    #[test]
    fn rational_reconstruction_roundtrip() {
        let m = Int::from(1_000_003i64) * Int::from(1_000_033i64);
        let val = Rat::new(Int::from(-355), Int::from(113));
        // x = val mod m
        let inv_den = {
            let g = Int::from(113).extended_gcd(&m);
            g.x.mod_floor(&m)
        };
        let x = (Int::from(-355) * inv_den).mod_floor(&m);
        let bound = Int::from(100_000);
        assert_eq!(rational_reconstruct(&x, &m, &bound), Some(val));
    }
}
