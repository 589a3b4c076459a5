//! Factorization of integer polynomials into irreducibles.
//!
//! Pipeline: content/sign extraction, Yun squarefree decomposition over Z,
//! then for each squarefree part a big-prime Cantor-Zassenhaus factorization
//! modulo a prime exceeding twice the Landau-Mignotte factor bound, followed
//! by subset recombination with exact trial division. Every emitted factor is
//! verified by exact division, and the whole factorization is verified by
//! re-expansion, so an unlucky prime (or an improbable pseudoprime) can only
//! trigger a retry, never a wrong answer.

use crate::{Error, Int, IntPoly, Result};
use num_bigint::Sign;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_FACTOR_CAP: usize = 24;

/// `p = unit * prod factors[i].0 ^ factors[i].1` with primitive,
/// positive-leading, irreducible factors sorted deterministically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Int,
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Factor `p` over the integers with the default degree cap.
pub fn factor_over_z(p: &IntPoly) -> Result<Factorization> {
    factor_over_z_capped(p, DEFAULT_FACTOR_CAP)
}

/// Factor `p` over the integers; `cap` bounds the accepted degree.
pub fn factor_over_z_capped(p: &IntPoly, cap: usize) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::EmptyInput("cannot factor the zero polynomial".into()));
    }
    if p.degree_or_zero() > cap {
        return Err(Error::CapExceeded {
            what: "factorization degree",
            cap,
            got: p.degree_or_zero(),
        });
    }
    let mut unit = p.content();
    if p.leading().unwrap().is_negative() {
        unit = -unit;
    }
    let prim = p.primitive_part();
    if prim.degree_or_zero() == 0 {
        return Ok(Factorization {
            unit,
            factors: Vec::new(),
        });
    }
    let mut factors: Vec<(IntPoly, usize)> = Vec::new();
    for (part, mult) in yun_squarefree(&prim) {
        for f in factor_squarefree(&part)? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.degree_or_zero()
            .cmp(&b.0.degree_or_zero())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    let fac = Factorization { unit, factors };
    if fac.expand() != *p {
        return Err(Error::Internal(
            "factorization re-expansion mismatch".into(),
        ));
    }
    Ok(fac)
}

/// Yun's squarefree decomposition of a primitive positive-leading polynomial:
/// returns pairs `(squarefree part, multiplicity)` with parts of degree >= 1.
pub fn yun_squarefree(f: &IntPoly) -> Vec<(IntPoly, usize)> {
    debug_assert!(!f.is_zero() && f.leading().unwrap().is_positive());
    let mut out = Vec::new();
    if f.degree_or_zero() == 0 {
        return out;
    }
    let df = f.derivative();
    let g = f.gcd_int(&df);
    if g.degree_or_zero() == 0 {
        out.push((f.clone(), 1));
        return out;
    }
    let mut b = f.div_exact(&g).expect("gcd divides f").primitive_part();
    let mut d = df
        .div_exact(&g)
        .expect("gcd divides f'")
        .sub(&b.derivative());
    let mut i = 1usize;
    while b.degree_or_zero() > 0 {
        let a = b.gcd_int(&d);
        if a.degree_or_zero() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("a divides b").primitive_part();
        d = d.div_exact(&a).expect("a divides d").sub(&b.derivative());
        i += 1;
    }
    out
}

/// Factor a primitive squarefree polynomial of degree >= 1 into irreducibles.
fn factor_squarefree(f: &IntPoly) -> Result<Vec<IntPoly>> {
    if f.degree_or_zero() == 1 {
        return Ok(vec![f.clone()]);
    }
    let mut seed_rng = seeded_rng(f, 0);
    let bound = factor_coeff_bound(f);
    let two_bound: Int = &bound << 2;
    let mut p = next_probable_prime(&two_bound, &mut seed_rng);
    for attempt in 0..16 {
        match try_factor_mod_p(f, &p, attempt) {
            Some(fs) => return Ok(fs),
            None => {
                p = next_probable_prime(&(&p + 1), &mut seed_rng);
            }
        }
    }
    Err(Error::Internal(format!(
        "factorization did not stabilize for degree {}",
        f.degree_or_zero()
    )))
}

/// Landau-Mignotte style bound on factor coefficients: `2^n * |f|_2 * |lc|`.
fn factor_coeff_bound(f: &IntPoly) -> Int {
    let mut norm_sq = Int::zero();
    for c in f.coeffs() {
        norm_sq += c * c;
    }
    let norm = norm_sq.sqrt() + 1;
    (norm * f.leading().unwrap().abs()) << f.degree_or_zero()
}

fn seeded_rng(f: &IntPoly, attempt: u64) -> ChaCha8Rng {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15 ^ attempt.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    for c in f.coeffs() {
        for b in c.to_signed_bytes_le() {
            h = h.wrapping_mul(0x100000001b3).wrapping_add(b as u64);
        }
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn try_factor_mod_p(f: &IntPoly, p: &Int, attempt: usize) -> Option<Vec<IntPoly>> {
    let mut rng = seeded_rng(f, 1000 + attempt as u64);
    let fbar = reduce_mod(f, p);
    if fbar.len() != f.coeffs().len() {
        return None; // leading coefficient vanished
    }
    let monic = make_monic(&fbar, p)?;
    // stay squarefree mod p
    let der = deriv_mod(&monic, p);
    if poly_gcd_mod(&monic, &der, p).len() != 1 {
        return None;
    }
    let modular = cantor_zassenhaus(&monic, p, &mut rng);
    recombine(f, &modular, p)
}

// ---- arithmetic on dense coefficient vectors modulo a big prime ----
// Vectors are normalized: coefficients in [0, p), no trailing zeros.

type MP = Vec<Int>;

fn trim(mut v: MP) -> MP {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn reduce_mod(f: &IntPoly, p: &Int) -> MP {
    trim(f.coeffs().iter().map(|c| c.mod_floor(p)).collect())
}

fn mod_inv(a: &Int, p: &Int) -> Option<Int> {
    let g = a.extended_gcd(p);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(p))
}

fn make_monic(f: &MP, p: &Int) -> Option<MP> {
    let lead = f.last()?;
    let inv = mod_inv(lead, p)?;
    Some(trim(f.iter().map(|c| (c * &inv).mod_floor(p)).collect()))
}

fn poly_mul_mod(a: &MP, b: &MP, p: &Int) -> MP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out.into_iter().map(|c| c.mod_floor(p)).collect())
}

/// Remainder of `a` by monic-izable `b` (mod p).
fn poly_rem_mod(a: &MP, b: &MP, p: &Int) -> MP {
    let db = b.len() - 1;
    let inv = mod_inv(b.last().unwrap(), p).expect("divisor leading invertible");
    let mut r = a.clone();
    while r.len() > db {
        let q = (r.last().unwrap() * &inv).mod_floor(p);
        let shift = r.len() - 1 - db;
        if !q.is_zero() {
            for (j, c) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (&r[idx] - &q * c).mod_floor(p);
            }
        }
        r.pop();
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
    }
    r
}

fn poly_gcd_mod(a: &MP, b: &MP, p: &Int) -> MP {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = poly_rem_mod(&x, &y, p);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        make_monic(&x, p).unwrap()
    }
}

fn deriv_mod(f: &MP, p: &Int) -> MP {
    if f.len() <= 1 {
        return Vec::new();
    }
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (c * Int::from(i)).mod_floor(p))
            .collect(),
    )
}

/// `base^exp mod (f, p)` by square and multiply.
fn poly_powmod(base: &MP, exp: &Int, f: &MP, p: &Int) -> MP {
    let mut result: MP = vec![Int::one()];
    let mut b = poly_rem_mod(base, f, p);
    let (_, bytes) = exp.to_bytes_le();
    let bits = exp.bits();
    for i in 0..bits {
        let byte = bytes[(i / 8) as usize];
        if (byte >> (i % 8)) & 1 == 1 {
            result = poly_rem_mod(&poly_mul_mod(&result, &b, p), f, p);
        }
        if i + 1 < bits {
            b = poly_rem_mod(&poly_mul_mod(&b, &b, p), f, p);
        }
    }
    result
}

fn x_poly() -> MP {
    vec![Int::zero(), Int::one()]
}

/// Full factorization of a monic squarefree polynomial mod p into monic
/// irreducibles (unordered).
fn cantor_zassenhaus(f: &MP, p: &Int, rng: &mut ChaCha8Rng) -> Vec<MP> {
    let mut irreducibles = Vec::new();
    // distinct-degree phase
    let mut rest = f.clone();
    let mut h = x_poly(); // x^(p^d) mod f, iterated
    let mut d = 0usize;
    let mut stages: Vec<(MP, usize)> = Vec::new();
    while rest.len() > 1 {
        d += 1;
        if 2 * d >= rest.len() {
            // remainder is irreducible
            stages.push((rest.clone(), rest.len() - 1));
            break;
        }
        h = poly_powmod(&h, p, &rest, p);
        let mut h_minus_x = h.clone();
        while h_minus_x.len() < 2 {
            h_minus_x.push(Int::zero());
        }
        h_minus_x[1] = (&h_minus_x[1] - Int::one()).mod_floor(p);
        let h_minus_x = trim(h_minus_x);
        let g = poly_gcd_mod(&rest, &h_minus_x, p);
        if g.len() > 1 {
            stages.push((g.clone(), d));
            rest = poly_div_exact_mod(&rest, &g, p);
            h = poly_rem_mod(&h, &rest, p);
        }
    }
    // equal-degree phase
    for (prod, deg) in stages {
        split_equal_degree(&prod, deg, p, rng, &mut irreducibles);
    }
    irreducibles
}

fn poly_div_exact_mod(a: &MP, b: &MP, p: &Int) -> MP {
    // quotient of monic division; remainder is known to vanish
    let db = b.len() - 1;
    let mut r = a.clone();
    let mut q = vec![Int::zero(); a.len() - db];
    let inv = mod_inv(b.last().unwrap(), p).unwrap();
    for i in (db..a.len()).rev() {
        let c = if i < r.len() {
            r[i].clone()
        } else {
            Int::zero()
        };
        if c.is_zero() {
            continue;
        }
        let qi = (&c * &inv).mod_floor(p);
        q[i - db] = qi.clone();
        for (j, bc) in b.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = (&r[idx] - &qi * bc).mod_floor(p);
        }
    }
    trim(q)
}

fn split_equal_degree(g: &MP, deg: usize, p: &Int, rng: &mut ChaCha8Rng, out: &mut Vec<MP>) {
    if g.len() - 1 == deg {
        out.push(g.clone());
        return;
    }
    // exponent (p^deg - 1) / 2
    let exp = (p.pow(deg as u32) - 1) >> 1;
    loop {
        let r: MP = trim(
            (0..g.len() - 1)
                .map(|_| {
                    let mut bytes = vec![0u8; ((p.bits() as usize) + 7) / 8];
                    rng.fill(&mut bytes[..]);
                    Int::from_bytes_le(Sign::Plus, &bytes).mod_floor(p)
                })
                .collect(),
        );
        if r.len() <= 1 {
            continue;
        }
        let mut pw = poly_powmod(&r, &exp, g, p);
        if pw.is_empty() {
            continue;
        }
        pw[0] = (&pw[0] - Int::one()).mod_floor(p);
        let pw = trim(pw);
        if pw.is_empty() {
            continue;
        }
        let h = poly_gcd_mod(g, &pw, p);
        if h.len() > 1 && h.len() < g.len() {
            let rest = poly_div_exact_mod(g, &h, p);
            split_equal_degree(&h, deg, p, rng, out);
            split_equal_degree(&rest, deg, p, rng, out);
            return;
        }
    }
}

/// Map residue in [0, p) to the symmetric representative in (-p/2, p/2].
fn symmetric(c: &Int, p: &Int) -> Int {
    if c * 2 > *p {
        c - p
    } else {
        c.clone()
    }
}

fn subset_product_candidate(lc: &Int, subset: &[usize], modular: &[MP], p: &Int) -> IntPoly {
    let mut prod: MP = vec![lc.mod_floor(p)];
    for &i in subset {
        prod = poly_mul_mod(&prod, &modular[i], p);
    }
    IntPoly::from_coeffs(prod.iter().map(|c| symmetric(c, p)).collect()).primitive_part()
}

/// Try all subset recombinations of modular factors into true integer factors.
/// Returns `None` when the recombination cannot reconstruct `f` (bad prime).
fn recombine(f: &IntPoly, modular: &[MP], p: &Int) -> Option<Vec<IntPoly>> {
    let mut remaining: Vec<MP> = modular.to_vec();
    let mut f_rem = f.primitive_part();
    let mut out = Vec::new();
    let mut size = 1usize;
    while 2 * size <= remaining.len() {
        let mut found = false;
        let mut subset_iter = Combinations::new(remaining.len(), size);
        while let Some(subset) = subset_iter.next() {
            let cand = subset_product_candidate(f_rem.leading().unwrap(), subset, &remaining, p);
            if cand.degree_or_zero() == 0 {
                continue;
            }
            if let Some(q) = f_rem.div_exact(&cand) {
                out.push(cand);
                f_rem = q.primitive_part();
                let mut keep = Vec::new();
                for (i, m) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(m);
                    }
                }
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f_rem.degree_or_zero() > 0 {
        out.push(f_rem.clone());
    }
    // completeness: the product of found factors must reproduce f up to unit
    let mut prod = IntPoly::one();
    for g in &out {
        prod = prod.mul(g);
    }
    let prim = f.primitive_part();
    if prod == prim {
        Some(out)
    } else {
        None
    }
}

struct Combinations {
    n: usize,
    idx: Vec<usize>,
    first: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            first: true,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(&self.idx);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.idx[i] != i + self.n - k {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(&self.idx)
    }
}

// ---- probable primes ----

pub fn is_probable_prime(n: &Int, rng: &mut ChaCha8Rng) -> bool {
    if *n < Int::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = Int::from(small);
        if *n == s {
            return true;
        }
        if (n % s).is_zero() {
            return false;
        }
    }
    let n_minus_1: Int = n - Int::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..40 {
        let mut bytes = vec![0u8; ((n.bits() as usize) + 7) / 8];
        rng.fill(&mut bytes[..]);
        let a: Int = Int::from_bytes_le(Sign::Plus, &bytes).mod_floor(&(n - Int::from(3))) + Int::from(2);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&Int::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest probable prime `>= max(from, 3)`, forced odd.
pub fn next_probable_prime(from: &Int, rng: &mut ChaCha8Rng) -> Int {
    let mut n = if *from < Int::from(3) {
        Int::from(3)
    } else {
        from.clone()
    };
    if (&n % Int::from(2)).is_zero() {
        n += 1;
    }
    while !is_probable_prime(&n, rng) {
        n += 2;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn ip(cs: &[i64]) -> IntPoly {
        Polynomial::from_coeffs(cs.iter().map(|&c| Int::from(c)).collect())
    }

    fn factors_of(cs: &[i64]) -> Vec<(IntPoly, usize)> {
        factor_over_z_capped(&ip(cs), 64).unwrap().factors
    }

    #[test]
    fn factors_z2_minus_1() {
        let fs = factors_of(&[-1, 0, 1]);
        assert_eq!(fs, vec![(ip(&[-1, 1]), 1), (ip(&[1, 1]), 1)]);
    }

    #[test]
    fn factors_star_charpoly() {
        // z^4 - 3 z^2 = z^2 (z^2 - 3)
        let fs = factors_of(&[0, 0, -3, 0, 1]);
        assert_eq!(fs, vec![(ip(&[0, 1]), 2), (ip(&[-3, 0, 1]), 1)]);
    }

    #[test]
    fn p4_charpoly_splits_into_golden_quadratics() {
        // z^4 - 3z^2 + 1 = (z^2 - z - 1)(z^2 + z - 1); roots are the four
        // numbers (+-1 +- sqrt5)/2
        let fs = factors_of(&[1, 0, -3, 0, 1]);
        assert_eq!(fs, vec![(ip(&[-1, -1, 1]), 1), (ip(&[-1, 1, 1]), 1)]);
    }

    #[test]
    fn respects_content_and_sign() {
        let p = ip(&[-6, 0, 6]); // -6 (1 - z^2) = 6(z-1)(z+1)
        let fac = factor_over_z_capped(&p, 8).unwrap();
        assert_eq!(fac.unit, Int::from(6));
        assert_eq!(fac.expand(), p);
    }

    #[test]
    fn multiplicities_recovered() {
        // (z-1)^3 (z^2-2)^2
        let f = ip(&[-1, 1]);
        let g = ip(&[-2, 0, 1]);
        let p = f.mul(&f).mul(&f).mul(&g).mul(&g);
        let fac = factor_over_z_capped(&p, 16).unwrap();
        assert_eq!(
            fac.factors,
            vec![(ip(&[-1, 1]), 3), (ip(&[-2, 0, 1]), 2)]
        );
    }

    #[test]
    fn cyclotomic_product_splits() {
        // (z^2+z+1)(z^2-z+1) = z^4 + z^2 + 1, not totally real but fine to factor
        let fs = factors_of(&[1, 0, 1, 0, 1]);
        assert_eq!(fs, vec![(ip(&[1, -1, 1]), 1), (ip(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn degree_cap_enforced() {
        let mut cs = vec![0i64; 26];
        cs[25] = 1;
        cs[0] = -1;
        assert!(matches!(
            factor_over_z(&ip(&cs)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn yun_on_powers() {
        let parts = yun_squarefree(&ip(&[0, 0, -3, 0, 1]));
        assert_eq!(parts, vec![(ip(&[-3, 0, 1]), 1), (ip(&[0, 1]), 2)]);
    }

    #[test]
    fn probable_primes_are_odd_and_big_enough() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = next_probable_prime(&Int::from(1_000_000), &mut rng);
        assert!(p >= Int::from(1_000_003));
        assert!(is_probable_prime(&p, &mut rng));
        assert!(!is_probable_prime(&Int::from(1_000_001), &mut rng)); // 101 * 9901
    }
}
