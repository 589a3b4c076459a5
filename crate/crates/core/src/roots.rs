//! Sturm sequences, real-root counting and isolation with exact rational
//! endpoints, and rational interval arithmetic.
//!
//! Chains are kept as primitive integer polynomials and all sign evaluations
//! at rational points run in integer arithmetic (clearing the denominator
//! through Horner), which is what keeps isolation fast at degree 30+.

use crate::{Int, IntPoly, Rat, RatPoly};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Scale to a primitive integer polynomial by a positive rational; the sign
/// pattern is unchanged.
fn positive_primitive(p: &RatPoly) -> IntPoly {
    if p.is_zero() {
        return IntPoly::zero();
    }
    let mut den = Int::one();
    for c in p.coeffs() {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let ints: Vec<Int> = p
        .coeffs()
        .iter()
        .map(|c| (c.numer() * &den) / c.denom())
        .collect();
    let q = IntPoly::from_coeffs(ints);
    let mut content = Int::zero();
    for c in q.coeffs() {
        content = num_integer::Integer::gcd(&content, c);
        if content.is_one() {
            return q;
        }
    }
    IntPoly::from_coeffs(q.coeffs().iter().map(|c| c / &content).collect())
}

/// Sign of `p(a/b)` via integer Horner with the denominator cleared.
pub fn sign_at_rational(p: &IntPoly, x: &Rat) -> i32 {
    if p.is_zero() {
        return 0;
    }
    let a = x.numer();
    let b = x.denom();
    let coeffs = p.coeffs();
    let d = coeffs.len() - 1;
    let mut acc = coeffs[d].clone();
    let mut bpow = Int::one();
    for i in (0..d).rev() {
        bpow *= b;
        acc = acc * a + &coeffs[i] * &bpow;
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Minus => -1,
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// A Sturm chain with primitive integer elements.
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    pub fn of_int(p: &IntPoly) -> Self {
        SturmChain::new(&p.to_rat())
    }

    pub fn new(p: &RatPoly) -> Self {
        let mut polys = Vec::new();
        if p.is_zero() {
            return SturmChain { polys };
        }
        polys.push(positive_primitive(p));
        let d = p.derivative();
        if d.is_zero() {
            return SturmChain { polys };
        }
        polys.push(positive_primitive(&d));
        loop {
            let n = polys.len();
            let (_, r) = polys[n - 2].to_rat().divmod(&polys[n - 1].to_rat());
            if r.is_zero() {
                break;
            }
            polys.push(positive_primitive(&r.neg()));
        }
        SturmChain { polys }
    }

    pub fn head(&self) -> &IntPoly {
        &self.polys[0]
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        variations(self.polys.iter().map(|p| sign_at_rational(p, x)))
    }

    fn sign_at_pos_inf(p: &IntPoly) -> i32 {
        match p.leading() {
            None => 0,
            Some(l) => {
                if l.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn sign_at_neg_inf(p: &IntPoly) -> i32 {
        match p.degree() {
            None => 0,
            Some(d) => {
                let s = Self::sign_at_pos_inf(p);
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Distinct real roots in `(lo, hi)`; endpoints must not be roots.
    pub fn count_between(&self, lo: &Rat, hi: &Rat) -> usize {
        debug_assert!(!self.polys.is_empty());
        debug_assert!(
            sign_at_rational(&self.polys[0], lo) != 0
                && sign_at_rational(&self.polys[0], hi) != 0
        );
        self.variations_at(lo) - self.variations_at(hi)
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        let neg = variations(self.polys.iter().map(Self::sign_at_neg_inf));
        let pos = variations(self.polys.iter().map(Self::sign_at_pos_inf));
        neg - pos
    }
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &RatPoly) -> usize {
    if p.degree_or_zero() == 0 {
        return 0;
    }
    SturmChain::new(p).count_all()
}

/// All complex roots real? Decided by a Sturm count on the squarefree part.
pub fn is_totally_real(p: &IntPoly) -> bool {
    let sf = p.squarefree_part();
    match sf.degree() {
        None | Some(0) => true,
        Some(d) => count_real_roots(&sf.to_rat()) == d,
    }
}

/// `1 + max |a_i| / |a_n|`, a bound on the absolute value of all roots.
pub fn cauchy_root_bound(p: &IntPoly) -> Rat {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let mut m = Int::zero();
    for c in p.coeffs() {
        let a = c.abs();
        if a > m {
            m = a;
        }
    }
    Rat::one() + Rat::new(m, lead)
}

/// A split point of `(lo, hi)` that is not a root of `p`.
fn non_root_split(p: &IntPoly, lo: &Rat, hi: &Rat) -> Rat {
    let width = hi - lo;
    for k in 2..64u64 {
        let mid = lo + &width / Rat::from_integer(Int::from(k));
        if sign_at_rational(p, &mid) != 0 {
            return mid;
        }
    }
    unreachable!("polynomial cannot vanish at 62 distinct points of a small interval");
}

/// Isolating intervals `(lo, hi)` for every distinct real root of `p`,
/// in increasing order. Endpoints are never roots.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<(Rat, Rat)> {
    let sf = p.squarefree_part();
    if sf.degree_or_zero() == 0 {
        return Vec::new();
    }
    let chain = SturmChain::of_int(&sf);
    let q = chain.head().clone();
    let bound = cauchy_root_bound(&sf);
    let mut lo = -bound.clone();
    let mut hi = bound;
    // The Cauchy bound is strict, but nudge anyway so endpoints are non-roots.
    while sign_at_rational(&q, &lo) == 0 {
        lo -= Rat::one();
    }
    while sign_at_rational(&q, &hi) == 0 {
        hi += Rat::one();
    }
    let mut intervals = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let n = chain.count_between(&a, &b);
        match n {
            0 => {}
            1 => intervals.push((a, b)),
            _ => {
                let mid = non_root_split(&q, &a, &b);
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    intervals.sort_by(|x, y| x.0.cmp(&y.0));
    intervals
}

/// Halve an interval known to isolate one simple root of squarefree `p`.
pub fn refine_step(p: &IntPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mid = non_root_split(p, lo, hi);
    let s_lo = sign_at_rational(p, lo);
    let s_mid = sign_at_rational(p, &mid);
    debug_assert!(s_lo != 0 && s_mid != 0);
    if s_lo != s_mid {
        (lo.clone(), mid)
    } else {
        (mid, hi.clone())
    }
}

/// Closed rational interval, used for certified sign evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn point(r: Rat) -> Self {
        RatInterval {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RatInterval { lo, hi }
    }

    /// Certified sign if the interval excludes zero.
    pub fn definite_sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

/// Interval extension of a rational polynomial via Horner.
pub fn eval_interval(p: &RatPoly, x: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(Rat::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RatInterval::point(c.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::rat_int;

    fn ip(cs: &[i64]) -> IntPoly {
        Polynomial::from_coeffs(cs.iter().map(|&c| Int::from(c)).collect())
    }

    #[test]
    fn counts_roots_of_quadratics() {
        assert_eq!(count_real_roots(&ip(&[-2, 0, 1]).to_rat()), 2);
        assert_eq!(count_real_roots(&ip(&[1, 0, 1]).to_rat()), 0);
        assert_eq!(count_real_roots(&ip(&[0, 1]).to_rat()), 1);
    }

    #[test]
    fn totally_real() {
        assert!(is_totally_real(&ip(&[-2, 0, 1])));
        assert!(!is_totally_real(&ip(&[1, 0, 1])));
        // z^4 - 3z^2 + 1, the 4-path characteristic polynomial
        assert!(is_totally_real(&ip(&[1, 0, -3, 0, 1])));
        // multiplicities do not confuse the count
        assert!(is_totally_real(&ip(&[0, 0, -3, 0, 1])));
    }

    #[test]
    fn sign_eval_matches_rational_eval() {
        let p = ip(&[-7, 3, 0, 2]);
        let pts = [rat_int(0), rat_int(1), rat_int(-3) / rat_int(2), rat_int(5) / rat_int(3)];
        for x in &pts {
            let v = p.to_rat().eval(x);
            let want = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            assert_eq!(sign_at_rational(&p, x), want);
        }
        assert_eq!(sign_at_rational(&ip(&[-2, 0, 1]), &rat_int(1)), -1);
    }

    #[test]
    fn isolates_sqrt2() {
        let ivs = isolate_real_roots(&ip(&[-2, 0, 1]));
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].0 < ivs[0].1 && ivs[0].1 <= ivs[1].0);
        // the positive root lies in the second interval
        assert!(ivs[1].0 < rat_int(15) / rat_int(10));
        assert!(ivs[1].1 > rat_int(14) / rat_int(10));
    }

    #[test]
    fn isolates_with_rational_roots_at_midpoints() {
        // roots 0, 1, -1, 2, -2: bisection midpoints hit roots repeatedly
        let p = ip(&[0, 4, 0, -5, 0, 1]);
        let ivs = isolate_real_roots(&p);
        assert_eq!(ivs.len(), 5);
    }

    #[test]
    fn refine_halves() {
        let p = ip(&[-2, 0, 1]);
        let (mut lo, mut hi) = (rat_int(0), rat_int(2));
        for _ in 0..20 {
            let (a, b) = refine_step(&p, &lo, &hi);
            lo = a;
            hi = b;
        }
        let w = &hi - &lo;
        assert!(w < Rat::new(Int::from(1), Int::from(100_000)));
        assert!(rat_to_f64(&lo) < 1.4142136 && rat_to_f64(&hi) > 1.4142135);
    }

    #[test]
    fn interval_sign() {
        let p = ip(&[-2, 0, 1]).to_rat(); // z^2-2 on [1.4, 1.5]
        let x = RatInterval::new(rat_int(14) / rat_int(10), rat_int(15) / rat_int(10));
        let v = eval_interval(&p, &x);
        assert!(v.lo <= Rat::zero() && v.hi >= Rat::zero());
        let y = RatInterval::new(rat_int(2), rat_int(3));
        assert_eq!(eval_interval(&p, &y).definite_sign(), Some(1));
    }
}
