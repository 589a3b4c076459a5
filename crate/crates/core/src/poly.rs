//! Dense univariate polynomials, generic over the coefficient scalar.
//!
//! Coefficients are stored in ascending degree with trailing zeros trimmed;
//! the zero polynomial is the empty vector. The concrete instantiations used
//! throughout the crate are [`crate::IntPoly`] and [`crate::RatPoly`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Coefficient scalar: a commutative ring with exact equality.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Build the ring element `n * 1` by binary doubling.
pub fn scalar_from_usize<C: Scalar>(n: usize) -> C {
    let mut acc = C::zero();
    let mut bit = C::one();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + bit.clone();
        }
        n >>= 1;
        if n > 0 {
            bit = bit.clone() + bit;
        }
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C: Scalar> {
    coeffs: Vec<C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.push(c);
        Polynomial::from_coeffs(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn var() -> Self {
        Polynomial::monomial(C::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Polynomial::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Polynomial::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.clone() * scalar_from_usize::<C>(i));
        }
        Polynomial::from_coeffs(out)
    }

    /// Quotient and remainder by a *monic* divisor, over any ring.
    ///
    /// Panics if `d` is not monic.
    pub fn divmod_monic(&self, d: &Self) -> (Self, Self) {
        assert!(
            d.leading().map(|c| c.is_one()).unwrap_or(false),
            "divisor must be monic"
        );
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone();
            if q.is_zero() {
                continue;
            }
            quot[i - dd] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = rem[i - dd + j].clone() - q.clone() * dc.clone();
            }
        }
        (
            Polynomial::from_coeffs(quot),
            Polynomial::from_coeffs(rem),
        )
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    /// `self(-z)`.
    pub fn reflect(&self) -> Self {
        Polynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }
}

impl<C: Scalar + Div<Output = C>> Polynomial<C> {
    /// Quotient and remainder over a field.
    pub fn divmod(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].clone() / lead.clone();
            quot[i - dd] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = rem[i - dd + j].clone() - q.clone() * dc.clone();
            }
        }
        (
            Polynomial::from_coeffs(quot),
            Polynomial::from_coeffs(rem),
        )
    }

    /// Monic associate (field coefficients).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some(l) => {
                let inv = C::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean gcd over a field, returned monic.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd over a field: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Polynomial::one();
        let mut s1 = Polynomial::zero();
        let mut t0 = Polynomial::zero();
        let mut t1 = Polynomial::one();
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead = r0.leading().unwrap().clone();
        let inv = C::one() / lead;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }
}

impl<C: Scalar> fmt::Debug for Polynomial<C>
where
    C: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<C: Scalar> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        Polynomial::add(self, rhs)
    }
}

impl<C: Scalar> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        Polynomial::sub(self, rhs)
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        Polynomial::mul(self, rhs)
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::neg(self)
    }
}

// ---- integer-coefficient specifics ----

impl Polynomial<BigInt> {
    /// Gcd of all coefficients (non-negative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient; zero stays zero.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Exact division: `Some(q)` iff `self = q * d` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() - 1 < dd {
            return None;
        }
        let lead = d.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (q, r) = rem[i].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            quot[i - dd] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = &rem[i - dd + j] - &q * dc;
            }
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Polynomial::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Gcd over Z of the primitive parts (primitive PRS), returned primitive
    /// with positive leading coefficient.
    pub fn gcd_int(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree_or_zero() < b.degree_or_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Pseudo-remainder of `self` by `d`: remainder of `lc(d)^k * self`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd || rem.is_zero() {
                break;
            }
            let q = rem.leading().unwrap().clone();
            rem = rem.scale(&lead).sub(&d.scale(&q).shift_up(rd - dd));
            debug_assert!(rem.degree().map(|x| x < rd).unwrap_or(true));
        }
        rem
    }

    /// Squarefree part `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let p = self.primitive_part();
        let g = p.gcd_int(&p.derivative());
        if g.degree_or_zero() == 0 {
            return p;
        }
        p.div_exact(&g)
            .expect("gcd divides")
            .primitive_part()
    }

    pub fn to_rat(&self) -> Polynomial<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Parse the text format: ascending coefficients, whitespace-separated integers.
    pub fn parse_text(text: &str) -> crate::Result<Self> {
        let mut coeffs = Vec::new();
        for tok in text.split_whitespace() {
            // tolerate unicode minus from copied tables
            let tok = tok.replace('\u{2212}', "-");
            let c: BigInt = tok
                .parse()
                .map_err(|_| crate::Error::ParsePoly(format!("bad coefficient {tok:?}")))?;
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(crate::Error::ParsePoly("no coefficients".into()));
        }
        Ok(Polynomial::from_coeffs(coeffs))
    }

    /// Render the text format: ascending coefficients, space-separated.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Human form in the variable `z`, descending powers.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let term = if i == 0 {
                format!("{mag}")
            } else {
                let var = if i == 1 { "z".into() } else { format!("z^{i}") };
                if mag.is_one() {
                    var
                } else {
                    format!("{mag}{var}")
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{term}")
                } else {
                    term
                });
            } else {
                parts.push(format!(
                    " {} {term}",
                    if c.is_negative() { "-" } else { "+" }
                ));
            }
        }
        parts.concat()
    }
}

impl Polynomial<BigRational> {
    /// Smallest positive integer multiple with integer coefficients, as
    /// `(integer polynomial, denominator)` so `self = poly / denominator`.
    pub fn clear_denominators(&self) -> (Polynomial<BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c.numer() * &den) / c.denom())
            .collect();
        (Polynomial::from_coeffs(ints), den)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + crate::roots::rat_to_f64(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Int, IntPoly, Rat, RatPoly};

    fn ip(cs: &[i64]) -> IntPoly {
        Polynomial::from_coeffs(cs.iter().map(|&c| Int::from(c)).collect())
    }

    #[test]
    fn arithmetic_basics() {
        let p = ip(&[-1, 0, 1]); // z^2 - 1
        let q = ip(&[1, 1]); // z + 1
        assert_eq!(p.degree(), Some(2));
        assert_eq!(&p + &q, ip(&[0, 1, 1]));
        assert_eq!(&p * &q, ip(&[-1, -1, 1, 1]));
        assert_eq!(p.eval(&Int::from(3)), Int::from(8));
        assert_eq!(p.derivative(), ip(&[0, 2]));
    }

    #[test]
    fn zero_trimming() {
        let p = Polynomial::from_coeffs(vec![Int::from(0), Int::from(0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn monic_division() {
        let p = ip(&[-1, -1, 1, 1]); // (z^2-1)(z+1)
        let d = ip(&[1, 1]);
        let (q, r) = p.divmod_monic(&d);
        assert!(r.is_zero());
        assert_eq!(q, ip(&[-1, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let p = ip(&[0, -3, 0, 1]).mul(&ip(&[2, 5]));
        assert_eq!(p.div_exact(&ip(&[2, 5])), Some(ip(&[0, -3, 0, 1])));
        assert_eq!(ip(&[1, 1]).div_exact(&ip(&[0, 2])), None);
    }

    #[test]
    fn content_and_primitive() {
        let p = ip(&[-6, 0, -9]);
        assert_eq!(p.content(), Int::from(3));
        assert_eq!(p.primitive_part(), ip(&[2, 0, 3]));
    }

    #[test]
    fn integer_gcd() {
        let a = ip(&[-1, 0, 1]); // (z-1)(z+1)
        let b = ip(&[-2, 1, 1]); // (z-1)(z+2)
        assert_eq!(a.gcd_int(&b), ip(&[-1, 1]));
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let p = ip(&[0, 0, -3, 0, 1]); // z^2 (z^2 - 3)
        assert_eq!(p.squarefree_part(), ip(&[0, -3, 0, 1]));
    }

    #[test]
    fn rational_field_gcd() {
        let to_r = |p: IntPoly| p.to_rat();
        let a = to_r(ip(&[-1, 0, 1]));
        let b = to_r(ip(&[1, 1]));
        let (g, s, t) = a.extended_gcd(&b);
        assert_eq!(g, b.monic());
        let back: RatPoly = s.mul(&a).add(&t.mul(&b));
        assert_eq!(back, g);
    }

    #[test]
    fn text_roundtrip() {
        let p = ip(&[-1, 0, 1]);
        assert_eq!(p.to_text(), "-1 0 1");
        assert_eq!(IntPoly::parse_text("-1 0 1").unwrap(), p);
        assert_eq!(p.pretty(), "z^2 - 1");
    }

    #[test]
    fn scalar_from_usize_matches() {
        assert_eq!(scalar_from_usize::<Rat>(13), crate::rat_int(13));
        assert_eq!(scalar_from_usize::<Int>(0), Int::from(0));
    }
}
