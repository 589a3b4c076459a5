//! Algebraic numbers and arithmetic in the number field Q(lambda).
//!
//! An [`AlgebraicNumber`] is a primitive irreducible integer polynomial
//! together with a rational interval isolating exactly one of its real roots
//! (endpoints are never roots). A [`FieldElement`] is a rational-coefficient
//! polynomial reduced modulo the defining polynomial; rational constants may
//! live outside any field and adopt one on first contact, which lets
//! [`crate::poly::Polynomial`] be instantiated with field-element
//! coefficients.
//!
//! Sums of the form `sum over roots rho of f of g(rho)` are evaluated exactly
//! as traces in the etale algebra `Q(lambda)[y]/(f)`; this is how quantities
//! mixing several number fields stay exact without constructing composita.

use crate::poly::{scalar_from_usize, Polynomial};
use crate::roots::{
    eval_interval, isolate_real_roots, rat_to_f64, refine_step, sign_at_rational, RatInterval,
    SturmChain,
};
use crate::{Error, Int, IntPoly, Rat, RatPoly, Result};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// The field Q[z]/(minpoly), with cached data for traces.
#[derive(Debug)]
pub struct NumberField {
    /// Primitive irreducible defining polynomial with positive leading coefficient.
    pub minpoly: IntPoly,
    /// The same polynomial made monic over Q.
    pub monic: RatPoly,
    pub degree: usize,
    /// Power sums of all roots, p_0 .. p_{degree-1}.
    power_sums: Vec<Rat>,
}

impl NumberField {
    pub fn new(minpoly: IntPoly) -> Arc<Self> {
        let minpoly = minpoly.primitive_part();
        let degree = minpoly.degree().expect("defining polynomial nonconstant");
        assert!(degree >= 1);
        let monic = minpoly.to_rat().monic();
        let power_sums = newton_power_sums(&monic, degree);
        Arc::new(NumberField {
            minpoly,
            monic,
            degree,
            power_sums,
        })
    }

    pub fn compatible(&self, other: &NumberField) -> bool {
        self.minpoly == other.minpoly
    }
}

/// Power sums `p_0..p_{count-1}` of the roots of a monic polynomial, via
/// Newton's identities.
pub fn newton_power_sums<C: crate::poly::Scalar>(monic: &Polynomial<C>, count: usize) -> Vec<C> {
    let d = monic.degree().expect("nonconstant");
    debug_assert!(monic.leading().unwrap().is_one());
    let mut sums = Vec::with_capacity(count);
    sums.push(scalar_from_usize::<C>(d));
    for k in 1..count {
        // p_k + c_{d-1} p_{k-1} + ... + c_{d-k+1} p_1 + k c_{d-k} = 0
        let mut acc = monic.coeff(d - k) * scalar_from_usize::<C>(k);
        for i in 1..k {
            acc = acc + monic.coeff(d - i) * sums[k - i].clone();
        }
        sums.push(-acc);
    }
    sums
}

/// Element of Q(lambda): rational polynomial reduced mod the field polynomial.
/// `field == None` encodes a plain rational constant that joins a field on
/// first contact with a fielded operand.
#[derive(Clone)]
pub struct FieldElement {
    field: Option<Arc<NumberField>>,
    coeffs: RatPoly,
}

impl FieldElement {
    pub fn from_rat(r: Rat) -> Self {
        FieldElement {
            field: None,
            coeffs: RatPoly::constant(r),
        }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::from_rat(crate::rat_int(n))
    }

    pub fn in_field(field: &Arc<NumberField>, poly: RatPoly) -> Self {
        let (_, rem) = poly.divmod_monic(&field.monic);
        FieldElement {
            field: Some(field.clone()),
            coeffs: rem,
        }
    }

    /// The generator of the field (the root lambda itself).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        FieldElement::in_field(field, RatPoly::var())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coeffs(&self) -> &RatPoly {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// `Some(q)` iff the element is a rational constant.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs.degree_or_zero() == 0 {
            Some(self.coeffs.coeff(0))
        } else {
            None
        }
    }

    fn unify(&self, other: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                assert!(a.compatible(b), "field mismatch in field arithmetic");
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }

    fn reduced(field: Option<Arc<NumberField>>, poly: RatPoly) -> Self {
        match field {
            Some(f) => FieldElement::in_field(&f, poly),
            None => FieldElement {
                field: None,
                coeffs: poly,
            },
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        FieldElement::reduced(self.unify(other), self.coeffs.add(&other.coeffs))
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        FieldElement::reduced(self.unify(other), self.coeffs.sub(&other.coeffs))
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        FieldElement::reduced(self.unify(other), self.coeffs.mul(&other.coeffs))
    }

    pub fn neg_ref(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.neg(),
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.field {
            None => Ok(FieldElement::from_rat(
                Rat::one() / self.coeffs.coeff(0),
            )),
            Some(f) => {
                if let Some(r) = self.as_rat() {
                    return Ok(FieldElement {
                        field: Some(f.clone()),
                        coeffs: RatPoly::constant(Rat::one() / r),
                    });
                }
                let s = inverse_mod(&self.coeffs, &f.monic)
                    .expect("defining polynomial must be irreducible");
                Ok(FieldElement::in_field(f, s))
            }
        }
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow_usize(&self, mut e: usize) -> Self {
        let mut acc = FieldElement::from_rat(Rat::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Trace to Q: the sum of this element's images under all embeddings.
    pub fn trace(&self) -> Rat {
        match &self.field {
            None => self.coeffs.coeff(0),
            Some(f) => {
                let mut acc = Rat::zero();
                for (j, p) in f.power_sums.iter().enumerate() {
                    acc += self.coeffs.coeff(j) * p;
                }
                acc
            }
        }
    }

    /// Numeric value at a chosen root.
    pub fn approx_at(&self, lambda: f64) -> f64 {
        self.coeffs.eval_f64(lambda)
    }

    /// Coefficients as exact "p/q" strings (ascending), for reports.
    pub fn coeff_strings(&self) -> Vec<String> {
        let d = self
            .field
            .as_ref()
            .map(|f| f.degree)
            .unwrap_or(1)
            .max(self.coeffs.coeffs().len());
        (0..d).map(|i| rat_string(&self.coeffs.coeff(i))).collect()
    }
}

/// `Some(s)` with `s * a == 1 (mod m)` when `gcd(a, m) = 1`, else `None`.
///
/// Extended Euclid with every remainder rescaled to a primitive integer
/// polynomial (the cofactor is rescaled along); this keeps the coefficient
/// growth of the naive rational chain in check, which is what makes cavity
/// passes in degree-20+ number fields tractable.
pub fn inverse_mod(a: &RatPoly, m: &RatPoly) -> Option<RatPoly> {
    fn primitive_scale(r: &RatPoly) -> Option<Rat> {
        // scalar c with r/c primitive integer, positive leading coefficient
        let lead = r.leading()?;
        let mut den = crate::Int::one();
        for c in r.coeffs() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut content = crate::Int::zero();
        for c in r.coeffs() {
            let int_c = (c.numer() * &den) / c.denom();
            content = num_integer::Integer::gcd(&content, &int_c);
            if content.is_one() {
                break;
            }
        }
        if content.is_zero() {
            return None;
        }
        let mut scale = Rat::new(content, den);
        if lead.is_negative() {
            scale = -scale;
        }
        Some(scale)
    }

    let mut r0 = m.clone();
    let mut s0 = RatPoly::zero();
    let mut r1 = a.clone();
    let mut s1 = RatPoly::one();
    if let Some(c) = primitive_scale(&r1) {
        let inv = Rat::one() / c;
        r1 = r1.scale(&inv);
        s1 = s1.scale(&inv);
    }
    while !r1.is_zero() {
        if r1.degree_or_zero() == 0 {
            let inv = Rat::one() / r1.coeff(0);
            return Some(s1.scale(&inv));
        }
        let (q, r) = r0.divmod(&r1);
        let mut r2 = r;
        let mut s2 = s0.sub(&q.mul(&s1));
        if let Some(c) = primitive_scale(&r2) {
            let inv = Rat::one() / c;
            r2 = r2.scale(&inv);
            s2 = s2.scale(&inv);
        }
        r0 = r1;
        s0 = s1;
        r1 = r2;
        s1 = s2;
    }
    None
}

pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p/q", an integer, or decimal notation like "0.9" / "-2.25".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim().replace('\u{2212}', "-");
    if let Some((whole, frac)) = s.split_once('.') {
        if s.contains('/') || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::ParsePoly(format!("bad rational {s:?}")));
        }
        let negative = whole.trim_start().starts_with('-');
        let w: Int = if whole.is_empty() || whole == "-" {
            Int::zero()
        } else {
            whole
                .parse()
                .map_err(|_| Error::ParsePoly(format!("bad rational {s:?}")))?
        };
        let f: Int = frac
            .parse()
            .map_err(|_| Error::ParsePoly(format!("bad rational {s:?}")))?;
        let scale = Int::from(10u32).pow(frac.len() as u32);
        let frac_part = Rat::new(f, scale);
        let whole_part = Rat::from_integer(w);
        return Ok(if negative {
            whole_part - frac_part
        } else {
            whole_part + frac_part
        });
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
        None => (s.clone(), "1".to_string()),
    };
    let n: Int = num
        .parse()
        .map_err(|_| Error::ParsePoly(format!("bad rational {s:?}")))?;
    let d: Int = den
        .parse()
        .map_err(|_| Error::ParsePoly(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::ParsePoly("zero denominator".into()));
    }
    Ok(Rat::new(n, d))
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        let compatible = match (&self.field, &other.field) {
            (Some(a), Some(b)) => a.compatible(b),
            _ => true,
        };
        compatible && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe{:?}", self.coeffs.coeffs())
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::from_rat(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::from_rat(Rat::one())
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: Self) -> Self {
        self.div_ref(&rhs).expect("division by zero field element")
    }
}

/// Polynomial with coefficients in a number field.
pub type FieldPoly = Polynomial<FieldElement>;

/// Exact `sum over roots rho of f` of `num(rho) / den(rho)`, computed as the
/// trace of `num * den^{-1}` in the etale algebra `F[y]/(f)`.
///
/// `f` must be monic and squarefree with `gcd(den, f) = 1`.
pub fn sum_over_roots(num: &FieldPoly, den: &FieldPoly, f: &FieldPoly) -> Result<FieldElement> {
    let d = f.degree().ok_or_else(|| {
        Error::Internal("sum_over_roots needs a nonconstant modulus".into())
    })?;
    let (g, s, _) = den.extended_gcd(f);
    if g.degree_or_zero() != 0 || g.is_zero() {
        return Err(Error::Internal(
            "denominator not invertible modulo the root polynomial".into(),
        ));
    }
    let ginv = g.coeff(0).inv()?;
    let den_inv = s.scale(&ginv);
    let (_, prod) = num.mul(&den_inv).divmod_monic(f);
    let sums = newton_power_sums(f, d);
    let mut acc = FieldElement::zero();
    for (j, p) in sums.iter().enumerate() {
        acc = acc.add_ref(&prod.coeff(j).mul_ref(p));
    }
    Ok(acc)
}

/// A real algebraic number: primitive irreducible integer polynomial plus an
/// isolating open interval with non-root rational endpoints.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    lo: Rat,
    hi: Rat,
}

impl AlgebraicNumber {
    /// Construct from a known-irreducible polynomial and isolating interval.
    pub fn new_unchecked(field: Arc<NumberField>, lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo < hi);
        debug_assert!(
            sign_at_rational(&field.minpoly, &lo) != 0
                && sign_at_rational(&field.minpoly, &hi) != 0
        );
        debug_assert_eq!(
            SturmChain::of_int(&field.minpoly).count_between(&lo, &hi),
            1
        );
        AlgebraicNumber { field, lo, hi }
    }

    pub fn from_int(n: Int) -> Self {
        let minpoly = IntPoly::from_coeffs(vec![-n.clone(), Int::one()]);
        let field = NumberField::new(minpoly);
        let r = Rat::from_integer(n);
        AlgebraicNumber {
            field,
            lo: &r - Rat::one(),
            hi: &r + Rat::one(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        let minpoly =
            IntPoly::from_coeffs(vec![-r.numer().clone(), r.denom().clone()]).primitive_part();
        let field = NumberField::new(minpoly);
        AlgebraicNumber {
            field,
            lo: &r - Rat::one(),
            hi: &r + Rat::one(),
        }
    }

    /// Validated constructor: factor `poly`, demand that `(lo, hi)` isolates
    /// exactly one real root across all irreducible factors, and attach that
    /// factor.
    pub fn from_poly_interval(poly: &IntPoly, lo: Rat, hi: Rat) -> Result<Self> {
        if poly.is_zero() || lo >= hi {
            return Err(Error::NonIsolating {
                lo: rat_string(&lo),
                hi: rat_string(&hi),
            });
        }
        if sign_at_rational(poly, &lo) == 0 || sign_at_rational(poly, &hi) == 0 {
            return Err(Error::NonIsolating {
                lo: rat_string(&lo),
                hi: rat_string(&hi),
            });
        }
        let cap = poly.degree_or_zero().max(crate::factor::DEFAULT_FACTOR_CAP);
        let fac = crate::factor::factor_over_z_capped(poly, cap)?;
        let mut hit: Option<(IntPoly, usize)> = None;
        let mut total = 0usize;
        for (m, _) in &fac.factors {
            let chain = SturmChain::of_int(m);
            let c = chain.count_between(&lo, &hi);
            total += c;
            if c > 0 {
                hit = Some((m.clone(), c));
            }
        }
        match (hit, total) {
            (Some((m, 1)), 1) => {
                let field = NumberField::new(m);
                Ok(AlgebraicNumber::new_unchecked(field, lo, hi))
            }
            _ => Err(Error::NonIsolating {
                lo: rat_string(&lo),
                hi: rat_string(&hi),
            }),
        }
    }

    /// All real roots of an irreducible polynomial, ascending.
    pub fn roots_of_irreducible(minpoly: &IntPoly) -> Vec<Self> {
        let field = NumberField::new(minpoly.clone());
        isolate_real_roots(minpoly)
            .into_iter()
            .map(|(lo, hi)| AlgebraicNumber {
                field: field.clone(),
                lo,
                hi,
            })
            .collect()
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.field.minpoly
    }

    pub fn number_field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree
    }

    pub fn interval(&self) -> (Rat, Rat) {
        (self.lo.clone(), self.hi.clone())
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.field.degree == 1 {
            let c0 = self.field.minpoly.coeff(0);
            let c1 = self.field.minpoly.coeff(1);
            Some(Rat::new(-c0, c1))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rat().map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Lambda viewed as an element of its own field.
    pub fn as_field_element(&self) -> FieldElement {
        FieldElement::generator(&self.field)
    }

    /// One bisection refinement step.
    pub fn refine(&mut self) {
        let (lo, hi) = refine_step(&self.field.minpoly, &self.lo, &self.hi);
        self.lo = lo;
        self.hi = hi;
    }

    pub fn refined_below(&self, width: &Rat) -> (Rat, Rat) {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        while &(&hi - &lo) >= width {
            let (a, b) = refine_step(&self.field.minpoly, &lo, &hi);
            lo = a;
            hi = b;
        }
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rat() {
            return rat_to_f64(&r);
        }
        let eps = Rat::new(Int::one(), Int::from(1u64 << 52));
        let (lo, hi) = self.refined_below(&eps);
        (rat_to_f64(&lo) + rat_to_f64(&hi)) / 2.0
    }

    /// `-lambda`: reflect the defining polynomial, negate the interval.
    pub fn negate(&self) -> Self {
        let m = self.field.minpoly.reflect().primitive_part();
        let field = NumberField::new(m);
        AlgebraicNumber::new_unchecked(field, -self.hi.clone(), -self.lo.clone())
    }

    /// Total order on the reals.
    pub fn cmp_real(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let mut a = (self.lo.clone(), self.hi.clone());
        let mut b = (other.lo.clone(), other.hi.clone());
        loop {
            if a.1 <= b.0 {
                return Ordering::Less;
            }
            if b.1 <= a.0 {
                return Ordering::Greater;
            }
            a = refine_step(&self.field.minpoly, &a.0, &a.1);
            b = refine_step(&other.field.minpoly, &b.0, &b.1);
        }
    }

    /// Human-readable decimal approximation plus exact data.
    pub fn describe(&self) -> String {
        format!("root of {} near {:.6}", self.minpoly().pretty(), self.to_f64())
    }
}

impl serde::Serialize for AlgebraicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlgebraicNumber", 3)?;
        let coeffs: Vec<String> = (0..=self.field.minpoly.degree_or_zero())
            .map(|i| self.field.minpoly.coeff(i).to_string())
            .collect();
        st.serialize_field("minpoly", &coeffs)?;
        st.serialize_field("lo", &rat_string(&self.lo))?;
        st.serialize_field("hi", &rat_string(&self.hi))?;
        st.end()
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.field.minpoly != other.field.minpoly {
            return false;
        }
        // same minimal polynomial: equal iff exactly one root lies in the
        // interval intersection
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo >= hi {
            return false;
        }
        SturmChain::of_int(&self.field.minpoly).count_between(&lo, &hi) == 1
    }
}

impl Eq for AlgebraicNumber {}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Alg({} in ({}, {}))",
            self.field.minpoly.pretty(),
            self.lo,
            self.hi
        )
    }
}

/// Certified sign of the real number `a(lambda)`.
///
/// Exact zero is detected symbolically; otherwise the isolating interval of
/// lambda is refined until interval arithmetic certifies the sign. This
/// terminates because a nonzero reduced element cannot vanish at a root of
/// the (irreducible) defining polynomial.
pub fn field_element_sign(a: &FieldElement, lambda: &AlgebraicNumber) -> i32 {
    if a.is_zero() {
        return 0;
    }
    if let Some(r) = a.as_rat() {
        return if r.is_positive() { 1 } else { -1 };
    }
    let af = a.field().expect("nonconstant element carries a field");
    assert!(
        af.compatible(&lambda.field),
        "sign evaluation in a foreign field"
    );
    if let Some(r) = lambda.as_rat() {
        let v = a.coeffs().eval(&r);
        return if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
    }
    let mut lo = lambda.lo.clone();
    let mut hi = lambda.hi.clone();
    loop {
        let iv = eval_interval(a.coeffs(), &RatInterval::new(lo.clone(), hi.clone()));
        if let Some(s) = iv.definite_sign() {
            return s;
        }
        let (a2, b2) = refine_step(&lambda.field.minpoly, &lo, &hi);
        lo = a2;
        hi = b2;
    }
}
