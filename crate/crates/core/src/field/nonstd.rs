use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::write_terms;
use super::{EpsPoly, Rational};
use crate::error::Error;

/// An element of ℝ(ε) with rational coefficients: `ε^order · num(ε) / den(ε)`.
///
/// The representation is canonical, so structural equality is field equality:
///
/// * zero is `order = 0`, `num = 0`, `den = 1`;
/// * otherwise `num(0) ≠ 0`, `den(0) = 1` and `gcd(num, den) = 1`.
///
/// The sign of a nonzero element is the sign of `num(0)`, because ε > 0 and
/// the lowest-order term dominates every higher one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NonstdNum {
    order: i64,
    num: EpsPoly,
    den: EpsPoly,
}

impl NonstdNum {
    /// Builds `ε^order · num / den` and brings it to canonical form.
    pub fn from_parts(order: i64, num: EpsPoly, den: EpsPoly) -> Result<Self, Error> {
        let dval = den.valuation().ok_or(Error::DivisionByZero)?;
        let Some(nval) = num.valuation() else {
            return Ok(NonstdNum::zero());
        };
        let order = order + nval as i64 - dval as i64;
        let mut num = num.shift_down(nval);
        let mut den = den.shift_down(dval);
        if !den.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.exact_div(&g);
                den = den.exact_div(&g);
            }
        }
        let c = den.constant_term().recip().expect("den(0) != 0 after shift");
        if !c.is_one() {
            num = num.scale(&c);
            den = den.scale(&c);
        }
        Ok(NonstdNum { order, num, den })
    }

    pub fn zero() -> Self {
        NonstdNum { order: 0, num: EpsPoly::zero(), den: EpsPoly::one() }
    }

    pub fn one() -> Self {
        NonstdNum::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        if q.is_zero() {
            return NonstdNum::zero();
        }
        NonstdNum { order: 0, num: EpsPoly::constant(q), den: EpsPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        NonstdNum::from_rational(Rational::from(n))
    }

    /// The infinitesimal ε itself.
    pub fn epsilon() -> Self {
        NonstdNum { order: 1, num: EpsPoly::one(), den: EpsPoly::one() }
    }

    /// `c·ε^k` for any integer `k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        if c.is_zero() {
            return NonstdNum::zero();
        }
        NonstdNum { order: k, num: EpsPoly::constant(c), den: EpsPoly::one() }
    }

    pub fn from_poly(p: EpsPoly) -> Self {
        NonstdNum::from_parts(0, p, EpsPoly::one()).expect("den = 1")
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn num(&self) -> &EpsPoly {
        &self.num
    }

    pub fn den(&self) -> &EpsPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn sign(&self) -> i32 {
        self.num.constant_term().signum()
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// True for zero and for every element below all positive rationals in
    /// absolute value.
    pub fn is_infinitesimal(&self) -> bool {
        self.is_zero() || self.order >= 1
    }

    /// True iff bounded in absolute value by some standard rational.
    pub fn is_finite(&self) -> bool {
        self.is_zero() || self.order >= 0
    }

    /// True iff the value is an ordinary rational (no ε dependence).
    pub fn is_standard(&self) -> bool {
        self.is_zero() || (self.order == 0 && self.num.is_constant() && self.den.is_constant())
    }

    /// The unique rational infinitely close to a finite element.
    pub fn standard_part(&self) -> Result<Rational, Error> {
        if self.is_zero() || self.order > 0 {
            return Ok(Rational::zero());
        }
        if self.order < 0 {
            return Err(Error::NotFinite(self.to_string()));
        }
        Ok(self.num.constant_term())
    }

    /// Returns the rational value when the element is standard.
    pub fn as_rational(&self) -> Option<Rational> {
        self.is_standard().then(|| self.num.constant_term())
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        NonstdNum::from_parts(-self.order, self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &NonstdNum) -> Result<Self, Error> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(NonstdNum::one(), |acc, _| &acc * self)
    }

    /// Substitutes the positive rational `e` for ε.
    pub fn eval_at(&self, e: &Rational) -> Result<Rational, Error> {
        if !e.is_positive() {
            return Err(Error::Parse(format!("evaluation point must be positive, got {e}")));
        }
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let d = self.den.eval(e);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(e.to_string()));
        }
        Ok(&(&e.pow(self.order)? * &self.num.eval(e)) / &d)
    }

    pub fn max(self, other: NonstdNum) -> NonstdNum {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: NonstdNum) -> NonstdNum {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Largest degree of numerator or denominator.
    pub fn max_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

impl Default for NonstdNum {
    fn default() -> Self {
        NonstdNum::zero()
    }
}

impl From<Rational> for NonstdNum {
    fn from(q: Rational) -> Self {
        NonstdNum::from_rational(q)
    }
}

impl From<i64> for NonstdNum {
    fn from(n: i64) -> Self {
        NonstdNum::from_int(n)
    }
}

impl Add for &NonstdNum {
    type Output = NonstdNum;
    fn add(self, rhs: &NonstdNum) -> NonstdNum {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let m = self.order.min(rhs.order);
        let (da, db) = ((self.order - m) as usize, (rhs.order - m) as usize);
        if self.den == rhs.den {
            let num = &self.num.shift_up(da) + &rhs.num.shift_up(db);
            return NonstdNum::from_parts(m, num, self.den.clone()).expect("den(0) = 1");
        }
        let num = &(&self.num * &rhs.den).shift_up(da) + &(&rhs.num * &self.den).shift_up(db);
        NonstdNum::from_parts(m, num, &self.den * &rhs.den).expect("den(0) = 1")
    }
}

impl Sub for &NonstdNum {
    type Output = NonstdNum;
    fn sub(self, rhs: &NonstdNum) -> NonstdNum {
        self + &(-rhs)
    }
}

impl Mul for &NonstdNum {
    type Output = NonstdNum;
    fn mul(self, rhs: &NonstdNum) -> NonstdNum {
        if self.is_zero() || rhs.is_zero() {
            return NonstdNum::zero();
        }
        let order = self.order + rhs.order;
        if self.den.is_constant() && rhs.den.is_constant() {
            // both denominators are exactly 1
            return NonstdNum { order, num: &self.num * &rhs.num, den: EpsPoly::one() };
        }
        NonstdNum::from_parts(order, &self.num * &rhs.num, &self.den * &rhs.den)
            .expect("den(0) = 1")
    }
}

impl Div for &NonstdNum {
    type Output = NonstdNum;
    /// Panics on a zero divisor; see [`NonstdNum::checked_div`].
    fn div(self, rhs: &NonstdNum) -> NonstdNum {
        self.checked_div(rhs).expect("NonstdNum division by zero")
    }
}

impl Neg for &NonstdNum {
    type Output = NonstdNum;
    fn neg(self) -> NonstdNum {
        NonstdNum { order: self.order, num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for NonstdNum {
    type Output = NonstdNum;
    fn neg(self) -> NonstdNum {
        -&self
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for NonstdNum {
            type Output = NonstdNum;
            fn $method(self, rhs: NonstdNum) -> NonstdNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&NonstdNum> for NonstdNum {
            type Output = NonstdNum;
            fn $method(self, rhs: &NonstdNum) -> NonstdNum {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Sum for NonstdNum {
    fn sum<I: Iterator<Item = NonstdNum>>(iter: I) -> Self {
        iter.fold(NonstdNum::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> Sum<&'a NonstdNum> for NonstdNum {
    fn sum<I: Iterator<Item = &'a NonstdNum>>(iter: I) -> Self {
        iter.fold(NonstdNum::zero(), |acc, x| &acc + x)
    }
}

impl Ord for NonstdNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        // Both denominators are positive near 0, so the sign of the
        // difference is the sign of the cross-multiplied numerator.
        let m = self.order.min(other.order);
        let lhs = (&self.num * &other.den).shift_up((self.order - m) as usize);
        let rhs = (&other.num * &self.den).shift_up((other.order - m) as usize);
        let diff = &lhs - &rhs;
        match diff.valuation().map(|k| diff.coeff(k).signum()) {
            Some(1) => Ordering::Greater,
            Some(_) => Ordering::Less,
            None => Ordering::Equal,
        }
    }
}

impl PartialOrd for NonstdNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NonstdNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write_terms(f, self.num.coeffs(), self.order);
        }
        write!(f, "(")?;
        write_terms(f, self.num.coeffs(), self.order)?;
        write!(f, ")/(")?;
        write_terms(f, self.den.coeffs(), 0)?;
        write!(f, ")")
    }
}

impl fmt::Debug for NonstdNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for NonstdNum {
    type Err = Error;

    /// Accepts a rational `p/q`, or the ε literal `eps` / `ε`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "eps" | "ε" => Ok(NonstdNum::epsilon()),
            other => Ok(NonstdNum::from_rational(other.parse()?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CanonicalForm {
    order: i64,
    num: Vec<Rational>,
    den: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NonstdInput {
    Full(CanonicalForm),
    Poly(Vec<Rational>),
    Text(String),
    Int(i64),
    Float(f64),
}

impl Serialize for NonstdNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CanonicalForm {
            order: self.order,
            num: self.num.coeffs().to_vec(),
            den: self.den.coeffs().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NonstdNum {
    /// Accepts the canonical object, an ascending coefficient array, a
    /// rational string, or the literal `"eps"`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match NonstdInput::deserialize(deserializer)? {
            NonstdInput::Full(c) => {
                NonstdNum::from_parts(c.order, EpsPoly::new(c.num), EpsPoly::new(c.den))
                    .map_err(D::Error::custom)
            }
            NonstdInput::Poly(coeffs) => Ok(NonstdNum::from_poly(EpsPoly::new(coeffs))),
            NonstdInput::Text(s) => s.parse().map_err(D::Error::custom),
            NonstdInput::Int(n) => Ok(NonstdNum::from_int(n)),
            NonstdInput::Float(x) => Err(D::Error::custom(format!(
                "float {x} rejected; use exact \"p/q\" strings or coefficient arrays"
            ))),
        }
    }
}
