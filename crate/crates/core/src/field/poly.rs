use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::Error;

/// A polynomial in ε with rational coefficients. Index `k` of the coefficient
/// vector holds the coefficient of ε^k.
///
/// The highest stored coefficient is never zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<Rational>", from = "Vec<Rational>")]
pub struct EpsPoly {
    coeffs: Vec<Rational>,
}

impl From<EpsPoly> for Vec<Rational> {
    fn from(p: EpsPoly) -> Self {
        p.coeffs
    }
}

impl From<Vec<Rational>> for EpsPoly {
    fn from(coeffs: Vec<Rational>) -> Self {
        EpsPoly::new(coeffs)
    }
}

impl EpsPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        EpsPoly { coeffs }
    }

    pub fn zero() -> Self {
        EpsPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        EpsPoly::new(vec![c])
    }

    pub fn one() -> Self {
        EpsPoly::constant(Rational::one())
    }

    /// `c·ε^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        EpsPoly::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        EpsPoly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Divides by ε^k; the low `k` coefficients must be zero.
    pub(crate) fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs[..k.min(self.coeffs.len())].iter().all(Rational::is_zero));
        EpsPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Multiplies by ε^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return EpsPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        EpsPoly { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return EpsPoly::zero();
        }
        EpsPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn eval(&self, e: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * e) + c)
    }

    /// Euclidean division over ℚ: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &EpsPoly) -> Result<(EpsPoly, EpsPoly), Error> {
        let dlead = d.leading().ok_or(Error::DivisionByZero)?;
        let ddeg = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return Ok((EpsPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + ddeg] / dlead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(ddeg);
        Ok((EpsPoly::new(quot), EpsPoly::new(rem)))
    }

    /// Monic greatest common divisor. `gcd(0, 0)` is zero.
    ///
    /// Runs a primitive remainder sequence over ℤ, which is much cheaper than
    /// Euclid over ℚ because no intermediate rational needs reducing.
    pub fn gcd(&self, other: &EpsPoly) -> EpsPoly {
        let (mut a, mut b) = (primitive(self), primitive(other));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive_rem(&a, &b);
            a = b;
            b = r;
        }
        EpsPoly::new(a.into_iter().map(Rational::from_integer).collect()).monic()
    }

    pub fn monic(&self) -> EpsPoly {
        match self.leading() {
            None => EpsPoly::zero(),
            Some(l) => {
                let inv = l.recip().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Exact division; caller guarantees `d` divides `self`.
    pub(crate) fn exact_div(&self, d: &EpsPoly) -> EpsPoly {
        let (q, r) = self.div_rem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive(p: &EpsPoly) -> Vec<BigInt> {
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    make_primitive(ints)
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let Some(lead) = v.last() else { return v };
    let mut g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if lead.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for c in &mut v {
            *c = &*c / &g;
        }
    }
    v
}

/// Primitive part of the pseudo-remainder of `a` by `b` (both nonzero).
fn primitive_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in &mut r {
            *c = &*c * lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    make_primitive(r)
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        EpsPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        EpsPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        EpsPoly::new(out)
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsPoly{:?}", self.coeffs)
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, 0)
    }
}

/// Writes `Σ c_k ε^(k+offset)` in ascending powers, e.g. `1 - 2ε + ε^2`.
pub(crate) fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[Rational], offset: i64) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = k as i64 + offset;
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        let coeff = format!("{mag:?}");
        match power {
            0 => write!(f, "{coeff}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{coeff}")?;
                }
                if power == 1 {
                    write!(f, "ε")?;
                } else {
                    write!(f, "ε^{power}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> EpsPoly {
        EpsPoly::from_ints(c)
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[3, -1, 4, 1, 5]);
        let d = p(&[2, 0, 7]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (1 + ε)(2 - ε) and (1 + ε)(3 + ε^2)
        let f = p(&[1, 1]);
        let a = &f * &p(&[2, -1]);
        let b = &f * &p(&[3, 0, 1]);
        assert_eq!(a.gcd(&b), f);
        assert_eq!(p(&[1, 1]).gcd(&p(&[1, -1])), EpsPoly::one());
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "1 - 2ε + ε^2");
        assert_eq!(EpsPoly::zero().to_string(), "0");
    }
}
