//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored ascending by degree with no trailing zeros.
//! Degrees stay in the hundreds at desk scale, so schoolbook
//! multiplication and synthetic division are the right tools.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numcore::rat_int;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// The monic linear polynomial t + a.
    pub fn t_plus(a: BigRational) -> Self {
        Poly {
            coeffs: vec![a, BigRational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Poly::from_coeffs(out)
    }

    /// Long division: self = q * d + r with deg r < deg d.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        if self.degree().map_or(true, |sd| sd < dd) {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let lead = d.leading().unwrap();
        let qn = rem.len() - dd;
        let mut quot = vec![BigRational::zero(); qn];
        for i in (0..qn).rev() {
            let c = &rem[i + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let val = &c * dc;
                rem[i + j] -= val;
            }
            quot[i] = c;
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact division; panics in debug builds if a remainder is left.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Synthetic division by (t - root): returns (quotient, self(root)).
    pub fn deflate(&self, root: &BigRational) -> (Poly, BigRational) {
        if self.is_zero() {
            return (Poly::zero(), BigRational::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![BigRational::zero(); n - 1];
        let mut acc = self.coeffs[n - 1].clone();
        for i in (0..n - 1).rev() {
            quot[i] = acc.clone();
            acc = acc * root + &self.coeffs[i];
        }
        (Poly::from_coeffs(quot), acc)
    }

    /// First `order + 1` Taylor coefficients of self at the point c,
    /// by repeated synthetic division.
    pub fn taylor_prefix(&self, c: &BigRational, order: usize) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(order + 1);
        let mut cur = self.clone();
        for _ in 0..=order {
            let (q, r) = cur.deflate(c);
            out.push(r);
            cur = q;
            if cur.is_zero() {
                break;
            }
        }
        out.resize(order + 1, BigRational::zero());
        out
    }

    /// p(a t + b), by Horner evaluation in the linear polynomial.
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> Poly {
        let lin = Poly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin);
            if !c.is_zero() {
                acc = acc.add(&Poly::constant(c.clone()));
            }
        }
        acc
    }

    /// Monic GCD by the Euclidean remainder sequence; each remainder is
    /// normalized monic to keep coefficient growth in check.
    pub fn gcd_monic(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.into_monic();
        }
        a.into_monic()
    }

    fn into_monic(self) -> Poly {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let l = l.clone();
                Poly {
                    coeffs: self.coeffs.iter().map(|c| c / &l).collect(),
                }
            }
        }
    }

    pub fn monic(&self) -> Poly {
        self.clone().into_monic()
    }
}

/// The rising-factorial polynomial (t + alpha)(t + alpha + 1) ... with
/// `k` factors; the empty product for k = 0.
pub fn pochhammer(alpha: &BigRational, k: u32) -> Poly {
    let mut acc = Poly::one();
    for j in 0..k {
        acc = acc.mul(&Poly::t_plus(alpha + rat_int(j as i64)));
    }
    acc
}

/// Multiplicative inverse of a power series given by ascending
/// coefficients (constant term nonzero), to the same truncation order.
pub fn invert_series(d: &[BigRational], order: usize) -> Vec<BigRational> {
    assert!(!d[0].is_zero(), "series inversion needs a unit constant term");
    let mut out = Vec::with_capacity(order + 1);
    let d0 = &d[0];
    out.push(BigRational::one() / d0);
    for j in 1..=order {
        let mut acc = BigRational::zero();
        for u in 0..j {
            let dc = d.get(j - u).cloned().unwrap_or_else(BigRational::zero);
            if !dc.is_zero() {
                acc += &out[u] * dc;
            }
        }
        out.push(-acc / d0);
    }
    out
}

/// Quotient of two power series to the given order (denominator has a
/// nonzero constant term).
pub fn divide_series(n: &[BigRational], d: &[BigRational], order: usize) -> Vec<BigRational> {
    assert!(!d[0].is_zero(), "series division needs a unit constant term");
    let mut out = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = n.get(j).cloned().unwrap_or_else(BigRational::zero);
        for u in 0..j {
            let dc = d.get(j - u).cloned().unwrap_or_else(BigRational::zero);
            if !dc.is_zero() {
                acc -= &out[u] * dc;
            }
        }
        out.push(acc / &d[0]);
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::rat;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn basic_arithmetic() {
        let a = p(&[1, 2]); // 1 + 2t
        let b = p(&[-1, 1]); // -1 + t
        assert_eq!(a.mul(&b), p(&[-1, -1, 2]));
        assert_eq!(a.add(&b), p(&[0, 3]));
        assert_eq!(a.sub(&a), Poly::zero());
        assert_eq!(a.pow(3), p(&[1, 6, 12, 8]));
        assert_eq!(p(&[0]).degree(), None);
        assert_eq!(a.degree(), Some(1));
    }

    #[test]
    fn divrem_and_deflate() {
        let num = p(&[-6, 11, -6, 1]); // (t-1)(t-2)(t-3)
        let (q, r) = num.divrem(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[6, -5, 1]));

        let (q2, rem) = num.deflate(&rat_int(2));
        assert!(rem.is_zero());
        assert_eq!(q2.eval(&rat_int(1)), rat_int(0));

        let (_, val) = num.deflate(&rat_int(4));
        assert_eq!(val, num.eval(&rat_int(4)));
    }

    #[test]
    fn taylor_prefix_matches_derivatives() {
        let f = p(&[5, -2, 0, 7, 1]);
        let c = rat(3, 2);
        let coeffs = f.taylor_prefix(&c, 4);
        let mut d = f.clone();
        let mut factorial = rat_int(1);
        for (j, got) in coeffs.iter().enumerate() {
            if j > 0 {
                d = d.derivative();
                factorial = factorial * rat_int(j as i64);
            }
            assert_eq!(got, &(d.eval(&c) / &factorial), "order {j}");
        }
    }

    #[test]
    fn compose_linear_reflects() {
        // p(-t - 3) of t^2 + t: (-t-3)^2 + (-t-3) = t^2 + 5t + 6
        let f = p(&[0, 1, 1]);
        let g = f.compose_linear(&rat_int(-1), &rat_int(-3));
        assert_eq!(g, p(&[6, 5, 1]));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rat(1, 4), 0), Poly::one());
        let p2 = pochhammer(&rat(1, 4), 2);
        assert_eq!(p2.eval(&rat_int(0)), rat(5, 16));
        let p3 = pochhammer(&rat_int(0), 3);
        assert_eq!(p3, Poly::from_coeffs(vec![rat_int(0), rat_int(2), rat_int(3), rat_int(1)]));
    }

    #[test]
    fn gcd_of_shared_factors() {
        let a = p(&[-1, 0, 1]); // (t-1)(t+1)
        let b = p(&[1, 1]); // t+1
        assert_eq!(a.gcd_monic(&b), b.monic());
        let c = p(&[2, 2]); // 2(t+1)
        assert_eq!(a.gcd_monic(&c), b.monic());
    }

    #[test]
    fn series_inversion_geometric() {
        // 1/(1+t) = 1 - t + t^2 - ...
        let inv = invert_series(&[rat_int(1), rat_int(1)], 3);
        assert_eq!(inv, vec![rat_int(1), rat_int(-1), rat_int(1), rat_int(-1)]);
    }
}
