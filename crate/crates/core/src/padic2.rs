//! Truncated 2-adic arithmetic with explicit absolute-precision
//! tracking, the scaled representation of Q_2 elements, and the
//! Teichmueller character at p = 2.
//!
//! A [`Padic2`] stores a 2-integral value known modulo 2^A as its
//! canonical residue in [0, 2^A). Elements of Q_2 with negative
//! valuation are handled by [`ScaledPadic2`], which keeps a scaling
//! exponent alongside a 2-integral mantissa; `Padic2` itself never
//! holds hidden denominators.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numcore::v2;

/// Valuation reading of a quantity known to finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation2Result {
    /// v_2 is exactly this integer.
    Exact(i64),
    /// The value is congruent to 0 at the working precision; all we can
    /// assert is v_2 >= bound.
    BelowPrecision { bound: i64 },
    /// The value is exactly zero (algebraically), reported distinctly.
    ExactZero,
}

/// Default guard band: a valuation claim v is only reported conclusive
/// when v + 32 bits of headroom fit below the certified precision.
pub const VALUATION_GUARD: i64 = 32;

/// 2^bits - 1 as a BigUint mask.
fn mask(bits: u64) -> BigUint {
    (BigUint::one() << bits) - BigUint::one()
}

/// Inverse of an odd residue modulo 2^bits, by Newton iteration.
fn inv_mod_pow2(a: &BigUint, bits: u64) -> BigUint {
    debug_assert!(a.is_odd(), "inverse of an even residue");
    if bits == 0 {
        return BigUint::zero();
    }
    let mut x = BigUint::one();
    let mut cur = 1u64;
    while cur < bits {
        cur = (cur * 2).min(bits);
        let m = mask(cur);
        let ax = (a * &x) & &m;
        // x <- x (2 - a x) mod 2^cur
        let t = ((BigUint::one() << cur) + BigUint::from(2u32) - ax) & &m;
        x = (&x * t) & &m;
    }
    x
}

/// Residue of a 2-integral rational modulo 2^bits.
fn residue_of_rational(x: &BigRational, bits: u64) -> Result<BigUint> {
    if x.denom().is_even() {
        return Err(Error::NotTwoIntegral(x.to_string()));
    }
    let modulus = BigInt::from(BigUint::one() << bits);
    let num = x.numer().mod_floor(&modulus);
    let den = x.denom().mod_floor(&modulus);
    let num = num.to_biguint().expect("mod_floor is nonnegative");
    let den = den.to_biguint().expect("mod_floor is nonnegative");
    if bits == 0 {
        return Ok(BigUint::zero());
    }
    Ok((num * inv_mod_pow2(&den, bits)) & mask(bits))
}

/// A 2-integral value known modulo 2^A, or an exact zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Padic2 {
    residue: BigUint,
    /// None encodes the exact-zero sentinel (infinite precision).
    prec: Option<u64>,
}

impl Padic2 {
    /// The exact zero element.
    pub fn exact_zero() -> Self {
        Padic2 {
            residue: BigUint::zero(),
            prec: None,
        }
    }

    /// A value congruent to `residue` modulo 2^prec.
    pub fn from_residue(residue: BigUint, prec: u64) -> Self {
        Padic2 {
            residue: residue & mask(prec),
            prec: Some(prec),
        }
    }

    /// Embed an exact rational with v_2(x) >= 0 at absolute precision A.
    /// The exact rational 0 embeds as the exact-zero element.
    pub fn embed(x: &BigRational, a: u64) -> Result<Self> {
        if x.is_zero() {
            return Ok(Self::exact_zero());
        }
        if v2(x)? < 0 {
            return Err(Error::NotTwoIntegral(x.to_string()));
        }
        Ok(Self::from_residue(residue_of_rational(x, a)?, a))
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec.is_none()
    }

    /// Absolute precision; None for the exact zero (infinite).
    pub fn precision(&self) -> Option<u64> {
        self.prec
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// Lowercase hex rendering of the residue.
    pub fn residue_hex(&self) -> String {
        format!("{:x}", self.residue)
    }

    fn min_prec(&self, other: &Self) -> Option<u64> {
        match (self.prec, other.prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    /// Sum, at the minimum of the two precisions.
    pub fn add(&self, other: &Self) -> Self {
        match self.min_prec(other) {
            None => Self::exact_zero(),
            Some(p) => Self::from_residue(&self.residue + &other.residue, p),
        }
    }

    /// Negation, precision preserved.
    pub fn neg(&self) -> Self {
        match self.prec {
            None => Self::exact_zero(),
            Some(p) => {
                if self.residue.is_zero() {
                    self.clone()
                } else {
                    Self::from_residue((BigUint::one() << p) - &self.residue, p)
                }
            }
        }
    }

    /// Product. With valuations v1, v2 the result keeps precision
    /// min(A1 + v2, A2 + v1); a residue that is zero at its precision
    /// contributes its precision as the valuation lower bound.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero();
        }
        let (a1, a2) = (self.prec.unwrap(), other.prec.unwrap());
        let v1 = self
            .residue
            .trailing_zeros()
            .map_or(a1, |v| v.min(a1));
        let v2 = other
            .residue
            .trailing_zeros()
            .map_or(a2, |v| v.min(a2));
        let p = (a1 + v2).min(a2 + v1);
        Self::from_residue(&self.residue * &other.residue, p)
    }

    /// Inverse of a unit (odd residue), precision preserved.
    pub fn inv(&self) -> Result<Self> {
        match self.prec {
            None => Err(Error::NonUnit),
            Some(p) => {
                if self.residue.is_even() {
                    return Err(Error::NonUnit);
                }
                Ok(Self::from_residue(inv_mod_pow2(&self.residue, p), p))
            }
        }
    }

    /// Exact valuation of the residue when visible below the precision.
    pub fn valuation2(&self) -> Valuation2Result {
        match self.prec {
            None => Valuation2Result::ExactZero,
            Some(p) => match self.residue.trailing_zeros() {
                Some(v) if v < p => Valuation2Result::Exact(v as i64),
                _ => Valuation2Result::BelowPrecision { bound: p as i64 },
            },
        }
    }

    /// Equality at the minimum of the two precisions.
    pub fn congruent(&self, other: &Self) -> bool {
        match self.min_prec(other) {
            None => true,
            Some(p) => {
                let m = mask(p);
                (&self.residue & &m) == (&other.residue & &m)
            }
        }
    }
}

/// An element of Q_2: value = 2^{-scale} * mantissa with a 2-integral
/// mantissa. The value is known modulo 2^(mantissa precision - scale).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPadic2 {
    mantissa: Padic2,
    scale: u64,
}

impl ScaledPadic2 {
    pub fn exact_zero() -> Self {
        ScaledPadic2 {
            mantissa: Padic2::exact_zero(),
            scale: 0,
        }
    }

    /// Represent a rational known to approximate the target value modulo
    /// 2^value_prec. A zero representative is NOT the exact zero: it
    /// means the value is congruent to 0 at that precision.
    pub fn from_rational(x: &BigRational, value_prec: i64) -> Result<Self> {
        let scale = if x.is_zero() {
            0
        } else {
            (-v2(x)?).max(0) as u64
        };
        let mantissa_prec = value_prec + scale as i64;
        if mantissa_prec < 0 {
            return Err(Error::PrecisionShortfall(format!(
                "cannot represent a value at precision {value_prec} with scale {scale}"
            )));
        }
        let scaled = x * BigRational::from_integer(BigInt::one() << scale);
        let residue = if scaled.is_zero() {
            BigUint::zero()
        } else {
            residue_of_rational(&scaled, mantissa_prec as u64)?
        };
        Ok(ScaledPadic2 {
            mantissa: Padic2::from_residue(residue, mantissa_prec as u64),
            scale,
        })
    }

    pub fn mantissa(&self) -> &Padic2 {
        &self.mantissa
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mantissa.is_exact_zero()
    }

    /// Absolute precision of the value; None when exact zero.
    pub fn value_precision(&self) -> Option<i64> {
        self.mantissa.precision().map(|p| p as i64 - self.scale as i64)
    }

    /// Canonical rational representative: residue * 2^{-scale}.
    pub fn to_rational(&self) -> BigRational {
        let num = BigInt::from(self.mantissa.residue().clone());
        BigRational::new(num, BigInt::one() << self.scale)
    }

    /// Raw valuation reading of the value.
    pub fn valuation(&self) -> Valuation2Result {
        match self.mantissa.valuation2() {
            Valuation2Result::ExactZero => Valuation2Result::ExactZero,
            Valuation2Result::Exact(v) => Valuation2Result::Exact(v - self.scale as i64),
            Valuation2Result::BelowPrecision { bound } => Valuation2Result::BelowPrecision {
                bound: bound - self.scale as i64,
            },
        }
    }

    /// Guarded valuation reading: a claim v is conclusive only when
    /// v + guard <= certified precision. Otherwise the reading is
    /// downgraded to BelowPrecision so noise is never read as signal.
    pub fn valuation_guarded(&self, guard: i64) -> Valuation2Result {
        match self.valuation() {
            Valuation2Result::Exact(v) => {
                let prec = self.value_precision().expect("finite precision");
                if v + guard <= prec {
                    Valuation2Result::Exact(v)
                } else {
                    Valuation2Result::BelowPrecision { bound: v }
                }
            }
            other => other,
        }
    }

    /// Valuation of the difference of two values, at the joint precision.
    pub fn agreement_valuation(&self, other: &Self) -> Valuation2Result {
        if self.is_exact_zero() && other.is_exact_zero() {
            return Valuation2Result::ExactZero;
        }
        let prec = match (self.value_precision(), other.value_precision()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        };
        let diff = self.to_rational() - other.to_rational();
        if diff.is_zero() {
            return Valuation2Result::BelowPrecision { bound: prec };
        }
        let v = v2(&diff).expect("nonzero");
        if v < prec {
            Valuation2Result::Exact(v)
        } else {
            Valuation2Result::BelowPrecision { bound: prec }
        }
    }

    /// Do the two values agree modulo 2^(joint precision)?
    pub fn congruent(&self, other: &Self) -> bool {
        !matches!(self.agreement_valuation(other), Valuation2Result::Exact(_))
    }

    /// Truncate to a (smaller) target value precision.
    pub fn truncate(&self, value_prec: i64) -> Self {
        match self.value_precision() {
            None => self.clone(),
            Some(p) => {
                if value_prec >= p {
                    return self.clone();
                }
                let mantissa_prec = (value_prec + self.scale as i64).max(0) as u64;
                ScaledPadic2 {
                    mantissa: Padic2::from_residue(
                        self.mantissa.residue().clone(),
                        mantissa_prec,
                    ),
                    scale: self.scale,
                }
            }
        }
    }
}

/// Teichmueller character on Q_2^x, extended by
/// omega(x) = 2^{v_2(x)} omega(x / 2^{v_2(x)}); the root-of-unity part
/// is +1 or -1 according to the unit part of x modulo 4.
pub fn teichmuller(x: &BigRational) -> Result<BigRational> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let v = v2(x)?;
    let unit = x * pow2_rational(-v);
    // unit has odd numerator and denominator; reduce modulo 4
    let four = BigInt::from(4);
    let num = unit.numer().mod_floor(&four);
    let den = unit.denom().mod_floor(&four);
    // inverses mod 4: 1 -> 1, 3 -> 3
    let r = (num * den).mod_floor(&four);
    let eps = if r == BigInt::one() {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    Ok(eps * pow2_rational(v))
}

/// Angle component <x> = x / omega(x); a 1-unit (congruent to 1 mod 4).
pub fn angle(x: &BigRational) -> Result<BigRational> {
    Ok(x / teichmuller(x)?)
}

/// 2^v as an exact rational, for any sign of v.
pub fn pow2_rational(v: i64) -> BigRational {
    if v >= 0 {
        BigRational::from_integer(BigInt::one() << v as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-v) as u64)
    }
}
