//! Integer and rational combinatorics: p-adic valuations, factorials,
//! lcm, a prime sieve, the odd prime factor `phi_factor`, binary digit
//! sums, generalized binomials and Bernoulli numbers.
//!
//! Everything here is exact. The only floating point in this module is
//! the growth diagnostics, which report natural logarithms of huge
//! integers for trend checks.

mod bernoulli;

pub use bernoulli::{bernoulli, BernoulliCache};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Convenience constructor for a `BigRational` from machine integers.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Convenience constructor for an integer `BigRational`.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// q-adic order of a nonzero integer.
pub fn vp_int(q: u64, x: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if q == 2 {
        // trailing_zeros is exact and cheap on the two's-complement magnitude
        return Ok(x.trailing_zeros().expect("nonzero") as i64);
    }
    let q = BigInt::from(q);
    let mut v = 0i64;
    let mut cur = x.clone();
    loop {
        let (quot, rem) = cur.div_rem(&q);
        if !rem.is_zero() {
            return Ok(v);
        }
        v += 1;
        cur = quot;
    }
}

/// q-adic order of a nonzero rational: vp(num) - vp(den).
pub fn vp(q: u64, x: &BigRational) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(vp_int(q, x.numer())? - vp_int(q, x.denom())?)
}

/// 2-adic order of a nonzero rational.
pub fn v2(x: &BigRational) -> Result<i64> {
    vp(2, x)
}

/// 2-adic order of a nonzero integer.
pub fn v2_int(x: &BigInt) -> Result<i64> {
    vp_int(2, x)
}

/// Legendre's formula: the q-adic order of a!.
pub fn vq_factorial(q: u64, a: u64) -> u64 {
    let mut total = 0u64;
    let mut power = q;
    while power <= a {
        total += a / power;
        match power.checked_mul(q) {
            Some(next) => power = next,
            None => break,
        }
    }
    total
}

/// Number of ones in the binary expansion of a.
///
/// Satisfies vq_factorial(2, a) = a - sod2(a).
pub fn sod2(a: u64) -> u32 {
    a.count_ones()
}

/// Delete the leading base-q digit of k >= 1.
pub fn k_minus(k: u64, q: u64) -> u64 {
    assert!(k >= 1, "k_minus requires k >= 1");
    assert!(q >= 2, "k_minus requires q >= 2");
    // largest power q^l <= k
    let mut power = 1u64;
    while let Some(next) = power.checked_mul(q) {
        if next > k {
            break;
        }
        power = next;
    }
    k - (k / power) * power
}

/// Ascending table of all primes up to `limit` (inclusive).
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    sieve: Vec<bool>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        if n >= 1 {
            sieve[1] = false;
        }
        let mut i = 2usize;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let primes = (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect();
        PrimeTable {
            limit,
            primes,
            sieve,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "query beyond sieve limit");
        self.sieve[n as usize]
    }
}

/// lcm[1, 2, ..., n], assembled from prime powers q^floor(log_q n).
pub fn lcm_upto(n: u64) -> BigInt {
    assert!(n >= 1, "lcm_upto requires n >= 1");
    let table = PrimeTable::new(n);
    let mut acc = BigInt::one();
    for &q in table.primes() {
        let mut power = q;
        while let Some(next) = power.checked_mul(q) {
            if next > n {
                break;
            }
            power = next;
        }
        acc *= BigInt::from(power);
    }
    acc
}

/// Product of the primes q with sqrt(10 n) < q <= n and {n/q} > 1/2.
///
/// Both conditions are evaluated in exact integer arithmetic:
/// q^2 > 10 n and 2 (n mod q) > q.
pub fn phi_factor(n: u64) -> BigInt {
    assert!(n >= 1, "phi_factor requires n >= 1");
    let table = PrimeTable::new(n);
    let mut acc = BigInt::one();
    for &q in table.primes() {
        if q.checked_mul(q).map_or(false, |q2| q2 > 10 * n) && 2 * (n % q) > q {
            acc *= BigInt::from(q);
        }
    }
    acc
}

/// Binomial coefficient C(n, k) for machine-sized arguments.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient C(a, i) for integer a (possibly
/// negative): a (a-1) ... (a-i+1) / i!. Always an integer.
pub fn binomial_general(a: &BigInt, i: u64) -> BigInt {
    let mut num = BigInt::one();
    for u in 0..i {
        num *= a - BigInt::from(u);
    }
    let mut den = BigInt::one();
    for u in 1..=i {
        den *= BigInt::from(u);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "generalized binomial must be an integer");
    q
}

/// Rising factorial (a)_len = a (a+1) ... (a+len-1) of an integer.
pub fn rising(a: i64, len: u32) -> BigInt {
    let mut acc = BigInt::one();
    for u in 0..len as i64 {
        acc *= BigInt::from(a + u);
    }
    acc
}

/// Factorial of a machine integer.
pub fn factorial(a: u64) -> BigInt {
    let mut acc = BigInt::one();
    for u in 2..=a {
        acc *= BigInt::from(u);
    }
    acc
}

/// Natural logarithm of a positive big integer, via bit length plus a
/// 53-bit mantissa. Accurate to double precision for any size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of a non-positive integer");
    let mag = x.magnitude();
    ln_biguint(mag)
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        let words = x.to_u64_digits();
        let v = words.first().copied().unwrap_or(0) as f64;
        return v.ln();
    }
    let shift = bits - 53;
    let top: BigUint = x >> shift;
    let words = top.to_u64_digits();
    let mantissa = words[0] as f64;
    mantissa.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Base-2 logarithm of the absolute value of a nonzero rational.
pub fn log2_abs_rational(x: &BigRational) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let num = x.numer().abs();
    let den = x.denom().abs();
    (ln_bigint(&num) - ln_bigint(&den)) / std::f64::consts::LN_2
}

/// Tolerance on |ln(d_n)/n - 1| used by the growth diagnostics.
pub const LCM_GROWTH_TOL: f64 = 0.1;
/// Tolerance on |ln(Phi_n)/n - (2 ln 2 - 1)| used by the growth diagnostics.
pub const PHI_GROWTH_TOL: f64 = 0.05;

/// Finite-n growth trend report for d_n = lcm[1..n] and Phi_n.
#[derive(Debug, Clone)]
pub struct GrowthDiagnostics {
    pub n: u64,
    pub log_lcm_over_n: f64,
    pub log_phi_over_n: f64,
    /// |log(d_n)/n - 1|
    pub lcm_deviation: f64,
    /// |log(Phi_n)/n - (2 log 2 - 1)|
    pub phi_deviation: f64,
    pub lcm_within_tol: bool,
    pub phi_within_tol: bool,
}

/// Compare the measured growth of d_n and Phi_n against their limits.
/// The tolerances gate warnings, not hard failures.
pub fn growth_diagnostics(n: u64) -> GrowthDiagnostics {
    let dn = lcm_upto(n);
    let phi = phi_factor(n);
    let log_lcm_over_n = ln_bigint(&dn) / n as f64;
    let log_phi_over_n = ln_bigint(&phi) / n as f64;
    let phi_limit = 2.0 * std::f64::consts::LN_2 - 1.0;
    let lcm_deviation = (log_lcm_over_n - 1.0).abs();
    let phi_deviation = (log_phi_over_n - phi_limit).abs();
    GrowthDiagnostics {
        n,
        log_lcm_over_n,
        log_phi_over_n,
        lcm_deviation,
        phi_deviation,
        lcm_within_tol: lcm_deviation <= LCM_GROWTH_TOL,
        phi_within_tol: phi_deviation <= PHI_GROWTH_TOL,
    }
}

/// Sign helper: (-1)^e as a BigInt.
pub fn sign_pow(e: u64) -> BigInt {
    if e % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Parse a rational written as `num`, `num/den` or a decimal integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        s.parse::<BigInt>()
            .map_err(|_| Error::InvalidParameter(format!("bad integer `{s}`")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::InvalidParameter("zero denominator".into()));
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

/// Format a rational as `num/den` (denominator always present).
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Sign of a BigInt as -1, 0, or 1.
pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
