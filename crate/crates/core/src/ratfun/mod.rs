//! Exact univariate rational functions over Q: Pochhammer products,
//! the two integral-kernel families, derivatives, Taylor expansion at
//! rational points, and partial fraction extraction.

mod poly;

pub use poly::{divide_series, invert_series, pochhammer, Poly};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numcore::{factorial, rat, rat_int};

/// A rational function num/den in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Construct and normalize: reduce by the gcd, make the denominator
    /// monic.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd_monic(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Normalization for inputs already known to be coprime (skips the
    /// gcd, which matters for the large constructed kernels).
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            RatFun {
                num: num.scale(&(BigRational::one() / &lead)),
                den: den.scale(&(BigRational::one() / &lead)),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// deg num - deg den; None for the zero function.
    pub fn degree(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|n| n as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAtEvaluationPoint(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// First derivative. With num/den coprime the result is again in
    /// lowest terms, so no gcd on the output is needed.
    pub fn derivative(&self) -> RatFun {
        if self.num.is_zero() {
            return Self::zero();
        }
        let dp = self.den.derivative();
        if dp.is_zero() {
            return Self::from_poly(self.num.derivative());
        }
        let g = self.den.gcd_monic(&dp);
        let d_red = self.den.div_exact(&g);
        let dp_red = dp.div_exact(&g);
        let num = self.num.derivative().mul(&d_red).sub(&self.num.mul(&dp_red));
        let den = self.den.mul(&d_red);
        Self::from_coprime(num, den)
    }

    /// s-th derivative.
    pub fn derivative_n(&self, s: u32) -> RatFun {
        let mut cur = self.clone();
        for _ in 0..s {
            cur = cur.derivative();
        }
        cur
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatFun {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFun) -> Result<RatFun> {
        let g = self.den.gcd_monic(&other.den);
        let other_red = other.den.div_exact(&g);
        let num = self
            .num
            .mul(&other_red)
            .add(&other.num.mul(&self.den.div_exact(&g)));
        let den = self.den.mul(&other_red);
        RatFun::new(num, den)
    }

    pub fn mul(&self, other: &RatFun) -> Result<RatFun> {
        let g1 = self.num.gcd_monic(&other.den);
        let g2 = other.num.gcd_monic(&self.den);
        let num = self.num.div_exact(&g1).mul(&other.num.div_exact(&g2));
        let den = self.den.div_exact(&g2).mul(&other.den.div_exact(&g1));
        RatFun::new(num, den)
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<RatFun> {
        self.mul(&RatFun::from_poly(p.clone()))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Taylor coefficients of f around t = c up to the given order, by
/// exact series division. Errors when c is a pole.
pub fn taylor_at(f: &RatFun, c: &BigRational, order: usize) -> Result<Vec<BigRational>> {
    let den_prefix = f.den().taylor_prefix(c, order);
    if den_prefix[0].is_zero() {
        return Err(Error::PoleAtExpansionPoint(c.to_string()));
    }
    let num_prefix = f.num().taylor_prefix(c, order);
    Ok(divide_series(&num_prefix, &den_prefix, order))
}

/// Partial fraction decomposition: a polynomial part plus terms
/// coefficient/(t + c)^i keyed by (shift c, order i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractionDecomp {
    pub poly_part: Poly,
    pub terms: BTreeMap<(BigRational, u32), BigRational>,
}

impl PartialFractionDecomp {
    /// Coefficient of 1/(t + c)^i (zero when absent).
    pub fn coefficient(&self, c: &BigRational, i: u32) -> BigRational {
        self.terms
            .get(&(c.clone(), i))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Reassemble into a single rational function (exact identity).
    pub fn assemble(&self) -> Result<RatFun> {
        // distinct shifts with their maximal orders
        let mut max_order: BTreeMap<BigRational, u32> = BTreeMap::new();
        for (c, i) in self.terms.keys() {
            let e = max_order.entry(c.clone()).or_insert(0);
            *e = (*e).max(*i);
        }
        let mut den = Poly::one();
        for (c, m) in &max_order {
            den = den.mul(&Poly::t_plus(c.clone()).pow(*m));
        }
        let mut num = self.poly_part.mul(&den);
        for ((c, i), coeff) in &self.terms {
            if coeff.is_zero() {
                continue;
            }
            let mut piece = Poly::constant(coeff.clone());
            for (c2, m) in &max_order {
                let e = if c2 == c { *m - *i } else { *m };
                if e > 0 {
                    piece = piece.mul(&Poly::t_plus(c2.clone()).pow(e));
                }
            }
            num = num.add(&piece);
        }
        RatFun::new(num, den)
    }
}

/// Extract the partial fraction decomposition of f given its pole list
/// (shift c, multiplicity M), where each pole sits at t = -c.
///
/// The coefficient at (i, c) is the order-(M - i) Taylor coefficient of
/// (t + c)^M f(t) at t = -c. The decomposition is verified by exact
/// reassembly before it is returned, so an incorrect pole list fails
/// loudly rather than producing silent garbage.
pub fn partial_fractions(
    f: &RatFun,
    poles: &[(BigRational, u32)],
) -> Result<PartialFractionDecomp> {
    let (poly_part, rem) = f.num().divrem(f.den());
    let total: u64 = poles.iter().map(|(_, m)| *m as u64).sum();
    let den_deg = f.den().degree().unwrap_or(0) as u64;
    if total != den_deg {
        return Err(Error::IncompletePoleList(format!(
            "pole multiplicities sum to {total}, denominator degree is {den_deg}"
        )));
    }

    let mut terms = BTreeMap::new();
    let mut check = Poly::zero();
    for (c, m) in poles {
        let m = *m;
        let point = -c.clone();
        // deflate the denominator m times at -c; E_i = den / (t+c)^i
        let mut deflated = Vec::with_capacity(m as usize);
        let mut cur = f.den().clone();
        for step in 0..m {
            let (q, r) = cur.deflate(&point);
            if !r.is_zero() {
                return Err(Error::IncompletePoleList(format!(
                    "shift {c} has multiplicity {step}, pole list claims {m}"
                )));
            }
            cur = q;
            deflated.push(cur.clone());
        }
        let reduced_den = &deflated[m as usize - 1];
        let den_prefix = reduced_den.taylor_prefix(&point, m as usize - 1);
        if den_prefix[0].is_zero() {
            return Err(Error::IncompletePoleList(format!(
                "shift {c} has multiplicity greater than {m}"
            )));
        }
        let num_prefix = rem.taylor_prefix(&point, m as usize - 1);
        let series = divide_series(&num_prefix, &den_prefix, m as usize - 1);
        for (j, coeff) in series.iter().enumerate() {
            let order = m - j as u32; // i = M - j
            if !coeff.is_zero() {
                terms.insert((c.clone(), order), coeff.clone());
                check = check.add(&deflated[order as usize - 1].scale(coeff));
            }
        }
    }

    if check != rem {
        return Err(Error::Reassembly(
            "termwise numerator does not reproduce the input".into(),
        ));
    }

    Ok(PartialFractionDecomp {
        poly_part,
        terms,
    })
}

/// A constructed kernel together with its pole list (generated from the
/// construction, never guessed).
#[derive(Debug, Clone)]
pub struct Kernel {
    pub f: RatFun,
    /// (shift c, multiplicity) for every pole t = -c.
    pub poles: Vec<(BigRational, u32)>,
}

/// Kernel for the wide-window linear forms:
///
///   2^((6s+12)n) (4t+2n)^delta (t+1/4)_n^(s+2) (t+3/4)_n^(s+2) / (t)_{n+1}^(2s+4)
///
/// Checked on construction: degree = delta - 2s - 4 <= -2, and the
/// reflection symmetry f(-t-n) = (-1)^delta f(t).
pub fn s_kernel(n: u32, s: u32, delta: u8) -> Kernel {
    assert!(n >= 1, "kernel needs n >= 1");
    assert!(delta <= 1, "delta must be 0 or 1");
    let p14 = pochhammer(&rat(1, 4), n);
    let p34 = pochhammer(&rat(3, 4), n);
    let mut num = p14.mul(&p34).pow(s + 2);
    let scalar = BigRational::from_integer(BigInt::one() << ((6 * s as u64 + 12) * n as u64));
    num = num.scale(&scalar);
    if delta == 1 {
        num = num.mul(&Poly::from_coeffs(vec![rat_int(2 * n as i64), rat_int(4)]));
    }
    // symmetry of the numerator: num(-t-n) = (-1)^delta num(t); the
    // denominator is invariant, being an even power of (t)_{n+1}
    let reflected = num.compose_linear(&rat_int(-1), &rat_int(-(n as i64)));
    let signed = if delta == 1 { num.neg() } else { num.clone() };
    assert!(reflected == signed, "kernel symmetry violated");

    let den = pochhammer(&BigRational::zero(), n + 1).pow(2 * s + 4);
    let f = RatFun::from_coprime(num, den);
    assert_eq!(
        f.degree(),
        Some(delta as i64 - 2 * s as i64 - 4),
        "kernel degree contract violated"
    );
    let poles = (0..=n)
        .map(|k| (rat_int(k as i64), 2 * s + 4))
        .collect();
    Kernel { f, poles }
}

/// Kernel for the narrow-window linear forms:
///
///   2^((3s+6)n) (t+3/4)_n^(s+2) / (t)_{n+1}^(s+2)
pub fn t_kernel(n: u32, s: u32) -> Kernel {
    assert!(n >= 1, "kernel needs n >= 1");
    let p34 = pochhammer(&rat(3, 4), n);
    let scalar = BigRational::from_integer(BigInt::one() << ((3 * s as u64 + 6) * n as u64));
    let num = p34.pow(s + 2).scale(&scalar);
    let den = pochhammer(&BigRational::zero(), n + 1).pow(s + 2);
    let f = RatFun::from_coprime(num, den);
    assert_eq!(
        f.degree(),
        Some(-(s as i64 + 2)),
        "kernel degree contract violated"
    );
    let poles = (0..=n).map(|k| (rat_int(k as i64), s + 2)).collect();
    Kernel { f, poles }
}

/// Outcome of the auxiliary-function Taylor-integrality sweep.
#[derive(Debug, Clone)]
pub struct TaylorIntegralityCheck {
    pub n: u32,
    pub order_max: u32,
    pub checks: usize,
    pub pass: bool,
    pub first_failure: Option<String>,
}

/// Verify that d_n^l times the order-l Taylor coefficient at every
/// t = -k (0 <= k <= n) is an integer, for the three auxiliary
/// functions 2^{3n}(t+1/4)_n/n!, 2^{3n}(t+3/4)_n/n! and n!(t+k)/(t)_{n+1}.
pub fn kernel_taylor_integrality_check(n: u32, order_max: u32) -> TaylorIntegralityCheck {
    let dn = crate::numcore::lcm_upto(n as u64);
    let n_fact = factorial(n as u64);
    let two_3n = BigRational::from_integer(BigInt::one() << (3 * n as u64));
    let scalar = two_3n / BigRational::from_integer(n_fact.clone());
    let f14 = pochhammer(&rat(1, 4), n).scale(&scalar);
    let f34 = pochhammer(&rat(3, 4), n).scale(&scalar);
    let full = pochhammer(&BigRational::zero(), n + 1);

    let mut checks = 0usize;
    let mut first_failure = None;

    let mut record = |family: &str, k: u32, l: u32, coeff: &BigRational, fail: &mut Option<String>| {
        checks += 1;
        let mut power = BigRational::one();
        for _ in 0..l {
            power *= BigRational::from_integer(dn.clone());
        }
        let scaled = coeff * power;
        if !scaled.is_integer() && fail.is_none() {
            *fail = Some(format!(
                "{family}: k = {k}, order {l}: d_n^{l} * {scaled} is not an integer"
            ));
        }
    };

    for k in 0..=n {
        let point = rat_int(-(k as i64));
        let c14 = f14.taylor_prefix(&point, order_max as usize);
        let c34 = f34.taylor_prefix(&point, order_max as usize);
        // (t+k) G(t) = n! / prod_{l != k} (t + l)
        let (reduced, r) = full.deflate(&point);
        debug_assert!(r.is_zero());
        let den_prefix = reduced.taylor_prefix(&point, order_max as usize);
        let inv = invert_series(&den_prefix, order_max as usize);
        for l in 0..=order_max {
            record("F(1/4)", k, l, &c14[l as usize], &mut first_failure);
            record("F(3/4)", k, l, &c34[l as usize], &mut first_failure);
            let g_coeff = &inv[l as usize] * BigRational::from_integer(n_fact.clone());
            record("(t+k)G", k, l, &g_coeff, &mut first_failure);
        }
    }

    TaylorIntegralityCheck {
        n,
        order_max,
        checks,
        pass: first_failure.is_none(),
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::v2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn s_kernel_small_instance() {
        let kernel = s_kernel(1, 0, 0);
        assert_eq!(kernel.f.degree(), Some(-4));
        // compare against the defining product at a non-pole point
        let t = rat(3, 2);
        let direct = rat_int(1 << 12)
            * (rat(3, 2) + rat(1, 4)).pow(2)
            * (rat(3, 2) + rat(3, 4)).pow(2)
            / (rat(3, 2) * rat(5, 2)).pow(4);
        assert_eq!(kernel.f.eval(&t).unwrap(), direct);
        assert_eq!(kernel.poles.len(), 2);
        assert_eq!(kernel.poles[0], (rat_int(0), 4));
    }

    #[test]
    fn s_kernel_degree_example() {
        assert_eq!(s_kernel(3, 1, 1).f.degree(), Some(-5));
    }

    #[test]
    fn s_kernel_symmetry_at_a_point() {
        for delta in [0u8, 1] {
            let kernel = s_kernel(2, 0, delta);
            let t = rat(1, 3);
            let reflected = kernel.f.eval(&(-&t - rat_int(2))).unwrap();
            let direct = kernel.f.eval(&t).unwrap();
            let expected = if delta == 1 { -direct } else { direct };
            assert_eq!(reflected, expected);
        }
    }

    #[test]
    fn t_kernel_small_instances() {
        let kernel = t_kernel(1, 0);
        assert_eq!(kernel.f.degree(), Some(-2));
        let t = rat(1, 2);
        let direct =
            rat_int(1 << 6) * (rat(1, 2) + rat(3, 4)).pow(2) / (rat(1, 2) * rat(3, 2)).pow(2);
        assert_eq!(kernel.f.eval(&t).unwrap(), direct);

        let k21 = t_kernel(2, 1);
        let expected_den = pochhammer(&rat_int(0), 3).pow(3);
        assert_eq!(k21.f.den(), &expected_den);
    }

    #[test]
    fn derivative_examples() {
        let inv_t = RatFun::new(Poly::one(), Poly::t_plus(rat_int(0))).unwrap();
        let d = inv_t.derivative();
        assert_eq!(d.num(), &Poly::constant(rat_int(-1)));
        assert_eq!(d.den(), &Poly::t_plus(rat_int(0)).pow(2));

        let p = RatFun::from_poly(Poly::from_coeffs(vec![rat_int(1), rat_int(4), rat_int(2)]));
        assert!(p.derivative_n(3).is_zero());
    }

    #[test]
    fn derivative_matches_termwise_partial_fractions() {
        let kernel = s_kernel(1, 0, 0);
        let decomp = partial_fractions(&kernel.f, &kernel.poles).unwrap();
        let d2 = kernel.f.derivative_n(2);
        let t = rat(1, 3);
        // termwise: d^2/dt^2 of a/(t+c)^i = a i(i+1)/(t+c)^{i+2}
        let mut expected = BigRational::zero();
        for ((c, i), coeff) in &decomp.terms {
            let i = *i as i64;
            let base = &t + c;
            expected += coeff * rat_int(i * (i + 1)) / base.pow(i as u32 + 2);
        }
        assert_eq!(d2.eval(&t).unwrap(), expected);
    }

    #[test]
    fn taylor_examples() {
        let f = RatFun::new(Poly::one(), Poly::t_plus(rat_int(1))).unwrap();
        assert_eq!(
            taylor_at(&f, &rat_int(0), 2).unwrap(),
            vec![rat_int(1), rat_int(-1), rat_int(1)]
        );

        let sq = RatFun::from_poly(Poly::t_plus(rat_int(0)).pow(2));
        assert_eq!(
            taylor_at(&sq, &rat_int(1), 2).unwrap(),
            vec![rat_int(1), rat_int(2), rat_int(1)]
        );

        let shifted = RatFun::from_poly(Poly::t_plus(rat(1, 4)).pow(2));
        assert_eq!(
            taylor_at(&shifted, &rat_int(-1), 1).unwrap(),
            vec![rat(9, 16), rat(-3, 2)]
        );

        assert!(matches!(
            taylor_at(&f, &rat_int(-1), 1),
            Err(Error::PoleAtExpansionPoint(_))
        ));
    }

    #[test]
    fn partial_fractions_simple_product() {
        let f = RatFun::new(
            Poly::one(),
            Poly::t_plus(rat_int(0)).mul(&Poly::t_plus(rat_int(1))),
        )
        .unwrap();
        let poles = vec![(rat_int(0), 1), (rat_int(1), 1)];
        let d = partial_fractions(&f, &poles).unwrap();
        assert_eq!(d.coefficient(&rat_int(0), 1), rat_int(1));
        assert_eq!(d.coefficient(&rat_int(1), 1), rat_int(-1));
        assert!(d.poly_part.is_zero());
    }

    #[test]
    fn kernel_corner_coefficients() {
        let kernel = s_kernel(1, 0, 0);
        let d = partial_fractions(&kernel.f, &kernel.poles).unwrap();
        // (t+k)^4 f(t) at t = -k evaluates to 144 at both k = 0 and k = 1
        assert_eq!(d.coefficient(&rat_int(0), 4), rat_int(144));
        assert_eq!(d.coefficient(&rat_int(1), 4), rat_int(144));
        // order-1 coefficients of a degree <= -2 function sum to zero
        let sum: BigRational = (0..=1).map(|k| d.coefficient(&rat_int(k), 1)).sum();
        assert!(sum.is_zero());
    }

    #[test]
    fn pole_list_errors() {
        let f = RatFun::new(
            Poly::one(),
            Poly::t_plus(rat_int(0)).pow(2).mul(&Poly::t_plus(rat_int(1))),
        )
        .unwrap();
        // missing pole
        assert!(matches!(
            partial_fractions(&f, &[(rat_int(0), 2)]),
            Err(Error::IncompletePoleList(_))
        ));
        // wrong multiplicity split
        assert!(matches!(
            partial_fractions(&f, &[(rat_int(0), 1), (rat_int(1), 2)]),
            Err(Error::IncompletePoleList(_))
        ));
        // bogus shift
        assert!(matches!(
            partial_fractions(&f, &[(rat_int(0), 2), (rat_int(2), 1)]),
            Err(Error::IncompletePoleList(_))
        ));
    }

    #[test]
    fn decomposition_roundtrip_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let mut terms = BTreeMap::new();
            let n_poles = rng.gen_range(1..=3usize);
            for p in 0..n_poles {
                let shift = rat_int(p as i64 * 2 - 1);
                let m = rng.gen_range(1..=3u32);
                for i in 1..=m {
                    let c = rng.gen_range(-6i64..=6);
                    if c != 0 {
                        terms.insert((shift.clone(), i), rat_int(c));
                    }
                }
            }
            if terms.is_empty() {
                continue;
            }
            let poly_part = Poly::from_coeffs(vec![rat_int(rng.gen_range(-3i64..=3))]);
            let d = PartialFractionDecomp { poly_part, terms };
            let f = d.assemble().unwrap();
            let poles: Vec<(BigRational, u32)> = {
                let mut max: BTreeMap<BigRational, u32> = BTreeMap::new();
                for (c, i) in d.terms.keys() {
                    let e = max.entry(c.clone()).or_insert(0);
                    *e = (*e).max(*i);
                }
                max.into_iter().collect()
            };
            let d2 = partial_fractions(&f, &poles).unwrap();
            assert_eq!(d2.poly_part, d.poly_part);
            for (key, coeff) in &d.terms {
                assert_eq!(&d2.coefficient(&key.0, key.1), coeff);
            }
        }
    }

    #[test]
    fn order_one_residues_sum_to_zero_when_degree_low() {
        for (n, s, delta) in [(2, 0, 0), (2, 0, 1), (3, 1, 0)] {
            let kernel = s_kernel(n, s, delta);
            let d = partial_fractions(&kernel.f, &kernel.poles).unwrap();
            let sum: BigRational = (0..=n).map(|k| d.coefficient(&rat_int(k as i64), 1)).sum();
            assert!(sum.is_zero(), "(n, s, delta) = ({n}, {s}, {delta})");
        }
    }

    #[test]
    fn taylor_integrality_small_sweeps() {
        let check = kernel_taylor_integrality_check(3, 3);
        assert!(check.pass, "{:?}", check.first_failure);
        let check = kernel_taylor_integrality_check(7, 4);
        assert!(check.pass, "{:?}", check.first_failure);
    }

    #[test]
    fn b12_circular_guard() {
        // 2-adic content of the small kernel coefficients is positive,
        // matching the 2-power prefactor
        let kernel = s_kernel(1, 0, 0);
        let d = partial_fractions(&kernel.f, &kernel.poles).unwrap();
        for coeff in d.terms.values() {
            assert!(v2(coeff).unwrap() >= 0);
        }
    }
}
