//! Bernoulli numbers under the B_1 = -1/2 convention, with a
//! synchronized, optionally disk-backed cache.
//!
//! The convention matters: with B_1 = -1/2 the Volkenborn integral of
//! t^i over Z_2 equals B_i exactly, which is what the series engine
//! relies on. The other sign convention silently breaks every zeta
//! value downstream.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numcore::{rat, v2};

/// Memoized Bernoulli numbers B_0, B_1, ..., safe for concurrent use.
///
/// Values are computed with the defining recurrence
/// sum_{j=0}^{i} C(i+1, j) B_j = 0 (i >= 1) in exact rationals.
pub struct BernoulliCache {
    values: RwLock<Vec<BigRational>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: RwLock::new(vec![BigRational::one()]),
        }
    }

    /// Largest index currently held.
    pub fn max_index(&self) -> usize {
        self.values.read().unwrap().len() - 1
    }

    /// B_i, extending the cache if needed.
    pub fn value(&self, i: usize) -> BigRational {
        {
            let values = self.values.read().unwrap();
            if i < values.len() {
                return values[i].clone();
            }
        }
        let mut values = self.values.write().unwrap();
        extend_to(&mut values, i);
        values[i].clone()
    }

    /// Make sure B_0..B_target are present.
    pub fn ensure(&self, target: usize) {
        let mut values = self.values.write().unwrap();
        extend_to(&mut values, target);
    }

    /// Replace the cache contents from a file, validating every line and
    /// the structural invariants. Format: `<index>\t<num>/<den>` with
    /// ascending, gap-free indices starting at 0.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let path_str = path.display().to_string();
        let mut loaded: Vec<BigRational> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::CacheFormat {
                path: path_str.clone(),
                line: lineno,
                message,
            };
            let (index_part, value_part) = line
                .split_once('\t')
                .ok_or_else(|| err("missing TAB separator".into()))?;
            let index: usize = index_part
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index `{index_part}`")))?;
            if index != loaded.len() {
                return Err(err(format!(
                    "expected index {}, found {}",
                    loaded.len(),
                    index
                )));
            }
            let (num_part, den_part) = value_part
                .trim()
                .split_once('/')
                .ok_or_else(|| err("value must be written num/den".into()))?;
            let num: BigInt = num_part
                .parse()
                .map_err(|_| err(format!("bad numerator `{num_part}`")))?;
            let den: BigInt = den_part
                .parse()
                .map_err(|_| err(format!("bad denominator `{den_part}`")))?;
            if den.is_zero() || den.is_negative() {
                return Err(err("denominator must be positive".into()));
            }
            loaded.push(BigRational::new(num, den));
        }
        if loaded.is_empty() {
            return Err(Error::CacheFormat {
                path: path_str,
                line: 0,
                message: "cache file holds no records".into(),
            });
        }
        validate(&loaded).map_err(|message| Error::CacheFormat {
            path: path_str.clone(),
            line: 0,
            message,
        })?;
        let count = loaded.len();
        *self.values.write().unwrap() = loaded;
        Ok(count)
    }

    /// Write all cached values to a file in load-compatible format.
    pub fn save(&self, path: &Path) -> Result<()> {
        let values = self.values.read().unwrap();
        let mut out = std::fs::File::create(path)?;
        for (i, b) in values.iter().enumerate() {
            writeln!(out, "{}\t{}/{}", i, b.numer(), b.denom())?;
        }
        Ok(())
    }
}

/// Structural invariants of a Bernoulli table.
fn validate(values: &[BigRational]) -> std::result::Result<(), String> {
    if values[0] != BigRational::one() {
        return Err("B_0 must equal 1".into());
    }
    if values.len() > 1 && values[1] != rat(-1, 2) {
        return Err("B_1 must equal -1/2".into());
    }
    for (i, b) in values.iter().enumerate() {
        if i >= 3 && i % 2 == 1 {
            if !b.is_zero() {
                return Err(format!("B_{i} must vanish for odd i >= 3"));
            }
            continue;
        }
        if !b.is_zero() && v2(b).unwrap() < -1 {
            return Err(format!("B_{i} violates the von Staudt-Clausen bound"));
        }
    }
    Ok(())
}

fn extend_to(values: &mut Vec<BigRational>, target: usize) {
    use num_integer::Integer;
    if values.len() > target {
        return;
    }
    // Accumulate each row over one common denominator so the expensive
    // rational reduction happens once per row, not once per term.
    let mut common = BigInt::one();
    for b in values.iter() {
        common = common.lcm(b.denom());
    }
    while values.len() <= target {
        let i = values.len();
        // B_i = -1/(i+1) * sum_{j<i} C(i+1, j) B_j
        let mut acc = BigInt::zero();
        let mut binom = BigInt::one();
        for (j, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += &binom * b.numer() * (&common / b.denom());
            }
            // C(i+1, j+1) from C(i+1, j)
            binom = binom * BigInt::from((i + 1 - j) as u64) / BigInt::from((j + 1) as u64);
        }
        let b_i = BigRational::new(-acc, &common * BigInt::from((i + 1) as u64));
        common = common.lcm(b_i.denom());
        values.push(b_i);
    }
}

static GLOBAL: OnceLock<BernoulliCache> = OnceLock::new();

/// Global, process-wide Bernoulli cache.
pub fn global_cache() -> &'static BernoulliCache {
    GLOBAL.get_or_init(BernoulliCache::new)
}

/// B_i from the global cache.
pub fn bernoulli(i: usize) -> BigRational {
    global_cache().value(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::rat_int;

    #[test]
    fn base_values() {
        assert_eq!(bernoulli(0), rat_int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
    }

    #[test]
    fn b12_value_and_denominator_structure() {
        let b12 = bernoulli(12);
        assert_eq!(b12, rat(-691, 2730));
        // von Staudt-Clausen: denominator of B_12 is the product of the
        // primes p with (p-1) | 12, i.e. 2*3*5*7*13 = 2730
        assert_eq!(b12.denom(), &BigInt::from(2730));
        assert!(v2(&b12).unwrap() >= -1);
    }

    #[test]
    fn odd_indices_vanish() {
        for i in (3..60).step_by(2) {
            assert!(bernoulli(i).is_zero(), "B_{i} should vanish");
        }
    }

    #[test]
    fn von_staudt_clausen_lower_bound_sweep() {
        let cache = BernoulliCache::new();
        cache.ensure(400);
        for i in 0..=400 {
            let b = cache.value(i);
            if !b.is_zero() {
                assert!(v2(&b).unwrap() >= -1, "v2(B_{i}) < -1");
            }
        }
    }

    #[test]
    fn save_load_roundtrip() {
        let cache = BernoulliCache::new();
        cache.ensure(25);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bernoulli.tsv");
        cache.save(&path).unwrap();

        let reloaded = BernoulliCache::new();
        let count = reloaded.load(&path).unwrap();
        assert_eq!(count, 26);
        assert_eq!(reloaded.value(12), rat(-691, 2730));
    }

    #[test]
    fn load_rejects_malformed_lines_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tsv");
        std::fs::write(&path, "0\t1/1\n1\t-1/2\nbroken line\n").unwrap();
        let cache = BernoulliCache::new();
        match cache.load(&path) {
            Err(Error::CacheFormat { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected CacheFormat error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_gaps_and_bad_values() {
        let dir = tempfile::tempdir().unwrap();
        let gap = dir.path().join("gap.tsv");
        std::fs::write(&gap, "0\t1/1\n2\t1/6\n").unwrap();
        assert!(BernoulliCache::new().load(&gap).is_err());

        let wrong = dir.path().join("wrong.tsv");
        std::fs::write(&wrong, "0\t1/1\n1\t1/2\n").unwrap();
        assert!(BernoulliCache::new().load(&wrong).is_err());
    }
}
