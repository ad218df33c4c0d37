//! Prime and Möbius tables plus the integer primitives built on them.
//!
//! Both tables come out of a linear sieve: every composite is crossed off
//! exactly once, by its smallest prime factor, so construction is `O(limit)`.
//! Tables are immutable once built and can be shared freely between threads.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// All primes up to a limit, in increasing order.
///
/// Ranks are 1-based: `p_1 = 2`, `p_2 = 3`, and so on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "prime table limit must be at least 2, got {limit}"
            )));
        }
        let n = to_index(limit)?;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
            }
            for &p in &primes {
                let p = p as usize;
                let Some(m) = i.checked_mul(p).filter(|&m| m <= n) else {
                    break;
                };
                composite[m] = true;
                if i % p == 0 {
                    break;
                }
            }
        }
        Ok(Self { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The prime of the given 1-based rank.
    pub fn nth(&self, rank: usize) -> Option<u64> {
        rank.checked_sub(1)
            .and_then(|i| self.primes.get(i).copied())
    }

    /// 1-based rank of `p`, or `None` if `p` is not a prime in the table.
    pub fn rank(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    /// The first `count` primes, or an error if the table holds fewer.
    pub fn first(&self, count: usize) -> Result<&[u64]> {
        self.primes.get(..count).ok_or(Error::TableTooSmall {
            table: "prime",
            needed: count as u64,
            limit: self.primes.len() as u64,
        })
    }

    /// Primality for `n <= limit`; `None` beyond the table.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| self.primes.binary_search(&n).is_ok())
    }
}

/// Builds a [`PrimeTable`] holding every prime `<= limit`.
pub fn build_prime_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::new(limit)
}

/// Möbius function values `μ(1..=limit)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    limit: u64,
    // values[0] is unused and kept at 0.
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 1 {
            return Err(Error::InvalidArgument(
                "Möbius table limit must be at least 1".into(),
            ));
        }
        let n = to_index(limit)?;
        let mut values = vec![0i8; n + 1];
        let mut composite = vec![false; n + 1];
        let mut primes: Vec<usize> = Vec::new();
        values[1] = 1;
        for i in 2..=n {
            if !composite[i] {
                primes.push(i);
                values[i] = -1;
            }
            for &p in &primes {
                let Some(m) = i.checked_mul(p).filter(|&m| m <= n) else {
                    break;
                };
                composite[m] = true;
                if i % p == 0 {
                    values[m] = 0;
                    break;
                }
                values[m] = -values[i];
            }
        }
        Ok(Self { limit, values })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `μ(k)` for `1 <= k <= limit`.
    pub fn get(&self, k: u64) -> Option<i8> {
        if k == 0 || k > self.limit {
            return None;
        }
        Some(self.values[k as usize])
    }

    /// Values `μ(1), μ(2), ...` in order.
    pub fn values(&self) -> &[i8] {
        &self.values[1..]
    }

    pub(crate) fn require(&self, needed: u64) -> Result<()> {
        if needed > self.limit {
            return Err(Error::TableTooSmall {
                table: "Möbius",
                needed,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// Builds a [`MobiusTable`] for `1..=limit`.
pub fn build_mobius_table(limit: u64) -> Result<MobiusTable> {
    MobiusTable::new(limit)
}

/// Smallest-prime-factor table, used to factor many small integers quickly.
#[derive(Debug, Clone)]
pub(crate) struct FactorTable {
    spf: Vec<u32>,
}

impl FactorTable {
    pub(crate) fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                if p > spf[i] {
                    break;
                }
                let Some(m) = i.checked_mul(p as usize).filter(|&m| m <= n) else {
                    break;
                };
                spf[m] = p;
            }
        }
        Self { spf }
    }

    /// `(prime, exponent)` pairs of `n`, ascending. `n` must be within the table.
    pub(crate) fn factor(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            n /= p;
        }
        out
    }
}

/// Greatest common divisor, with `gcd(0, b) = b`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// `gcd` folded over a list; `0` for an empty list.
pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |g, &v| gcd(g, v))
}

/// Distinct prime factors of `n` in ascending order.
///
/// Trial division uses the primes in `table`. A cofactor left over after all
/// of them is accepted as prime only when it is below `(limit + 1)²`, which
/// rules out two factors above the limit; otherwise the cofactor is reported.
pub fn prime_factors(n: u64, table: &PrimeTable) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut out = Vec::new();
    for &p in table.primes() {
        if p.saturating_mul(p) > rest {
            break;
        }
        if rest % p == 0 {
            out.push(p);
            while rest % p == 0 {
                rest /= p;
            }
        }
    }
    if rest > 1 {
        let bound = (table.limit() as u128 + 1).pow(2);
        let largest = table.primes().last().copied().unwrap_or(1);
        let exhausted = (largest as u128).pow(2) <= rest as u128;
        if exhausted && rest as u128 >= bound {
            return Err(Error::UnfactoredCofactor {
                cofactor: rest,
                limit: table.limit(),
            });
        }
        out.push(rest);
    }
    Ok(out)
}

fn to_index(limit: u64) -> Result<usize> {
    usize::try_from(limit)
        .ok()
        .filter(|n| *n < usize::MAX)
        .ok_or_else(|| Error::InvalidArgument(format!("table limit {limit} too large")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_prime_tables() {
        assert_eq!(build_prime_table(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(build_prime_table(2).unwrap().primes(), &[2]);
        assert!(matches!(
            build_prime_table(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn prime_count_to_one_million() {
        let table = build_prime_table(1_000_000).unwrap();
        let trial = (2..=1_000_000u64).filter(|&n| is_prime_trial(n)).count();
        assert_eq!(trial, 78_498);
        assert_eq!(table.len(), trial);
    }

    #[test]
    fn prime_table_matches_trial_division() {
        let table = build_prime_table(100_000).unwrap();
        for n in 0..=100_000u64 {
            assert_eq!(table.is_prime(n), Some(is_prime_trial(n)), "n = {n}");
        }
        for (i, &p) in table.primes().iter().enumerate() {
            assert_eq!(table.rank(p), Some(i + 1));
            assert_eq!(table.nth(i + 1), Some(p));
        }
        assert_eq!(table.rank(4), None);
        assert_eq!(table.nth(0), None);
        assert_eq!(table.is_prime(100_001), None);
    }

    #[test]
    fn mobius_examples() {
        let mu = build_mobius_table(30).unwrap();
        assert_eq!(mu.get(1), Some(1));
        assert_eq!(mu.get(4), Some(0));
        assert_eq!(mu.get(6), Some(1));
        assert_eq!(mu.get(30), Some(-1));
        assert_eq!(mu.get(0), None);
        assert_eq!(mu.get(31), None);
        assert!(build_mobius_table(0).is_err());
    }

    #[test]
    fn mobius_divisor_sum_vanishes() {
        let mu = build_mobius_table(10_000).unwrap();
        let mut sums = vec![0i64; 10_001];
        for d in 1..=10_000usize {
            let v = mu.get(d as u64).unwrap() as i64;
            for m in (d..=10_000).step_by(d) {
                sums[m] += v;
            }
        }
        assert_eq!(sums[1], 1);
        assert!(sums[2..].iter().all(|&s| s == 0));
    }

    #[test]
    fn mobius_matches_factorization() {
        let mu = build_mobius_table(10_000).unwrap();
        let table = build_prime_table(100).unwrap();
        for n in 1..=10_000u64 {
            let ps = prime_factors(n, &table).unwrap();
            let radical: u64 = ps.iter().product();
            let expected = if radical != n {
                0
            } else if ps.len() % 2 == 0 {
                1
            } else {
                -1
            };
            assert_eq!(mu.get(n), Some(expected), "n = {n}");
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(0, 0), 0);
        for n in 0..50 {
            assert_eq!(gcd(1, n), 1);
        }
        assert_eq!(gcd_all(&[0, 2, 4, 6]), 2);
        assert_eq!(gcd_all(&[]), 0);
    }

    #[test]
    fn factor_examples() {
        let table = build_prime_table(100).unwrap();
        assert_eq!(prime_factors(12, &table).unwrap(), [2, 3]);
        assert_eq!(prime_factors(1, &table).unwrap(), Vec::<u64>::new());
        assert_eq!(prime_factors(210, &table).unwrap(), [2, 3, 5, 7]);
        // 9973 is prime and below 101², so trial division certifies it.
        assert_eq!(prime_factors(2 * 9973, &table).unwrap(), [2, 9973]);
    }

    #[test]
    fn factor_reports_uncertified_cofactor() {
        let table = build_prime_table(10).unwrap();
        assert_eq!(
            prime_factors(3 * 101 * 103, &table),
            Err(Error::UnfactoredCofactor {
                cofactor: 10_403,
                limit: 10
            })
        );
    }

    #[test]
    fn factor_table_agrees() {
        let spf = FactorTable::new(1000);
        assert_eq!(spf.factor(1), vec![]);
        assert_eq!(spf.factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(spf.factor(997), vec![(997, 1)]);
    }

    proptest::proptest! {
        #[test]
        fn gcd_divides_and_is_symmetric(a in 0u64..1_000_000, b in 0u64..1_000_000) {
            let g = gcd(a, b);
            proptest::prop_assert_eq!(g, gcd(b, a));
            if g != 0 {
                proptest::prop_assert_eq!(a % g, 0);
                proptest::prop_assert_eq!(b % g, 0);
                proptest::prop_assert_eq!(gcd(a / g, b / g), 1);
            }
        }
    }
}
