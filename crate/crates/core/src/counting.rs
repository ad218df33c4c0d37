//! Coprime-pair counts on `[n1] x [n2]` and their densities.
//!
//! `q(n1, n2)` is computed two ways: by enumerating every pair and testing
//! `gcd`, and by Möbius inversion
//! `q = Σ_{k <= n1∧n2} μ(k) ⌊n1/k⌋ ⌊n2/k⌋`. Reports carry the density
//! `q/(n1 n2)`, the partial sum `Σ_{k<=n1∧n2} μ(k)/k²` and the envelope
//! `(n1 + n2) H_{n1∧n2} / (n1 n2)` that bounds their difference, all exact.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::constants;
use crate::rational::{self, harmonic, scale_reduced, sum_reciprocal_powers};
use crate::sieve::{gcd, MobiusTable};
use crate::{Error, Result};

/// Default cap on pair evaluations for [`count_coprime_brute`].
pub const BRUTE_FORCE_CAP: u64 = 100_000_000;

fn check_sides(n1: u64, n2: u64) -> Result<()> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "side lengths must be positive, got ({n1}, {n2})"
        )));
    }
    Ok(())
}

/// Counts coprime pairs in `[n1] x [n2]` by testing every pair.
///
/// Refuses when `n1 * n2` exceeds `cap`.
pub fn count_coprime_brute(n1: u64, n2: u64, cap: u64) -> Result<u64> {
    check_sides(n1, n2)?;
    let requested = n1 as u128 * n2 as u128;
    if requested > cap as u128 {
        return Err(Error::BruteForceCap { requested, cap });
    }
    let mut count = 0u64;
    for a in 1..=n1 {
        count += (1..=n2).filter(|&b| gcd(a, b) == 1).count() as u64;
    }
    Ok(count)
}

/// Counts coprime pairs in `[n1] x [n2]` as `Σ μ(k) ⌊n1/k⌋ ⌊n2/k⌋`.
pub fn count_coprime_mobius(n1: u64, n2: u64, mobius: &MobiusTable) -> Result<u128> {
    check_sides(n1, n2)?;
    let m = n1.min(n2);
    mobius.require(m)?;
    let mut total: i128 = 0;
    for (k, &mu) in (1..=m).zip(mobius.values()) {
        if mu == 0 {
            continue;
        }
        let term = ((n1 / k) as i128)
            .checked_mul((n2 / k) as i128)
            .ok_or(Error::Overflow("Möbius count term"))?;
        total = if mu > 0 {
            total.checked_add(term)
        } else {
            total.checked_sub(term)
        }
        .ok_or(Error::Overflow("Möbius count sum"))?;
    }
    u128::try_from(total).map_err(|_| Error::Internal(format!("negative count {total}")))
}

/// Exact density data for one rectangle `[n1] x [n2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub n1: u64,
    pub n2: u64,
    /// `q(n1, n2)`.
    pub count: u128,
    /// `count / (n1 n2)`.
    pub ratio: BigRational,
    /// `Σ_{k<=n1∧n2} μ(k)/k²`.
    pub mobius_partial_sum: BigRational,
    /// `(n1 + n2) H_{n1∧n2} / (n1 n2)`.
    pub error_bound: BigRational,
}

impl DensityReport {
    /// Decimal string of `6/π²` the report converges to.
    pub fn limit_reference(&self) -> &'static str {
        constants::SIX_OVER_PI_SQUARED
    }

    /// `|ratio - partial sum| <= error_bound`, decided exactly.
    pub fn envelope_holds(&self) -> bool {
        rational::abs_diff_le(&self.ratio, &self.mobius_partial_sum, &self.error_bound)
    }

    /// Certified bound on `|ratio - 6/π²|`: the envelope plus the tail
    /// `Σ_{k>m} 1/k² < 1/(m-1)` of the partial sum, `m = n1∧n2 >= 2`.
    pub fn limit_gap_bound(&self) -> Option<BigRational> {
        let m = self.n1.min(self.n2);
        (m >= 2).then(|| {
            let tail = BigRational::new(BigInt::from(1u8), BigInt::from(m - 1));
            rational::add_unreduced(&self.error_bound, &tail)
        })
    }

    /// `|ratio - 6/π²| <= limit_gap_bound()`, allowing for the truncation of
    /// the stored constant.
    pub fn limit_gap_covered(&self) -> bool {
        let Some(bound) = self.limit_gap_bound() else {
            return false;
        };
        let bound = rational::add_unreduced(&bound, &constants::six_over_pi_squared_ulp());
        rational::abs_diff_le(&self.ratio, &constants::six_over_pi_squared(), &bound)
    }
}

/// Builds the full [`DensityReport`] for `[n1] x [n2]`.
pub fn density(n1: u64, n2: u64, mobius: &MobiusTable) -> Result<DensityReport> {
    let count = count_coprime_mobius(n1, n2, mobius)?;
    let m = n1.min(n2);
    let m32 = u32::try_from(m)
        .map_err(|_| Error::InvalidArgument(format!("min(n1, n2) = {m} exceeds u32")))?;
    let area = n1 as u128 * n2 as u128;
    let ratio = BigRational::new(BigInt::from(count), BigInt::from(area));
    let mobius_partial_sum =
        sum_reciprocal_powers(m32, 2, |k| mobius.get(k as u64).map_or(0, i64::from));
    let error_bound = scale_reduced(&harmonic(m32), n1 as u128 + n2 as u128, area);
    let report = DensityReport {
        n1,
        n2,
        count,
        ratio,
        mobius_partial_sum,
        error_bound,
    };
    if !report.envelope_holds() {
        return Err(Error::Internal(format!(
            "error envelope violated at ({n1}, {n2})"
        )));
    }
    Ok(report)
}

/// One square report `(n, n)` per side length, in input order.
pub fn density_table(side_lengths: &[u64], mobius: &MobiusTable) -> Result<Vec<DensityReport>> {
    side_lengths
        .iter()
        .map(|&n| {
            density(n, n, mobius).map_err(|e| Error::Row {
                n,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Coprime counts for every sub-rectangle of `[side] x [side]`, obtained by
/// testing `gcd` on each cell once and accumulating 2-D prefix sums.
///
/// Gives `count_coprime_brute(n1, n2)` for all `n1, n2 <= side` at the cost
/// of a single enumeration.
#[derive(Debug, Clone)]
pub struct CoprimeGrid {
    side: u64,
    prefix: Vec<u64>,
}

impl CoprimeGrid {
    pub fn enumerate(side: u64, cap: u64) -> Result<Self> {
        check_sides(side, side)?;
        let requested = side as u128 * side as u128;
        if requested > cap as u128 {
            return Err(Error::BruteForceCap { requested, cap });
        }
        let w = side as usize + 1;
        let mut prefix = vec![0u64; w * w];
        for a in 1..w {
            let mut row = 0u64;
            for b in 1..w {
                row += u64::from(gcd(a as u64, b as u64) == 1);
                prefix[a * w + b] = prefix[(a - 1) * w + b] + row;
            }
        }
        Ok(Self { side, prefix })
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    /// `q(n1, n2)` for `1 <= n1, n2 <= side`.
    pub fn count(&self, n1: u64, n2: u64) -> Option<u64> {
        if n1 == 0 || n2 == 0 || n1 > self.side || n2 > self.side {
            return None;
        }
        let w = self.side as usize + 1;
        Some(self.prefix[n1 as usize * w + n2 as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::sieve::build_mobius_table;
    use num_traits::One;

    fn mu(limit: u64) -> MobiusTable {
        build_mobius_table(limit).unwrap()
    }

    #[test]
    fn brute_examples() {
        assert_eq!(count_coprime_brute(1, 1, BRUTE_FORCE_CAP).unwrap(), 1);
        // Enumerated by hand: the 5 non-coprime pairs in [4]² are
        // (2,2), (2,4), (4,2), (4,4), (3,3).
        assert_eq!(count_coprime_brute(4, 4, BRUTE_FORCE_CAP).unwrap(), 11);
        for n in 1..50 {
            assert_eq!(count_coprime_brute(1, n, BRUTE_FORCE_CAP).unwrap(), n);
        }
    }

    #[test]
    fn brute_respects_cap() {
        let err = count_coprime_brute(20_000, 20_000, BRUTE_FORCE_CAP).unwrap_err();
        assert!(matches!(err, Error::BruteForceCap { requested, .. } if requested == 400_000_000));
        assert!(count_coprime_brute(10, 10, 99).is_err());
        assert!(count_coprime_brute(10, 10, 100).is_ok());
        assert!(count_coprime_brute(0, 3, 100).is_err());
    }

    #[test]
    fn mobius_examples() {
        let t = mu(10);
        assert_eq!(count_coprime_mobius(4, 4, &t).unwrap(), 11);
        assert_eq!(count_coprime_mobius(1, 1, &t).unwrap(), 1);
        // Only min(n1, n2) needs to be covered by the table.
        assert_eq!(count_coprime_mobius(1, 1_000_000, &t).unwrap(), 1_000_000);
    }

    #[test]
    fn mobius_needs_table() {
        let t = mu(10);
        assert!(matches!(
            count_coprime_mobius(11, 11, &t),
            Err(Error::TableTooSmall { needed: 11, .. })
        ));
    }

    #[test]
    fn mobius_matches_brute_at_1000() {
        let t = mu(1000);
        let brute = count_coprime_brute(1000, 1000, BRUTE_FORCE_CAP).unwrap();
        assert_eq!(count_coprime_mobius(1000, 1000, &t).unwrap(), brute as u128);
    }

    #[test]
    fn grid_matches_brute() {
        let grid = CoprimeGrid::enumerate(40, BRUTE_FORCE_CAP).unwrap();
        for n1 in 1..=40 {
            for n2 in 1..=40 {
                assert_eq!(
                    grid.count(n1, n2).unwrap(),
                    count_coprime_brute(n1, n2, BRUTE_FORCE_CAP).unwrap()
                );
            }
        }
        assert_eq!(grid.count(41, 1), None);
    }

    #[test]
    fn density_examples() {
        let t = mu(100);
        let r = density(1, 1, &t).unwrap();
        assert_eq!(r.ratio, BigRational::one());
        assert_eq!(r.mobius_partial_sum, BigRational::one());
        assert_eq!(r.error_bound, ratio(2, 1));

        let r = density(4, 4, &t).unwrap();
        assert_eq!(r.count, 11);
        assert_eq!(r.ratio, ratio(11, 16));
        // 1 - 1/4 - 1/9 = 23/36; H_4 = 25/12; 8·(25/12)/16 = 25/24.
        assert_eq!(r.mobius_partial_sum, ratio(23, 36));
        assert_eq!(r.error_bound, ratio(25, 24));
        assert!(r.envelope_holds());
    }

    #[test]
    fn asymmetric_density_truncates_at_min() {
        let t = mu(100);
        let r = density(3, 50, &t).unwrap();
        // 1 - 1/4 - 1/9 = 23/36
        assert_eq!(r.mobius_partial_sum, ratio(23, 36));
        assert_eq!(
            r.count,
            count_coprime_brute(3, 50, BRUTE_FORCE_CAP).unwrap() as u128
        );
    }

    #[test]
    fn table_rows_and_errors() {
        let t = mu(1000);
        let rows = density_table(&[1, 4, 10, 100, 1000], &t).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].ratio, BigRational::one());
        assert_eq!(rows[1].ratio, ratio(11, 16));
        for row in &rows {
            let brute = count_coprime_brute(row.n1, row.n2, BRUTE_FORCE_CAP).unwrap();
            assert_eq!(row.count, brute as u128);
        }
        let err = density_table(&[4, 2000, 5], &t).unwrap_err();
        assert!(matches!(err, Error::Row { n: 2000, .. }));
    }

    #[test]
    fn envelope_shrinks_and_covers_limit() {
        let t = mu(400);
        let mut previous: Option<BigRational> = None;
        for n in 2..=400 {
            let r = density(n, n, &t).unwrap();
            assert!(r.limit_gap_covered(), "n = {n}");
            if let Some(prev) = &previous {
                assert_eq!(
                    rational::cmp(&r.error_bound, prev),
                    core::cmp::Ordering::Less,
                    "n = {n}"
                );
            }
            previous = Some(r.error_bound);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn counts_agree_and_are_symmetric(n1 in 1u64..400, n2 in 1u64..400) {
            let t = mu(400);
            let brute = count_coprime_brute(n1, n2, BRUTE_FORCE_CAP).unwrap() as u128;
            proptest::prop_assert_eq!(count_coprime_mobius(n1, n2, &t).unwrap(), brute);
            proptest::prop_assert_eq!(count_coprime_mobius(n2, n1, &t).unwrap(), brute);
            let r = density(n1, n2, &t).unwrap();
            proptest::prop_assert!(r.envelope_holds());
        }
    }
}
