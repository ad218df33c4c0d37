//! The field of prime-divisibility cylinder sets and its product measure.
//!
//! `A_{I,J}` is the set of positive integers divisible by `p_i` for every
//! `i ∈ I` and by no `p_j` with `j ∈ J` (indices are prime ranks, `p_1 = 2`).
//! Under the product model each prime divides independently with probability
//! `1/p`, so `P{A_{I,J}} = Π_{i∈I} 1/p_i · Π_{j∈J} (1 - 1/p_j)`. Finite unions
//! of cylinders form a field; measures of unions are computed after expanding
//! every term into full cells over the common coordinate set.
//!
//! For pairs, the coprime set is the event that no prime divides both
//! coordinates. Its probability is the limit of [`euler_product`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::residue::euler_factor_product;
use crate::sieve::PrimeTable;
use crate::{Error, Result};

/// Largest coordinate set [`normalize`] expands over by default.
pub const NORMALIZE_CAP: usize = 24;

/// `A_{I,J}`: divisible by the primes ranked in `I`, by none ranked in `J`.
///
/// Both rank lists are kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CylinderSet {
    divisible: Vec<usize>,
    not_divisible: Vec<usize>,
}

impl CylinderSet {
    pub fn new(
        divisible: impl IntoIterator<Item = usize>,
        not_divisible: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let divisible = sorted_ranks(divisible);
        let not_divisible = sorted_ranks(not_divisible);
        if divisible.first() == Some(&0) || not_divisible.first() == Some(&0) {
            return Err(Error::InvalidArgument("prime ranks start at 1".into()));
        }
        if let Some(i) = merge_intersection(&divisible, &not_divisible).first() {
            return Err(Error::InvalidArgument(format!(
                "rank {i} is both required and excluded"
            )));
        }
        Ok(Self {
            divisible,
            not_divisible,
        })
    }

    /// `A_{∅,∅}`, all positive integers.
    pub fn whole() -> Self {
        Self::default()
    }

    /// Integers divisible by the prime of the given rank.
    pub fn divisible_by(rank: usize) -> Result<Self> {
        Self::new([rank], [])
    }

    pub fn divisible(&self) -> &[usize] {
        &self.divisible
    }

    pub fn not_divisible(&self) -> &[usize] {
        &self.not_divisible
    }

    /// `I ∪ J`, ascending.
    pub fn coordinates(&self) -> Vec<usize> {
        merge_union(&self.divisible, &self.not_divisible)
    }

    fn max_rank(&self) -> usize {
        let i = self.divisible.last().copied().unwrap_or(0);
        let j = self.not_divisible.last().copied().unwrap_or(0);
        i.max(j)
    }

    /// Two cylinders are disjoint when one requires a prime the other excludes.
    pub fn is_disjoint_from(&self, other: &CylinderSet) -> bool {
        !merge_intersection(&self.divisible, &other.not_divisible).is_empty()
            || !merge_intersection(&self.not_divisible, &other.divisible).is_empty()
    }
}

fn sorted_ranks(ranks: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = ranks.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn merge_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn merge_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// A finite union of cylinders.
///
/// `normalized` records that the terms are known to be pairwise disjoint, in
/// which case the measure is the plain sum of the term measures.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetExpression {
    terms: Vec<CylinderSet>,
    normalized: bool,
}

impl SetExpression {
    /// The empty set.
    pub fn empty() -> Self {
        Self {
            terms: Vec::new(),
            normalized: true,
        }
    }

    pub fn single(c: CylinderSet) -> Self {
        Self {
            terms: alloc::vec![c],
            normalized: true,
        }
    }

    /// An arbitrary union; not assumed disjoint.
    pub fn union_of(terms: Vec<CylinderSet>) -> Self {
        let normalized = terms.len() <= 1;
        Self { terms, normalized }
    }

    pub fn terms(&self) -> &[CylinderSet] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set union. The result is flagged disjoint only when it is trivially so.
    pub fn union(&self, other: &SetExpression) -> SetExpression {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        if self.terms.is_empty() {
            return other.clone();
        }
        if other.terms.is_empty() {
            return self.clone();
        }
        SetExpression::union_of(terms)
    }

    /// Set intersection, distributed over the terms.
    pub fn intersection(&self, other: &SetExpression) -> SetExpression {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                terms.extend(intersect(a, b).terms);
            }
        }
        // Pairwise intersections of two disjoint families are disjoint.
        let normalized = (self.normalized && other.normalized) || terms.len() <= 1;
        SetExpression { terms, normalized }
    }

    /// Membership of `n` in the union.
    pub fn contains(&self, n: u64, primes: &PrimeTable) -> Result<bool> {
        for t in &self.terms {
            if contains(t, n, primes)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn prime_of(rank: usize, primes: &PrimeTable) -> Result<u64> {
    primes.nth(rank).ok_or(Error::TableTooSmall {
        table: "prime",
        needed: rank as u64,
        limit: primes.len() as u64,
    })
}

fn require_ranks(c: &CylinderSet, primes: &PrimeTable) -> Result<()> {
    prime_of(c.max_rank().max(1), primes).map(|_| ())
}

/// `P{A_{I,J}} = Π_{i∈I} 1/p_i · Π_{j∈J} (1 - 1/p_j)`.
pub fn cylinder_measure(c: &CylinderSet, primes: &PrimeTable) -> Result<BigRational> {
    require_ranks(c, primes)?;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &i in &c.divisible {
        den *= prime_of(i, primes)?;
    }
    for &j in &c.not_divisible {
        let p = prime_of(j, primes)?;
        num *= p - 1;
        den *= p;
    }
    Ok(BigRational::new(num, den))
}

/// `A_{I1,J1} ∩ A_{I2,J2}`: empty on conflicting constraints, otherwise
/// `A_{I1∪I2, J1∪J2}`.
pub fn intersect(a: &CylinderSet, b: &CylinderSet) -> SetExpression {
    let divisible = merge_union(&a.divisible, &b.divisible);
    let not_divisible = merge_union(&a.not_divisible, &b.not_divisible);
    if !merge_intersection(&divisible, &not_divisible).is_empty() {
        return SetExpression::empty();
    }
    SetExpression::single(CylinderSet {
        divisible,
        not_divisible,
    })
}

/// Complement of `A_{I,J}` as the disjoint union of the cells
/// `A_{I', T∖I'}` over `I' ⊆ T = I ∪ J`, `I' ≠ I`.
///
/// Fails when `|T|` exceeds [`NORMALIZE_CAP`].
pub fn complement(c: &CylinderSet) -> Result<SetExpression> {
    let coords = c.coordinates();
    if coords.len() > NORMALIZE_CAP {
        return Err(Error::ResourceLimit {
            coordinates: coords.len(),
            cap: NORMALIZE_CAP,
        });
    }
    let own = mask_of(&coords, &c.divisible);
    let terms = (0..1u64 << coords.len())
        .filter(|&m| m != own)
        .map(|m| cell(&coords, m))
        .collect();
    Ok(SetExpression {
        terms,
        normalized: true,
    })
}

fn mask_of(coords: &[usize], members: &[usize]) -> u64 {
    coords
        .iter()
        .enumerate()
        .filter(|(_, r)| members.binary_search(r).is_ok())
        .fold(0, |m, (bit, _)| m | 1 << bit)
}

fn cell(coords: &[usize], mask: u64) -> CylinderSet {
    let mut c = CylinderSet::default();
    for (bit, &r) in coords.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            c.divisible.push(r);
        } else {
            c.not_divisible.push(r);
        }
    }
    c
}

/// Canonical disjoint form with the default cap, see [`normalize_with_cap`].
pub fn normalize(e: &SetExpression) -> Result<SetExpression> {
    normalize_with_cap(e, NORMALIZE_CAP)
}

/// Expands every term into full cells over `T`, the union of all mentioned
/// ranks, and removes duplicates. Cells are ordered by their bit pattern
/// over ascending ranks.
pub fn normalize_with_cap(e: &SetExpression, cap: usize) -> Result<SetExpression> {
    let coords = expression_coordinates(e);
    if coords.len() > cap.min(63) {
        return Err(Error::ResourceLimit {
            coordinates: coords.len(),
            cap,
        });
    }
    let cells = cell_masks(e, &coords);
    let terms = cells.into_iter().map(|m| cell(&coords, m)).collect();
    Ok(SetExpression {
        terms,
        normalized: true,
    })
}

fn expression_coordinates(e: &SetExpression) -> Vec<usize> {
    let mut all: Vec<usize> = e.terms.iter().flat_map(|t| t.coordinates()).collect();
    all.sort_unstable();
    all.dedup();
    all
}

fn cell_masks(e: &SetExpression, coords: &[usize]) -> BTreeSet<u64> {
    let mut cells = BTreeSet::new();
    for t in &e.terms {
        let required = mask_of(coords, &t.divisible);
        let fixed = required | mask_of(coords, &t.not_divisible);
        let free = !fixed & ((1u64 << coords.len()) - 1);
        // Enumerate all submasks of `free`.
        let mut sub = free;
        loop {
            cells.insert(required | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    cells
}

/// `P{e}` for a finite union, exact.
///
/// Everything is accumulated over the common denominator `Π_{t∈T} p_t`.
/// A disjoint term `A_{I,J}` contributes `Π_{j∈J} (p_j - 1) · Π_{t∉I∪J} p_t`;
/// an arbitrary union is first expanded into full cells over `T`.
pub fn measure(e: &SetExpression, primes: &PrimeTable) -> Result<BigRational> {
    for t in &e.terms {
        require_ranks(t, primes)?;
    }
    let coords = expression_coordinates(e);
    if e.normalized && coords.len() > 63 {
        return e.terms.iter().try_fold(BigRational::zero(), |acc, t| {
            Ok(acc + cylinder_measure(t, primes)?)
        });
    }
    let ps: Vec<u64> = coords
        .iter()
        .map(|&r| prime_of(r, primes))
        .collect::<Result<_>>()?;
    let den: BigUint = ps.iter().map(|&p| BigUint::from(p)).product();
    let weight = |divisible: u64, fixed: u64| -> BigUint {
        let mut w = BigUint::one();
        let mut small: u64 = 1;
        for (bit, &p) in ps.iter().enumerate() {
            let factor = if fixed >> bit & 1 == 0 {
                p
            } else if divisible >> bit & 1 == 0 {
                p - 1
            } else {
                continue;
            };
            match small.checked_mul(factor) {
                Some(v) => small = v,
                None => {
                    w *= small;
                    small = factor;
                }
            }
        }
        w * small
    };
    let mut num = BigUint::zero();
    if e.normalized {
        for t in &e.terms {
            let required = mask_of(&coords, &t.divisible);
            num += weight(required, required | mask_of(&coords, &t.not_divisible));
        }
    } else {
        if coords.len() > NORMALIZE_CAP {
            return Err(Error::ResourceLimit {
                coordinates: coords.len(),
                cap: NORMALIZE_CAP,
            });
        }
        let all = (1u64 << coords.len()) - 1;
        for mask in cell_masks(e, &coords) {
            num += weight(mask, all);
        }
    }
    Ok(BigRational::new(num.into(), den.into()))
}

/// Whether `n` lies in `A_{I,J}`.
pub fn contains(c: &CylinderSet, n: u64, primes: &PrimeTable) -> Result<bool> {
    require_ranks(c, primes)?;
    for &i in &c.divisible {
        if n % prime_of(i, primes)? != 0 {
            return Ok(false);
        }
    }
    for &j in &c.not_divisible {
        if n % prime_of(j, primes)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Π_{i <= prime_count} (1 - p_i⁻²)`, the product measure of the event that
/// none of the first `prime_count` primes divides both coordinates.
pub fn euler_product(prime_count: usize, primes: &PrimeTable) -> Result<BigRational> {
    if prime_count == 0 {
        return Err(Error::InvalidArgument(
            "prime_count must be positive".into(),
        ));
    }
    Ok(euler_factor_product(primes.first(prime_count)?))
}

/// Upper bound on `euler_product(prime_count) - 6/π²`.
///
/// The gap is at most `Σ_{p > P} p⁻² <= Σ_{k > P} k⁻² < 1/P`, with `P` the
/// last prime used.
pub fn euler_product_gap_bound(prime_count: usize, primes: &PrimeTable) -> Result<BigRational> {
    if prime_count == 0 {
        return Err(Error::InvalidArgument(
            "prime_count must be positive".into(),
        ));
    }
    let p = prime_of(prime_count, primes)?;
    Ok(BigRational::new(BigInt::one(), BigInt::from(p)))
}

/// Result of [`sample_coprime_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub prime_count: usize,
    pub samples: u64,
    pub seed: u64,
    /// Samples in which no prime divided both coordinates.
    pub hits: u64,
    pub estimate: f64,
    /// Binomial standard error `sqrt(p̂ (1 - p̂) / samples)`.
    pub standard_error: f64,
}

/// Monte Carlo estimate of the truncated product measure of the coprime set.
///
/// Each sample draws, for every one of the first `prime_count` primes in
/// order, a "divides x" and then a "divides y" indicator with probability
/// `1/p`. The generator is ChaCha8 seeded from `seed`, so runs are
/// reproducible bit for bit.
pub fn sample_coprime_estimate(
    prime_count: usize,
    samples: u64,
    seed: u64,
    primes: &PrimeTable,
) -> Result<MonteCarloEstimate> {
    if prime_count == 0 || samples == 0 {
        return Err(Error::InvalidArgument(
            "prime_count and samples must be positive".into(),
        ));
    }
    let ps: Vec<u32> = primes
        .first(prime_count)?
        .iter()
        .map(|&p| u32::try_from(p).map_err(|_| Error::Overflow("sampling prime")))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut shared = false;
        for &p in &ps {
            let x = rng.random_ratio(1, p);
            let y = rng.random_ratio(1, p);
            shared |= x && y;
        }
        hits += u64::from(!shared);
    }
    let estimate = hits as f64 / samples as f64;
    let standard_error = libm::sqrt(estimate * (1.0 - estimate) / samples as f64);
    Ok(MonteCarloEstimate {
        prime_count,
        samples,
        seed,
        hits,
        estimate,
        standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::six_over_pi_squared;
    use crate::rational::{self, ratio};
    use crate::sieve::build_prime_table;
    use alloc::vec;
    use core::cmp::Ordering;

    fn primes() -> PrimeTable {
        build_prime_table(1000).unwrap()
    }

    fn cyl(i: &[usize], j: &[usize]) -> CylinderSet {
        CylinderSet::new(i.iter().copied(), j.iter().copied()).unwrap()
    }

    /// Inclusion–exclusion over the terms of a union, independent of cells.
    fn inclusion_exclusion(terms: &[CylinderSet], t: &PrimeTable) -> BigRational {
        let mut total = BigRational::zero();
        for mask in 1u32..(1 << terms.len()) {
            let mut acc = SetExpression::single(CylinderSet::whole());
            for (k, term) in terms.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    acc = acc.intersection(&SetExpression::single(term.clone()));
                }
            }
            let m = measure(&acc, t).unwrap();
            if mask.count_ones() % 2 == 1 {
                total += m;
            } else {
                total -= m;
            }
        }
        total
    }

    #[test]
    fn cylinder_validation() {
        assert!(CylinderSet::new([1], [1]).is_err());
        assert!(CylinderSet::new([0], []).is_err());
        assert_eq!(CylinderSet::whole(), cyl(&[], &[]));
    }

    #[test]
    fn cylinder_measure_examples() {
        let t = primes();
        assert_eq!(cylinder_measure(&cyl(&[1], &[]), &t).unwrap(), ratio(1, 2));
        assert_eq!(cylinder_measure(&cyl(&[], &[]), &t).unwrap(), ratio(1, 1));
        assert_eq!(cylinder_measure(&cyl(&[1], &[2]), &t).unwrap(), ratio(1, 3));
        let small = build_prime_table(5).unwrap();
        assert!(matches!(
            cylinder_measure(&cyl(&[4], &[]), &small),
            Err(Error::TableTooSmall { needed: 4, .. })
        ));
    }

    #[test]
    fn even_not_multiple_of_three_density() {
        let t = primes();
        let c = cyl(&[1], &[2]);
        let hits = (1..=1_000_000u64)
            .filter(|&n| contains(&c, n, &t).unwrap())
            .count();
        // n ≡ 2, 4 (mod 6): 333_334 of the first 10⁶ integers.
        assert_eq!(hits, 333_334);
        let density = ratio(hits as i64, 1_000_000);
        assert!(rational::abs_diff_le(
            &density,
            &cylinder_measure(&c, &t).unwrap(),
            &ratio(1, 100_000)
        ));
    }

    #[test]
    fn intersect_examples() {
        assert!(intersect(&cyl(&[1], &[]), &cyl(&[], &[1])).is_empty());
        assert_eq!(
            intersect(&cyl(&[1], &[]), &cyl(&[2], &[])),
            SetExpression::single(cyl(&[1, 2], &[]))
        );
        let c = cyl(&[3], &[1]);
        assert_eq!(
            intersect(&CylinderSet::whole(), &c),
            SetExpression::single(c.clone())
        );
    }

    #[test]
    fn complement_examples() {
        let t = primes();
        assert_eq!(
            complement(&cyl(&[1], &[])).unwrap().terms(),
            &[cyl(&[], &[1])]
        );
        assert!(complement(&CylinderSet::whole()).unwrap().is_empty());

        let c = complement(&cyl(&[1], &[2])).unwrap();
        let mut terms = c.terms().to_vec();
        terms.sort();
        let mut expected = vec![cyl(&[], &[1, 2]), cyl(&[2], &[1]), cyl(&[1, 2], &[])];
        expected.sort();
        assert_eq!(terms, expected);
        assert_eq!(measure(&c, &t).unwrap(), ratio(2, 3));
        // Each cell measured on its own: 1/3 + 1/6 + 1/6.
        let parts: Vec<BigRational> = c
            .terms()
            .iter()
            .map(|x| cylinder_measure(x, &t).unwrap())
            .collect();
        assert_eq!(parts.iter().sum::<BigRational>(), ratio(2, 3));
    }

    #[test]
    fn complement_respects_cap() {
        let big = CylinderSet::new(1..=25, []).unwrap();
        assert!(matches!(
            complement(&big),
            Err(Error::ResourceLimit {
                coordinates: 25,
                ..
            })
        ));
    }

    #[test]
    fn normalize_examples() {
        let t = primes();
        let e = SetExpression::union_of(vec![cyl(&[1], &[]), cyl(&[], &[1])]);
        let n = normalize(&e).unwrap();
        assert_eq!(n.terms().len(), 2);
        assert!(n.is_normalized());
        assert_eq!(measure(&n, &t).unwrap(), ratio(1, 1));

        let e = SetExpression::union_of(vec![cyl(&[1], &[]), cyl(&[1], &[])]);
        assert_eq!(normalize(&e).unwrap().terms(), &[cyl(&[1], &[])]);

        let e = SetExpression::union_of(vec![cyl(&[1], &[]), cyl(&[2], &[])]);
        let n = normalize(&e).unwrap();
        assert_eq!(n.terms().len(), 3);
        assert!(n.terms().contains(&cyl(&[1, 2], &[])));
        assert!(n.terms().contains(&cyl(&[1], &[2])));
        assert!(n.terms().contains(&cyl(&[2], &[1])));
        assert!(matches!(
            normalize_with_cap(&e, 1),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn measure_examples() {
        let t = primes();
        let e = SetExpression::union_of(vec![cyl(&[1], &[]), cyl(&[], &[1])]);
        assert_eq!(measure(&e, &t).unwrap(), ratio(1, 1));
        assert_eq!(measure(&SetExpression::empty(), &t).unwrap(), ratio(0, 1));
        // 1/2 + 1/3 - 1/6
        let terms = vec![cyl(&[1], &[]), cyl(&[2], &[])];
        let e = SetExpression::union_of(terms.clone());
        assert_eq!(inclusion_exclusion(&terms, &t), ratio(2, 3));
        assert_eq!(measure(&e, &t).unwrap(), ratio(2, 3));
    }

    #[test]
    fn measure_with_many_coordinates() {
        let t = primes();
        let c = CylinderSet::new(1..=70, []).unwrap();
        let e = SetExpression::single(c.clone());
        assert_eq!(measure(&e, &t).unwrap(), cylinder_measure(&c, &t).unwrap());
    }

    #[test]
    fn contains_examples() {
        let t = primes();
        assert!(contains(&cyl(&[1], &[]), 4, &t).unwrap());
        assert!(!contains(&cyl(&[], &[1]), 4, &t).unwrap());
        assert!(contains(&cyl(&[1], &[2]), 10, &t).unwrap());
    }

    #[test]
    fn membership_matches_field_operations() {
        let t = primes();
        let mut cylinders = Vec::new();
        for mask in 0..81u32 {
            // Each of ranks 1..=4 is required, excluded or free.
            let (mut i, mut j) = (Vec::new(), Vec::new());
            let mut m = mask;
            for r in 1..=4 {
                match m % 3 {
                    1 => i.push(r),
                    2 => j.push(r),
                    _ => {}
                }
                m /= 3;
            }
            cylinders.push(cyl(&i, &j));
        }
        for (ai, a) in cylinders.iter().enumerate().step_by(7) {
            let comp = complement(a).unwrap();
            for b in cylinders.iter().skip(ai % 5).step_by(5) {
                let both = intersect(a, b);
                for n in 1..=10_000 {
                    let in_a = contains(a, n, &t).unwrap();
                    let in_b = contains(b, n, &t).unwrap();
                    assert_eq!(both.contains(n, &t).unwrap(), in_a && in_b);
                    assert_eq!(comp.contains(n, &t).unwrap(), !in_a);
                }
            }
        }
    }

    #[test]
    fn euler_product_examples() {
        let t = primes();
        assert_eq!(euler_product(1, &t).unwrap(), ratio(3, 4));
        assert_eq!(euler_product(2, &t).unwrap(), ratio(2, 3));
        let reference = six_over_pi_squared();
        let e25 = euler_product(25, &t).unwrap();
        assert!(rational::abs_diff_le(&e25, &reference, &ratio(2, 1000)));
        let mut prev = ratio(1, 1);
        for k in 1..=60 {
            let e = euler_product(k, &t).unwrap();
            assert_eq!(rational::cmp(&e, &prev), Ordering::Less);
            assert_eq!(rational::cmp(&e, &reference), Ordering::Greater);
            let gap = euler_product_gap_bound(k, &t).unwrap();
            assert!(rational::abs_diff_le(&e, &reference, &gap));
            prev = e;
        }
    }

    #[test]
    fn sampler_is_reproducible() {
        let t = primes();
        let a = sample_coprime_estimate(5, 10_000, 7, &t).unwrap();
        let b = sample_coprime_estimate(5, 10_000, 7, &t).unwrap();
        assert_eq!(a, b);
        let c = sample_coprime_estimate(5, 10_000, 8, &t).unwrap();
        assert_ne!(a.hits, c.hits);
        assert!(sample_coprime_estimate(5, 0, 7, &t).is_err());
        assert!(sample_coprime_estimate(0, 10, 7, &t).is_err());
    }

    #[test]
    fn single_prime_sampler_near_three_quarters() {
        let t = primes();
        let r = sample_coprime_estimate(1, 200_000, 11, &t).unwrap();
        assert!((r.estimate - 0.75).abs() < 4.0 * r.standard_error);
    }

    proptest::proptest! {
        #[test]
        fn complement_measures_sum_to_one(mask in 0u32..59049) {
            let t = primes();
            let (mut i, mut j) = (Vec::new(), Vec::new());
            let mut m = mask;
            for r in 1..=10 {
                match m % 3 {
                    1 => i.push(r),
                    2 => j.push(r),
                    _ => {}
                }
                m /= 3;
            }
            let c = cyl(&i, &j);
            let total = cylinder_measure(&c, &t).unwrap()
                + measure(&complement(&c).unwrap(), &t).unwrap();
            proptest::prop_assert_eq!(total, ratio(1, 1));
        }
    }
}
