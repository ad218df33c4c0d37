//! Exact rational helpers.
//!
//! Sums such as `Σ_{k<=n} μ(k)/k²` at `n = 10⁵` have denominators with
//! hundreds of thousands of bits. Adding the terms one at a time through
//! [`BigRational`] would reduce by a big gcd on every step, which is hopeless
//! at that size. [`sum_reciprocal_powers`] instead keeps every partial
//! denominator in factored form and merges halves of the range with products
//! of small primes only; the single final reduction strips small primes from
//! the numerator. Comparisons go through cross-multiplication for the same
//! reason.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::sieve::FactorTable;

/// Exact `Σ_{k=1}^{m} coef(k) / k^power`, fully reduced.
///
/// `m` must fit in `u32`; the factorization table covers `1..=m`.
pub fn sum_reciprocal_powers(m: u32, power: u32, coef: impl Fn(u32) -> i64) -> BigRational {
    if m == 0 {
        return BigRational::zero();
    }
    let factors = FactorTable::new(m);
    let mut node = split_sum(1, m + 1, power, &coef, &factors);
    for (p, e) in node.den.iter_mut() {
        while *e > 0 && !node.num.is_zero() && (node.num.magnitude() % *p).is_zero() {
            node.num /= *p;
            *e -= 1;
        }
    }
    if node.num.is_zero() {
        return BigRational::zero();
    }
    let den = prime_power_product(node.den.iter().copied());
    BigRational::new_raw(node.num, BigInt::from(den))
}

/// Harmonic number `H_m = Σ_{k<=m} 1/k`.
pub fn harmonic(m: u32) -> BigRational {
    sum_reciprocal_powers(m, 1, |_| 1)
}

struct Partial {
    num: BigInt,
    // Denominator as ascending (prime, exponent) pairs.
    den: Vec<(u32, u32)>,
}

fn split_sum(
    lo: u32,
    hi: u32,
    power: u32,
    coef: &impl Fn(u32) -> i64,
    factors: &FactorTable,
) -> Partial {
    if hi - lo == 1 {
        let c = coef(lo);
        if c == 0 {
            return Partial {
                num: BigInt::zero(),
                den: Vec::new(),
            };
        }
        let den = factors
            .factor(lo)
            .into_iter()
            .map(|(p, e)| (p, e * power))
            .collect();
        return Partial {
            num: BigInt::from(c),
            den,
        };
    }
    let mid = lo + (hi - lo) / 2;
    let left = split_sum(lo, mid, power, coef, factors);
    let right = split_sum(mid, hi, power, coef, factors);
    merge(left, right)
}

fn merge(left: Partial, right: Partial) -> Partial {
    if left.num.is_zero() {
        return right;
    }
    if right.num.is_zero() {
        return left;
    }
    let mut den = Vec::with_capacity(left.den.len().max(right.den.len()));
    // Factors each side is missing relative to the merged denominator.
    let mut lift_left = Vec::new();
    let mut lift_right = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < left.den.len() || j < right.den.len() {
        let l = left.den.get(i).copied();
        let r = right.den.get(j).copied();
        match (l, r) {
            (Some((p, a)), Some((q, b))) if p == q => {
                den.push((p, a.max(b)));
                if a > b {
                    lift_right.push((p, a - b));
                } else if b > a {
                    lift_left.push((p, b - a));
                }
                i += 1;
                j += 1;
            }
            (Some((p, a)), Some((q, _))) if p < q => {
                den.push((p, a));
                lift_right.push((p, a));
                i += 1;
            }
            (Some((p, a)), None) => {
                den.push((p, a));
                lift_right.push((p, a));
                i += 1;
            }
            (_, Some((q, b))) => {
                den.push((q, b));
                lift_left.push((q, b));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    let num = left.num * BigInt::from(prime_power_product(lift_left.into_iter()))
        + right.num * BigInt::from(prime_power_product(lift_right.into_iter()));
    Partial { num, den }
}

/// Product of `p^e` over the given pairs, via a balanced product tree.
fn prime_power_product(pairs: impl Iterator<Item = (u32, u32)>) -> BigUint {
    let mut words: Vec<BigUint> = Vec::new();
    let mut acc: u64 = 1;
    for (p, e) in pairs {
        for _ in 0..e {
            match acc.checked_mul(p as u64) {
                Some(v) => acc = v,
                None => {
                    words.push(BigUint::from(acc));
                    acc = p as u64;
                }
            }
        }
    }
    words.push(BigUint::from(acc));
    while words.len() > 1 {
        let mut next = Vec::with_capacity(words.len().div_ceil(2));
        let mut it = words.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        words = next;
    }
    words.pop().unwrap_or_else(BigUint::one)
}

/// `a + b` without reducing the result.
pub fn add_unreduced(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new_raw(
        a.numer() * b.denom() + b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

/// `r * mul / div` in lowest terms, for a reduced `r` and small factors.
///
/// Only word-sized gcds are needed: with `gcd(a, b) = gcd(mul, div) = 1`,
/// `gcd(a·mul, b·div) = gcd(a, div) · gcd(mul, b)`.
pub fn scale_reduced(r: &BigRational, mul: u128, div: u128) -> BigRational {
    assert!(div != 0, "division by zero");
    if mul == 0 {
        return BigRational::zero();
    }
    let g = mul.gcd(&div);
    let (mul, div) = (mul / g, div / g);
    let num_cut = gcd_big_small(r.numer().magnitude(), div);
    let den_cut = gcd_big_small(r.denom().magnitude(), mul);
    let num = r.numer() / BigInt::from(num_cut) * BigInt::from(mul / den_cut);
    let den = r.denom() / BigInt::from(den_cut) * BigInt::from(div / num_cut);
    BigRational::new_raw(num, den)
}

fn gcd_big_small(big: &BigUint, small: u128) -> u128 {
    let rem = (big % small).to_u128().unwrap_or(0);
    rem.gcd(&small)
}

/// Compares two rationals by cross-multiplication (no gcd involved).
pub fn cmp(a: &BigRational, b: &BigRational) -> Ordering {
    let ord = (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()));
    // `new_raw` may leave a negative denominator behind.
    if a.denom().is_negative() != b.denom().is_negative() {
        ord.reverse()
    } else {
        ord
    }
}

/// `|a - b| <= bound`, decided exactly by cross-multiplication.
pub fn abs_diff_le(a: &BigRational, b: &BigRational, bound: &BigRational) -> bool {
    let diff = BigRational::new_raw(
        a.numer() * b.denom() - b.numer() * a.denom(),
        a.denom() * b.denom(),
    );
    let abs = BigRational::new_raw(diff.numer().abs(), diff.denom().abs());
    cmp(&abs, bound) != Ordering::Greater
}

/// Nearest `f64` (display only).
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal expansion truncated toward zero after `digits` places.
pub fn to_decimal_string(r: &BigRational, digits: u32) -> String {
    let negative = r.numer().sign() == Sign::Minus && r.denom().sign() == Sign::Plus
        || r.numer().sign() == Sign::Plus && r.denom().sign() == Sign::Minus;
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let scale = num_traits::pow(BigUint::from(10u32), digits as usize);
    let scaled = (num * &scale) / den;
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let mut out = String::new();
    if negative && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_str_radix(10));
    if digits > 0 {
        out.push('.');
        let frac = frac_part.to_str_radix(10);
        for _ in frac.len()..digits as usize {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

/// Shorthand for a small exact rational.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_mobius_table;

    fn naive_sum(m: u32, power: u32, coef: impl Fn(u32) -> i64) -> BigRational {
        (1..=m).fold(BigRational::zero(), |acc, k| {
            acc + BigRational::new(
                BigInt::from(coef(k)),
                num_traits::pow(BigInt::from(k), power as usize),
            )
        })
    }

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic(1), ratio(1, 1));
        assert_eq!(harmonic(4), ratio(25, 12));
        assert_eq!(harmonic(0), ratio(0, 1));
    }

    #[test]
    fn split_sum_matches_naive_sum() {
        let mu = build_mobius_table(400).unwrap();
        for m in [1u32, 2, 3, 7, 30, 97, 128, 400] {
            let c = |k: u32| mu.get(k as u64).unwrap() as i64;
            let fast = sum_reciprocal_powers(m, 2, c);
            let slow = naive_sum(m, 2, c);
            assert_eq!(fast, slow, "m = {m}");
            // Reduced form, so numerator/denominator agree too.
            assert_eq!(fast.numer(), slow.numer());
            assert_eq!(fast.denom(), slow.denom());
            assert_eq!(harmonic(m), naive_sum(m, 1, |_| 1));
        }
    }

    #[test]
    fn coefficients_scale_terms() {
        assert_eq!(sum_reciprocal_powers(10, 1, |k| k as i64), ratio(10, 1));
        assert!(sum_reciprocal_powers(10, 3, |_| 0).is_zero());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&ratio(11, 16), 4), "0.6875");
        assert_eq!(to_decimal_string(&ratio(2, 3), 5), "0.66666");
        assert_eq!(to_decimal_string(&ratio(-1, 8), 2), "-0.12");
        assert_eq!(to_decimal_string(&ratio(7, 1), 0), "7");
        assert_eq!(to_decimal_string(&ratio(1, 100), 3), "0.010");
    }

    #[test]
    fn scaling_stays_reduced() {
        let h = harmonic(4); // 25/12
        let s = scale_reduced(&h, 8, 16);
        assert_eq!(s, ratio(25, 24));
        assert_eq!(s.denom(), &BigInt::from(24));
        let s = scale_reduced(&ratio(3, 10), 5, 9);
        assert_eq!(s.numer(), &BigInt::from(1));
        assert_eq!(s.denom(), &BigInt::from(6));
        assert!(scale_reduced(&h, 0, 3).is_zero());
    }

    #[test]
    fn cross_multiplied_comparisons() {
        assert_eq!(cmp(&ratio(1, 3), &ratio(1, 2)), Ordering::Less);
        assert_eq!(cmp(&ratio(2, 4), &ratio(1, 2)), Ordering::Equal);
        assert!(abs_diff_le(&ratio(1, 2), &ratio(1, 3), &ratio(1, 6)));
        assert!(!abs_diff_le(&ratio(1, 2), &ratio(1, 3), &ratio(1, 7)));
        assert!(abs_diff_le(&ratio(1, 3), &ratio(1, 2), &ratio(1, 6)));
        assert_eq!(add_unreduced(&ratio(1, 2), &ratio(1, 3)), ratio(5, 6));
    }
}
