//! Residue-class bounds on the coprime set.
//!
//! A product class `R_{j1,k1} x R_{j2,k2}` meets the coprime set exactly when
//! `gcd(j1, j2, k1, k2) = 1`. Counting the classes modulo `(t1, t2)` that
//! meet it gives `r_{t1,t2}(G)`, and the fraction `r / (t1 t2)` equals
//! `Π_{p | gcd(t1,t2)} (1 - p⁻²)`. Along primorial moduli this decreases
//! to `6/π²`.
//!
//! Residues are stored reduced (`0 <= j < k`). The constructive witness works
//! with the representative in `1..=k` instead, lifting `j = 0` to `j = k`;
//! `gcd(j1, j2, k1, k2)` is unchanged by the lift.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::crt::{crt_solve, CongruenceSystem};
use crate::sieve::{gcd, gcd_all, prime_factors, PrimeTable};
use crate::{Error, Result};

/// Cap on `t1 * t2` cells enumerated by [`r_count`].
pub const R_COUNT_CAP: u64 = 100_000_000;

/// Search cap used when the constructive witness has to fall back.
pub const FALLBACK_SEARCH_CAP: u64 = 64;

/// The product residue class `R_{j1,k1} x R_{j2,k2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRect {
    pub j1: u64,
    pub k1: u64,
    pub j2: u64,
    pub k2: u64,
}

impl ResidueRect {
    pub fn new(j1: u64, k1: u64, j2: u64, k2: u64) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(Error::InvalidArgument("moduli must be positive".into()));
        }
        if j1 >= k1 || j2 >= k2 {
            return Err(Error::InvalidArgument(format!(
                "residues ({j1}, {j2}) not reduced modulo ({k1}, {k2})"
            )));
        }
        Ok(Self { j1, k1, j2, k2 })
    }

    /// Builds the rectangle from arbitrary residues, reducing them first.
    pub fn reduced(j1: u64, k1: u64, j2: u64, k2: u64) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(Error::InvalidArgument("moduli must be positive".into()));
        }
        Self::new(j1 % k1, k1, j2 % k2, k2)
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        x % self.k1 == self.j1 && y % self.k2 == self.j2
    }

    /// Residues lifted to the representatives in `1..=k`.
    pub fn lifted(&self) -> (u64, u64) {
        let lift = |j: u64, k: u64| if j == 0 { k } else { j };
        (lift(self.j1, self.k1), lift(self.j2, self.k2))
    }
}

/// Whether the rectangle holds a coprime pair: `gcd(j1, j2, k1, k2) = 1`.
pub fn rect_nonempty_criterion(rect: &ResidueRect) -> bool {
    gcd_all(&[rect.j1, rect.j2, rect.k1, rect.k2]) == 1
}

/// Smallest coprime pair in the rectangle, ordered by `(x + y, x)`, among
/// positive `x, y <= cap * k1 * k2`.
pub fn rect_coprime_search(rect: &ResidueRect, cap: u64) -> Option<(u64, u64)> {
    let bound = cap.saturating_mul(rect.k1).saturating_mul(rect.k2);
    let (x0, y0) = rect.lifted();
    let mut best: Option<(u64, u64, u64)> = None;
    let mut x = x0;
    while x <= bound {
        if let Some((s, _, _)) = best {
            if x + y0 >= s {
                break;
            }
        }
        let mut y = y0;
        while y <= bound {
            let s = x + y;
            if best.is_some_and(|(bs, _, _)| s >= bs) {
                break;
            }
            if gcd(x, y) == 1 {
                best = Some((s, x, y));
                break;
            }
            y += rect.k2;
        }
        x += rect.k1;
    }
    best.map(|(_, x, y)| (x, y))
}

/// How [`construct_coprime_in_rect`] obtained its pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessPath {
    /// The two-step shift construction.
    Constructive,
    /// Bounded search after the construction could not be completed.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectWitness {
    pub x: u64,
    pub y: u64,
    pub path: WitnessPath,
}

/// A coprime pair `(a1 k1 + j1, a2 k2 + j2)` inside a nonempty rectangle.
///
/// With `p_i = gcd(k_i, j_i)`, `k_i = p_i r_i`, `j_i = p_i s_i` (residues
/// lifted to `1..=k`), `a1` is a shift witness for `(r1, s1)` modulo `p2`
/// and `a2` one for `(r2, s2)` modulo `p1 (a1 r1 + s1)`. The result is checked
/// before it is returned.
pub fn construct_coprime_in_rect(rect: &ResidueRect, primes: &PrimeTable) -> Result<RectWitness> {
    if !rect_nonempty_criterion(rect) {
        return Err(Error::Precondition(format!(
            "gcd({}, {}, {}, {}) != 1, rectangle holds no coprime pair",
            rect.j1, rect.j2, rect.k1, rect.k2
        )));
    }
    if let Ok((x, y)) = construct_by_shifts(rect, primes) {
        if gcd(x, y) == 1 && rect.contains(x, y) {
            return Ok(RectWitness {
                x,
                y,
                path: WitnessPath::Constructive,
            });
        }
    }
    match rect_coprime_search(rect, FALLBACK_SEARCH_CAP) {
        Some((x, y)) => Ok(RectWitness {
            x,
            y,
            path: WitnessPath::Fallback,
        }),
        None => Err(Error::Internal(format!(
            "no coprime pair found in {rect:?} although the criterion holds"
        ))),
    }
}

fn construct_by_shifts(rect: &ResidueRect, primes: &PrimeTable) -> Result<(u64, u64)> {
    let (j1, j2) = rect.lifted();
    let p1 = gcd(rect.k1, j1);
    let p2 = gcd(rect.k2, j2);
    let (r1, s1) = (rect.k1 / p1, j1 / p1);
    let (r2, s2) = (rect.k2 / p2, j2 / p2);

    let a1 = lemma_shift_witness(r1, s1, p2, primes)?;
    let m1 = checked_affine(a1, r1, s1)?;
    let x = p1
        .checked_mul(m1)
        .ok_or(Error::Overflow("rectangle witness"))?;
    let a2 = lemma_shift_witness(r2, s2, x, primes)?;
    let y = checked_affine(a2, rect.k2, j2)?;
    Ok((x, y))
}

fn checked_affine(a: u64, x: u64, y: u64) -> Result<u64> {
    a.checked_mul(x)
        .and_then(|v| v.checked_add(y))
        .ok_or(Error::Overflow("a·x + y"))
}

/// Some `a >= 0` with `gcd(a x + y, n) = 1`, given `gcd(x, y) = 1`.
///
/// Each prime `p | n` is classified: `p | x` forces `a ≡ 0`, `p | y` forces
/// `a ≡ 1`, and `p` dividing neither forces `a ≡ 0 (mod p)`. The congruences
/// are combined by CRT, so `a` is below the radical of `n`.
pub fn lemma_shift_witness(x: u64, y: u64, n: u64, primes: &PrimeTable) -> Result<u64> {
    if x == 0 || y == 0 || n == 0 {
        return Err(Error::InvalidArgument("x, y and n must be positive".into()));
    }
    if gcd(x, y) != 1 {
        return Err(Error::Precondition(format!("gcd({x}, {y}) != 1")));
    }
    let mut system = CongruenceSystem::new();
    for p in prime_factors(n, primes)? {
        let residue = if x % p == 0 {
            0
        } else if y % p == 0 {
            1
        } else {
            0
        };
        system.push(residue, p)?;
    }
    let a = if system.is_empty() {
        0
    } else {
        crt_solve(&system)?
    };
    let value = a as u128 * x as u128 + y as u128;
    if gcd_u128(value, n as u128) != 1 {
        return Err(Error::Internal(format!(
            "shift witness a = {a} fails gcd({a}·{x} + {y}, {n}) = 1"
        )));
    }
    Ok(a)
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `r_{t1,t2}(G)` together with its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueBoundReport {
    pub t1: u64,
    pub t2: u64,
    pub r_count: u64,
    /// `r_count / (t1 t2)`.
    pub ratio: BigRational,
    /// Primes dividing `gcd(t1, t2)`.
    pub common_primes: Vec<u64>,
    /// `Π_{p in common_primes} (1 - p⁻²)`.
    pub closed_form: BigRational,
}

/// Enumerates residue pairs modulo `(t1, t2)` whose rectangle meets the
/// coprime set, and checks the count against the closed form.
pub fn r_count(t1: u64, t2: u64, primes: &PrimeTable) -> Result<ResidueBoundReport> {
    if t1 == 0 || t2 == 0 {
        return Err(Error::InvalidArgument("moduli must be positive".into()));
    }
    let cells = t1 as u128 * t2 as u128;
    if cells > R_COUNT_CAP as u128 {
        return Err(Error::EnumerationCap {
            requested: cells,
            cap: R_COUNT_CAP,
        });
    }
    let mut count = 0u64;
    for j1 in 0..t1 {
        for j2 in 0..t2 {
            let rect = ResidueRect {
                j1,
                k1: t1,
                j2,
                k2: t2,
            };
            count += u64::from(rect_nonempty_criterion(&rect));
        }
    }
    let common_primes = prime_factors(gcd(t1, t2), primes)?;
    let closed_form = euler_factor_product(&common_primes);
    let ratio = BigRational::new(BigInt::from(count), BigInt::from(cells));
    if ratio != closed_form {
        return Err(Error::Internal(format!(
            "r({t1}, {t2}) = {count} disagrees with the closed form {closed_form}"
        )));
    }
    Ok(ResidueBoundReport {
        t1,
        t2,
        r_count: count,
        ratio,
        common_primes,
        closed_form,
    })
}

/// `Π (1 - p⁻²)` over the first `prime_count` primes: the bound attained at
/// `t1 = t2 = p_1 ⋯ p_{prime_count}`.
pub fn residue_upper_bound(prime_count: usize, primes: &PrimeTable) -> Result<BigRational> {
    if prime_count == 0 {
        return Err(Error::InvalidArgument(
            "prime_count must be positive".into(),
        ));
    }
    Ok(euler_factor_product(primes.first(prime_count)?))
}

/// Exact `Π (1 - p⁻²)` over the given primes.
pub(crate) fn euler_factor_product(primes: &[u64]) -> BigRational {
    let (num, den) = primes
        .iter()
        .fold((BigInt::one(), BigInt::one()), |(num, den), &p| {
            let sq = BigInt::from(p) * BigInt::from(p);
            (num * (&sq - 1u8), den * sq)
        });
    BigRational::new(num, den)
}
