//! Chinese-remainder solving and shift-invariance witnesses.
//!
//! For a finite shift set `A = {(a_1, b_1), ..., (a_m, b_m)}` the witness is a
//! point `(a, b)` with `gcd(a + a_i, b + b_i) > 1` for every `i`, so no shift
//! in `A` moves it into the coprime set. It is built by assigning the prime
//! `p_i` to the `i`-th shift and solving `a ≡ -a_i`, `b ≡ -b_i (mod p_i)`.

use alloc::format;
use alloc::vec::Vec;

use crate::sieve::{gcd, PrimeTable};
use crate::{Error, Result};

/// `x ≡ residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

impl Congruence {
    pub fn new(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if residue >= modulus {
            return Err(Error::InvalidArgument(format!(
                "residue {residue} is not reduced modulo {modulus}"
            )));
        }
        Ok(Self { residue, modulus })
    }

    pub fn is_satisfied_by(&self, x: u64) -> bool {
        x % self.modulus == self.residue
    }
}

/// A finite list of congruences to be solved simultaneously.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CongruenceSystem {
    constraints: Vec<Congruence>,
}

impl CongruenceSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        let constraints = pairs
            .iter()
            .map(|&(r, m)| Congruence::new(r, m))
            .collect::<Result<_>>()?;
        Ok(Self { constraints })
    }

    pub fn push(&mut self, residue: u64, modulus: u64) -> Result<()> {
        self.constraints.push(Congruence::new(residue, modulus)?);
        Ok(())
    }

    pub fn constraints(&self) -> &[Congruence] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn modulus_product(&self) -> Option<u64> {
        self.constraints
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.modulus))
    }
}

/// Least nonnegative `x` satisfying every congruence of `system`.
///
/// Moduli must be pairwise coprime. Non-coprime pairs are rejected even when
/// they happen to be compatible.
pub fn crt_solve(system: &CongruenceSystem) -> Result<u64> {
    let cs = system.constraints();
    if cs.is_empty() {
        return Err(Error::InvalidArgument(
            "congruence system has no constraints".into(),
        ));
    }
    for (i, c1) in cs.iter().enumerate() {
        for c2 in &cs[i + 1..] {
            let g = gcd(c1.modulus, c2.modulus);
            if g != 1 {
                if c1.residue % g != c2.residue % g {
                    return Err(Error::Unsolvable {
                        r1: c1.residue,
                        m1: c1.modulus,
                        r2: c2.residue,
                        m2: c2.modulus,
                    });
                }
                return Err(Error::NonCoprimeModuli {
                    m1: c1.modulus,
                    m2: c2.modulus,
                });
            }
        }
    }
    let mut x = 0u64;
    let mut product = 1u64;
    for c in cs {
        // x + product * t ≡ residue (mod modulus)
        let m = c.modulus;
        let inv = mod_inverse(product % m, m)
            .ok_or_else(|| Error::Internal(format!("{product} has no inverse mod {m}")))?;
        let diff = (c.residue + m - x % m) % m;
        let t = mul_mod(diff, inv, m);
        let next = product
            .checked_mul(m)
            .ok_or(Error::Overflow("CRT modulus product"))?;
        x += product * t;
        product = next;
    }
    Ok(x)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Inverse of `a` modulo `m` (`m >= 1`), if it exists.
fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// A point avoiding the coprime set under every shift of a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftWitnessReport {
    pub shift_set: Vec<(u64, u64)>,
    /// Prime assigned to each shift, in the same order.
    pub assigned_primes: Vec<u64>,
    pub witness: (u64, u64),
    /// Per-shift common divisor of `(a + a_i, b + b_i)`.
    pub certificates: Vec<u64>,
}

/// Builds a witness for `shift_set` using the first `|shift_set|` primes.
///
/// Coordinates are the least nonnegative CRT solutions, except that a zero
/// coordinate is lifted to the modulus product so the witness stays positive.
pub fn shift_witness(shift_set: &[(u64, u64)], primes: &PrimeTable) -> Result<ShiftWitnessReport> {
    if shift_set.is_empty() {
        return Err(Error::InvalidArgument("shift set must be nonempty".into()));
    }
    let assigned = primes.first(shift_set.len())?.to_vec();
    let mut xs = CongruenceSystem::new();
    let mut ys = CongruenceSystem::new();
    for (&(a_i, b_i), &p) in shift_set.iter().zip(&assigned) {
        xs.push((p - a_i % p) % p, p)?;
        ys.push((p - b_i % p) % p, p)?;
    }
    let product = xs
        .modulus_product()
        .ok_or(Error::Overflow("prime product"))?;
    let lift = |v: u64| if v == 0 { product } else { v };
    let witness = (lift(crt_solve(&xs)?), lift(crt_solve(&ys)?));
    let report = ShiftWitnessReport {
        shift_set: shift_set.to_vec(),
        certificates: assigned.clone(),
        assigned_primes: assigned,
        witness,
    };
    if !verify_shift_witness(&report) {
        return Err(Error::Internal(format!(
            "shift witness {:?} failed verification",
            report.witness
        )));
    }
    Ok(report)
}

/// Checks that every shift of the witness lands outside the coprime set.
///
/// Requires one certificate `d_i > 1` per shift with `d_i` dividing both
/// shifted coordinates; the assigned primes must be distinct.
pub fn verify_shift_witness(report: &ShiftWitnessReport) -> bool {
    let (a, b) = report.witness;
    if report.shift_set.is_empty()
        || report.certificates.len() != report.shift_set.len()
        || report.assigned_primes.len() != report.shift_set.len()
    {
        return false;
    }
    let mut sorted = report.assigned_primes.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    report
        .shift_set
        .iter()
        .zip(&report.certificates)
        .all(|(&(a_i, b_i), &d)| {
            let (Some(x), Some(y)) = (a.checked_add(a_i), b.checked_add(b_i)) else {
                return false;
            };
            d > 1 && x % d == 0 && y % d == 0 && gcd(x, y) > 1
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_prime_table;
    use alloc::vec;

    fn solve(pairs: &[(u64, u64)]) -> Result<u64> {
        crt_solve(&CongruenceSystem::from_pairs(pairs).unwrap())
    }

    fn scan(pairs: &[(u64, u64)]) -> Option<u64> {
        let product: u64 = pairs.iter().map(|p| p.1).product();
        (0..product).find(|x| pairs.iter().all(|&(r, m)| x % m == r))
    }

    #[test]
    fn crt_examples() {
        assert_eq!(solve(&[(0, 2), (1, 3)]).unwrap(), 4);
        assert_eq!(solve(&[(0, 5)]).unwrap(), 0);
        assert_eq!(solve(&[(1, 2), (2, 3), (3, 5)]).unwrap(), 23);
        assert_eq!(solve(&[(0, 1), (3, 7)]).unwrap(), 3);
        for pairs in [&[(0, 2), (1, 3)][..], &[(1, 2), (2, 3), (3, 5)]] {
            assert_eq!(solve(pairs).ok(), scan(pairs));
        }
    }

    #[test]
    fn crt_rejects_bad_systems() {
        assert!(matches!(
            solve(&[(0, 4), (1, 6)]),
            Err(Error::Unsolvable { .. })
        ));
        assert!(matches!(
            solve(&[(1, 4), (3, 6)]),
            Err(Error::NonCoprimeModuli { m1: 4, m2: 6 })
        ));
        assert!(crt_solve(&CongruenceSystem::new()).is_err());
        assert!(CongruenceSystem::from_pairs(&[(5, 5)]).is_err());
        assert!(CongruenceSystem::from_pairs(&[(0, 0)]).is_err());
    }

    #[test]
    fn crt_reports_overflow() {
        let big = [(1, 4_294_967_291), (1, 4_294_967_279), (1, 4_294_967_231)];
        assert_eq!(solve(&big), Err(Error::Overflow("CRT modulus product")));
    }

    #[test]
    fn inverse() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(0, 1), Some(0));
    }

    #[test]
    fn shift_witness_examples() {
        let primes = build_prime_table(100).unwrap();

        let r = shift_witness(&[(1, 1)], &primes).unwrap();
        assert_eq!(r.assigned_primes, [2]);
        assert_eq!(r.witness, (1, 1));
        assert!(verify_shift_witness(&r));

        let r = shift_witness(&[(0, 0)], &primes).unwrap();
        assert_eq!(r.witness, (2, 2));

        let r = shift_witness(&[(1, 2), (3, 4)], &primes).unwrap();
        assert_eq!(r.assigned_primes, [2, 3]);
        // b ≡ 0 (mod 2), b ≡ 2 (mod 3): least solution is 2, found by scan.
        assert_eq!(scan(&[(1, 2), (0, 3)]), Some(3));
        assert_eq!(scan(&[(0, 2), (2, 3)]), Some(2));
        assert_eq!(r.witness, (3, 2));
        assert_eq!(gcd(3 + 1, 2 + 2), 4);
        assert_eq!(gcd(3 + 3, 2 + 4), 6);
    }

    #[test]
    fn tampered_reports_fail() {
        let primes = build_prime_table(100).unwrap();
        let good = shift_witness(&[(1, 1)], &primes).unwrap();

        let mut bad = good.clone();
        bad.witness = (1, 2);
        assert!(!verify_shift_witness(&bad));

        let mut bad = good.clone();
        bad.certificates.clear();
        assert!(!verify_shift_witness(&bad));

        let mut bad = shift_witness(&[(1, 1), (2, 2)], &primes).unwrap();
        bad.assigned_primes = vec![2, 2];
        assert!(!verify_shift_witness(&bad));
    }

    #[test]
    fn shift_witness_needs_primes() {
        let primes = build_prime_table(5).unwrap();
        let shifts = [(1, 1), (2, 2), (3, 3), (4, 4)];
        assert!(matches!(
            shift_witness(&shifts, &primes),
            Err(Error::TableTooSmall { needed: 4, .. })
        ));
        assert!(shift_witness(&[], &primes).is_err());
    }

    proptest::proptest! {
        #[test]
        fn crt_solution_is_least(
            m1 in 1u64..60, m2 in 1u64..60, m3 in 1u64..8,
            seed in 0u64..1_000_000,
        ) {
            let ms = [m1, m2, m3];
            let coprime = ms.iter().enumerate()
                .all(|(i, &a)| ms[i + 1..].iter().all(|&b| gcd(a, b) == 1));
            proptest::prop_assume!(coprime);
            let pairs: Vec<(u64, u64)> = ms.iter().map(|&m| (seed % m, m)).collect();
            proptest::prop_assert_eq!(solve(&pairs).ok(), scan(&pairs));
        }
    }
}
