//! Reference constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow::Pow;

/// `6/π² = 1/ζ(2)` truncated to 30 decimal places.
pub const SIX_OVER_PI_SQUARED: &str = "0.607927101854026628663276779258";

/// Number of decimal places carried by [`SIX_OVER_PI_SQUARED`].
pub const SIX_OVER_PI_SQUARED_DIGITS: u32 = 30;

/// [`SIX_OVER_PI_SQUARED`] as an exact rational. The true constant lies in
/// `[value, value + 10^-30)`.
pub fn six_over_pi_squared() -> BigRational {
    BigRational::new(
        BigInt::from(607_927_101_854_026_628_663_276_779_258u128),
        BigInt::from(10u32).pow(SIX_OVER_PI_SQUARED_DIGITS),
    )
}

/// Width of the truncation interval of [`six_over_pi_squared`].
pub fn six_over_pi_squared_ulp() -> BigRational {
    BigRational::new(
        BigInt::from(1u32),
        BigInt::from(10u32).pow(SIX_OVER_PI_SQUARED_DIGITS),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_matches_string() {
        let v = six_over_pi_squared();
        assert_eq!(
            crate::rational::to_decimal_string(&v, 30),
            SIX_OVER_PI_SQUARED
        );
    }

    #[test]
    fn constant_agrees_with_float() {
        let f = 6.0 / (core::f64::consts::PI * core::f64::consts::PI);
        let v = crate::rational::to_f64(&six_over_pi_squared());
        assert!((f - v).abs() < 1e-15);
    }
}
