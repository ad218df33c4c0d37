//! Exact computations around the density of coprime pairs.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! - [`sieve`]: prime and Möbius tables, `gcd`, table-backed factorization.
//! - [`counting`]: coprime-pair counts on `[n1] x [n2]` by enumeration and by
//!   Möbius inversion, with a certified error envelope around `Σ μ(k)/k²`.
//! - [`residue`]: the residue-class bound `r_{t1,t2}(G) / (t1 t2)` and the
//!   rectangle lemma `gcd(j1, j2, k1, k2) = 1`, including a constructive witness.
//! - [`crt`]: a Chinese-remainder solver and shift-invariance witnesses.
//! - [`measure`]: the cylinder field over prime-divisibility coordinates,
//!   its exact measure, Euler products and a seeded Monte Carlo sampler.
//! - [`rational`]: exact helpers (large unit-fraction sums, cross-multiplied
//!   comparisons, decimal rendering).
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod constants;
pub mod counting;
pub mod crt;
mod error;
pub mod measure;
pub mod rational;
pub mod residue;
pub mod sieve;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
