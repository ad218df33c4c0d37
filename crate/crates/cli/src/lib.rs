//! Command-line front end for `coprime-core`: argument handling, JSON/CSV
//! output, the cylinder-expression syntax and the acceptance runner.

pub mod cli;
pub mod expr;
pub mod reproduce;
pub mod wire;

pub use cli::{run, Outcome};
