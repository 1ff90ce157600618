//! Exhaustive solving and verification tooling for `X + Y = c^z` where the
//! prime support of `XY` is prescribed by a list of bases `d_1, ..., d_n`.
//!
//! - [`modmath`]: factorization, orders, inverses, CRT, square roots of `-D`.
//! - [`grouplat`]: the exponent lattices `U`, `U'`, the counts `p`, `q`.
//! - [`search`]: complete enumeration of solutions up to a depth bound.
//! - [`classify`]: squarefree kernels, key numbers and ideal-pair tags.
//! - [`orbits`]: principal-power seeds, predicted solutions, exceptional doublings.
//! - [`verify`]: bound checkers producing pass/fail reports.
//! - [`catalog`]: known infinite families, sporadic double solutions and the
//!   Mersenne-quotient primality scan.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod grouplat;
pub mod instance;
pub mod modmath;
pub mod orbits;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use instance::Instance;
