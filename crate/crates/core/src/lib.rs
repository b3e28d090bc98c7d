//! Exact p-adic engine for U_p slopes of partial modular symbols near the
//! boundary of weight space.
//!
//! The crate is layered bottom-up:
//! - [`padic`]: residues mod p^M, truncated Iwasawa series, the universal character.
//! - [`manin`]: cusps, unimodular paths, fundamental domains and the free-generator solver.
//! - [`dist`]: Mahler-basis matrices of the monoid action on integral distributions.
//! - [`spectral`]: the U_p block matrix and its Fredholm series.
//! - [`newton`]: Newton polygons, LB/UB bounds and halo analysis.
//! - [`classical`]: exact U_p on V^k-valued symbols, used as an oracle.

pub mod arith;
pub mod classical;
pub mod dist;
pub mod error;
pub mod manin;
pub mod newton;
pub mod padic;
pub mod spectral;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
