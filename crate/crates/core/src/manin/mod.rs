//! Exact integer-matrix geometry for partial modular symbols: cusps, unimodular paths,
//! Gamma_0(N) cosets, fundamental domains with their boundary pairing, and the solver
//! writing degree-zero divisors on C = P^1(Q) - Gamma_0(N).oo in free generators.

mod cosets;
mod cusp;
mod domain;
mod express;
mod level;
mod matrix;
mod path;

pub use cosets::{coset_reps, elliptic_counts, lift_to_sl2, P1};
pub use cusp::{Cusp, Divisor};
pub use domain::{build_domain, BoundaryPair, FundamentalDomain, Triangle};
pub use express::{express, ExpressContext, GroupWord, WordTerm};
pub use level::{in_lower_monoid, LevelLift, ManinData, UpTerm};
pub use matrix::Mat2;
pub use path::{cf_decompose, sl2_sending_infinity_to, UnimodPath};
