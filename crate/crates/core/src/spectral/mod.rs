//! Assembly of U_p over the Iwasawa algebra and its Fredholm series.

pub mod berkowitz;
mod fredholm;
mod up;

pub use berkowitz::{fredholm_coefficients, RingOps, SparseMatrix};
pub use fredholm::{
    certified_level, coefficient_bound_check, degree_level, degrees_for_level, fredholm, fredholm_mod, fredholm_newton,
    lambda_profile, specialize_check, FredholmSeries, LambdaProfile, ResidueRing, SeriesRing, SpecializeLine,
};
pub use up::{assemble_from_table, assemble_up, row_bound, UpMatrix};
