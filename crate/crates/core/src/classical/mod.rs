//! Exact finite-dimensional oracle: U_p on V^k-valued partial modular symbols, slopes,
//! the Atkin-Lehner pairing and the control-theorem comparison.

mod action;
mod charpoly;
mod checks;
mod up;

pub use action::{dual_action, legendre, Epsilon, QMatrix};
pub use charpoly::{charpoly_exact, charpoly_mod_berkowitz, charpoly_mod_hessenberg, coefficient_bound, vp_big};
pub use up::{assemble_classical, classical_operator, classical_up, expected_dimension, slopes, slopes_from_charpoly, Slope};
pub use checks::{atkin_lehner_check, atkin_lehner_matrix, below, check_parity, control_check, w_operator, AtkinLehnerReport, ControlReport, CONTROL_PREC};
