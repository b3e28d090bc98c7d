//! Fixed-precision p-adic integers, truncated Iwasawa-algebra series, the universal weight
//! character and valuation/specialization semantics.

mod character;
mod int;
mod modulus;
mod series;
mod weight;

pub use character::{char_working_prec, exp_p, exp_p_integer, plog, plog_loss, teichmuller, universal_char};
pub use int::{pow_big, PAdicInt, PVal};
pub use modulus::Modulus;
pub use series::{point_valuation, Flag, TSeries, Val, Window};
pub use weight::{center_beta, specialize, Specialized, WeightMode, WeightSpec};
