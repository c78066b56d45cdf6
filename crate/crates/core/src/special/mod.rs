//! Real-valued special functions: log-gamma, reciprocal gamma, the upper
//! incomplete gamma function, Kummer's M and the rising factorial.
//!
//! All functions are generic over [`Real`](crate::Real) and pure.

mod gamma;
mod incomplete;
mod kummer;

pub use gamma::{gamma, ln_gamma, pochhammer_rising, reciprocal_gamma, sin_pi, LnGamma};
pub use incomplete::upper_incomplete_gamma;
pub use kummer::kummer_m;
