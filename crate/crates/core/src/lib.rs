//! Charlier polynomials at real arguments, Hermite functions of real order,
//! and numerical machinery for the limit
//!
//! ```text
//! (2a)^(ν/2) c_⌈a − x√(2a)⌉^a(ν) = H_ν(x) + O(1/√a),
//! ```
//!
//! uniformly for `ν` and `x` in bounded intervals.
//!
//! The numerical code is generic over the scalar type. [`Scalar`] covers `f32`,
//! `f64` and exact rationals and is all the Charlier evaluators need; [`Real`]
//! covers the floating-point types used everywhere transcendental functions
//! appear. The aliases at the crate root fix the usual choices.
//!
//! | module | contents |
//! |--------|----------|
//! | [`special`] | log-gamma, `1/Γ`, upper incomplete gamma, Kummer M, rising factorial |
//! | [`charlier`] | direct sum, degree and order recurrences, scaled value `y_ν^a(x)` |
//! | [`hermite`] | `H_ν(x)` from Kummer series, derivative rule, residual checks |
//! | [`asymptotics`] | term decomposition at `x = 0`, head/tail split, trapezoid identity |
//! | [`polygon`] | Euler polygon of the Hermite equation and the Charlier state trace |
//! | [`zeros`] | bracketing and bisection of zeros in the order variable |
//! | [`rate`] | log-log rate fits and the order-two sharpness identity |
//! | [`cli`] | command-line front end |

// `!(x > 0)` deliberately rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod charlier;
pub mod cli;
pub mod error;
pub mod hermite;
pub mod polygon;
pub mod rate;
pub mod scalar;
pub mod special;
pub mod summation;
pub mod table;
pub mod zeros;

pub use error::{Error, Result};
pub use scalar::{parse_decimal_rational, Real, Scalar};

/// Exact rational scalar used by the exact summation mode.
pub type Rational = num_rational::BigRational;

pub type ScaledPoint64 = charlier::ScaledPoint<f64>;
pub type ScaledPointExact = charlier::ScaledPoint<Rational>;
pub type CharlierQuery64 = charlier::CharlierQuery<f64>;
pub type CharlierQueryExact = charlier::CharlierQuery<Rational>;
pub type StateVector64 = polygon::StateVector<f64>;
pub type PolygonTrace64 = polygon::PolygonTrace<f64>;
pub type SplitConfig64 = asymptotics::SplitConfig<f64>;
pub type SplitReport64 = asymptotics::SplitReport<f64>;
pub type ZeroResult64 = zeros::ZeroResult<f64>;
pub type RateFit64 = rate::RateFit<f64>;
pub type SharpnessRecordExact = rate::SharpnessRecord<Rational>;
