//! Kummer's confluent hypergeometric function M(α; β; z).

use super::incomplete::MAX_ITER;
use crate::error::{Error, Result};
use crate::scalar::{is_nonpositive_integer, lit, Real};
use crate::summation::NeumaierSum;

/// Number of consecutive negligible terms required before the series is cut.
const QUIET_TERMS: usize = 3;
const TERM_TOLERANCE: f64 = 1e-16;

/// `M(α; β; z) = Σ (α)_k z^k / ((β)_k k!)`.
///
/// The series stops after three consecutive terms fall below `1e-16` of the
/// running sum, or exactly when a term vanishes because `α` is a non-positive
/// integer.
pub fn kummer_m<T: Real>(alpha: T, beta: T, z: T) -> Result<T> {
    if is_nonpositive_integer(beta) {
        return Err(Error::Pole(beta.to_f64_lossy()));
    }
    if !(alpha.is_finite() && beta.is_finite() && z.is_finite()) {
        return Err(Error::domain("kummer_m arguments must be finite"));
    }
    let tol = lit::<T>(TERM_TOLERANCE);
    let mut sum = NeumaierSum::new();
    let mut term = T::one();
    let mut quiet = 0;
    sum.add(term);
    for k in 0..MAX_ITER {
        let kf = lit::<T>(k as f64);
        let numer = alpha + kf;
        if numer == T::zero() {
            return Ok(sum.value());
        }
        term = term * numer * z / ((beta + kf) * (kf + T::one()));
        sum.add(term);
        if term.abs() <= tol * sum.value().abs() {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence {
        what: "Kummer M series",
        iterations: MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::upper_incomplete_gamma;

    #[test]
    fn zero_argument() {
        for (a, b) in [(0.3, 0.5), (-2.5, 1.5), (4.0, 7.0)] {
            assert_eq!(kummer_m(a, b, 0.0f64).unwrap(), 1.0);
        }
    }

    #[test]
    fn equal_parameters_give_exponential() {
        for a in [0.5f64, 1.5, 3.25] {
            for z in [-2.0f64, 0.5, 4.0] {
                let m = kummer_m(a, a, z).unwrap();
                assert!((m - z.exp()).abs() <= 1e-14 * z.exp(), "a = {a}, z = {z}");
            }
        }
    }

    #[test]
    fn terminating_polynomial() {
        for z in [-3.0f64, 0.0, 0.25, 2.0, 4.0] {
            assert_eq!(kummer_m(-1.0, 0.5, z).unwrap(), 1.0 - 2.0 * z);
        }
        // M(-2; 1/2; z) = 1 - 4z + 4z²/3
        let z = 1.5f64;
        let m = kummer_m(-2.0, 0.5, z).unwrap();
        assert!((m - (1.0 - 4.0 * z + 4.0 * z * z / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn beta_pole() {
        assert_eq!(kummer_m(1.0f64, 0.0, 1.0), Err(Error::Pole(0.0)));
        assert_eq!(kummer_m(1.0f64, -2.0, 1.0), Err(Error::Pole(-2.0)));
    }

    #[test]
    fn lower_incomplete_gamma_relation() {
        // γ(s, z) = z^s e^{-z} M(1; s+1; z) / s
        for s in [0.5f64, 2.0, 4.5] {
            for z in [0.25f64, s + 1.0, 2.0 * s + 3.0] {
                let lower = z.powf(s) * (-z).exp() * kummer_m(1.0, s + 1.0, z).unwrap() / s;
                let upper = upper_incomplete_gamma(s, z).unwrap();
                let full = upper_incomplete_gamma(s, 0.0).unwrap();
                assert!(
                    ((lower + upper) - full).abs() < 1e-10 * full,
                    "s = {s}, z = {z}"
                );
            }
        }
    }
}
