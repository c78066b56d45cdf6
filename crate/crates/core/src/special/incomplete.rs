//! Upper incomplete gamma function Γ(s, z).

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

pub(crate) const MAX_ITER: usize = 10_000;

/// Upper incomplete gamma `Γ(s, z) = ∫_z^∞ u^(s-1) e^(-u) du` for `s > 0`, `z >= 0`.
///
/// Below `z = s + 1` the lower function is summed as a power series and
/// subtracted from `Γ(s)`; at and above it a Lentz continued fraction gives
/// `Γ(s, z)` directly.
pub fn upper_incomplete_gamma<T: Real>(s: T, z: T) -> Result<T> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::domain(format!(
            "incomplete gamma needs s > 0, got {s}"
        )));
    }
    if !(z >= T::zero()) {
        return Err(Error::domain(format!(
            "incomplete gamma needs z >= 0, got {z}"
        )));
    }
    let full = ln_gamma(s)?.value();
    if z == T::zero() {
        return Ok(full);
    }
    if z.is_infinite() {
        return Ok(T::zero());
    }
    if z < s + T::one() {
        Ok(full - lower_series(s, z)?)
    } else {
        continued_fraction(s, z)
    }
}

/// γ(s, z) = z^s e^(-z) Σ z^n / (s (s+1) ... (s+n))
fn lower_series<T: Real>(s: T, z: T) -> Result<T> {
    let prefactor = (s * z.ln() - z).exp();
    let mut term = T::one() / s;
    let mut sum = term;
    let mut denom = s;
    for _ in 0..MAX_ITER {
        denom = denom + T::one();
        term = term * z / denom;
        sum = sum + term;
        if term.abs() < sum.abs() * T::epsilon() {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma series",
        iterations: MAX_ITER,
    })
}

/// Γ(s, z) = z^s e^(-z) / (z + 1 - s - 1(1-s)/(z + 3 - s - 2(2-s)/(z + 5 - s - ...)))
fn continued_fraction<T: Real>(s: T, z: T) -> Result<T> {
    let tiny = lit::<T>(1e-300).max(T::min_positive_value());
    let prefactor = (s * z.ln() - z).exp();
    let mut b = z + T::one() - s;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let fi = lit::<T>(i as f64);
        let an = -fi * (fi - s);
        b = b + lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = d * c;
        h = h * delta;
        if (delta - T::one()).abs() < T::epsilon() {
            return Ok(prefactor * h);
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma continued fraction",
        iterations: MAX_ITER,
    })
}
