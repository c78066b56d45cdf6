//! Hermite function `H_ν(x)` of real order.
//!
//! ```text
//! H_ν(x) = 2^ν √π [ M(−ν/2; 1/2; x²) / Γ((1−ν)/2) − 2x M((1−ν)/2; 3/2; x²) / Γ(−ν/2) ]
//! ```
//!
//! Gamma poles are absorbed by [`reciprocal_gamma`] returning zero, which is
//! what makes integer orders collapse to the Hermite polynomials.

use crate::error::Result;
use crate::scalar::{lit, Real};
use crate::special::{kummer_m, reciprocal_gamma};

/// Non-negative integer orders up to this use the polynomial recurrence.
const POLYNOMIAL_MAX_ORDER: usize = 64;

/// `H_ν(x)`. Non-negative integer orders go through the polynomial
/// recurrence; everything else through [`hermite_fn_series`].
pub fn hermite_fn<T: Real>(nu: T, x: T) -> Result<T> {
    if nu >= T::zero() && nu == nu.floor() {
        if let Some(n) = nu.to_usize().filter(|&n| n <= POLYNOMIAL_MAX_ORDER) {
            return Ok(hermite_polynomials(n, x)[n]);
        }
    }
    hermite_fn_series(nu, x)
}

/// `H_ν(x)` from the two Kummer series, for any real order.
pub fn hermite_fn_series<T: Real>(nu: T, x: T) -> Result<T> {
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let x2 = x * x;
    let even_weight = reciprocal_gamma((T::one() - nu) * half);
    let odd_weight = reciprocal_gamma(-nu * half);
    let even = if even_weight == T::zero() {
        T::zero()
    } else {
        even_weight * kummer_m(-nu * half, half, x2)?
    };
    let odd = if odd_weight == T::zero() || x == T::zero() {
        T::zero()
    } else {
        two * x * odd_weight * kummer_m((T::one() - nu) * half, lit(1.5), x2)?
    };
    Ok(two.powf(nu) * T::PI().sqrt() * (even - odd))
}

/// `H_ν(0) = 2^ν √π / Γ((1−ν)/2)`.
pub fn hermite_at_zero<T: Real>(nu: T) -> T {
    lit::<T>(2.0).powf(nu) * T::PI().sqrt() * reciprocal_gamma((T::one() - nu) * lit(0.5))
}

/// `H'_ν(x) = 2ν H_{ν−1}(x)`.
pub fn hermite_derivative<T: Real>(nu: T, x: T) -> Result<T> {
    if nu == T::zero() {
        return Ok(T::zero());
    }
    Ok(lit::<T>(2.0) * nu * hermite_fn(nu - T::one(), x)?)
}

/// `H_{ν+1}(x) − 2x H_ν(x) + 2ν H_{ν−1}(x)`, returned with the scale
/// `max(1, |H_{ν+1}|)` the residual should be measured against.
pub fn recurrence_residual<T: Real>(nu: T, x: T) -> Result<(T, T)> {
    let two = lit::<T>(2.0);
    let up = hermite_fn(nu + T::one(), x)?;
    let mid = hermite_fn(nu, x)?;
    let down = hermite_fn(nu - T::one(), x)?;
    let residual = up - two * x * mid + two * nu * down;
    Ok((residual, T::one().max(up.abs())))
}

/// Residual of `y'' − 2x y' + 2ν y = 0` with both derivatives taken from the
/// derivative rule: `y' = 2ν H_{ν−1}`, `y'' = 4ν(ν−1) H_{ν−2}`.
/// Returns the residual and the largest term magnitude (at least one).
pub fn ode_residual<T: Real>(nu: T, x: T) -> Result<(T, T)> {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let h0 = hermite_fn(nu, x)?;
    let h1 = hermite_fn(nu - T::one(), x)?;
    let h2 = hermite_fn(nu - two, x)?;
    let second = four * nu * (nu - T::one()) * h2;
    let first = two * x * two * nu * h1;
    let zeroth = two * nu * h0;
    let scale = T::one()
        .max(second.abs())
        .max(first.abs())
        .max(zeroth.abs());
    Ok((second - first + zeroth, scale))
}

/// Physicists' Hermite polynomials `H_0..=H_n` at `x` from the three-term recurrence.
pub fn hermite_polynomials<T: Real>(n: usize, x: T) -> Vec<T> {
    let two = lit::<T>(2.0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    if n >= 1 {
        out.push(two * x);
    }
    for k in 1..n {
        let next = two * x * out[k] - two * lit::<T>(k as f64) * out[k - 1];
        out.push(next);
    }
    out
}
