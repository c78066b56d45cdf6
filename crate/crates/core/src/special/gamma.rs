//! Log-gamma, reciprocal gamma and the rising factorial.

use crate::error::{Error, Result};
use crate::scalar::{is_nonpositive_integer, lit, Real};

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnGamma<T> {
    pub ln_abs: T,
    /// +1 or -1.
    pub sign: i8,
}

impl<T: Real> LnGamma<T> {
    /// `Γ(x)` itself; overflows to infinity for large arguments.
    pub fn value(&self) -> T {
        let v = self.ln_abs.exp();
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// `sin(πx)` with exact argument reduction, so zeros at integers stay exact.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    // r in [-1, 1], sin(πx) = sin(πr)
    let r = x - two * (x / two).round();
    let reduced = if r > half {
        T::one() - r
    } else if r < -half {
        -T::one() - r
    } else {
        r
    };
    (T::PI() * reduced).sin()
}

fn lanczos_ln_gamma<T: Real>(x: T) -> T {
    // valid for x >= 0.5
    let z = x - T::one();
    let mut series = lit::<T>(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS[1..].iter().enumerate() {
        series = series + lit::<T>(c) / (z + lit::<T>((i + 1) as f64));
    }
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let half_ln_two_pi = lit::<T>(0.918_938_533_204_672_7);
    half_ln_two_pi + (z + lit::<T>(0.5)) * t.ln() - t + series.ln()
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`.
///
/// Lanczos approximation (g = 7, nine terms) for `x >= 1/2`, reflection below.
/// Fails with [`Error::Pole`] on non-positive integers.
pub fn ln_gamma<T: Real>(x: T) -> Result<LnGamma<T>> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "ln_gamma argument {x} is not finite"
        )));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x.to_f64_lossy()));
    }
    if x >= lit(0.5) {
        return Ok(LnGamma {
            ln_abs: lanczos_ln_gamma(x),
            sign: 1,
        });
    }
    // Γ(x)Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    let reflected = lanczos_ln_gamma(T::one() - x);
    Ok(LnGamma {
        ln_abs: T::PI().ln() - s.abs().ln() - reflected,
        sign: if s < T::zero() { -1 } else { 1 },
    })
}

/// `Γ(x)`, or an error at the poles.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    ln_gamma(x).map(|g| g.value())
}

/// `1/Γ(x)`; exactly zero at the poles `x = 0, -1, -2, ...`.
pub fn reciprocal_gamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    if x >= lit(0.5) {
        return (-lanczos_ln_gamma(x)).exp();
    }
    // 1/Γ(x) = sin(πx) Γ(1-x) / π
    let s = sin_pi(x);
    let magnitude = (s.abs().ln() + lanczos_ln_gamma(T::one() - x) - T::PI().ln()).exp();
    if s < T::zero() {
        -magnitude
    } else {
        magnitude
    }
}

/// Rising factorial `x (x+1) ... (x+k-1)`; one for `k = 0`.
pub fn pochhammer_rising<T: Real>(x: T, k: u64) -> T {
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * (x + lit::<T>(j as f64));
    }
    acc
}
