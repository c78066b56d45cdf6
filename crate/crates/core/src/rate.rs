//! Empirical convergence orders and the exact sharpness identity.

use crate::charlier::{scaled_y, ScaledPoint};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real, Scalar};

/// Least-squares line through `(ln a, ln err)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    /// Points used in the fit.
    pub points: Vec<(T, T)>,
    /// Points dropped because their error was exactly zero.
    pub excluded: Vec<(T, T)>,
}

impl<T: Real> RateFit<T> {
    /// True when the slope lies in `[target − tol, target + tol]`.
    pub fn slope_within(&self, target: T, tol: T) -> bool {
        (self.slope - target).abs() <= tol
    }
}

/// Fits `ln err = intercept + slope · ln a`.
///
/// Exactly-zero errors are set aside in [`RateFit::excluded`]; negative or
/// non-finite errors, fewer than three usable points, or a single distinct `a`
/// are rejected.
pub fn fit_rate<T: Real>(points: &[(T, T)]) -> Result<RateFit<T>> {
    let mut used = Vec::with_capacity(points.len());
    let mut excluded = Vec::new();
    for &(a, err) in points {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::domain(format!("rate fit needs a > 0, got {a}")));
        }
        if err.is_zero() {
            excluded.push((a, err));
        } else if err > T::zero() && err.is_finite() {
            used.push((a, err));
        } else {
            return Err(Error::domain(format!("rate fit needs err >= 0, got {err}")));
        }
    }
    if used.len() < 3 {
        return Err(Error::domain(format!(
            "rate fit needs at least 3 points with err > 0, have {}",
            used.len()
        )));
    }
    let count = lit::<T>(used.len() as f64);
    let (sx, sy) = used
        .iter()
        .fold((T::zero(), T::zero()), |(sx, sy), &(a, e)| {
            (sx + a.ln(), sy + e.ln())
        });
    let (mx, my) = (sx / count, sy / count);
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for &(a, e) in &used {
        let dx = a.ln() - mx;
        let dy = e.ln() - my;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx <= T::zero() {
        return Err(Error::domain(
            "rate fit needs at least two distinct a values",
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy <= T::zero() {
        T::one()
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        points: used,
        excluded,
    })
}

/// Both sides of `y_2^a(x) − H_2(x) = 4x/√(2a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessRecord<T> {
    pub n: u64,
    /// `(2a) c_n^a(2) − (4x² − 2)`
    pub lhs: T,
    /// `4x / √(2a)`
    pub rhs: T,
    pub equal: bool,
}

/// Evaluates the order-two sharpness identity at `(x, a)`.
///
/// `a − x√(2a)` must be a non-negative integer. With rationals `√(2a)` must be
/// rational too, and `equal` is exact equality.
pub fn sharpness_check<T: Scalar>(x: &T, a: &T) -> Result<SharpnessRecord<T>> {
    let p = ScaledPoint::new(x.clone(), a.clone())?;
    if !p.theta.is_zero() {
        return Err(Error::domain(format!(
            "a - x*sqrt(2a) is not an integer for x = {x:?}, a = {a:?}"
        )));
    }
    let two = T::from_i64_exact(2);
    let four = T::from_i64_exact(4);
    let y = scaled_y(&p, &two)?;
    let h2 = four.clone() * x.clone() * x.clone() - two;
    let lhs = y - h2;
    let rhs = four * x.clone() / p.r.clone();
    let equal = lhs == rhs;
    Ok(SharpnessRecord {
        n: p.n,
        lhs,
        rhs,
        equal,
    })
}

/// `(x, a)` pairs with `a = r²/2` and `x = j/r` for `j = 0..=⌊a⌋`.
pub fn admissible_sharpness_pairs(
    r_values: &[u32],
) -> Vec<(num_rational::BigRational, num_rational::BigRational)> {
    use crate::scalar::ratio;
    let mut out = Vec::new();
    for &r in r_values {
        let r = i64::from(r);
        let a = ratio(r * r, 2);
        let max_j = (r * r) / 2;
        for j in 0..=max_j {
            out.push((ratio(j, r), a.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn exact_half_power() {
        let pts: Vec<(f64, f64)> = [1e2f64, 1e3, 1e4, 1e5]
            .iter()
            .map(|&a| (a, a.powf(-0.5)))
            .collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intercept_recovered() {
        let pts: Vec<(f64, f64)> = [3.0, 30.0, 300.0].iter().map(|&a| (a, 7.0 / a)).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 0.5)]).is_err());
        assert!(fit_rate(&[(2.0, 1.0), (2.0, 0.5), (2.0, 0.3)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (2.0, -0.5), (3.0, 0.3)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (2.0, f64::NAN), (3.0, 0.3)]).is_err());
        // zeros are set aside, not fatal, as long as three points remain
        let fit = fit_rate(&[(1.0f64, 1.0), (2.0, 0.0), (3.0, 1.0 / 3.0), (4.0, 0.25)]).unwrap();
        assert_eq!(fit.excluded, vec![(2.0, 0.0)]);
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 0.3)]).is_err());
    }

    #[test]
    fn sharpness_examples() {
        let rec = sharpness_check(&ratio(1, 2), &ratio(2, 1)).unwrap();
        assert_eq!(
            (rec.n, rec.lhs.clone(), rec.rhs.clone(), rec.equal),
            (1, ratio(1, 1), ratio(1, 1), true)
        );
        let rec = sharpness_check(&ratio(0, 1), &ratio(8, 1)).unwrap();
        assert_eq!((rec.n, rec.lhs.clone(), rec.equal), (8, ratio(0, 1), true));
        let rec = sharpness_check(&ratio(1, 1), &ratio(8, 1)).unwrap();
        assert_eq!(
            (rec.n, rec.lhs.clone(), rec.rhs.clone(), rec.equal),
            (4, ratio(1, 1), ratio(1, 1), true)
        );
    }

    #[test]
    fn sharpness_rejects_inadmissible_points() {
        // n not an integer
        assert!(sharpness_check(&ratio(1, 3), &ratio(2, 1)).is_err());
        // √(2a) irrational
        assert!(sharpness_check(&ratio(0, 1), &ratio(3, 1)).is_err());
    }

    #[test]
    fn admissible_pairs() {
        let pairs = admissible_sharpness_pairs(&[2, 4]);
        // r = 2: a = 2, j = 0..=2; r = 4: a = 8, j = 0..=8
        assert_eq!(pairs.len(), 3 + 9);
        assert!(pairs
            .iter()
            .all(|(x, a)| sharpness_check(x, a).unwrap().equal));
    }
}
