//! Charlier polynomials `c_n^a(ν)` at real argument `ν`, and the scaled value
//! `y_ν^a(x) = (2a)^(ν/2) c_n^a(ν)` with `n = ⌈a − x√(2a)⌉`.
//!
//! Every evaluator is generic over [`Scalar`]: with `f64`/`f32` the direct sum is
//! compensated, with [`BigRational`](num_rational::BigRational) it is exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How a Charlier sum is accumulated. At the type level the mode is the choice
/// of scalar; this enum is the run-time name of that choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SummationMode {
    #[default]
    CompensatedFloat,
    ExactRational,
}

impl fmt::Display for SummationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummationMode::CompensatedFloat => f.write_str("float"),
            SummationMode::ExactRational => f.write_str("rational"),
        }
    }
}

/// One evaluation request: degree `n`, parameter `a > 0`, argument `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharlierQuery<T> {
    pub n: u64,
    pub a: T,
    pub nu: T,
}

impl<T: Scalar> CharlierQuery<T> {
    pub fn new(n: u64, a: T, nu: T) -> Result<Self> {
        check_parameter(&a)?;
        Ok(Self { n, a, nu })
    }

    pub fn evaluate(&self) -> Result<T> {
        charlier_direct(self.n, &self.a, &self.nu)
    }
}

fn check_parameter<T: Scalar>(a: &T) -> Result<()> {
    if *a > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "Charlier parameter a must be positive, got {a:?}"
        )))
    }
}

/// `c_n^a(ν) = Σ_{k=0}^{n} C(n,k) (−ν)_k a^(−k)`.
///
/// Terms come from the ratio `t_{k+1} = t_k (n−k)/(k+1) · (k−ν)/a`, so neither
/// the binomial coefficient nor `a^(−k)` is ever formed on its own.
pub fn charlier_direct<T: Scalar>(n: u64, a: &T, nu: &T) -> Result<T> {
    check_parameter(a)?;
    let terms = CharlierTerms {
        n,
        a,
        nu,
        k: 0,
        term: Some(T::one()),
    };
    Ok(T::accurate_sum(terms))
}

struct CharlierTerms<'a, T> {
    n: u64,
    a: &'a T,
    nu: &'a T,
    k: u64,
    term: Option<T>,
}

impl<T: Scalar> Iterator for CharlierTerms<'_, T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let current = self.term.take()?;
        if self.k < self.n {
            let k = T::from_u64_exact(self.k);
            let rising = k.clone() - self.nu.clone();
            // (−ν)_k has a zero factor once k = ν; the rest of the series vanishes
            if !rising.is_zero() {
                let binom = T::from_u64_exact(self.n - self.k) / (k + T::one());
                self.term = Some(current.clone() * binom * rising / self.a.clone());
            }
        }
        self.k += 1;
        Some(current)
    }
}

/// `(c_0, ..., c_{n_max})` at fixed `ν` from the degree recurrence
/// `a c_{m+1} = (m + a − ν) c_m − m c_{m−1}`.
pub fn charlier_degree_sequence<T: Scalar>(a: &T, nu: &T, n_max: u64) -> Result<Vec<T>> {
    check_parameter(a)?;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(T::one());
    if n_max == 0 {
        return Ok(out);
    }
    out.push(T::one() - nu.clone() / a.clone());
    for m in 1..n_max {
        let mf = T::from_u64_exact(m);
        let i = m as usize;
        let next = ((mf.clone() + a.clone() - nu.clone()) * out[i].clone()
            - mf * out[i - 1].clone())
            / a.clone();
        out.push(next);
    }
    Ok(out)
}

/// `c_n(ν+1) = ((ν + a − n)/a) c_n(ν) − (ν/a) c_n(ν−1)`.
pub fn charlier_order_shift<T: Scalar>(
    n: u64,
    a: &T,
    nu: &T,
    c_at_nu: &T,
    c_at_nu_minus_1: &T,
) -> T {
    let nf = T::from_u64_exact(n);
    (nu.clone() + a.clone() - nf) / a.clone() * c_at_nu.clone()
        - nu.clone() / a.clone() * c_at_nu_minus_1.clone()
}

/// `c_n(ν_0 + j)` for `j = 0..=steps`, seeded by direct evaluation at `ν_0 − 1`
/// and `ν_0` and continued with [`charlier_order_shift`].
pub fn charlier_order_ladder<T: Scalar>(n: u64, a: &T, nu0: &T, steps: usize) -> Result<Vec<T>> {
    let mut prev = charlier_direct(n, a, &(nu0.clone() - T::one()))?;
    let mut cur = charlier_direct(n, a, nu0)?;
    let mut nu = nu0.clone();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(cur.clone());
    for _ in 0..steps {
        let next = charlier_order_shift(n, a, &nu, &cur, &prev);
        nu = nu + T::one();
        prev = std::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    Ok(out)
}

/// Threshold below which `x` is treated as zero by [`charlier_backward_step`].
pub const BACKWARD_STEP_MIN_X: f64 = 1e-300;

/// `c_{n−1}(x−1) = (a/x) (c_{n−1}(x) − c_n(x))`.
///
/// Signals [`Error::Degenerate`] for `|x| < 1e-300`; see
/// [`charlier_backward_or_direct`] for the fallback.
pub fn charlier_backward_step<T: Scalar>(
    n: u64,
    a: &T,
    x: &T,
    c_nm1_at_x: &T,
    c_n_at_x: &T,
) -> Result<T> {
    if n == 0 {
        return Err(Error::domain("backward step needs n >= 1"));
    }
    if x.abs().to_f64_lossy() < BACKWARD_STEP_MIN_X {
        return Err(Error::Degenerate(format!(
            "backward step with x = {x:?} divides by zero"
        )));
    }
    Ok(a.clone() / x.clone() * (c_nm1_at_x.clone() - c_n_at_x.clone()))
}

/// [`charlier_backward_step`], falling back to the direct sum at degenerate `x`.
pub fn charlier_backward_or_direct<T: Scalar>(
    n: u64,
    a: &T,
    x: &T,
    c_nm1_at_x: &T,
    c_n_at_x: &T,
) -> Result<T> {
    match charlier_backward_step(n, a, x, c_nm1_at_x, c_n_at_x) {
        Err(Error::Degenerate(_)) => charlier_direct(n - 1, a, &(x.clone() - T::one())),
        other => other,
    }
}

/// A point `(x, a)` with the derived degree `n = ⌈a − x√(2a)⌉` and the offset
/// `θ = n − (a − x√(2a)) ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPoint<T> {
    pub x: T,
    pub a: T,
    /// `√(2a)`
    pub r: T,
    pub n: u64,
    pub theta: T,
}

impl<T: Scalar> ScaledPoint<T> {
    pub fn new(x: T, a: T) -> Result<Self> {
        check_parameter(&a)?;
        let two_a = a.clone() + a.clone();
        let r = two_a
            .exact_sqrt()
            .ok_or_else(|| Error::Inexact(format!("sqrt(2a) for a = {a:?}")))?;
        let position = a.clone() - x.clone() * r.clone();
        let n = position
            .ceil_i64()
            .ok_or_else(|| Error::domain(format!("a - x*sqrt(2a) = {position:?} is not finite")))?;
        if n < 0 {
            return Err(Error::domain(format!(
                "derived degree n = {n} is negative for x = {x:?}, a = {a:?}"
            )));
        }
        let theta = T::from_i64_exact(n) - position;
        Ok(Self {
            x,
            a,
            r,
            n: n as u64,
            theta,
        })
    }
}

/// `y_ν^a(x) = (2a)^(ν/2) c_n^a(ν)`.
pub fn scaled_y<T: Scalar>(p: &ScaledPoint<T>, nu: &T) -> Result<T> {
    let c = charlier_direct(p.n, &p.a, nu)?;
    let scale =
        p.r.pow_scalar(nu)
            .ok_or_else(|| Error::Inexact(format!("(2a)^(nu/2) for nu = {nu:?}")))?;
    Ok(scale * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn degree_zero_and_argument_zero() {
        assert_eq!(charlier_direct(0, &5.0, &3.3).unwrap(), 1.0);
        for n in [0u64, 1, 7, 100, 10_000] {
            assert_eq!(charlier_direct(n, &3.0, &0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn degree_one() {
        for (a, nu) in [(2.0, 0.5), (10.0, -3.25), (0.7, 4.0)] {
            let c: f64 = charlier_direct(1, &a, &nu).unwrap();
            assert!((c - (1.0 - nu / a)).abs() < 1e-15);
        }
    }

    #[test]
    fn quadratic_closed_form() {
        // c_2^a(ν) = 1 − (1 + 2a)ν/a² + ν²/a²; at a = 2, ν = 2: −1/2
        let exact = charlier_direct(2, &ratio(2, 1), &ratio(2, 1)).unwrap();
        assert_eq!(exact, ratio(-1, 2));
        assert!((charlier_direct(2, &2.0f64, &2.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_parameter_rejected() {
        assert!(matches!(
            charlier_direct(3, &0.0, &1.0),
            Err(Error::Domain(_))
        ));
        assert!(CharlierQuery::new(3, -1.0, 1.0).is_err());
        assert!(charlier_degree_sequence(&-2.0, &1.0, 4).is_err());
    }

    #[test]
    fn degree_sequence_matches_direct() {
        let seq = charlier_degree_sequence(&2.0f64, &2.0, 5).unwrap();
        assert!((seq[2] + 0.5).abs() < 1e-15);
        assert!((seq[1] - 0.0).abs() < 1e-15);
        assert!(charlier_degree_sequence(&3.0, &0.0, 20)
            .unwrap()
            .iter()
            .all(|&c| c == 1.0));
        assert_eq!(charlier_degree_sequence(&3.0, &1.0, 0).unwrap(), vec![1.0]);
    }

    #[test]
    fn order_shift_examples() {
        // ν = 0: the ν/a coefficient vanishes
        let out = charlier_order_shift(3, &4.0, &0.0, &1.0, &123.0);
        assert_eq!(out, 1.0 - 3.0 / 4.0);
        // n = 0: constant one
        assert_eq!(charlier_order_shift(0, &4.0, &2.5, &1.0, &1.0), 1.0);
        // n = 2, a = 2, ν = 1 → c_2(2) = −1/2
        let a = ratio(2, 1);
        let c1 = charlier_direct(2, &a, &ratio(1, 1)).unwrap();
        let c0 = charlier_direct(2, &a, &ratio(0, 1)).unwrap();
        assert_eq!(
            charlier_order_shift(2, &a, &ratio(1, 1), &c1, &c0),
            ratio(-1, 2)
        );
    }

    #[test]
    fn backward_step_examples() {
        // n = 1, x = a: c_0(x) − c_1(x) = x/a, result c_0(x − 1) = 1
        let a = 3.0;
        let c1 = charlier_direct(1, &a, &a).unwrap();
        assert_eq!(charlier_backward_step(1, &a, &a, &1.0, &c1).unwrap(), 1.0);
        // n = 2, a = 2, x = 3 → c_1^2(2) = 0
        let a = ratio(2, 1);
        let x = ratio(3, 1);
        let c1 = charlier_direct(1, &a, &x).unwrap();
        let c2 = charlier_direct(2, &a, &x).unwrap();
        assert!(charlier_backward_step(2, &a, &x, &c1, &c2)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn backward_step_degenerate_x() {
        let err = charlier_backward_step(2, &2.0, &0.0, &1.0, &1.0).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
        // fallback: c_1^2(−1) = 1 + 1/2
        let v = charlier_backward_or_direct(2, &2.0f64, &0.0, &1.0, &1.0).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        assert!(charlier_backward_step(0, &2.0, &1.0, &1.0, &1.0).is_err());
    }

    #[test]
    fn order_ladder_reaches_integer_orders() {
        let ladder = charlier_order_ladder(2, &ratio(2, 1), &ratio(0, 1), 3).unwrap();
        for (j, v) in ladder.iter().enumerate() {
            let direct = charlier_direct(2, &ratio(2, 1), &ratio(j as i64, 1)).unwrap();
            assert_eq!(*v, direct);
        }
    }

    #[test]
    fn scaled_point_derivation() {
        let p = ScaledPoint::new(0.5f64, 2.0).unwrap();
        assert_eq!((p.n, p.theta, p.r), (1, 0.0, 2.0));
        let p = ScaledPoint::new(0.3f64, 2.0).unwrap();
        assert_eq!(p.n, 2);
        assert!((p.theta - 0.6).abs() < 1e-15);
        assert!(ScaledPoint::new(3.0f64, 2.0).is_err());
        assert!(ScaledPoint::new(0.0f64, 0.0).is_err());
        // √(2a) must be rational in exact mode
        assert!(matches!(
            ScaledPoint::new(ratio(0, 1), ratio(3, 1)),
            Err(Error::Inexact(_))
        ));
    }

    #[test]
    fn scaled_values() {
        for (x, a) in [(0.0, 100.0), (0.4, 7.5), (-1.0, 3.0)] {
            let p = ScaledPoint::new(x, a).unwrap();
            assert_eq!(scaled_y(&p, &0.0).unwrap(), 1.0);
        }
        let p = ScaledPoint::new(ratio(1, 2), ratio(2, 1)).unwrap();
        assert!(scaled_y(&p, &ratio(2, 1)).unwrap().is_zero());
        let p = ScaledPoint::new(ratio(1, 1), ratio(8, 1)).unwrap();
        assert_eq!(p.n, 4);
        assert_eq!(scaled_y(&p, &ratio(1, 1)).unwrap(), ratio(2, 1));
        // fractional order has no exact power
        assert!(scaled_y(&p, &ratio(1, 2)).is_err());
    }

    #[test]
    fn rational_and_float_agree() {
        let a = ratio(7, 2);
        let nu = ratio(-5, 4);
        let exact: BigRational = charlier_direct(15, &a, &nu).unwrap();
        let float = charlier_direct(15, &3.5f64, &-1.25).unwrap();
        assert!((exact.to_f64_lossy() - float).abs() < 1e-12 * float.abs());
    }

    #[test]
    fn single_precision_smoke() {
        let c = charlier_direct(2, &2.0f32, &2.0).unwrap();
        assert!((c + 0.5).abs() < 1e-6);
    }
}
