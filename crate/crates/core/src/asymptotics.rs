//! The `x = 0` term decomposition of the scaled Charlier value.
//!
//! For `A = ⌊a⌋` and `ν < 0`,
//!
//! ```text
//! y_ν(0) = 2^(ν/2)/Γ(−ν) · Σ_{k=0}^{A} T_k,   T_k = a^(ν/2) q(k) p(k),
//! q(k) = Γ(k−ν)/k!,   p(k) = A! a^(−k) / (A−k)!,
//! ```
//!
//! and the sum is split at `M = ⌈A^(3/4)⌉` into a head, which tends to
//! `2^(−ν/2−1) Γ(−ν/2)`, and a tail that vanishes. The density
//! `f_ν(t) = t^(−ν−1) e^(−t²/2)` links the sum to the upper incomplete gamma
//! function through the trapezoid rule. All factors are handled in log space.

use rayon::prelude::*;

use crate::charlier::{charlier_direct, scaled_y, ScaledPoint};
use crate::error::{Error, Result};
use crate::hermite::hermite_at_zero;
use crate::scalar::{is_nonpositive_integer, lit, Real};
use crate::special::{ln_gamma, reciprocal_gamma, upper_incomplete_gamma};
use crate::summation::NeumaierSum;

/// Parameters of the head/tail split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig<T> {
    pub a: T,
    /// `A = ⌊a⌋`
    pub big_a: u64,
    /// `M = ⌈A^(3/4)⌉`
    pub m: u64,
    /// `Δt = 1/√A`
    pub dt: T,
    pub nu: T,
}

/// Smallest `m` with `m^4 >= A^3`.
fn ceil_three_quarter_power(big_a: u64) -> u64 {
    let target = u128::from(big_a).pow(3);
    let mut m = (big_a as f64).powf(0.75).ceil() as u128;
    while m > 0 && (m - 1).pow(4) >= target {
        m -= 1;
    }
    while m.pow(4) < target {
        m += 1;
    }
    m as u64
}

impl<T: Real> SplitConfig<T> {
    pub fn new(a: T, nu: T) -> Result<Self> {
        if !(a >= T::one()) || !a.is_finite() {
            return Err(Error::domain(format!("split needs a >= 1, got {a}")));
        }
        if !nu.is_finite() {
            return Err(Error::domain("split needs a finite order"));
        }
        let big_a = a
            .floor_i64()
            .ok_or_else(|| Error::domain("a is too large"))? as u64;
        let m = ceil_three_quarter_power(big_a);
        let dt = T::one() / lit::<T>(big_a as f64).sqrt();
        Ok(Self {
            a,
            big_a,
            m,
            dt,
            nu,
        })
    }
}

/// Result of [`head_tail_split`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplitReport<T> {
    pub r_head: T,
    pub r_tail: T,
    /// `2^(ν/2)/Γ(−ν) · R_head`
    pub scaled_head: T,
    /// `2^(ν/2)/Γ(−ν) · R_tail`
    pub scaled_tail: T,
    /// `2^(ν/2)/Γ(−ν) · (R_head + R_tail)`
    pub y0_reconstructed: T,
    /// `(2a)^(ν/2) c_A^a(ν)` with `A = ⌊a⌋`.
    pub y0_direct: T,
    /// `y_ν^a(0)` with the ceiling degree `⌈a⌉`; differs from `y0_direct` only
    /// for non-integer `a`.
    pub y0_ceiling: T,
    pub h_nu_0: T,
    /// Limit of `R_head`: `2^(−ν/2−1) Γ(−ν/2)`.
    pub head_limit: T,
}

fn check_term_order<T: Real>(nu: T) -> Result<()> {
    if is_nonpositive_integer(-nu) {
        return Err(Error::Pole((-nu).to_f64_lossy()));
    }
    Ok(())
}

/// `ln|(x)_k|` and its sign, as a sum of logarithms of the factors.
fn ln_rising<T: Real>(x: T, k: u64) -> (T, i8) {
    let mut ln_abs = NeumaierSum::new();
    let mut sign = 1i8;
    for j in 0..k {
        let factor = x + lit::<T>(j as f64);
        if factor < T::zero() {
            sign = -sign;
        }
        ln_abs.add(factor.abs().ln());
    }
    (ln_abs.value(), sign)
}

/// `T_k = a^(ν/2) Γ(k−ν)/k! · A! a^(−k)/(A−k)!`.
///
/// `Γ(k−ν)` is assembled as `Γ(−ν) (−ν)_k`, with the rising factorial summed in
/// log space. The sign is positive whenever `ν < 0`.
pub fn term_t<T: Real>(k: u64, cfg: &SplitConfig<T>) -> Result<T> {
    if k > cfg.big_a {
        return Err(Error::domain(format!(
            "term index {k} exceeds A = {}",
            cfg.big_a
        )));
    }
    check_term_order(cfg.nu)?;
    let gamma_neg_nu = ln_gamma(-cfg.nu)?;
    let (ln_rise, rise_sign) = ln_rising(-cfg.nu, k);
    let ln_k_fact = ln_gamma(lit::<T>(k as f64 + 1.0))?.ln_abs;
    let ln_p = factor_p(k, cfg.big_a, cfg.a)?.ln();
    let ln_abs = cfg.nu * lit(0.5) * cfg.a.ln() + gamma_neg_nu.ln_abs + ln_rise - ln_k_fact + ln_p;
    let magnitude = ln_abs.exp();
    Ok(if gamma_neg_nu.sign * rise_sign < 0 {
        -magnitude
    } else {
        magnitude
    })
}

/// `p(k) = A! a^(−k) / (A−k)! = (a/A)^(−k) Π_{j<k} (1 − j/A)`.
pub fn factor_p<T: Real>(k: u64, big_a: u64, a: T) -> Result<T> {
    if k > big_a {
        return Err(Error::domain(format!(
            "p(k) needs k <= A, got k = {k}, A = {big_a}"
        )));
    }
    if !(a > T::zero()) {
        return Err(Error::domain("p(k) needs a > 0"));
    }
    if k == 0 {
        return Ok(T::one());
    }
    let ln_num = ln_gamma(lit::<T>(big_a as f64 + 1.0))?.ln_abs;
    let ln_den = ln_gamma(lit::<T>((big_a - k) as f64 + 1.0))?.ln_abs;
    Ok((ln_num - ln_den - lit::<T>(k as f64) * a.ln()).exp())
}

/// `q(k) = Γ(k−ν)/k!` from a difference of log-gammas.
pub fn factor_q<T: Real>(k: u64, nu: T) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("q(k) needs k >= 1"));
    }
    let kf = lit::<T>(k as f64);
    let num = ln_gamma(kf - nu)?;
    let den = ln_gamma(kf + T::one())?;
    let magnitude = (num.ln_abs - den.ln_abs).exp();
    Ok(if num.sign < 0 { -magnitude } else { magnitude })
}

/// `q(k) k^(ν+1)`, which tends to one as `k` grows.
pub fn q_power_ratio<T: Real>(k: u64, nu: T) -> Result<T> {
    Ok(factor_q(k, nu)? * lit::<T>(k as f64).powf(nu + T::one()))
}

/// `p(k) / exp(−k²/2A)`.
pub fn p_gauss_ratio<T: Real>(k: u64, big_a: u64, a: T) -> Result<T> {
    let kf = lit::<T>(k as f64);
    let gauss = (-(kf * kf) / (lit::<T>(2.0) * lit::<T>(big_a as f64))).exp();
    Ok(factor_p(k, big_a, a)? / gauss)
}

/// Smallest constants with
/// `1 − C₁(k/A + k³/A²) ≤ p(k)/exp(−k²/2A) ≤ 1 + C₂ k/A` over `1 ≤ k < A/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussBoundConstants<T> {
    pub c_lower: T,
    pub c_upper: T,
}

pub fn gauss_bound_constants<T: Real>(big_a: u64, a: T) -> Result<GaussBoundConstants<T>> {
    let af = lit::<T>(big_a as f64);
    let mut c_lower = T::zero();
    let mut c_upper = T::zero();
    let mut k = 1u64;
    while 2 * k < big_a {
        let ratio = p_gauss_ratio(k, big_a, a)?;
        let kf = lit::<T>(k as f64);
        let lin = kf / af;
        if ratio > T::one() {
            c_upper = c_upper.max((ratio - T::one()) / lin);
        } else {
            let cubic = lin + kf * kf * kf / (af * af);
            c_lower = c_lower.max((T::one() - ratio) / cubic);
        }
        k += 1;
    }
    Ok(GaussBoundConstants { c_lower, c_upper })
}

/// `f_ν(t) = t^(−ν−1) e^(−t²/2)` for `t >= 0`.
pub fn f_nu<T: Real>(t: T, nu: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(Error::domain(format!("f_nu needs t >= 0, got {t}")));
    }
    let power = -nu - T::one();
    if t == T::zero() {
        return if power > T::zero() {
            Ok(T::zero())
        } else if power == T::zero() {
            Ok(T::one())
        } else {
            Err(Error::domain(format!(
                "f_nu has a pole at t = 0 for nu = {nu}"
            )))
        };
    }
    Ok(t.powf(power) * (-(t * t) * lit(0.5)).exp())
}

/// `(t_k, f_ν(t_k))` with `t_k = k Δt` for `k = 0..=⌊t_max/Δt⌋`.
pub fn f_nu_samples<T: Real>(nu: T, t_max: T, dt: T) -> Result<Vec<(T, T)>> {
    if !(dt > T::zero()) || !(t_max > T::zero()) {
        return Err(Error::domain("f_nu samples need dt > 0 and t_max > 0"));
    }
    let count = (t_max / dt + lit(1e-9)).floor().to_u64_checked()?;
    (0..=count)
        .map(|k| {
            let t = lit::<T>(k as f64) * dt;
            f_nu(t, nu).map(|v| (t, v))
        })
        .collect()
}

trait ToU64Checked {
    fn to_u64_checked(self) -> Result<u64>;
}

impl<T: Real> ToU64Checked for T {
    fn to_u64_checked(self) -> Result<u64> {
        self.to_u64()
            .ok_or_else(|| Error::domain(format!("{self} is not a valid count")))
    }
}

/// Antiderivative `−2^(−ν/2−1) Γ(−ν/2, t²/2)` of `f_ν`.
pub fn f_nu_antiderivative<T: Real>(t: T, nu: T) -> Result<T> {
    let s = -nu * lit(0.5);
    let scale = lit::<T>(2.0).powf(s - T::one());
    Ok(-scale * upper_incomplete_gamma(s, t * t * lit(0.5))?)
}

/// Riemann sum of `f_ν` against its incomplete-gamma closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidCheck<T> {
    /// `Σ_{k=M}^{N} f_ν(kΔt) Δt`
    pub riemann_sum: T,
    /// `2^(−ν/2−1) [Γ(−ν/2, (MΔt)²/2) − Γ(−ν/2, (NΔt)²/2)]`
    pub closed_form: T,
    pub abs_err: T,
}

pub fn trapezoid_gamma_check<T: Real>(nu: T, m: u64, n: u64, dt: T) -> Result<TrapezoidCheck<T>> {
    if !(nu <= lit(-3.0)) {
        return Err(Error::domain(format!(
            "trapezoid identity needs nu <= -3, got {nu}"
        )));
    }
    if m > n || !(dt > T::zero()) {
        return Err(Error::domain("trapezoid identity needs M <= N and dt > 0"));
    }
    let mut sum = NeumaierSum::new();
    for k in m..=n {
        sum.add(f_nu(lit::<T>(k as f64) * dt, nu)? * dt);
    }
    let riemann_sum = sum.value();
    let lo = lit::<T>(m as f64) * dt;
    let hi = lit::<T>(n as f64) * dt;
    let closed_form = f_nu_antiderivative(hi, nu)? - f_nu_antiderivative(lo, nu)?;
    Ok(TrapezoidCheck {
        riemann_sum,
        closed_form,
        abs_err: (riemann_sum - closed_form).abs(),
    })
}

/// Sums the terms `T_k` over head and tail and compares the reconstruction with
/// the direct Charlier sum and with `H_ν(0)`. Requires `ν <= −4`.
pub fn head_tail_split<T: Real>(cfg: &SplitConfig<T>) -> Result<SplitReport<T>> {
    let nu = cfg.nu;
    if !(nu <= lit(-4.0)) {
        return Err(Error::domain(format!(
            "head/tail split needs nu <= -4, got {nu}"
        )));
    }
    let a = cfg.a;
    let big_a = cfg.big_a;
    let ln_a = a.ln();
    let gamma_neg_nu = ln_gamma(-nu)?;
    // ν < 0 keeps every factor positive
    let mut ln_term = nu * lit(0.5) * ln_a + gamma_neg_nu.ln_abs;
    let mut head = NeumaierSum::new();
    let mut tail = NeumaierSum::new();
    for k in 0..=big_a {
        let term = ln_term.exp();
        if k < cfg.m {
            head.add(term);
        } else {
            tail.add(term);
        }
        if k < big_a {
            let kf = lit::<T>(k as f64);
            ln_term = ln_term + (kf - nu).ln() - (kf + T::one()).ln()
                + lit::<T>((big_a - k) as f64).ln()
                - ln_a;
        }
    }
    let r_head = head.value();
    let r_tail = tail.value();
    let prefactor = lit::<T>(2.0).powf(nu * lit(0.5)) * reciprocal_gamma(-nu);
    let two_a = a + a;
    let y0_direct = two_a.powf(nu * lit(0.5)) * charlier_direct(big_a, &a, &nu)?;
    let y0_ceiling = scaled_y(&ScaledPoint::new(T::zero(), a)?, &nu)?;
    let half_neg_nu = -nu * lit(0.5);
    let head_limit = lit::<T>(2.0).powf(half_neg_nu - T::one()) * ln_gamma(half_neg_nu)?.value();
    Ok(SplitReport {
        r_head,
        r_tail,
        scaled_head: prefactor * r_head,
        scaled_tail: prefactor * r_tail,
        y0_reconstructed: prefactor * (r_head + r_tail),
        y0_direct,
        y0_ceiling,
        h_nu_0: hermite_at_zero(nu),
        head_limit,
    })
}

/// [`head_tail_split`] over several parameters, evaluated in parallel and
/// returned in input order.
pub fn head_tail_sweep<T: Real>(a_values: &[T], nu: T) -> Vec<Result<SplitReport<T>>> {
    a_values
        .par_iter()
        .map(|&a| SplitConfig::new(a, nu).and_then(|cfg| head_tail_split(&cfg)))
        .collect()
}

/// `Γ(−ν/2) / (2Γ(−ν))`, the left side of the duplication-rule reconstruction of `H_ν(0)`.
pub fn duplication_lhs<T: Real>(nu: T) -> Result<T> {
    let half = ln_gamma(-nu * lit(0.5))?;
    let full = ln_gamma(-nu)?;
    let magnitude = (half.ln_abs - full.ln_abs).exp() * lit(0.5);
    Ok(if half.sign * full.sign < 0 {
        -magnitude
    } else {
        magnitude
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn three_quarter_power_index() {
        assert_eq!(ceil_three_quarter_power(1), 1);
        assert_eq!(ceil_three_quarter_power(16), 8);
        assert_eq!(ceil_three_quarter_power(17), 9);
        assert_eq!(ceil_three_quarter_power(10_000), 1_000);
        assert_eq!(ceil_three_quarter_power(100), 32);
        let cfg = SplitConfig::new(10_000.0f64, -4.0).unwrap();
        assert_eq!((cfg.big_a, cfg.m, cfg.dt), (10_000, 1_000, 0.01));
        let cfg = SplitConfig::new(99.5f64, -4.0).unwrap();
        assert_eq!(cfg.big_a, 99);
        assert!(SplitConfig::new(0.5f64, -4.0).is_err());
    }

    #[test]
    fn first_terms() {
        let nu = -4.5;
        let cfg = SplitConfig::new(50.0f64, nu).unwrap();
        let t0 = term_t(0, &cfg).unwrap();
        assert!(rel(t0, 50f64.powf(nu / 2.0) * gamma(-nu).unwrap()) < 1e-13);
        let t1 = term_t(1, &cfg).unwrap();
        assert!(rel(t1, 50f64.powf(nu / 2.0) * gamma(1.0 - nu).unwrap()) < 1e-13);
        // non-integer a: p(1) = A/a
        let cfg = SplitConfig::new(50.5f64, nu).unwrap();
        let t1 = term_t(1, &cfg).unwrap();
        let expected = 50.5f64.powf(nu / 2.0) * gamma(1.0 - nu).unwrap() * 50.0 / 50.5;
        assert!(rel(t1, expected) < 1e-13);
        assert!(term_t(51, &cfg).is_err());
    }

    #[test]
    fn terms_are_positive_for_negative_order() {
        let cfg = SplitConfig::new(200.0f64, -1.5).unwrap();
        for k in [0, 1, 2, 10, 100, 199, 200] {
            assert!(term_t(k, &cfg).unwrap() > 0.0);
        }
    }

    #[test]
    fn term_pole_orders_rejected() {
        let cfg = SplitConfig::new(20.0f64, 2.0).unwrap();
        assert!(matches!(term_t(1, &cfg), Err(Error::Pole(_))));
    }

    #[test]
    fn p_factor_examples() {
        assert_eq!(factor_p(0, 40, 40.0f64).unwrap(), 1.0);
        assert!(rel(factor_p(1, 40, 40.0f64).unwrap(), 1.0) < 1e-13);
        // log-factorial oracle: A!/A^A = exp(Σ ln j − A ln A)
        for big_a in [5u64, 30, 170] {
            let ln_fact: f64 = (1..=big_a).map(|j| (j as f64).ln()).sum();
            let oracle = (ln_fact - big_a as f64 * (big_a as f64).ln()).exp();
            let got = factor_p(big_a, big_a, big_a as f64).unwrap();
            assert!(rel(got, oracle) < 1e-11, "A = {big_a}");
        }
        assert!(factor_p(41, 40, 40.0f64).is_err());
    }

    #[test]
    fn q_factor_examples() {
        for nu in [-3.0f64, -4.5, -0.25] {
            let q1 = factor_q(1, nu).unwrap();
            assert!(rel(q1, -nu * gamma(-nu).unwrap()) < 1e-13);
        }
        for k in [1u64, 5, 40, 150] {
            assert!(rel(factor_q(k, -2.0f64).unwrap(), k as f64 + 1.0) < 1e-12);
        }
        assert!(factor_q(0, -3.0f64).is_err());
    }

    #[test]
    fn density_values() {
        assert_eq!(f_nu(0.0f64, -3.0).unwrap(), 0.0);
        assert_eq!(f_nu(0.0f64, -1.0).unwrap(), 1.0);
        assert!(rel(f_nu(1.0f64, -2.0).unwrap(), (-0.5f64).exp()) < 1e-15);
        assert!(f_nu(0.0f64, 0.5).is_err());
        assert!(f_nu(-1.0f64, -3.0).is_err());
    }

    #[test]
    fn density_peak_for_order_minus_three() {
        let samples = f_nu_samples(-3.0f64, 5.0, 0.001).unwrap();
        assert_eq!(samples.len(), 5001);
        assert_eq!(samples[0], (0.0, 0.0));
        let (t_peak, _) =
            samples.iter().copied().fold(
                (0.0, f64::MIN),
                |best, s| if s.1 > best.1 { s } else { best },
            );
        assert!((t_peak - 2f64.sqrt()).abs() <= 0.0005);
    }

    #[test]
    fn single_term_trapezoid() {
        let chk = trapezoid_gamma_check(-3.0f64, 7, 7, 0.1).unwrap();
        assert!(rel(chk.riemann_sum, f_nu(0.7, -3.0).unwrap() * 0.1) < 1e-15);
        assert!(trapezoid_gamma_check(-2.0f64, 1, 7, 0.1).is_err());
        assert!(trapezoid_gamma_check(-3.0f64, 8, 7, 0.1).is_err());
    }

    #[test]
    fn antiderivative_differentiates_to_density() {
        let (t, nu, h) = (1.0f64, -4.0, 1e-4);
        let fd = (f_nu_antiderivative(t + h, nu).unwrap()
            - f_nu_antiderivative(t - h, nu).unwrap())
            / (2.0 * h);
        assert!((fd - f_nu(t, nu).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn duplication_rule() {
        for nu in [-8.0f64, -6.3, -5.0, -4.5, -3.0] {
            assert!(
                rel(duplication_lhs(nu).unwrap(), hermite_at_zero(nu)) < 1e-12,
                "nu = {nu}"
            );
        }
    }

    #[test]
    fn split_requires_order_below_minus_four() {
        let cfg = SplitConfig::new(100.0f64, -3.5).unwrap();
        assert!(head_tail_split(&cfg).is_err());
    }

    #[test]
    fn split_reconstruction_small() {
        let cfg = SplitConfig::new(300.0f64, -4.25).unwrap();
        let rep = head_tail_split(&cfg).unwrap();
        assert!(rep.r_head > 0.0 && rep.r_tail > 0.0);
        assert!(rel(rep.y0_reconstructed, rep.y0_direct) < 1e-9);
        assert!(rel(rep.y0_direct, rep.y0_ceiling) < 1e-14);
        // the incremental terms agree with the standalone ones
        let direct: f64 = (0..cfg.m).map(|k| term_t(k, &cfg).unwrap()).sum();
        assert!(rel(rep.r_head, direct) < 1e-10);
    }
}
