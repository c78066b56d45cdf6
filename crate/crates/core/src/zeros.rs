//! Zeros in the order variable: `ν ↦ c_n^a(ν)` and `ν ↦ H_ν(x)`.
//!
//! Zeros are bracketed by sign changes on a uniform grid and polished by
//! bisection. Charlier zeros are real, positive and simple, so a sign change
//! is all the detection needed.

use log::warn;
use rayon::prelude::*;

use crate::charlier::charlier_direct;
use crate::error::{Error, Result};
use crate::hermite::hermite_fn;
use crate::rate::{fit_rate, RateFit};
use crate::scalar::{lit, Real};

/// A bracketed simple zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroResult<T> {
    pub root: T,
    pub bracket_lo: T,
    pub bracket_hi: T,
    /// `|f(root)|`
    pub residual: T,
    pub iterations: u32,
}

const MAX_BISECTIONS: u32 = 400;

fn bracket_tolerance<T: Real>(v: T) -> T {
    lit::<T>(1e-12) * T::one().max(v.abs())
}

/// Bisects `[lo, hi]`, where `f(lo)` and `f(hi)` have strictly opposite signs,
/// until the bracket is narrower than `1e-12 max(1, |ν|)`.
pub fn bisect<T, F>(f: F, lo: T, hi: T) -> Result<ZeroResult<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(lo < hi) || !(f_lo * f_hi < T::zero()) {
        return Err(Error::NotFound {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        });
    }
    let mut iterations = 0;
    while hi - lo >= bracket_tolerance(lo.abs().max(hi.abs())) {
        if iterations >= MAX_BISECTIONS {
            return Err(Error::NoConvergence {
                what: "bisection",
                iterations: MAX_BISECTIONS as usize,
            });
        }
        let mid = lo + (hi - lo) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid)?;
        if f_mid == T::zero() {
            return Ok(ZeroResult {
                root: mid,
                bracket_lo: lo,
                bracket_hi: hi,
                residual: T::zero(),
                iterations,
            });
        }
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let root = lo + (hi - lo) * lit(0.5);
    Ok(ZeroResult {
        root,
        bracket_lo: lo,
        bracket_hi: hi,
        residual: f(root)?.abs(),
        iterations,
    })
}

/// Scans `f` on `grid` equal intervals of `[lo, hi]` and bisects every sign
/// change. Grid points where `f` vanishes exactly are returned as zeros
/// bracketed by their neighbours. Results are in increasing order.
pub fn scan_zeros<T, F>(f: F, lo: T, hi: T, grid: usize) -> Result<Vec<ZeroResult<T>>>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
{
    if !(lo < hi) || grid < 2 {
        return Err(Error::domain("zero scan needs lo < hi and grid >= 2"));
    }
    let width = (hi - lo) / lit::<T>(grid as f64);
    let nodes: Vec<T> = (0..=grid)
        .map(|i| {
            if i == grid {
                hi
            } else {
                lo + lit::<T>(i as f64) * width
            }
        })
        .collect();
    let values: Vec<T> = nodes.par_iter().map(|&v| f(v)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..grid {
        let (v0, v1) = (values[i], values[i + 1]);
        if v0 == T::zero() {
            if i > 0 {
                out.push(ZeroResult {
                    root: nodes[i],
                    bracket_lo: nodes[i - 1],
                    bracket_hi: nodes[i + 1],
                    residual: T::zero(),
                    iterations: 0,
                });
            }
        } else if v0 * v1 < T::zero() {
            out.push(bisect(&f, nodes[i], nodes[i + 1])?);
        }
    }
    Ok(out)
}

/// Zeros of `ν ↦ c_n^a(ν)` in `[lo, hi]`.
pub fn charlier_zeros_in_order<T: Real>(
    n: u64,
    a: T,
    lo: T,
    hi: T,
    grid: usize,
) -> Result<Vec<ZeroResult<T>>> {
    if !(a > T::zero()) {
        return Err(Error::domain("Charlier zeros need a > 0"));
    }
    scan_zeros(|nu| charlier_direct(n, &a, &nu), lo, hi, grid)
}

/// Zeros of `ν ↦ H_ν(x)` in `[lo, hi]`.
pub fn hermite_zeros_in_order<T: Real>(
    x: T,
    lo: T,
    hi: T,
    grid: usize,
) -> Result<Vec<ZeroResult<T>>> {
    scan_zeros(|nu| hermite_fn(nu, x), lo, hi, grid)
}

/// Outcome of an adaptive count of the positive zeros of `c_n^a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCount<T> {
    pub zeros: Vec<ZeroResult<T>>,
    pub grid: usize,
    pub scan_hi: T,
    pub matches_degree: bool,
}

/// Counts zeros of `c_n^a` on `[0, a + 4n√a]`, doubling the grid until two
/// consecutive counts agree. A count different from `n` is logged, not raised.
pub fn count_charlier_zeros<T: Real>(n: u64, a: T) -> Result<ZeroCount<T>> {
    let nf = lit::<T>(n as f64);
    let scan_hi = a + lit::<T>(4.0) * nf * a.sqrt() + T::one();
    let mut grid = (8 * n as usize).max(16);
    let mut previous = charlier_zeros_in_order(n, a, T::zero(), scan_hi, grid)?;
    loop {
        grid *= 2;
        let current = charlier_zeros_in_order(n, a, T::zero(), scan_hi, grid)?;
        if current.len() == previous.len() || grid > 1 << 20 {
            let matches_degree = current.len() as u64 == n;
            if !matches_degree {
                warn!(
                    "found {} zeros of c_{n}^a for a = {a} on [0, {scan_hi}], expected {n}",
                    current.len()
                );
            }
            return Ok(ZeroCount {
                zeros: current,
                grid,
                scan_hi,
                matches_degree,
            });
        }
        previous = current;
    }
}

/// Degree paired with Hermite zeros: `n = ⌊a − x√(2a)⌋`.
pub fn zero_degree<T: Real>(x: T, a: T) -> Result<u64> {
    if !(a > T::zero()) {
        return Err(Error::domain("zero degree needs a > 0"));
    }
    let v = (a - x * (a + a).sqrt()).floor();
    if !(v >= T::one()) {
        return Err(Error::domain(format!(
            "zero degree floor(a - x sqrt(2a)) = {v} is below 1 for a = {a}"
        )));
    }
    v.to_u64().ok_or_else(|| Error::domain("degree too large"))
}

/// One row of [`zero_convergence_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroConvergenceRow<T> {
    pub a: T,
    pub n: u64,
    pub zero: Result<ZeroResult<T>>,
}

impl<T: Real> ZeroConvergenceRow<T> {
    pub fn abs_err(&self, target: T) -> Option<T> {
        self.zero.as_ref().ok().map(|z| (z.root - target).abs())
    }
}

/// Zero-convergence sweep for one Hermite zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroConvergenceTable<T> {
    pub x: T,
    /// Refined Hermite zero.
    pub target: T,
    pub window_lo: T,
    pub window_hi: T,
    pub rows: Vec<ZeroConvergenceRow<T>>,
}

impl<T: Real> ZeroConvergenceTable<T> {
    pub fn errors(&self) -> Vec<(T, T)> {
        self.rows
            .iter()
            .filter_map(|r| r.abs_err(self.target).map(|e| (r.a, e)))
            .collect()
    }

    pub fn fit(&self) -> Result<RateFit<T>> {
        fit_rate(&self.errors())
    }
}

const NEIGHBOUR_SPAN: f64 = 6.0;
const WINDOW_GRID: usize = 64;

/// For each `a`, the zero of `c_n^a` (with `n = ⌊a − x√(2a)⌋`) nearest the
/// Hermite zero `target_nu` of `H_·(x)`, searched within half the distance to
/// the neighbouring Hermite zeros. Rows are computed in parallel; a missing
/// zero is recorded in its row and the sweep continues.
pub fn zero_convergence_table<T: Real>(
    x: T,
    target_nu: T,
    a_values: &[T],
) -> Result<ZeroConvergenceTable<T>> {
    let span = lit::<T>(NEIGHBOUR_SPAN);
    let hermite_zeros = hermite_zeros_in_order(x, target_nu - span, target_nu + span, 1200)?;
    let nearest = hermite_zeros
        .iter()
        .min_by(|p, q| {
            (p.root - target_nu)
                .abs()
                .partial_cmp(&(q.root - target_nu).abs())
                .expect("finite roots")
        })
        .ok_or_else(|| {
            Error::domain(format!("no Hermite zero near nu = {target_nu} at x = {x}"))
        })?;
    let tol = lit::<T>(1e-6) * T::one().max(target_nu.abs());
    if (nearest.root - target_nu).abs() > tol {
        return Err(Error::domain(format!(
            "nu = {target_nu} is not a zero of H_nu({x}); nearest is {}",
            nearest.root
        )));
    }
    let target = nearest.root;
    let gap = hermite_zeros
        .iter()
        .filter(|z| z.root != target)
        .map(|z| (z.root - target).abs())
        .fold(span, T::min);
    let half = gap * lit(0.5);
    let (window_lo, window_hi) = (target - half, target + half);
    let rows = a_values
        .par_iter()
        .map(|&a| {
            let n = match zero_degree(x, a) {
                Ok(n) => n,
                Err(e) => {
                    return ZeroConvergenceRow {
                        a,
                        n: 0,
                        zero: Err(e),
                    }
                }
            };
            let zero =
                charlier_zeros_in_order(n, a, window_lo, window_hi, WINDOW_GRID).and_then(|zs| {
                    zs.into_iter()
                        .min_by(|p, q| {
                            (p.root - target)
                                .abs()
                                .partial_cmp(&(q.root - target).abs())
                                .expect("finite roots")
                        })
                        .ok_or(Error::NotFound {
                            lo: window_lo.to_f64_lossy(),
                            hi: window_hi.to_f64_lossy(),
                        })
                });
            ZeroConvergenceRow { a, n, zero }
        })
        .collect();
    Ok(ZeroConvergenceTable {
        x,
        target,
        window_lo,
        window_hi,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_charlier_zero() {
        for a in [0.5f64, 3.0, 17.25] {
            let zs = charlier_zeros_in_order(1, a, 0.0, 2.0 * a + 1.0, 37).unwrap();
            assert_eq!(zs.len(), 1);
            assert!((zs[0].root - a).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn quadratic_charlier_zeros() {
        // ν = ((2a+1) ± √(4a+1))/2 = {1, 4} for a = 2
        let zs = charlier_zeros_in_order(2, 2.0f64, 0.1, 6.0, 50).unwrap();
        let roots: Vec<f64> = zs.iter().map(|z| z.root).collect();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.0).abs() < 1e-11);
        assert!((roots[1] - 4.0).abs() < 1e-11);
    }

    #[test]
    fn bracket_invariants() {
        let zs = charlier_zeros_in_order(6, 3.5f64, 0.0, 40.0, 400).unwrap();
        assert_eq!(zs.len(), 6);
        for z in &zs {
            assert!(z.root > 0.0);
            assert!(z.bracket_lo < z.root && z.root < z.bracket_hi);
            let f = |v: f64| charlier_direct(6, &3.5, &v).unwrap();
            assert!(f(z.bracket_lo) * f(z.bracket_hi) < 0.0);
        }
    }

    #[test]
    fn hermite_zeros_at_origin() {
        let zs = hermite_zeros_in_order(0.0f64, 0.5, 6.0, 110).unwrap();
        let roots: Vec<f64> = zs.iter().map(|z| z.root).collect();
        assert_eq!(roots.len(), 3, "{roots:?}");
        for (r, expected) in roots.iter().zip([1.0, 3.0, 5.0]) {
            assert!((r - expected).abs() < 1e-11);
        }
        assert!(roots.iter().all(|&r| r != 0.0));
    }

    #[test]
    fn no_sign_change_no_zeros() {
        assert!(hermite_zeros_in_order(0.0f64, 1.2, 2.8, 40)
            .unwrap()
            .is_empty());
        assert!(hermite_zeros_in_order(0.0f64, 1.0, 0.5, 40).is_err());
    }

    #[test]
    fn bisection_requires_sign_change() {
        assert!(matches!(
            bisect(|v: f64| Ok(v * v + 1.0), -1.0, 1.0),
            Err(Error::NotFound { .. })
        ));
        let z = bisect(|v: f64| Ok(v - 0.3), 0.0, 1.0).unwrap();
        assert!((z.root - 0.3).abs() < 1e-12);
    }

    #[test]
    fn zero_degree_uses_floor() {
        assert_eq!(zero_degree(0.0f64, 100.0).unwrap(), 100);
        // 50 − 0.3·10 = 47
        assert_eq!(zero_degree(0.3f64, 50.0).unwrap(), 47);
        assert_eq!(zero_degree(0.25f64, 50.0).unwrap(), 47);
        assert!(zero_degree(2.0f64, 2.0).is_err());
    }

    #[test]
    fn zero_count_matches_degree() {
        for (n, a) in [(3u64, 2.0f64), (5, 10.0), (8, 30.0)] {
            let count = count_charlier_zeros(n, a).unwrap();
            assert!(
                count.matches_degree,
                "n = {n}, a = {a}: {}",
                count.zeros.len()
            );
            assert!(count.zeros.iter().all(|z| z.root > 0.0));
        }
    }

    #[test]
    fn table_rejects_non_zero_target() {
        assert!(zero_convergence_table(0.0f64, 2.0, &[100.0]).is_err());
    }
}
