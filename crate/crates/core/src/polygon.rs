//! Euler discretisation of the Hermite equation and the Charlier state trace.
//!
//! In normal form the Hermite equation is `y' = A(x) y` with
//! `y = (y, y')` and `A(x) = [[0, 1], [−2ν, 2x]]`. The Cauchy polygon steps
//! `u_{k+1} = u_k + Δx A(x_k) u_k` on the grid `x_k = kΔx`, `Δx = 1/√(2a)`.
//! The Charlier trace `z_k` pairs the scaled value `y_ν^a(x_k)` with its
//! backward difference quotient; it obeys the same step up to an `O(1/√a)`
//! perturbation.

use rayon::prelude::*;

use crate::charlier::charlier_direct;
use crate::error::{Error, Result};
use crate::hermite::{hermite_derivative, hermite_fn};
use crate::scalar::{lit, Real};

/// The pair `(y, y')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<T> {
    pub y: T,
    pub yp: T,
}

impl<T: Real> StateVector<T> {
    pub fn new(y: T, yp: T) -> Self {
        Self { y, yp }
    }

    pub fn norm(&self) -> T {
        self.y.hypot(self.yp)
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.y - other.y).hypot(self.yp - other.yp)
    }
}

/// Row-major 2×2 matrix.
pub type Matrix2<T> = [[T; 2]; 2];

/// `A(x) = [[0, 1], [−2ν, 2x]]`.
pub fn system_matrix<T: Real>(x: T, nu: T) -> Matrix2<T> {
    let two = lit::<T>(2.0);
    [[T::zero(), T::one()], [-two * nu, two * x]]
}

pub fn apply<T: Real>(m: &Matrix2<T>, v: &StateVector<T>) -> StateVector<T> {
    StateVector {
        y: m[0][0] * v.y + m[0][1] * v.yp,
        yp: m[1][0] * v.y + m[1][1] * v.yp,
    }
}

/// Largest singular value of a 2×2 matrix.
pub fn spectral_norm<T: Real>(m: &Matrix2<T>) -> T {
    let frob2 = m[0][0].powi(2) + m[0][1].powi(2) + m[1][0].powi(2) + m[1][1].powi(2);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (frob2 * frob2 - lit::<T>(4.0) * det * det).max(T::zero());
    ((frob2 + disc.sqrt()) * lit(0.5)).sqrt()
}

/// `√(1 + 4ν² + 4x²)`, the Frobenius bound on `‖A(x)‖`.
pub fn frobenius_bound<T: Real>(x: T, nu: T) -> T {
    let four = lit::<T>(4.0);
    (T::one() + four * nu * nu + four * x * x).sqrt()
}

/// Lipschitz constant `L = √(1 + 4ψ² + 4ξ²)` for `|ν| <= ψ`, `|x| <= ξ`.
pub fn lipschitz_constant<T: Real>(psi: T, xi: T) -> T {
    frobenius_bound(xi, psi)
}

/// Nodes `(x_k, state_k)` with `x_k = k · step`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonTrace<T> {
    /// Signed grid spacing; negative for a trace running toward `x < 0`.
    pub step: T,
    pub nodes: Vec<(T, StateVector<T>)>,
}

impl<T: Real> PolygonTrace<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &StateVector<T>> {
        self.nodes.iter().map(|(_, s)| s)
    }

    pub fn last(&self) -> &(T, StateVector<T>) {
        self.nodes.last().expect("traces are never empty")
    }
}

/// Direction of travel from `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Ascending,
    Descending,
}

impl Direction {
    fn sign<T: Real>(self) -> T {
        match self {
            Direction::Ascending => T::one(),
            Direction::Descending => -T::one(),
        }
    }
}

/// Number of steps of size `dx` that fit in `[0, x_max]`.
fn step_count<T: Real>(x_max: T, dx: T) -> Result<usize> {
    if !(dx > T::zero()) || !(x_max >= T::zero()) || !x_max.is_finite() {
        return Err(Error::domain("polygon needs dx > 0 and finite x_max >= 0"));
    }
    (x_max / dx + lit(1e-9))
        .floor()
        .to_usize()
        .ok_or_else(|| Error::domain("too many polygon steps"))
}

/// Cauchy polygon `u_{k+1} = u_k + Δx A(x_k) u_k` on `[0, x_max]`.
pub fn euler_polygon<T: Real>(
    nu: T,
    init: StateVector<T>,
    x_max: T,
    dx: T,
) -> Result<PolygonTrace<T>> {
    euler_polygon_directed(nu, init, x_max, dx, Direction::Ascending)
}

/// [`euler_polygon`] toward positive or negative `x`; `x_max` is a distance.
pub fn euler_polygon_directed<T: Real>(
    nu: T,
    init: StateVector<T>,
    x_max: T,
    dx: T,
    direction: Direction,
) -> Result<PolygonTrace<T>> {
    let steps = step_count(x_max, dx)?;
    let h = direction.sign::<T>() * dx;
    let mut nodes = Vec::with_capacity(steps + 1);
    let mut u = init;
    nodes.push((T::zero(), u));
    for k in 0..steps {
        let xk = lit::<T>(k as f64) * h;
        let du = apply(&system_matrix(xk, nu), &u);
        u = StateVector::new(u.y + h * du.y, u.yp + h * du.yp);
        nodes.push((lit::<T>((k + 1) as f64) * h, u));
    }
    Ok(PolygonTrace { step: h, nodes })
}

/// Charlier state trace with `r = √(2a)`, `Δx = 1/r`:
/// `z_k = (Y_k, (Y_k − Y_{k−1})/Δx)`, `Y_k = r^ν c_{m_k}^a(ν)`,
/// `m_k = ⌈a − x_k r⌉ = ⌈a⌉ − k`.
///
/// `z_0` carries the difference quotient `(y_ν(0) − y_ν(−Δx))/Δx`.
pub fn charlier_state_trace<T: Real>(nu: T, a: T, x_max: T) -> Result<PolygonTrace<T>> {
    charlier_state_trace_directed(nu, a, x_max, Direction::Ascending)
}

/// [`charlier_state_trace`] toward positive or negative `x`; `x_max` is a distance.
/// Descending, `m_k = ⌈a⌉ + k` and the quotient is taken over the signed step.
pub fn charlier_state_trace_directed<T: Real>(
    nu: T,
    a: T,
    x_max: T,
    direction: Direction,
) -> Result<PolygonTrace<T>> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain(format!("state trace needs a > 0, got {a}")));
    }
    let r = (a + a).sqrt();
    let dx = T::one() / r;
    let steps = step_count(x_max, dx)?;
    // x_k r = ±k exactly, so m_k = ⌈a⌉ ∓ k without rounding the product
    let base = a
        .ceil_i64()
        .ok_or_else(|| Error::domain("a is too large"))?;
    let degree = |k: i64| -> Result<u64> {
        let m = match direction {
            Direction::Ascending => base - k,
            Direction::Descending => base + k,
        };
        if m < 1 {
            return Err(Error::domain(format!(
                "state trace reaches degree {m} < 1; increase a or reduce x_max"
            )));
        }
        Ok(m as u64)
    };
    let scale = r.powf(nu);
    let values: Vec<T> = (-1..=steps as i64)
        .into_par_iter()
        .map(|k| Ok(scale * charlier_direct(degree(k)?, &a, &nu)?))
        .collect::<Result<_>>()?;
    let h = direction.sign::<T>() * dx;
    let nodes = (0..=steps)
        .map(|k| {
            let y = values[k + 1];
            let yp = (y - values[k]) / h;
            (lit::<T>(k as f64) * h, StateVector::new(y, yp))
        })
        .collect();
    Ok(PolygonTrace { step: h, nodes })
}

/// Exact Hermite states `(H_ν(x_k), H'_ν(x_k))` on the nodes of `grid`.
pub fn hermite_trace<T: Real>(nu: T, grid: &PolygonTrace<T>) -> Result<PolygonTrace<T>> {
    let nodes = grid
        .nodes
        .iter()
        .map(|&(x, _)| {
            Ok((
                x,
                StateVector::new(hermite_fn(nu, x)?, hermite_derivative(nu, x)?),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(PolygonTrace {
        step: grid.step,
        nodes,
    })
}

/// Largest Euclidean distance between corresponding states.
pub fn trace_deviation<T: Real>(t1: &PolygonTrace<T>, t2: &PolygonTrace<T>) -> Result<T> {
    if t1.len() != t2.len() {
        return Err(Error::GridMismatch(format!(
            "{} nodes against {} nodes",
            t1.len(),
            t2.len()
        )));
    }
    let mut worst = T::zero();
    for ((x1, s1), (x2, s2)) in t1.nodes.iter().zip(&t2.nodes) {
        let tol = lit::<T>(1e-12) * T::one().max(x1.abs());
        if (*x1 - *x2).abs() > tol {
            return Err(Error::GridMismatch(format!("node at {x1} against {x2}")));
        }
        worst = worst.max(s1.distance(s2));
    }
    Ok(worst)
}

/// A-priori Euler error bound on `[0, ξ]` for `|ν| <= ψ`:
/// `|u_0 − y_0| e^(Lx) + Δx (C/L + M)(e^(Lx) − 1)` with
/// `M = L|u_0| e^(Lξ)` and `C = 2|u_0| e^(Lξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerBound<T> {
    pub lipschitz: T,
    pub bound_m: T,
    pub bound_c: T,
    pub initial_error: T,
    pub dx: T,
}

impl<T: Real> EulerBound<T> {
    pub fn new(psi: T, xi: T, u0_norm: T, initial_error: T, dx: T) -> Self {
        let lipschitz = lipschitz_constant(psi, xi);
        let growth = (lipschitz * xi).exp();
        Self {
            lipschitz,
            bound_m: lipschitz * u0_norm * growth,
            bound_c: lit::<T>(2.0) * u0_norm * growth,
            initial_error,
            dx,
        }
    }

    /// Bound on `|u(x) − y(x)|` at distance `x` from the start.
    pub fn at(&self, x: T) -> T {
        let e = (self.lipschitz * x.abs()).exp();
        self.initial_error * e
            + self.dx * (self.bound_c / self.lipschitz + self.bound_m) * (e - T::one())
    }
}
