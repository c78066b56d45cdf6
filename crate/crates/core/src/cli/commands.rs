use num_rational::BigRational;
use rayon::prelude::*;

use super::{
    AsymptoticsCmd, Cli, EvalCmd, Group, PlotCmd, PolygonCmd, ScaledArgs, Seed, SweepCmd, ZerosCmd,
    EXIT_OK,
};
use crate::asymptotics::{f_nu_samples, head_tail_sweep, trapezoid_gamma_check, SplitConfig};
use crate::charlier::{charlier_direct, scaled_y, ScaledPoint, SummationMode};
use crate::error::{Error, Result};
use crate::hermite::{hermite_derivative, hermite_fn};
use crate::polygon::{
    charlier_state_trace_directed, euler_polygon_directed, hermite_trace, trace_deviation,
    Direction, StateVector,
};
use crate::rate::{admissible_sharpness_pairs, fit_rate, sharpness_check};
use crate::scalar::{parse_decimal_rational, Scalar};
use crate::table::{Cell, OutputTable};
use crate::zeros::{charlier_zeros_in_order, hermite_zeros_in_order, zero_convergence_table};

/// A finished command: the table, stderr notes and the exit code.
pub(super) struct Report {
    pub table: OutputTable,
    pub notes: Vec<String>,
    pub code: i32,
}

impl Report {
    fn ok(table: OutputTable) -> Self {
        Self {
            table,
            notes: Vec::new(),
            code: EXIT_OK,
        }
    }
}

pub(super) fn execute(cli: &Cli) -> Result<Report> {
    let mode = cli.mode;
    match &cli.group {
        Group::Eval(cmd) => match cmd {
            EvalCmd::Charlier { n, a, nu } => eval_charlier(*n, a, nu, mode),
            EvalCmd::Hermite { nu, x } => eval_hermite(*nu, *x),
            EvalCmd::Scaled(args) => eval_scaled(args, mode),
        },
        Group::Sweep(cmd) => match cmd {
            SweepCmd::Convergence { nu, x, a_list } => sweep_convergence(nu, x, a_list, mode),
            SweepCmd::Sharpness { r_list } => sweep_sharpness(r_list),
        },
        Group::Plot(PlotCmd::Fnu { nu, t_max, dt }) => plot_fnu(*nu, *t_max, *dt),
        Group::Zeros(cmd) => match cmd {
            ZerosCmd::Convergence {
                x,
                target_nu,
                a_list,
            } => zeros_convergence(*x, *target_nu, a_list),
            ZerosCmd::Charlier { n, a, lo, hi, grid } => {
                let zs = charlier_zeros_in_order(*n, *a, *lo, *hi, *grid)?;
                let mut t = OutputTable::new(["n", "a", "root", "residual", "iterations"]);
                for z in zs {
                    t.push(vec![
                        (*n).into(),
                        (*a).into(),
                        z.root.into(),
                        z.residual.into(),
                        u64::from(z.iterations).into(),
                    ]);
                }
                Ok(Report::ok(t))
            }
            ZerosCmd::Hermite { x, lo, hi, grid } => {
                let zs = hermite_zeros_in_order(*x, *lo, *hi, *grid)?;
                let mut t = OutputTable::new(["x", "root", "residual", "iterations"]);
                for z in zs {
                    t.push(vec![
                        (*x).into(),
                        z.root.into(),
                        z.residual.into(),
                        u64::from(z.iterations).into(),
                    ]);
                }
                Ok(Report::ok(t))
            }
        },
        Group::Polygon(PolygonCmd::Compare {
            nu,
            x_max,
            a,
            seed,
            descending,
        }) => {
            let direction = if *descending {
                Direction::Descending
            } else {
                Direction::Ascending
            };
            polygon_compare(*nu, *x_max, *a, *seed, direction)
        }
        Group::Asymptotics(cmd) => match cmd {
            AsymptoticsCmd::HeadTail { a_list, nu } => asymptotics_head_tail(a_list, *nu),
            AsymptoticsCmd::Trapezoid { nu, m, n, dt } => {
                let c = trapezoid_gamma_check(*nu, *m, *n, *dt)?;
                let mut t = OutputTable::new([
                    "nu",
                    "m",
                    "n",
                    "dt",
                    "riemann_sum",
                    "closed_form",
                    "abs_err",
                ]);
                t.push(vec![
                    (*nu).into(),
                    (*m).into(),
                    (*n).into(),
                    (*dt).into(),
                    c.riemann_sum.into(),
                    c.closed_form.into(),
                    c.abs_err.into(),
                ]);
                Ok(Report::ok(t))
            }
        },
    }
}

fn parse_f64(name: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("--{name}: not a number: {text:?}")))?;
    if !v.is_finite() {
        return Err(Error::Domain(format!("--{name} must be finite")));
    }
    Ok(v)
}

fn parse_rational(name: &str, text: &str) -> Result<BigRational> {
    parse_decimal_rational(text).map_err(|e| Error::Domain(format!("--{name}: {e}")))
}

fn rational_text(v: &BigRational) -> String {
    if v.denom() == &1.into() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn eval_charlier(n: u64, a: &str, nu: &str, mode: SummationMode) -> Result<Report> {
    let mut t = OutputTable::new(["n", "a", "nu", "mode", "value", "exact"]);
    let (af, nuf) = (parse_f64("a", a)?, parse_f64("nu", nu)?);
    let (value, exact) = match mode {
        SummationMode::CompensatedFloat => (charlier_direct(n, &af, &nuf)?, Cell::Empty),
        SummationMode::ExactRational => {
            let v = charlier_direct(n, &parse_rational("a", a)?, &parse_rational("nu", nu)?)?;
            (v.to_f64_lossy(), rational_text(&v).into())
        }
    };
    t.push(vec![
        n.into(),
        af.into(),
        nuf.into(),
        mode.to_string().into(),
        value.into(),
        exact,
    ]);
    Ok(Report::ok(t))
}

fn eval_hermite(nu: f64, x: f64) -> Result<Report> {
    let mut t = OutputTable::new(["nu", "x", "value"]);
    t.push(vec![nu.into(), x.into(), hermite_fn(nu, x)?.into()]);
    Ok(Report::ok(t))
}

/// `(n, θ, y)` for one scaled point in the chosen mode, plus the exact value as text.
fn scaled_value(x: &str, a: &str, nu: &str, mode: SummationMode) -> Result<(u64, f64, f64, Cell)> {
    match mode {
        SummationMode::CompensatedFloat => {
            let p = ScaledPoint::new(parse_f64("x", x)?, parse_f64("a", a)?)?;
            let y = scaled_y(&p, &parse_f64("nu", nu)?)?;
            Ok((p.n, p.theta, y, Cell::Empty))
        }
        SummationMode::ExactRational => {
            let p = ScaledPoint::new(parse_rational("x", x)?, parse_rational("a", a)?)?;
            let y = scaled_y(&p, &parse_rational("nu", nu)?)?;
            Ok((
                p.n,
                p.theta.to_f64_lossy(),
                y.to_f64_lossy(),
                rational_text(&y).into(),
            ))
        }
    }
}

fn eval_scaled(args: &ScaledArgs, mode: SummationMode) -> Result<Report> {
    let (n, theta, y, exact) = scaled_value(&args.x, &args.a, &args.nu, mode)?;
    let mut t = OutputTable::new(["x", "a", "nu", "mode", "n", "theta", "value", "exact"]);
    t.push(vec![
        parse_f64("x", &args.x)?.into(),
        parse_f64("a", &args.a)?.into(),
        parse_f64("nu", &args.nu)?.into(),
        mode.to_string().into(),
        n.into(),
        theta.into(),
        y.into(),
        exact,
    ]);
    Ok(Report::ok(t))
}

struct SweepRow {
    n: u64,
    theta: f64,
    y: f64,
    h: f64,
    abs_err: f64,
}

fn sweep_convergence(nu: &str, x: &str, a_list: &[String], mode: SummationMode) -> Result<Report> {
    let nuf = parse_f64("nu", nu)?;
    let xf = parse_f64("x", x)?;
    let h = hermite_fn(nuf, xf)?;
    let a_values = a_list
        .iter()
        .map(|a| parse_f64("a-list", a))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Result<SweepRow>> = a_list
        .par_iter()
        .map(|a| {
            let (n, theta, y, _) = scaled_value(x, a, nu, mode)?;
            Ok(SweepRow {
                n,
                theta,
                y,
                h,
                abs_err: (y - h).abs(),
            })
        })
        .collect();
    let points: Vec<(f64, f64)> = a_values
        .iter()
        .zip(&rows)
        .filter_map(|(&a, r)| r.as_ref().ok().map(|r| (a, r.abs_err)))
        .collect();
    let succeeded = points.len();
    let mut notes = Vec::new();
    let slope = match fit_rate(&points) {
        Ok(fit) => {
            if !fit.excluded.is_empty() {
                notes.push(format!(
                    "{} rows with zero error left out of the fit",
                    fit.excluded.len()
                ));
            }
            notes.push(format!("slope {:.6} (r^2 {:.6})", fit.slope, fit.r_squared));
            Some(fit.slope)
        }
        Err(e) => {
            notes.push(format!("no rate fit: {e}"));
            None
        }
    };
    let mut t = OutputTable::new([
        "nu", "x", "a", "mode", "n", "theta", "y", "h", "abs_err", "slope", "error",
    ]);
    for (&a, row) in a_values.iter().zip(rows) {
        let mut cells: Vec<Cell> = vec![nuf.into(), xf.into(), a.into(), mode.to_string().into()];
        match row {
            Ok(r) => cells.extend([
                r.n.into(),
                r.theta.into(),
                r.y.into(),
                r.h.into(),
                r.abs_err.into(),
                slope.into(),
                Cell::Empty,
            ]),
            Err(e) => {
                notes.push(format!("a = {a}: {e}"));
                cells.extend([
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    h.into(),
                    Cell::Empty,
                    slope.into(),
                    e.to_string().into(),
                ]);
            }
        }
        t.push(cells);
    }
    let code = if succeeded >= 3 {
        EXIT_OK
    } else {
        super::EXIT_DOMAIN
    };
    if code != EXIT_OK {
        notes.push(format!(
            "only {succeeded} rows succeeded; at least 3 are needed"
        ));
    }
    Ok(Report {
        table: t,
        notes,
        code,
    })
}

fn sweep_sharpness(r_list: &[u32]) -> Result<Report> {
    let mut t = OutputTable::new(["x", "a", "n", "lhs", "rhs", "equal", "x_exact", "a_exact"]);
    let mut failures = 0;
    for (x, a) in admissible_sharpness_pairs(r_list) {
        let rec = sharpness_check(&x, &a)?;
        if !rec.equal {
            failures += 1;
        }
        t.push(vec![
            x.to_f64_lossy().into(),
            a.to_f64_lossy().into(),
            rec.n.into(),
            rec.lhs.to_f64_lossy().into(),
            rec.rhs.to_f64_lossy().into(),
            if rec.equal { "true" } else { "false" }.into(),
            rational_text(&x).into(),
            rational_text(&a).into(),
        ]);
    }
    let mut report = Report::ok(t);
    report.notes.push(format!("{failures} unequal rows"));
    Ok(report)
}

fn plot_fnu(nu: f64, t_max: f64, dt: f64) -> Result<Report> {
    if !(t_max > 0.0) || !(dt > 0.0) {
        return Err(Error::Domain("plot needs t-max > 0 and dt > 0".into()));
    }
    let mut t = OutputTable::new(["t", "f"]);
    for (tv, f) in f_nu_samples(nu, t_max, dt)? {
        t.push(vec![tv.into(), f.into()]);
    }
    Ok(Report::ok(t))
}

fn zeros_convergence(x: f64, target_nu: f64, a_list: &[f64]) -> Result<Report> {
    let table = zero_convergence_table(x, target_nu, a_list)?;
    let mut notes = vec![format!(
        "Hermite zero {:.16e}, window [{:.6}, {:.6}]",
        table.target, table.window_lo, table.window_hi
    )];
    let slope = match table.fit() {
        Ok(fit) => {
            if !fit.excluded.is_empty() {
                notes.push(format!(
                    "{} rows with zero error left out of the fit",
                    fit.excluded.len()
                ));
            }
            Some(fit.slope)
        }
        Err(e) => {
            notes.push(format!("no rate fit: {e}"));
            None
        }
    };
    let mut t = OutputTable::new([
        "x", "target", "a", "n", "zero", "abs_err", "residual", "slope", "error",
    ]);
    for row in &table.rows {
        let mut cells: Vec<Cell> = vec![x.into(), table.target.into(), row.a.into(), row.n.into()];
        match &row.zero {
            Ok(z) => cells.extend([
                z.root.into(),
                (z.root - table.target).abs().into(),
                z.residual.into(),
                slope.into(),
                Cell::Empty,
            ]),
            Err(e) => cells.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                slope.into(),
                e.to_string().into(),
            ]),
        }
        t.push(cells);
    }
    Ok(Report {
        table: t,
        notes,
        code: EXIT_OK,
    })
}

fn polygon_compare(
    nu: f64,
    x_max: f64,
    a: f64,
    seed: Seed,
    direction: Direction,
) -> Result<Report> {
    let z = charlier_state_trace_directed(nu, a, x_max, direction)?;
    let init = match seed {
        Seed::Charlier => z.nodes[0].1,
        Seed::Exact => StateVector::new(hermite_fn(nu, 0.0)?, hermite_derivative(nu, 0.0)?),
    };
    let u = euler_polygon_directed(nu, init, x_max, z.step.abs(), direction)?;
    let exact = hermite_trace(nu, &z)?;
    let notes = vec![
        format!("max |z - u| = {:.6e}", trace_deviation(&z, &u)?),
        format!("max |z - H| = {:.6e}", trace_deviation(&z, &exact)?),
        format!("max |u - H| = {:.6e}", trace_deviation(&u, &exact)?),
    ];
    let mut t = OutputTable::new([
        "nu", "a", "k", "x", "z_y", "z_yp", "u_y", "u_yp", "h_y", "h_yp", "dev_zu", "dev_zh",
        "dev_uh",
    ]);
    for (k, (((x, zs), (_, us)), (_, hs))) in
        z.nodes.iter().zip(&u.nodes).zip(&exact.nodes).enumerate()
    {
        t.push(vec![
            nu.into(),
            a.into(),
            (k as u64).into(),
            (*x).into(),
            zs.y.into(),
            zs.yp.into(),
            us.y.into(),
            us.yp.into(),
            hs.y.into(),
            hs.yp.into(),
            zs.distance(us).into(),
            zs.distance(hs).into(),
            us.distance(hs).into(),
        ]);
    }
    Ok(Report {
        table: t,
        notes,
        code: EXIT_OK,
    })
}

fn asymptotics_head_tail(a_list: &[f64], nu: f64) -> Result<Report> {
    let reports = head_tail_sweep(a_list, nu);
    if let Some(Err(e)) = reports
        .iter()
        .find(|r| r.is_err())
        .filter(|_| reports.iter().all(|r| r.is_err()))
    {
        return Err(e.clone());
    }
    let points: Vec<(f64, f64)> = a_list
        .iter()
        .zip(&reports)
        .filter_map(|(&a, r)| {
            r.as_ref()
                .ok()
                .map(|r| (a, (r.y0_reconstructed - r.h_nu_0).abs()))
        })
        .collect();
    let mut notes = Vec::new();
    let slope = if points.len() >= 3 {
        match fit_rate(&points) {
            Ok(fit) => Some(fit.slope),
            Err(e) => {
                notes.push(format!("no rate fit: {e}"));
                None
            }
        }
    } else {
        None
    };
    let mut t = OutputTable::new([
        "a",
        "nu",
        "big_a",
        "m",
        "dt",
        "r_head",
        "r_tail",
        "scaled_head",
        "scaled_tail",
        "y0_reconstructed",
        "y0_direct",
        "y0_ceiling",
        "h_nu_0",
        "head_limit",
        "abs_err",
        "slope",
        "error",
    ]);
    for (&a, r) in a_list.iter().zip(reports) {
        let mut cells: Vec<Cell> = vec![a.into(), nu.into()];
        match r {
            Ok(r) => {
                let cfg = SplitConfig::new(a, nu)?;
                cells.extend([
                    cfg.big_a.into(),
                    cfg.m.into(),
                    cfg.dt.into(),
                    r.r_head.into(),
                    r.r_tail.into(),
                    r.scaled_head.into(),
                    r.scaled_tail.into(),
                    r.y0_reconstructed.into(),
                    r.y0_direct.into(),
                    r.y0_ceiling.into(),
                    r.h_nu_0.into(),
                    r.head_limit.into(),
                    (r.y0_reconstructed - r.h_nu_0).abs().into(),
                    slope.into(),
                    Cell::Empty,
                ]);
            }
            Err(e) => {
                cells.extend(std::iter::repeat_n(Cell::Empty, 13));
                cells.push(slope.into());
                cells.push(e.to_string().into());
            }
        }
        t.push(cells);
    }
    Ok(Report {
        table: t,
        notes,
        code: EXIT_OK,
    })
}
