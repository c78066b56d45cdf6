//! Command-line front end: `charlier-hermite <group> <action> --flag value`.
//!
//! Every command prints one [`OutputTable`](crate::table::OutputTable) on
//! stdout and diagnostics on stderr. Exit codes: 0 success, 1 domain or usage
//! error, 2 numerical non-convergence.

mod commands;

use clap::{Args, Parser, Subcommand};

use crate::charlier::SummationMode;
use crate::error::Error;
use crate::table::OutputFormat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "charlier-hermite",
    version,
    about = "Charlier polynomials, Hermite functions of real order and their O(1/sqrt(a)) limit"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    pub out: OutputFormat,
    /// Summation mode for Charlier sums.
    #[arg(long, global = true, default_value = "float", value_parser = parse_mode)]
    pub mode: SummationMode,
    #[command(subcommand)]
    pub group: Group,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<SummationMode, String> {
    match s {
        "float" => Ok(SummationMode::CompensatedFloat),
        "rational" => Ok(SummationMode::ExactRational),
        other => Err(format!(
            "unknown mode {other:?} (expected float or rational)"
        )),
    }
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Evaluate a single value.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Sweeps over the parameter a.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Plot data.
    #[command(subcommand)]
    Plot(PlotCmd),
    /// Zeros in the order variable.
    #[command(subcommand)]
    Zeros(ZerosCmd),
    /// Euler polygon against the Charlier state trace.
    #[command(subcommand)]
    Polygon(PolygonCmd),
    /// Term decomposition at x = 0.
    #[command(subcommand)]
    Asymptotics(AsymptoticsCmd),
}

#[derive(Debug, Subcommand)]
pub enum EvalCmd {
    /// c_n^a(nu)
    Charlier {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
    },
    /// H_nu(x)
    Hermite {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// y_nu^a(x) = (2a)^(nu/2) c_ceil(a - x sqrt(2a))^a(nu)
    Scaled(ScaledArgs),
}

#[derive(Debug, Args)]
pub struct ScaledArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
}

#[derive(Debug, Subcommand)]
pub enum SweepCmd {
    /// |y_nu^a(x) - H_nu(x)| over a list of a, with the fitted log-log slope.
    Convergence {
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "a-list", value_delimiter = ',', required = true)]
        a_list: Vec<String>,
    },
    /// Exact order-two identity y_2 - H_2 = 4x/sqrt(2a) at a = r^2/2, x = j/r.
    Sharpness {
        #[arg(long = "r-list", value_delimiter = ',', default_value = "2,4,6,8")]
        r_list: Vec<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlotCmd {
    /// f_nu(t) = t^(-nu-1) exp(-t^2/2) on a uniform grid.
    Fnu {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long)]
        dt: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZerosCmd {
    /// Charlier zeros nearest a Hermite zero, over a list of a.
    Convergence {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long = "target-nu", allow_hyphen_values = true)]
        target_nu: f64,
        #[arg(long = "a-list", value_delimiter = ',', required = true)]
        a_list: Vec<f64>,
    },
    /// Zeros of nu -> c_n^a(nu) in [lo, hi].
    Charlier {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Zeros of nu -> H_nu(x) in [lo, hi].
    Hermite {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Seed {
    /// Start the polygon from (H_nu(0), H'_nu(0)).
    Exact,
    /// Start the polygon from the first Charlier state.
    Charlier,
}

#[derive(Debug, Subcommand)]
pub enum PolygonCmd {
    /// Node-by-node comparison of the Charlier trace, the Euler polygon and H_nu.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long = "x-max")]
        x_max: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, value_enum, default_value_t = Seed::Exact)]
        seed: Seed,
        /// Run toward negative x.
        #[arg(long)]
        descending: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum AsymptoticsCmd {
    /// Head/tail split of the x = 0 term sum.
    HeadTail {
        #[arg(
            long = "a-list",
            visible_alias = "a",
            value_delimiter = ',',
            required = true
        )]
        a_list: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
    },
    /// Riemann sum of f_nu against the incomplete-gamma closed form.
    Trapezoid {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dt: f64,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_convergence_failure() {
        EXIT_NO_CONVERGENCE
    } else {
        EXIT_DOMAIN
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.table.render(cli.out),
            stderr: report.notes.join("\n") + if report.notes.is_empty() { "" } else { "\n" },
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
