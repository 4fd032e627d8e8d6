use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellint2::{Method, ToleranceConfig64};
use ellint2_cli::grid::GridSpec;
use ellint2_cli::selftest::cmd_selftest;
use ellint2_cli::sweep::{cmd_compare, cmd_eval, cmd_golden, Format, SweepSpec};
use ellint2_cli::{CliError, Outcome};

/// Evaluate E(a, b), the double integral of sqrt(1 + a cos x + b cos y) over
/// [0, pi]^2 with |a| + |b| <= 1, and cross-check its evaluation routes.
#[derive(Parser, Debug)]
#[command(name = "ellint2", version)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,

    /// Omit wall-clock timing from the printed output.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Relative stop tolerance (default 1e-15, or ELLINT2_DEFAULT_TOL).
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Absolute stop tolerance.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Maximum number of series terms.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Gauss-Legendre nodes per axis on the first quadrature level.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Maximum number of quadrature levels.
    #[arg(long, global = true)]
    quad_levels: Option<usize>,
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig64, CliError> {
        let mut cfg = ToleranceConfig64::from_env()?;
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.max_terms {
            cfg.max_terms = v;
        }
        if let Some(v) = self.quad_nodes {
            cfg.quad_base_nodes = v;
        }
        if let Some(v) = self.quad_levels {
            cfg.quad_max_levels = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a_min: f64,
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    a_max: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b_min: f64,
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    b_max: f64,
    /// Number of grid values along a (default 5 for compare, 9 for golden).
    #[arg(long)]
    steps_a: Option<usize>,
    /// Number of grid values along b (default 5 for compare, 9 for golden).
    #[arg(long)]
    steps_b: Option<usize>,
}

impl GridArgs {
    fn spec(&self, default_steps: usize) -> GridSpec {
        GridSpec {
            a_min: self.a_min,
            a_max: self.a_max,
            b_min: self.b_min,
            b_max: self.b_max,
            steps_a: self.steps_a.unwrap_or(default_steps),
            steps_b: self.steps_b.unwrap_or(default_steps),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: ellint2::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate E(a, b) at one point.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// auto, elliptic7, product5, appell3, diag8, axis or quad.
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        method: Method,
    },
    /// Evaluate several methods over a grid and report their deviations.
    Compare {
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated list of methods.
        #[arg(long, value_delimiter = ',', value_parser = parse_method,
              default_value = "elliptic7,product5,appell3,quad")]
        methods: Vec<Method>,
        /// Write one row per (point, method) to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Exit with status 1 when max_rel_dev exceeds this value.
        #[arg(long)]
        fail_above: Option<f64>,
    },
    /// Write tightly converged quadrature values over a grid.
    Golden {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Run the built-in invariant suites.
    Selftest {
        /// Run only these suites (repeatable): legendre, identities (eq6), uv,
        /// agreement, axis, diagonal, convergence.
        #[arg(long)]
        suite: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = cli.tol.config()?;
    let timing = !cli.no_timing;
    match cli.command {
        Command::Eval { a, b, method } => cmd_eval(a, b, method, &cfg, timing),
        Command::Compare {
            grid,
            methods,
            out,
            format,
            fail_above,
        } => {
            let spec = SweepSpec {
                grid: grid.spec(5),
                methods,
                out,
                format: format.into(),
            };
            cmd_compare(&spec, &cfg, fail_above, timing)
        }
        Command::Golden { grid, out, format } => {
            cmd_golden(&grid.spec(9), &cfg, &out, format.into())
        }
        Command::Selftest { suite } => cmd_selftest(&suite, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let failure = match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.failure
        }
        Err(e) => Some(e),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
