use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nsdq_core::experiments::{
    default_grid, ellipsoid_inner_grid, fit_slope, parse_grid, run_duct, run_ellipsoid, run_example1, run_sphere_scatter,
    sphere_table, to_csv, to_json, DuctConfig, DuctMode, ErrorMetric, ExperimentRow,
};
use nsdq_core::Error;

#[derive(Parser, Debug)]
#[command(name = "nsdq", version, about = "Numerical steepest descent experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment and write its convergence table.
    Run(RunArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Experiment {
    Ellipsoid,
    Duct,
    Sphere,
    Example1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Corner,
    Direct,
    #[value(name = "direct_modified")]
    DirectModified,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Frequencies: `w1,w2,...` or `min:max:count` (log-spaced).
    #[arg(long)]
    omega: Option<String>,
    /// Radial Gauss points.
    #[arg(long)]
    radial_points: Option<usize>,
    /// Clenshaw-Curtis points per polar angle.
    #[arg(long)]
    outer_cc: Option<usize>,
    /// Trapezoidal points for the periodic angle.
    #[arg(long)]
    outer_trap: Option<usize>,
    /// Gauss-Laguerre points (duct).
    #[arg(long, default_value_t = 8)]
    gl: usize,
    /// Half-range Gauss-Hermite points (duct); twice `--gl` when omitted.
    #[arg(long)]
    gh: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Corner)]
    mode: Mode,
    /// Incidence angles (sphere), numbers or `pi/N`.
    #[arg(long, default_value = "0,pi/10,pi/5,pi/3")]
    psi: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write `(phi_1, phi_2, |Q_r|)` of the ellipsoid at the first frequency.
    #[arg(long)]
    dump_inner_grid: Option<PathBuf>,
    /// Tolerance of the duct reference integral.
    #[arg(long, default_value_t = nsdq_core::oracle::ACOUSTICS_TOL)]
    oracle_tol: f64,
}

enum Failure {
    Usage(String),
    NotConverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged { .. } => Failure::NotConverged(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_angle(s: &str) -> Result<f64, Failure> {
    let s = s.trim();
    let bad = || Failure::Usage(format!("not an angle: {s:?}"));
    if s == "pi" {
        return Ok(PI);
    }
    if let Some(den) = s.strip_prefix("pi/") {
        return den.parse::<f64>().map(|d| PI / d).map_err(|_| bad());
    }
    s.parse::<f64>().map_err(|_| bad())
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let grid = match &args.omega {
        Some(text) => parse_grid(text)?,
        None => default_grid(),
    };
    let rows = match args.experiment {
        Experiment::Ellipsoid => {
            let m = args.radial_points.unwrap_or(8);
            let rows = run_ellipsoid(&grid, m, args.outer_cc.unwrap_or(50), args.outer_trap.unwrap_or(50))?;
            if let Some(path) = &args.dump_inner_grid {
                let mut csv = String::from("phi1,phi2,abs_q\n");
                for (a, b, v) in ellipsoid_inner_grid(grid[0], m, 41, 80)? {
                    csv.push_str(&format!("{a:.16e},{b:.16e},{v:.16e}\n"));
                }
                std::fs::write(path, csv).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            rows
        }
        Experiment::Duct => {
            let mode = match args.mode {
                Mode::Corner => DuctMode::Corner,
                Mode::Direct => DuctMode::Direct,
                Mode::DirectModified => DuctMode::DirectModified,
            };
            let mut cfg = DuctConfig::new(args.gl, mode);
            cfg.n_gh = args.gh;
            cfg.oracle_tol = args.oracle_tol;
            if let Some(cc) = args.outer_cc {
                cfg.outer_cc = cc;
            }
            run_duct(&grid, &cfg)?
        }
        Experiment::Sphere => {
            let psis = args.psi.split(',').map(parse_angle).collect::<Result<Vec<f64>, Failure>>()?;
            let rows = run_sphere_scatter(&grid, &psis, args.radial_points.unwrap_or(5), args.outer_trap.unwrap_or(100))?;
            eprint!("{}", sphere_table(&rows));
            rows
        }
        Experiment::Example1 => run_example1(&grid, args.radial_points.unwrap_or(6), args.outer_cc.unwrap_or(16))?,
    };
    report_slope(&rows);
    let text = match args.format {
        Format::Csv => to_csv(&rows),
        Format::Json => to_json(&rows) + "\n",
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_slope(rows: &[ExperimentRow]) {
    let metric = if rows.iter().any(|r| r.params.get("experiment").map(String::as_str) == Some("duct")) {
        ErrorMetric::Relative
    } else {
        ErrorMetric::Absolute
    };
    if let Ok(fit) = fit_slope(rows, metric) {
        eprintln!(
            "slope {:.3} over omega in [{}, {}] ({} points, r^2 = {:.4})",
            fit.slope, fit.omega_range.0, fit.omega_range.1, fit.points, fit.r_squared
        );
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let Command::Run(args) = cli.command;
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NotConverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
