//! `bertrand-atoms`: spectra, quantized couplings, closed orbits, screening
//! tables and geometry checks as deterministic CSV/JSON (and SVG plots).
//!
//! Exit codes: 0 success, 1 numerical failure (non-convergence, failed
//! invariant battery, I/O), 2 usage error (unknown flags or parameters
//! outside an operation's domain).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod geomcheck;
mod output;
mod par;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

impl From<bertrand_atoms::Error> for CliError {
    fn from(e: bertrand_atoms::Error) -> Self {
        use bertrand_atoms::Error as E;
        match &e {
            E::Domain(_) | E::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "bertrand-atoms",
    about = "Fish-eye Sturmian couplings, hydrogenic/screened spectra, closed orbits, \
             Thomas-Fermi screening and periodic-table structure",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels and orderings of the hydrogenic and screened models
    Spectrum {
        /// Level model: tietz, hydrogen3d or hydrogen2d
        #[arg(long, default_value = "tietz")]
        model: String,
        /// Atomic number
        #[arg(long = "Z", default_value_t = 1)]
        z: u32,
        /// Electron charge in model units
        #[arg(long, default_value_t = 1.0)]
        e: f64,
        /// Screened-spectrum scale constant
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        /// Number of levels in the ordering listing
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Single hydrogen3d level by principal quantum number
        #[arg(long)]
        n: Option<u32>,
        /// Single hydrogen2d level by orbital quantum number
        #[arg(long)]
        l: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantized fish-eye couplings from the shooting solver
    Sturm {
        /// Deformation exponent: 1 or 0.5
        #[arg(long)]
        gamma: f64,
        /// Orbital quantum number
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Number of couplings
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// Coupling search window cap
        #[arg(long, default_value_t = 1e4)]
        beta_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the eigenfunction samples to this CSV
        #[arg(long)]
        eigen_csv: Option<PathBuf>,
    },
    /// Integrate a closed orbit of the screened potential and analyze it
    Orbit {
        /// Orbit family parameter Δ = Za/L² - 1 (Δ ≥ 1 closes)
        #[arg(long)]
        delta: f64,
        /// Charge strength
        #[arg(long = "Z", default_value_t = 1.0)]
        z: f64,
        /// Screening length scale
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Launch radius in units of a (defaults to the perihelion)
        #[arg(long)]
        x0: Option<f64>,
        /// Integration span in predicted periods
        #[arg(long, default_value_t = 1.2)]
        t_max_periods: f64,
        /// Integrator tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the (x, y) orbit as an SVG polyline
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Thomas-Fermi screening function against the analytic approximation
    Tf {
        /// Outer radius of the solve
        #[arg(long, default_value_t = 50.0)]
        xmax: f64,
        /// Boundary tolerance φ(xmax) ≤ tol
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output grid step
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot both screening curves as SVG
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Electron configurations and period structure
    Table {
        /// Filling rule: madelung, nl or fock-n
        #[arg(long, default_value = "madelung")]
        rule: String,
        /// Configuration of a single atom
        #[arg(long = "Z")]
        z: Option<u32>,
        /// Configurations for Z = 1..=z_max
        #[arg(long)]
        z_max: Option<u32>,
        /// Period lengths instead of configurations: janet or conventional
        #[arg(long)]
        periods: Option<String>,
        /// Number of periods to list
        #[arg(long)]
        n_periods: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the geometry invariant battery
    Geomcheck {
        /// Structured output instead of plain pass/fail lines
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum {
            model,
            z,
            e,
            w,
            count,
            n,
            l,
            format,
            out,
        } => commands::run_spectrum(&commands::SpectrumArgs {
            model,
            z,
            e,
            w,
            count,
            n,
            l,
            format,
            out,
        }),
        Command::Sturm {
            gamma,
            l,
            count,
            beta_max,
            format,
            out,
            eigen_csv,
        } => commands::run_sturm(&commands::SturmArgs {
            gamma,
            l,
            count,
            beta_max,
            format,
            out,
            eigen_csv,
        }),
        Command::Orbit {
            delta,
            z,
            a,
            x0,
            t_max_periods,
            tol,
            format,
            out,
            svg,
        } => commands::run_orbit(&commands::OrbitArgs {
            delta,
            z,
            a,
            x0,
            t_max_periods,
            tol,
            format,
            out,
            svg,
        }),
        Command::Tf {
            xmax,
            tol,
            step,
            format,
            out,
            svg,
        } => commands::run_tf(&commands::TfArgs {
            xmax,
            tol,
            step,
            format,
            out,
            svg,
        }),
        Command::Table {
            rule,
            z,
            z_max,
            periods,
            n_periods,
            format,
            out,
        } => commands::run_table(&commands::TableArgs {
            rule,
            z,
            z_max,
            periods,
            n_periods,
            format,
            out,
        }),
        Command::Geomcheck { format, out } => {
            commands::run_geomcheck(&commands::GeomcheckArgs { format, out })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Numeric(_) => ExitCode::from(1),
            }
        }
    }
}
