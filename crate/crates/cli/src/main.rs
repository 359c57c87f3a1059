//! `floquet`: spectra, phase scans, doubling maps, domain walls and scaling
//! sweeps of the two-step driven chain, written as CSV or JSON.

mod angle;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floquet_lattice::scaling::DEFAULT_SIZES;
use floquet_lattice::BoundaryCondition;

use crate::angle::parse_angle;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "floquet", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file (written atomically); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bc {
    Pbc,
    Obc,
}

impl From<Bc> for BoundaryCondition {
    fn from(bc: Bc) -> Self {
        match bc {
            Bc::Pbc => BoundaryCondition::Periodic,
            Bc::Obc => BoundaryCondition::Open,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Ssh,
    Wd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Config {
    Obc,
    Dw,
    Pbc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasienergies of the driven chain, with the analytic dispersion under PBC.
    Spectrum {
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta0: f64,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta1: f64,
        /// Number of two-site cells N (2N sites).
        #[arg(long, default_value_t = 16)]
        cells: usize,
        #[arg(long, value_enum, default_value_t = Bc::Pbc)]
        bc: Bc,
        /// Add the doubled poles of a static partner (needs theta0 = pi/4, N % 4 = 0).
        #[arg(long, value_enum)]
        map: Option<Target>,
    },
    /// Phase labels from boundary-mode counts on a G x G grid of open chains.
    PhaseDiagram {
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, default_value_t = 64)]
        cells: usize,
        /// Distance of the outermost grid lines from 0 and pi/2.
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
    },
    /// Static partner on the theta0 = pi/4 line and its doubled poles.
    Map {
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, default_value_t = 8)]
        cells: usize,
        #[arg(long, value_enum, default_value_t = Target::Ssh)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Bc::Pbc)]
        bc: Bc,
    },
    /// In-gap states of a static chain with eta flipped to -eta left of the middle.
    Domainwall {
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        eta: f64,
        /// Floquet cell count N; the SSH chain has N sites, the Wilson-Dirac chain N/2.
        #[arg(long, default_value_t = 200)]
        cells: usize,
        #[arg(long, visible_alias = "model", value_enum, default_value_t = Target::Wd)]
        target: Target,
    },
    /// Spectral difference between driven and static chains versus N, with a power-law fit.
    Scaling {
        #[arg(long, value_enum, default_value_t = Config::Obc)]
        config: Config,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = Target::Ssh)]
        target: Target,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
        sizes: Vec<usize>,
    },
}

fn run(cli: Cli) -> Result<(), commands::Failure> {
    let table = match cli.command {
        Command::Spectrum { theta0, theta1, cells, bc, map } => commands::spectrum(theta0, theta1, cells, bc, map)?,
        Command::PhaseDiagram { grid, cells, margin } => commands::phase_diagram(grid, cells, margin)?,
        Command::Map { eta, cells, target, bc } => commands::map(eta, cells, target, bc)?,
        Command::Domainwall { eta, cells, target } => commands::domainwall(eta, cells, target)?,
        Command::Scaling { config, eta, target, sizes } => commands::scaling(config, eta, target, &sizes)?,
    };
    let bytes = table.render(cli.output.format).map_err(commands::Failure::Io)?;
    output::emit(&bytes, cli.output.out.as_deref()).map_err(commands::Failure::Io)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
