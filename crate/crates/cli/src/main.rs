mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conekit::qlattice::Rat;

use commands::{Failure, Family, Ledger};
use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "conekit",
    version,
    about = "Exact intersection-theory ledgers for cones over Keel-McKernan surfaces"
)]
struct Cli {
    /// Output format; defaults to json, or to the extension of --out.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build S and print its curve registry.
    KmSurface {
        #[arg(long)]
        d: usize,
        /// Run the lattice sanity checks.
        #[arg(long)]
        check: bool,
    },
    /// Contract Gamma and the curves l_i, l'_i to get T.
    Contract {
        #[arg(long)]
        d: usize,
        /// Divisor on T to pull back, e.g. "E_1^T + E_2^T - E_3^T".
        #[arg(long, allow_hyphen_values = true)]
        pullback: Option<String>,
    },
    /// Cohomology of n(E_1 + ... + E_q1 - E_{q1+1} - ... - E_{q1+q2}) [- E_j] on T.
    Cohom {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q1: usize,
        #[arg(long)]
        q2: usize,
        #[arg(long)]
        n: Option<u32>,
        /// Fresh exceptional curve to subtract, e.g. E_5.
        #[arg(long)]
        subtract: Option<String>,
    },
    /// Ledgers of the cone threefold.
    Cone {
        #[arg(long, value_enum, default_value = "plt")]
        family: Family,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value = "curve")]
        ledger: Ledger,
    },
    /// Run the coefficient-reduction schedule.
    KvvSchedule {
        #[arg(long, value_delimiter = ',', required = true)]
        e: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<Rat>>,
        #[arg(long)]
        target: Rat,
    },
    /// Verify one of the two counterexample scenarios.
    Verify {
        #[command(subcommand)]
        scenario: Scenario,
    },
    /// Tabulate h1(T, A) over all family members.
    Sweep {
        #[arg(long)]
        d_min: usize,
        #[arg(long)]
        d_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Scenario {
    /// Non-normal plt centre on the cone.
    Plt {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: usize,
    },
    /// Klt Fano threefold with nonzero H^2(O).
    Fano {
        #[arg(long)]
        q: usize,
    },
}

fn format_from_path(path: &std::path::Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "json" => Some(Format::Json),
        "csv" => Some(Format::Csv),
        "md" => Some(Format::Md),
        _ => None,
    }
}

fn dispatch(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::KmSurface { d, check } => commands::km_surface(*d, *check),
        Command::Contract { d, pullback } => commands::contract(*d, pullback.as_deref()),
        Command::Cohom { d, q1, q2, n, subtract } => commands::cohom(*d, *q1, *q2, *n, subtract.as_deref()),
        Command::Cone { family, d, q, ledger } => commands::cone(*family, *d, *q, *ledger),
        Command::KvvSchedule { e, delta, target } => commands::kvv(e, delta.as_deref(), target),
        Command::Verify {
            scenario: Scenario::Plt { d, q },
        } => commands::verify_plt(*d, *q),
        Command::Verify {
            scenario: Scenario::Fano { q },
        } => commands::verify_fano(*q),
        Command::Sweep { d_min, d_max, .. } => commands::sweep(*d_min, *d_max),
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let report = dispatch(&cli.command)?;
    let out = match &cli.command {
        Command::Sweep { out, .. } => out.clone(),
        _ => None,
    };
    let format = cli
        .format
        .or_else(|| out.as_deref().and_then(format_from_path))
        .unwrap_or(Format::Json);
    let text = report.render(format).map_err(|m| Failure { code: 1, message: m })?;
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure {
                code: 1,
                message: e.to_string(),
            })?;
        }
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("conekit: a check failed");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("conekit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
