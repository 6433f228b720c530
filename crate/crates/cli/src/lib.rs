//! Command-line front end for augtor: polynomial and matrix input, a small
//! catalog, r-sweeps over a worker pool and table, JSON or CSV reports.

pub mod catalog;
pub mod command;
pub mod matrix;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use augtor::parse::parse_poly;
use augtor::torsion::MethodChoice;
use clap::{ArgGroup, Args, Parser};

pub use catalog::{catalog_lookup, CatalogEntry};
pub use command::{run_command, CliError, CommandConfig, RRange, Source, Subcommand};
pub use matrix::load_presentation;
pub use report::{Cell, Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "augtor",
    version,
    about = "Torsion and Betti numbers of cyclic covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Betti numbers beta_r.
    Betti(Common),
    /// Torsion numbers b_r with the method used for each.
    Torsion(Common),
    /// Reduced torsion numbers from M / nu_r M.
    Reduced(Common),
    /// Linear recurrence satisfied by |Res(Delta, t^r - 1)|.
    Recurrence(Common),
    /// Mahler measure and growth samples b_r^(1/r).
    Growth(Common),
    /// Growth of the p-components of b_r.
    Pgrowth(Common),
    /// Whether b_r is a square with a probable-prime root.
    ProbeSquare(Common),
    /// List the catalog, or show one entry with --name.
    Catalog(Common),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").multiple(false)))]
struct Common {
    /// Polynomial in t, e.g. "t^2-3t+1".
    #[arg(long, group = "source", allow_hyphen_values = true)]
    poly: Option<String>,
    /// JSON presentation matrix file.
    #[arg(long, group = "source")]
    matrix: Option<PathBuf>,
    /// Catalog name, e.g. 4_1 or scaled:m=6.
    #[arg(long, group = "source")]
    name: Option<String>,
    /// Inclusive range of r, e.g. 1..30.
    #[arg(long = "r", value_name = "A..B")]
    r: Option<String>,
    /// auto, fox, extended, snf, direct_sum or recurrence.
    #[arg(long, default_value = "auto")]
    method: String,
    /// A prime for the p-component commands.
    #[arg(long)]
    p: Option<u64>,
    /// Absolute accuracy of the Mahler measure.
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// Worker threads for r-sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    /// table, json or csv.
    #[arg(long, default_value = "table")]
    format: String,
}

fn config(cli: Cli) -> Result<CommandConfig, CliError> {
    let (sub, c) = match cli.command {
        Command::Betti(c) => (Subcommand::Betti, c),
        Command::Torsion(c) => (Subcommand::Torsion, c),
        Command::Reduced(c) => (Subcommand::Reduced, c),
        Command::Recurrence(c) => (Subcommand::Recurrence, c),
        Command::Growth(c) => (Subcommand::Growth, c),
        Command::Pgrowth(c) => (Subcommand::PGrowth, c),
        Command::ProbeSquare(c) => (Subcommand::ProbeSquare, c),
        Command::Catalog(c) => (Subcommand::Catalog, c),
    };
    let source = if let Some(text) = &c.poly {
        let d = parse_poly(text).map_err(|e| CliError::Usage(format!("--poly: {e}")))?;
        Some(Source::Poly(d))
    } else if let Some(path) = &c.matrix {
        Some(Source::Matrix(load_presentation(path)?))
    } else if let Some(name) = &c.name {
        Some(Source::Catalog(catalog_lookup(name)?))
    } else {
        None
    };
    let mut cfg = CommandConfig::new(sub, source);
    cfg.range =
        c.r.as_deref()
            .map(str::parse)
            .transpose()
            .map_err(CliError::Usage)?;
    cfg.method = c
        .method
        .parse::<MethodChoice>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    cfg.p = c.p;
    cfg.eps = c.eps;
    cfg.jobs = c.jobs;
    cfg.format = c.format.parse().map_err(CliError::Usage)?;
    Ok(cfg)
}

/// Parse `args` (program name first), run the command and write the report
/// to `out` and diagnostics to `err`.  Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    let result = config(cli).and_then(|cfg| Ok((run_command(&cfg)?, cfg.format)));
    match result {
        Ok((report, format)) => {
            let _ = out.write_all(report.render(format).as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
