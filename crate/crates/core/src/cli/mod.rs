//! The `selberg-bounds` command line.
//!
//! Exit status: 0 on success, 1 when a verification suite fails or an
//! enumeration is incomplete, 2 on a config, usage or domain error.

mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
pub use commands::{parse_scalar, Outcome};
pub use config::{Config, Format, CONFIG_ENV};
use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "selberg-bounds",
    version,
    about = "Kissing-number and geodesic-count bounds for closed hyperbolic manifolds"
)]
pub struct Cli {
    /// JSON config file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Output format on stdout; defaults to the config's `output`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write the report to this file (CSV if it ends in `.csv`, JSON otherwise).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the constants of the bounds with their error bars.
    Constants {
        #[arg(long)]
        n: u32,
        /// Half-width of the counting windows.
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Support radius for the surface constant (n = 2), e.g. `2asinh1`.
        #[arg(long, value_parser = parse_scalar)]
        epsilon: Option<f64>,
        /// Relative quadrature tolerance; overrides the config.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate every applicable bound for a manifold.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        vol: f64,
        #[arg(long)]
        sys: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Add the window and cumulative count bounds at this length.
        #[arg(long)]
        l: Option<f64>,
    },
    /// Enumerate the length spectrum of a configured group.
    Spectrum {
        #[arg(long)]
        group: String,
        #[arg(long)]
        lmax: f64,
        /// Maximum word length; defaults to the config's enumeration depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Write `<group>-spectrum.csv` and `<group>-spectrum.json` here.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Print the summary only.
        #[arg(long)]
        no_files: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Group for the bounds suite.
        #[arg(long)]
        group: Option<String>,
        /// Samples per dimension in the holonomy suite.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn execute(cli: &Cli, cfg: &Config) -> Result<Outcome> {
    match &cli.command {
        Command::Constants { n, delta, epsilon, tol } => {
            if let Some(t) = tol {
                if !(*t > 0.0 && *t < 1.0) {
                    return Err(Error::Config(format!("--tol must lie in (0, 1), got {t}")));
                }
            }
            commands::constants(cfg, *n, *delta, *epsilon, *tol)
        }
        Command::Bound { n, vol, sys, delta, l } => commands::bound(cfg, *n, *vol, *sys, *delta, *l),
        Command::Spectrum {
            group,
            lmax,
            depth,
            dir,
            no_files,
            csv,
            json,
        } => commands::spectrum(
            cfg,
            &commands::SpectrumArgs {
                group,
                l_max: *lmax,
                depth: *depth,
                dir: (!no_files).then_some(dir.as_path()),
                csv: csv.clone(),
                json: json.clone(),
            },
        ),
        Command::Verify {
            suite,
            group,
            trials,
            seed,
        } => commands::verify(
            cfg,
            &commands::VerifyArgs {
                suite: *suite,
                group: group.as_deref(),
                trials: *trials,
                seed: *seed,
            },
        ),
    }
}

/// Run with already-parsed arguments, writing to the given streams. Returns the exit status.
pub fn run_with(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = (|| {
        let cfg = match &cli.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let outcome = execute(cli, &cfg)?;
        let text = output::render(&outcome.report, cli.format.unwrap_or(cfg.output))?;
        stdout.write_all(text.as_bytes())?;
        if let Some(p) = &cli.out {
            output::write_file(p, &outcome.report)?;
        }
        Ok::<_, Error>(outcome.ok)
    })();
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Parse `args` and run. Usage errors print clap's message and exit 2.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_with(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_OK
            }
        }
    }
}
