use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use twogroup_cli::{export_structure, load_fixture, run_suite, write_report, Suite};

#[derive(Parser)]
#[command(
    name = "twogroup",
    version,
    about = "Check 2-group and multiplicative vector field laws on fixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite of laws and print one line per law.
    Check {
        fixture: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Overrides the fixture's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the fixture's sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the Lie 2-algebra structure constants of a matrix fixture.
    Export {
        fixture: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> anyhow::Result<bool> {
    match Cli::parse().command {
        Command::Check {
            fixture,
            suite,
            seed,
            samples,
            report,
        } => {
            let mut f = load_fixture(&fixture)?;
            if let Some(seed) = seed {
                f.seed = seed;
            }
            if let Some(samples) = samples {
                anyhow::ensure!(samples > 0, "--samples must be positive");
                f.samples = samples;
            }
            let out = run_suite(&f, suite)?;
            print!("{}", out.report.summary());
            println!("wall time {:.3} s", out.wall_time_seconds);
            if let Some(path) = report {
                write_report(&path, &out).context("writing the report")?;
            }
            Ok(out.report.passed)
        }
        Command::Export { fixture, out } => {
            let f = load_fixture(&fixture)?;
            let doc = export_structure(&f, &out)?;
            println!("wrote {} (g0 dim {}, g1 dim {})", out.display(), doc.g0_dim, doc.g1_dim);
            Ok(true)
        }
    }
}
