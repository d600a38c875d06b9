use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gc3_cli::{suites, Format, Options};

#[derive(Parser)]
#[command(name = "gc3", version, about = "Odd graph complex, graph forms and canonical integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the non-zero six-loop numerators and compare with the table.
    Table4 {
        /// Graph list (default: the shipped 288 classes).
        #[arg(long)]
        graphs: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite: complex, forms, integrals or all.
    Verify {
        suite: String,
        /// Six-loop cycle to check instead of the shipped one.
        #[arg(long)]
        x_file: Option<PathBuf>,
        /// Graph list (default: the shipped 288 classes).
        #[arg(long)]
        graphs: Option<PathBuf>,
        /// Also compute the third volume constant.
        #[arg(long)]
        stretch: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo samples per graph (ten times as many for rows below 0.5).
    #[arg(long, default_value_t = 10_000_000)]
    samples: u64,
    /// Append-only JSON-lines result cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Rows not started after this many seconds are skipped.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl Common {
    fn options(&self) -> Options {
        Options {
            seed: self.seed,
            samples: self.samples,
            cache: self.cache.clone(),
            jobs: self.jobs,
            time_limit: self.time_limit,
            ..Options::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (result, format) = match cli.command {
        Command::Table4 { graphs, common } => {
            let opts = Options { graphs_file: graphs, ..common.options() };
            (suites::table4(&opts), common.format)
        }
        Command::Verify { suite, x_file, graphs, stretch, common } => {
            let opts = Options { x_file, graphs_file: graphs, stretch, ..common.options() };
            (suites::verify(&suite, &opts), common.format)
        }
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
