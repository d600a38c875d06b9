//! Verification harness and table reproduction for the `gc3` library.

pub mod properties;
pub mod report;
pub mod suites;
pub mod table;

use std::path::PathBuf;

use thiserror::Error;

pub use report::{Check, Format, Status, TableRow, VerificationReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite {0:?} (expected complex, forms, integrals or all)")]
    UnknownSuite(String),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Integral(#[from] gc3::integrate::IntegralError),
    #[error(transparent)]
    Forms(#[from] gc3::forms::FormsError),
    #[error(transparent)]
    Complex(#[from] gc3::complex::ComplexError),
    #[error(transparent)]
    Graph(#[from] gc3::graph::GraphError),
}

/// Settings shared by every command. Nothing is read from the environment.
#[derive(Clone, Debug)]
pub struct Options {
    /// Master seed; the graph at position `i` of the graph list uses `seed + i`.
    pub seed: u64,
    /// Monte Carlo samples per graph; rows with `|value| < 0.5` get ten times as many.
    pub samples: u64,
    pub cache: Option<PathBuf>,
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    /// Replacement for the shipped six-loop cycle.
    pub x_file: Option<PathBuf>,
    /// Replacement for the shipped list of 288 graphs.
    pub graphs_file: Option<PathBuf>,
    /// Also compute the third volume constant.
    pub stretch: bool,
    /// Rows not started within this many seconds are reported as skipped.
    pub time_limit: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 1, samples: 10_000_000, cache: None, jobs: None, x_file: None, graphs_file: None, stretch: false, time_limit: None }
    }
}

fn read_input(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })
}

/// The cycle `X`, from `opts.x_file` when given.
pub fn load_x(opts: &Options) -> Result<gc3::complex::Chain, CliError> {
    match &opts.x_file {
        None => Ok(gc3::data::x_cycle()),
        Some(p) => gc3::complex::parse_named_chain(&read_input(p)?)
            .map(|(c, _)| c)
            .map_err(|e| CliError::Input { path: p.display().to_string(), message: e.to_string() }),
    }
}

/// The 288 graphs of bidegree (6, −6), from `opts.graphs_file` when given.
pub fn load_graphs(opts: &Options) -> Result<Vec<(Option<String>, gc3::graph::OrientedGraph)>, CliError> {
    match &opts.graphs_file {
        None => Ok(gc3::data::graphs_6_6()),
        Some(p) => gc3::graph::parse_graph_file(&read_input(p)?)
            .map_err(|e| CliError::Input { path: p.display().to_string(), message: e.to_string() }),
    }
}

/// Runs `f` on a pool of `opts.jobs` threads.
pub fn with_pool<T: Send>(opts: &Options, f: impl FnOnce() -> T + Send) -> T {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().expect("thread pool").install(f)
}
