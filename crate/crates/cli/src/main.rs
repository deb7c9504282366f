mod input;
mod render;
mod scan;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use specirr::conjecture_lab::{analyze, AnalyzeError, MergeError};
use specirr::graph::{FamilySpec, GraphError};
use specirr::s2_bounds::S2Error;
use specirr::spectral::{SolverConfig, SpectralError};

/// Exit codes other than success.
pub mod exit {
    pub const INPUT: u8 = 1;
    pub const DISCONNECTED: u8 = 2;
    pub const NO_CONVERGENCE: u8 = 3;
    pub const VIOLATION: u8 = 4;
}

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }
}

macro_rules! input_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Self::new(exit::INPUT, e)
            }
        }
    )*};
}

input_failure!(
    anyhow::Error,
    io::Error,
    csv::Error,
    serde_json::Error,
    GraphError,
    MergeError
);

impl From<AnalyzeError> for Failure {
    fn from(e: AnalyzeError) -> Self {
        let code = match &e {
            AnalyzeError::NotConnected => exit::DISCONNECTED,
            AnalyzeError::Spectral(_) => exit::NO_CONVERGENCE,
            _ => exit::INPUT,
        };
        Self::new(code, e)
    }
}

impl From<S2Error> for Failure {
    fn from(e: S2Error) -> Self {
        AnalyzeError::from(e).into()
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        AnalyzeError::from(e).into()
    }
}

#[derive(Parser)]
#[command(
    name = "specirr",
    version,
    about = "Spectral irregularity of graphs: Perron solves, degree-moment bounds, S² estimates and corpus scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one connected graph.
    Analyze {
        #[command(flatten)]
        source: input::Source,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Print the graph6 encoding of a named family member,
    /// e.g. `family cone path 20`.
    Family {
        #[arg(required = true, num_args = 1.., value_name = "SPEC")]
        spec: Vec<String>,
    },
    /// Scan every connected graph of one order, or a graph6 corpus.
    #[command(group(
        ArgGroup::new("input").required(true).args(["corpus", "enumerate", "file", "stdin"])
    ))]
    Scan {
        /// graph6 corpus, one graph per line.
        corpus: Option<PathBuf>,
        /// Enumerate connected graphs on N vertices, one per isomorphism class.
        #[arg(long, value_name = "N")]
        enumerate: Option<usize>,
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
        #[arg(long)]
        stdin: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write one CSV row per analyzed graph to PATH.
        #[arg(long, value_name = "PATH")]
        per_graph: Option<PathBuf>,
        /// Count disconnected inputs instead of reporting each one.
        #[arg(long)]
        skip_disconnected: bool,
    },
    /// Compare the lower bounds on S² with its true value.
    Bounds {
        #[command(flatten)]
        source: input::Source,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Stop when the residual norm of the Perron iterate falls below this.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[arg(long = "max-iter", default_value_t = 100_000)]
    max_iter: usize,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig, Failure> {
        SolverConfig::new(self.tolerance, self.max_iter, SolverConfig::default().shift)
            .map_err(|e| Failure::new(exit::INPUT, e))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

fn run(command: Command) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Analyze {
            source,
            solver,
            format,
        } => {
            let cfg = solver.config()?;
            let g = source.load_connected()?;
            let record = analyze(&g, &cfg)?;
            render::record(&mut out, &record, format)?;
        }
        Command::Family { spec } => {
            let spec: FamilySpec = spec.join(" ").parse()?;
            writeln!(out, "{}", spec.build()?.to_graph6())?;
        }
        Command::Scan {
            corpus,
            enumerate,
            file,
            stdin: _,
            solver,
            format,
            per_graph,
            skip_disconnected,
        } => {
            let cfg = solver.config()?;
            let request = scan::Request {
                cfg,
                per_graph,
                csv_to_stdout: format == Format::Csv,
                skip_disconnected,
            };
            let summary = match (enumerate, corpus.or(file)) {
                (Some(n), _) => scan::enumerated(n, &request, &mut out)?,
                (None, Some(path)) => scan::corpus_file(&path, &request, &mut out)?,
                (None, None) => scan::stream(io::stdin().lock(), &request, &mut out)?,
            };
            render::diagnostics(&summary);
            if format != Format::Csv {
                render::summary(&mut out, &summary, format)?;
            }
            out.flush()?;
            if !summary.violations.is_empty() {
                return Ok(exit::VIOLATION);
            }
        }
        Command::Bounds {
            source,
            solver,
            format,
        } => {
            let cfg = solver.config()?;
            let g = source.load_connected()?;
            render::bounds(&mut out, &g, &cfg, format)?;
        }
    }
    out.flush()?;
    Ok(0)
}

/// A closed downstream pipe (`specirr ... | head`) ends output quietly.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT } else { 0 });
        }
    };
    if let Err(e) = scan::configure_threads() {
        eprintln!("specirr: {:#}", e.error);
        return ExitCode::from(e.code);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e.error) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("specirr: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
