//! `gspace`: density tables, seeded simulation and discordancy testing for
//! spacings of Gamma samples.
//!
//! Exit status: 0 on success (or no discordancy), 1 when `test` finds the
//! suspected observations discordant, 2 on usage, parameter or IO errors.

mod density;
mod manifest;
mod output;
mod simulate;
mod tables;
mod testdata;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamma_spacings::{Execution, Statistic};

use output::{usage, CliResult, Format};

#[derive(Debug, Parser)]
#[command(
    name = "gspace",
    version,
    about = "Spacings of Gamma order statistics and outlier tests"
)]
struct Cli {
    /// Worker threads for simulations; 1 runs sequentially. Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate spacing densities (closed form, claimed law, quadrature).
    Density(DensityArgs),
    /// Simulate a spacing or an outlier statistic under the Gamma null.
    Simulate(SimulateArgs),
    /// KS-check simulated spacings against the true and the claimed law.
    Validate(ValidateArgs),
    /// Empirical critical values of the outlier statistics.
    CriticalValues(CriticalValuesArgs),
    /// Test a data file for upper outliers.
    Test(TestArgs),
    /// Power under scale slippage of k observations.
    Power(PowerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Exact,
    Claimed,
    Numeric,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Zk,
    Dk,
}

impl From<StatArg> for Statistic {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Zk => Statistic::Zk,
            StatArg::Dk => Statistic::Dk,
        }
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Gamma shape.
    #[arg(long)]
    pub m: f64,
    /// Sample size.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Spacing index, Y_j = X_(j) - X_(j-1).
    #[arg(long, default_value_t = 2)]
    pub j: usize,
    /// Gamma scale.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = Which::All)]
    pub which: Which,
    /// Upper end of the grid, which starts at 0.
    #[arg(long, default_value_t = 8.0)]
    pub ymax: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Absolute tolerance of the quadrature route.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Directory receiving one file per curve; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: f64,
    /// Gamma scale; spacing simulations only.
    #[arg(long, conflicts_with = "stat")]
    pub sigma: Option<f64>,
    /// Simulate the spacing Y_j.
    #[arg(long, required_unless_present = "stat", conflicts_with = "stat")]
    pub j: Option<usize>,
    /// Simulate an outlier statistic instead of a spacing.
    #[arg(long, value_enum, requires = "k")]
    pub stat: Option<StatArg>,
    /// Number of suspected upper outliers.
    #[arg(long, requires = "stat")]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// Also write an area-normalized histogram to `<output>.histogram.csv`.
    #[arg(long, requires = "output")]
    pub bins: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Comma-separated Gamma shapes.
    #[arg(long, value_delimiter = ',', default_value = "1,3,8")]
    pub m: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub j: usize,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Write histograms and density curves for each shape (needs --output).
    #[arg(long, requires = "output")]
    pub bins: Option<usize>,
    /// Directory receiving report.json, manifest.json and optional plot data.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CriticalValuesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// Comma-separated significance levels.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    pub alpha: Vec<f64>,
    /// Comma-separated statistics.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "zk")]
    pub stat: Vec<StatArg>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// One observation per line; blank lines and `#` comments are ignored.
    pub datafile: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Gamma shape of the null; must be supplied, it is not estimated.
    #[arg(long)]
    pub m: f64,
    #[arg(long, value_enum, default_value_t = StatArg::Zk)]
    pub stat: StatArg,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// JSON report path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: f64,
    /// Comma-separated scale factors of the contaminated observations (>= 1).
    #[arg(long, value_delimiter = ',', required = true)]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "zk")]
    pub stat: Vec<StatArg>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Runs `job` on a pool of the requested size; one thread also selects sequential scheduling.
fn with_threads<T, F>(threads: Option<usize>, job: F) -> CliResult<T>
where
    T: Send,
    F: FnOnce(Execution) -> CliResult<T> + Send,
{
    match threads {
        None => job(Execution::Parallel),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| usage(format!("cannot start {t} worker threads: {e}")))?;
            let execution = if t == 1 {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            pool.install(|| job(execution))
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    with_threads(cli.threads, |execution| match cli.command {
        Command::Density(a) => density::run(&a).map(|_| ExitCode::SUCCESS),
        Command::Simulate(a) => simulate::run(&a, execution).map(|_| ExitCode::SUCCESS),
        Command::Validate(a) => validate::run(&a, execution).map(|_| ExitCode::SUCCESS),
        Command::CriticalValues(a) => {
            tables::critical_values(&a, execution).map(|_| ExitCode::SUCCESS)
        }
        Command::Power(a) => tables::power(&a, execution).map(|_| ExitCode::SUCCESS),
        Command::Test(a) => testdata::run(&a, execution),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
