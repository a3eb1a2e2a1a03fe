//! `graphheat`: heat kernels, exact short-time series and distance recovery on
//! graphs given as edge lists.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "graphheat", version, about = "Heat kernels on finite graphs")]
struct Cli {
    /// Worker threads for all-pairs and multi-time work (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Edge-list file: `<u> <v> [w]` per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,

    /// Write CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Pairs {
    /// Restrict to this pair of vertex labels; repeatable.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], action = clap::ArgAction::Append)]
    pair: Vec<String>,

    /// Source label of a single pair (with --to).
    #[arg(long, requires = "to")]
    from: Option<String>,

    /// Target label of a single pair (with --from).
    #[arg(long, requires = "from")]
    to: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Uniformization,
}

impl From<MethodArg> for graphheat::heat_kernel::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Spectral => graphheat::heat_kernel::Method::Spectral,
            MethodArg::Uniformization => graphheat::heat_kernel::Method::Uniformization,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel values p_t(x,y): CSV `t,x_label,y_label,p`.
    Kernel {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pairs: Pairs,
        /// Times to evaluate; repeat or separate with commas.
        #[arg(long = "t", required = true, value_delimiter = ',')]
        t_values: Vec<f64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        /// Truncation tolerance of the uniformization series.
        #[arg(long, default_value_t = graphheat::heat_kernel::DEFAULT_EPS)]
        eps: f64,
    },
    /// Laplacian spectrum: CSV `k,lambda`, ascending.
    Spectrum {
        #[command(flatten)]
        input: Input,
    },
    /// Exact Taylor coefficients: CSV `x_label,y_label,k,numerator,denominator`.
    Series {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pairs: Pairs,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
    },
    /// Exact check of the short-time law for every pair; exit 1 on any failure.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pairs: Pairs,
    },
    /// Recover distance and geodesic count from kernel samples.
    Estimate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pairs: Pairs,
        /// Kernel engine used as the sample source.
        #[arg(long, value_enum, default_value_t = MethodArg::Uniformization)]
        method: MethodArg,
        /// First sample time (default: min(0.1, 1/(2 * max degree))).
        #[arg(long)]
        t0: Option<f64>,
        /// Number of halvings of t0.
        #[arg(long, default_value_t = 12)]
        levels: usize,
    },
    /// Graph distance and geodesic count: CSV `x,y,d,N`.
    Paths {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pairs: Pairs,
    },
    /// Two-colouring: CSV `vertex,class` (class `none` if not bipartite).
    Bipartite {
        #[command(flatten)]
        input: Input,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.jobs);
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(jobs: usize) {
    if jobs > 0 {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_jobs: usize) {}
