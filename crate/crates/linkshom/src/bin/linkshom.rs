//! Command-line interface to the link homology engine.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linkshom::job::{self, Command as JobCommand, JobSpec, OutputFormat, SeriesKind};
use linkshom::verify::Suite;

#[derive(Parser)]
#[command(
    name = "linkshom",
    version,
    about = "Exact rational homology of spaces of long links modulo immersions",
    long_about = "Builds the normalized chain complexes attached to a simplicial wedge of\n\
spheres with configuration-space cohomology coefficients, computes Betti\n\
tables by exact rational rank computations, and cross-checks the results\n\
against closed-form alternating-sum series."
)]
struct Cli {
    /// Output format for tabular results
    #[arg(long, global = true, default_value = "json")]
    format: OutputFormatArg,
    /// Cache directory for dimensions and ranks (overrides LINKSHOM_CACHE)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Escalate all rank computations to exact fraction-free elimination
    #[arg(long, global = true)]
    exact: bool,
    /// Seed for multimodular prime selection and randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum OutputFormatArg {
    Json,
    Csv,
    Md,
}

impl From<OutputFormatArg> for OutputFormat {
    fn from(v: OutputFormatArg) -> Self {
        match v {
            OutputFormatArg::Json => OutputFormat::Json,
            OutputFormatArg::Csv => OutputFormat::Csv,
            OutputFormatArg::Md => OutputFormat::Md,
        }
    }
}

#[derive(Subcommand)]
enum CliCommand {
    /// List the admissible monomial basis for a point count and word length
    Basis {
        /// Number of configuration points
        #[arg(long)]
        n: u32,
        /// Word length (number of generators)
        #[arg(long)]
        t: u32,
    },
    /// Dump the simplicial wedge model and its structure tables as JSON
    Model {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Top simplicial level to populate
        #[arg(long)]
        p: u32,
    },
    /// Betti numbers of the link tower per total degree
    Betti(BettiArgs),
    /// Closed-form alternating-sum series of the tower
    Euler {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        /// Number of series coefficients to print
        #[arg(long, default_value_t = 25)]
        terms: u32,
    },
    /// Generating series: closed forms or the Poincare series of a table
    Series {
        /// links | pair | poincare
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 24)]
        order: u32,
        /// Level bound, required for poincare with n >= 2
        #[arg(long)]
        p_max: Option<u32>,
    },
    /// Radius-of-convergence upper bounds for the Poincare series
    Radius {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
    },
    /// Run the invariant suites
    Verify {
        /// arnold | gamma | simplicial | complex | euler | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Restrict to one strand count
        #[arg(long)]
        m: Option<u32>,
        /// Restrict the word-length range
        #[arg(long)]
        t_max: Option<u32>,
    },
}

#[derive(Args)]
struct BettiArgs {
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// Largest total degree to report
    #[arg(long)]
    u_max: u32,
    /// Level bound, required for n >= 2
    #[arg(long)]
    p_max: Option<u32>,
    /// Also emit the knot-convolution retraction report
    #[arg(long)]
    retraction: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match build_command(cli.command) {
        Ok(command) => command,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let spec = JobSpec {
        command,
        format: cli.format.into(),
        cache_dir: cli.cache_dir,
        exact_ranks: cli.exact,
        seed: cli.seed,
    };
    let outcome = job::run(&spec);
    if !outcome.stdout.is_empty() {
        print!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr);
    }
    ExitCode::from(outcome.exit_code.clamp(0, 255) as u8)
}

fn build_command(cli: CliCommand) -> Result<JobCommand, String> {
    Ok(match cli {
        CliCommand::Basis { n, t } => JobCommand::Basis { n, t },
        CliCommand::Model { m, n, p } => JobCommand::Model { m, n, p },
        CliCommand::Betti(args) => JobCommand::Betti {
            m: args.m,
            n: args.n,
            d: args.d,
            u_max: args.u_max,
            p_max: args.p_max,
            retraction: args.retraction,
        },
        CliCommand::Euler { m, d, terms } => JobCommand::Euler { m, d, terms },
        CliCommand::Series { kind, m, n, d, order, p_max } => JobCommand::Series {
            kind: kind.parse::<SeriesKind>()?,
            m,
            n,
            d,
            order,
            p_max,
        },
        CliCommand::Radius { m, d } => JobCommand::Radius { m, d },
        CliCommand::Verify { suite, m, t_max } => JobCommand::Verify {
            suite: suite.parse::<Suite>()?,
            m,
            t_max,
        },
    })
}
