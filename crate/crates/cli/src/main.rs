use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubecolor::oracle::OracleMode;
use cubecolor::Mode;
use cubecolor_cli::{run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "cubecolor", version, about = "Certificates for colorings of lattice cubes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Validate a coloring and report monochromatic components.
    Check,
    /// Run the descent and emit a verified certificate.
    Certify,
    /// Fill a cubical cocycle.
    Fill,
    /// Exhaustive or random study of small grids.
    Oracle,
    /// Emit a random valid coloring.
    Gen,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaceMode {
    Simplicial,
    Cubical,
}

impl From<FaceMode> for Mode {
    fn from(m: FaceMode) -> Mode {
        match m {
            FaceMode::Simplicial => Mode::Simplicial,
            FaceMode::Cubical => Mode::Cubical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Faces that carry the color constraint.
    #[arg(long, global = true, value_enum, default_value = "simplicial")]
    mode: FaceMode,
    /// Adjacency for monochromatic components.
    #[arg(long, global = true, value_enum, default_value = "simplicial")]
    adjacency: FaceMode,
    #[arg(long, global = true, value_enum, default_value = "exhaustive")]
    search: Search,
    /// Colorings drawn in random search.
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Descent trace path (certify).
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// CSV row path (oracle).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Recolor every monochromatic component before certifying.
    #[arg(long, global = true)]
    split_components: bool,
    /// Keep the support of every A(v) in the certificate.
    #[arg(long, global = true)]
    audit: bool,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::Certify => Command::Certify,
        Cmd::Fill => Command::Fill,
        Cmd::Oracle => Command::Oracle,
        Cmd::Gen => Command::Gen,
    };
    let o = cli.opts;
    let cfg = RunConfig {
        command,
        input: o.input,
        output: o.output,
        trace: o.trace,
        csv: o.csv,
        d: o.d,
        n: o.n,
        m: o.m,
        mode: o.mode.into(),
        adjacency: o.adjacency.into(),
        search: match o.search {
            Search::Exhaustive => OracleMode::Exhaustive,
            Search::Random => OracleMode::Random,
        },
        samples: o.samples,
        seed: o.seed,
        split_components: o.split_components,
        audit: o.audit,
        verbose: o.verbose,
    };
    let code = run(&cfg, &mut std::io::stderr());
    ExitCode::from(code as u8)
}
