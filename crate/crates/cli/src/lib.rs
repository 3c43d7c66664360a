//! Batch front end: validate colorings, run the certificate pipeline, fill
//! cocycles, run the brute-force oracle and generate random colorings.
//!
//! [`execute`] does the work and returns the report text; [`run`] also
//! writes it to disk and maps failures to exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cubecolor::balancing::LevelTrace;
use cubecolor::coloring::{validate, Mode, ViolatingFace, Violation};
use cubecolor::format::{self, AnyCochain, CertificateRepr, FillRepr};
use cubecolor::oracle::{self, component_stats, OracleMode, OracleReport};
use cubecolor::{endgame, fill, lower_bound, split_components, verify_certificate, BalanceState, GridSpec};
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = "cubecolor";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest region the `fill` command accepts.
pub const FILL_VERTEX_LIMIT: usize = 1 << 20;

pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const INVARIANT: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const SIZE_GUARD: i32 = 4;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Certify,
    Fill,
    Oracle,
    Gen,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Certify => "certify",
            Command::Fill => "fill",
            Command::Oracle => "oracle",
            Command::Gen => "gen",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub d: Option<usize>,
    pub n: Option<u32>,
    pub m: Option<usize>,
    pub mode: Mode,
    pub adjacency: Mode,
    pub search: OracleMode,
    pub samples: usize,
    pub seed: u64,
    pub split_components: bool,
    pub audit: bool,
    pub verbose: u8,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            trace: None,
            csv: None,
            d: None,
            n: None,
            m: None,
            mode: Mode::Simplicial,
            adjacency: Mode::Simplicial,
            search: OracleMode::Exhaustive,
            samples: 1000,
            seed: 0,
            split_components: false,
            audit: false,
            verbose: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cubecolor::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cubecolor::Error as E;
        match self {
            CliError::Io { .. } | CliError::Usage(_) => exit::PARSE,
            CliError::Core(e) => match e {
                E::InvalidColoring(_) => exit::VIOLATION,
                E::Parse(_) | E::InvalidSpec(_) => exit::PARSE,
                E::SizeGuard { .. } => exit::SIZE_GUARD,
                _ => exit::INVARIANT,
            },
        }
    }
}

/// What a command produced: the main report, optional side outputs and the
/// exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    pub trace: Option<String>,
    pub csv: Option<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn mode_name(m: Mode) -> String {
    m.to_string()
}

/// Header shared by every report.
fn header(cfg: &RunConfig, spec: Option<&GridSpec>) -> Value {
    let search = match cfg.search {
        OracleMode::Exhaustive => "exhaustive",
        OracleMode::Random => "random",
    };
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": cfg.command.name(),
        "spec": spec,
        "flags": {
            "mode": mode_name(cfg.mode),
            "adjacency": mode_name(cfg.adjacency),
            "split_components": cfg.split_components,
            "search": search,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "audit": cfg.audit,
        },
    })
}

fn with_header(cfg: &RunConfig, spec: Option<&GridSpec>, body: Value) -> Value {
    let mut out = header(cfg, spec);
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn spec_from_flags(cfg: &RunConfig) -> Result<GridSpec, CliError> {
    match (cfg.d, cfg.n, cfg.m) {
        (Some(d), Some(n), Some(m)) => Ok(GridSpec::new(d, n, m)?),
        _ => Err(CliError::Usage(format!(
            "{} needs --d, --n and --m",
            cfg.command.name()
        ))),
    }
}

fn check_overrides(cfg: &RunConfig, spec: &GridSpec) -> Result<(), CliError> {
    let clash = cfg.d.is_some_and(|d| d != spec.d)
        || cfg.n.is_some_and(|n| n != spec.n)
        || cfg.m.is_some_and(|m| m != spec.m);
    if clash {
        return Err(CliError::Usage(format!(
            "flags disagree with the input header d={} n={} m={}",
            spec.d, spec.n, spec.m
        )));
    }
    Ok(())
}

fn input(cfg: &RunConfig) -> Result<String, CliError> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} needs --input", cfg.command.name())))?;
    read(path)
}

fn load_coloring(cfg: &RunConfig) -> Result<cubecolor::Coloring, CliError> {
    let c = format::parse_coloring(&input(cfg)?)?;
    check_overrides(cfg, c.spec())?;
    Ok(c)
}

fn violation_json(v: &Violation) -> Value {
    let face = match &v.face {
        ViolatingFace::Simplex(vs) => json!({ "vertices": vs }),
        ViolatingFace::Cube { anchor, free } => {
            json!({ "anchor": anchor, "free": free.iter().map(|a| a + 1).collect::<Vec<_>>() })
        }
    };
    json!({ "face": face, "colors": v.colors, "message": v.to_string() })
}

/// Runs one command without touching the output paths.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Check => check(cfg),
        Command::Certify => certify(cfg),
        Command::Fill => fill_cmd(cfg),
        Command::Oracle => oracle_cmd(cfg),
        Command::Gen => gen(cfg),
    }
}

fn check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = load_coloring(cfg)?;
    let verdict = validate(&c, cfg.mode);
    let components = component_stats(&c, cfg.adjacency).ok();
    let body = json!({
        "valid": verdict.is_ok(),
        "violation": verdict.as_ref().err().map(violation_json),
        "palette_size": c.palette().len(),
        "max_usage": c.max_usage(),
        "components": components,
    });
    Ok(Outcome {
        code: if verdict.is_ok() { exit::OK } else { exit::VIOLATION },
        report: to_json(&with_header(cfg, Some(c.spec()), body)),
        trace: None,
        csv: None,
    })
}

fn certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let original = load_coloring(cfg)?;
    let spec = *original.spec();
    let c = if cfg.split_components {
        split_components(&original, cfg.adjacency)?
    } else {
        original.clone()
    };
    let ground = BalanceState::init(c.clone(), cfg.mode)?.descend_to_ground()?;
    let cert = endgame(&ground)?;
    let verified = verify_certificate(&spec, &c, &ground, &cert);
    let largest = if cfg.split_components {
        Some(component_stats(&original, cfg.adjacency)?.largest)
    } else {
        None
    };
    let body = json!({
        "verified": verified,
        "lower_bound": lower_bound(&cert),
        "largest_component": largest,
        "max_multiplicity": ground.trace().iter().map(|l| l.max_multiplicity).max().unwrap_or(0),
        "certificate": CertificateRepr::new(&cert, cfg.audit),
    });
    let trace = json!({ "levels": ground.trace() as &[LevelTrace] });
    Ok(Outcome {
        code: if verified { exit::OK } else { exit::INVARIANT },
        report: to_json(&with_header(cfg, Some(&spec), body)),
        trace: Some(to_json(&with_header(cfg, Some(&spec), trace))),
        csv: None,
    })
}

fn fill_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let parsed = format::parse_cochain(&input(cfg)?)?;
    let AnyCochain::Cubical(alpha) = parsed.cochain else {
        return Err(CliError::Usage("fill expects a cochain on cube faces".into()));
    };
    let (region, spec) = match parsed.region {
        Some(r) => (r, None),
        None => {
            let spec = spec_from_flags(cfg)?;
            (spec.cube(), Some(spec))
        }
    };
    let vertices = region
        .lo()
        .iter()
        .zip(region.hi())
        .try_fold(1usize, |acc, (l, h)| acc.checked_mul((h - l) as usize + 1))
        .unwrap_or(usize::MAX);
    if vertices > FILL_VERTEX_LIMIT {
        return Err(cubecolor::Error::SizeGuard {
            vertices,
            limit: FILL_VERTEX_LIMIT,
        }
        .into());
    }
    if let Some(f) = alpha.cells().find(|f| !region.contains_face(f)) {
        return Err(CliError::Usage(format!("{f:?} lies outside the region")));
    }
    let res = fill(&alpha, &region)?;
    let body = json!({
        "region": { "lo": region.lo(), "hi": region.hi() },
        "alpha_norm": alpha.norm(),
        "result": FillRepr::from(&res),
    });
    Ok(Outcome {
        code: exit::OK,
        report: to_json(&with_header(cfg, spec.as_ref(), body)),
        trace: None,
        csv: None,
    })
}

fn oracle_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = spec_from_flags(cfg)?;
    let report: OracleReport = match cfg.search {
        OracleMode::Exhaustive => oracle::exhaustive_report(&spec, cfg.adjacency)?,
        OracleMode::Random => oracle::random_report(&spec, cfg.samples, cfg.seed, cfg.adjacency)?,
    };
    let body = json!({ "report": report });
    Ok(Outcome {
        code: exit::OK,
        report: to_json(&with_header(cfg, Some(&spec), body)),
        trace: None,
        csv: Some(format!("{}\n{}\n", OracleReport::CSV_HEADER, report.csv_row())),
    })
}

fn gen(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = spec_from_flags(cfg)?;
    let c = oracle::random_valid(&spec, cfg.seed);
    let mut report = format::coloring_json(&c);
    report.push('\n');
    Ok(Outcome {
        code: exit::OK,
        report,
        trace: None,
        csv: None,
    })
}

/// Runs a command, writes its outputs and returns the process exit code.
/// Errors go to `stderr`.
pub fn run(cfg: &RunConfig, stderr: &mut dyn Write) -> i32 {
    let outcome = execute(cfg).and_then(|o| {
        match &cfg.output {
            Some(p) => write(p, &o.report)?,
            None => print!("{}", o.report),
        }
        if let (Some(p), Some(t)) = (&cfg.trace, &o.trace) {
            write(p, t)?;
        }
        if let (Some(p), Some(c)) = (&cfg.csv, &o.csv) {
            write(p, c)?;
        }
        Ok(o.code)
    });
    match outcome {
        Ok(code) => {
            if cfg.verbose > 0 {
                let _ = writeln!(stderr, "{}: exit {code}", cfg.command.name());
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
