//! Command-line flags, the optional JSON config file, and their merge into a
//! validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gfmatroid::field::prime_power;
use gfmatroid::{FieldSpec, Limits};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "gfmatroid",
    version,
    about = "Codes, represented matroids and frame-graph experiments"
)]
#[command(subcommand_required = true, arg_required_else_help = true)]
pub struct Cli {
    /// JSON file of parameter defaults; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Enumeration budget (vectors); overrides MC_BUDGET.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear code operations.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Represented matroid queries.
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Frame matrices and their graph representations.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// The cover graph of a frame representation.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Minimum distance of random rate-1/2 codes, written as CSV.
    GoodnessScan(ScanArgs),
    /// Rank-deficient sets in random frame matroids, written as CSV.
    FrameGirth(FrameGirthArgs),
    /// Rank deviation and connectivity under random perturbations.
    PerturbDemo(PerturbArgs),
    /// Girth against the degree bound for a graph file.
    MooreCheck(InputArgs),
}

#[derive(Debug, Subcommand)]
pub enum CodeCmd {
    /// Print n, k and the minimum distance.
    Dist(InputArgs),
    /// Delete a coordinate.
    Puncture(MinorArgs),
    /// Contract a coordinate.
    Shorten(MinorArgs),
}

#[derive(Debug, Subcommand)]
pub enum MatroidCmd {
    Info(InputArgs),
    Girth(InputArgs),
    Dual(OutputArgs),
    /// Test vertical t-connectivity, printing a separation when it fails.
    Vconn(VconnArgs),
}

#[derive(Debug, Subcommand)]
pub enum FrameCmd {
    /// Normalize to a frame matrix and print its labelled digraph.
    Repr(GraphOutArgs),
}

#[derive(Debug, Subcommand)]
pub enum CoverCmd {
    Build(GraphOutArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write JSON here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinorArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Element ID.
    #[arg(long, value_name = "ID")]
    pub at: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VconnArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GraphOutArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Write the graph as JSON here.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// P, P^N or a prime power.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FrameGirthArgs {
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Vertices per random graph.
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Arcs per random graph (default 5/2 per vertex).
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(long)]
    pub field: Option<String>,
    /// Ground set size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of elementary steps.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Keys accepted in a `--config` file. Keys a command does not use are
/// ignored; keys not listed here are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    field: Option<FieldValue>,
    alpha: Option<f64>,
    beta: Option<f64>,
    t: Option<usize>,
    k: Option<usize>,
    n: Option<usize>,
    nmax: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    budget: Option<u64>,
    vertices: Option<usize>,
    edges: Option<usize>,
    #[serde(rename = "in")]
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    dot: Option<PathBuf>,
    at: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldValue {
    Order(u64),
    Text(String),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Everything one command needs, after merging flags over the config file.
#[derive(Debug, Default)]
pub struct RunConfig {
    pub field: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub nmax: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub at: Option<String>,
    pub limits: Limits,
}

macro_rules! need {
    ($name:ident, $ty:ty) => {
        pub fn $name(&self) -> Result<$ty, String> {
            self.$name
                .clone()
                .ok_or_else(|| format!("missing --{} (flag or config key)", stringify!($name)))
        }
    };
}

impl RunConfig {
    need!(alpha, f64);
    need!(beta, f64);
    need!(t, usize);
    need!(k, usize);
    need!(n, usize);
    need!(nmax, usize);
    need!(trials, usize);
    need!(seed, u64);
    need!(at, String);

    pub fn input(&self) -> Result<&Path, String> {
        self.input
            .as_deref()
            .ok_or_else(|| "missing --in (flag or config key)".to_string())
    }

    pub fn field(&self) -> Result<FieldSpec, String> {
        parse_field(
            self.field
                .as_deref()
                .ok_or("missing --field (flag or config key)")?,
        )
    }

    /// Merges the command's flags over `file`, flag values winning.
    pub fn merge(cli: &Cli, file: FileConfig) -> Result<RunConfig, String> {
        let mut c = RunConfig {
            field: file.field.map(|f| match f {
                FieldValue::Order(q) => q.to_string(),
                FieldValue::Text(s) => s,
            }),
            alpha: file.alpha,
            beta: file.beta,
            t: file.t,
            k: file.k,
            n: file.n,
            nmax: file.nmax,
            trials: file.trials,
            seed: file.seed,
            vertices: file.vertices,
            edges: file.edges,
            input: file.input,
            out: file.out,
            csv: file.csv,
            dot: file.dot,
            at: file.at,
            limits: Limits::from_env(),
        };
        if let Some(b) = cli.budget.or(file.budget) {
            c.limits.enumeration = b;
        }
        fn set<T>(slot: &mut Option<T>, v: &Option<T>)
        where
            T: Clone,
        {
            if v.is_some() {
                slot.clone_from(v);
            }
        }
        match &cli.command {
            Command::Code(CodeCmd::Dist(a))
            | Command::Matroid(MatroidCmd::Info(a) | MatroidCmd::Girth(a))
            | Command::MooreCheck(a) => set(&mut c.input, &a.input),
            Command::Code(CodeCmd::Puncture(a) | CodeCmd::Shorten(a)) => {
                set(&mut c.input, &a.input);
                set(&mut c.at, &a.at);
                set(&mut c.out, &a.out);
            }
            Command::Matroid(MatroidCmd::Dual(a)) => {
                set(&mut c.input, &a.input);
                set(&mut c.out, &a.out);
            }
            Command::Matroid(MatroidCmd::Vconn(a)) => {
                set(&mut c.input, &a.input);
                set(&mut c.t, &a.t);
            }
            Command::Frame(FrameCmd::Repr(a)) | Command::Cover(CoverCmd::Build(a)) => {
                set(&mut c.input, &a.input);
                set(&mut c.dot, &a.dot);
                set(&mut c.out, &a.out);
            }
            Command::GoodnessScan(a) => {
                set(&mut c.field, &a.field);
                set(&mut c.alpha, &a.alpha);
                set(&mut c.beta, &a.beta);
                set(&mut c.nmax, &a.nmax);
                set(&mut c.trials, &a.trials);
                set(&mut c.seed, &a.seed);
                set(&mut c.csv, &a.csv);
            }
            Command::FrameGirth(a) => {
                set(&mut c.field, &a.field);
                set(&mut c.t, &a.t);
                set(&mut c.beta, &a.beta);
                set(&mut c.vertices, &a.vertices);
                set(&mut c.edges, &a.edges);
                set(&mut c.trials, &a.trials);
                set(&mut c.seed, &a.seed);
                set(&mut c.csv, &a.csv);
            }
            Command::PerturbDemo(a) => {
                set(&mut c.field, &a.field);
                set(&mut c.n, &a.n);
                set(&mut c.k, &a.k);
                set(&mut c.t, &a.t);
                set(&mut c.trials, &a.trials);
                set(&mut c.seed, &a.seed);
            }
        }
        Ok(c)
    }
}

/// `P`, `P^N`, or a prime power `q`.
pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let s = s.trim();
    let (p, n) = match s.split_once('^') {
        Some((p, n)) => {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| format!("--field: bad prime `{p}`"))?;
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| format!("--field: bad exponent `{n}`"))?;
            if prime_power(p) != Some((p, 1)) {
                return Err(format!("--field: {p} is not prime"));
            }
            (p, n)
        }
        None => {
            let q: u64 = s
                .parse()
                .map_err(|_| format!("--field: expected P, P^N or a prime power, got `{s}`"))?;
            prime_power(q).ok_or_else(|| format!("--field: {q} is not a prime power"))?
        }
    };
    FieldSpec::new(p, n, None).map_err(|e| format!("--field: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_forms() {
        let f = parse_field("4").unwrap();
        assert_eq!((f.p(), f.n()), (2, 2));
        let f = parse_field("3^2").unwrap();
        assert_eq!((f.p(), f.n()), (3, 2));
        assert!(parse_field("6").unwrap_err().contains("not a prime power"));
        assert!(parse_field("4^2").unwrap_err().contains("not prime"));
        assert!(parse_field("x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let cli = Cli::try_parse_from(["gfmatroid", "goodness-scan", "--seed", "9"]).unwrap();
        let file: FileConfig =
            serde_json::from_str(r#"{"seed": 1, "trials": 3, "field": 4}"#).unwrap();
        let c = RunConfig::merge(&cli, file).unwrap();
        assert_eq!(c.seed, Some(9));
        assert_eq!(c.trials, Some(3));
        assert_eq!(c.field().unwrap().q(), 4);
        assert!(c.alpha().unwrap_err().contains("--alpha"));
    }

    #[test]
    fn unknown_config_keys_rejected() {
        let r: Result<FileConfig, _> = serde_json::from_str(r#"{"sede": 1}"#);
        assert!(r.unwrap_err().to_string().contains("sede"));
    }

    #[test]
    fn unknown_flags_and_empty_argv_rejected() {
        assert!(Cli::try_parse_from(["gfmatroid"]).is_err());
        let e = Cli::try_parse_from(["gfmatroid", "moore-check", "--bogus"]).unwrap_err();
        assert!(e.to_string().contains("--bogus"));
    }
}
