use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bcc_core::circuit::{Basis, Scheme};
use bcc_core::code::{BccSpec, Distance};
use bcc_core::report::{cyclic_cluster_report, rotated_toric_report, CodeReport, FamilyReport, SearchReport};
use bcc_core::search::{run_search, SearchTask};
use bcc_core::stabsim::{sweep, Experiment, NoiseModel, Sweep};
use bcc_core::BccError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "bcc", version, about = "Bipartite cyclic cluster codes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Worker threads for search and simulate (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the code of an offset set and report its generators and logicals.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        /// Largest logical weight enumerated; the distance is skipped when 0.
        #[arg(long)]
        w_max: Option<usize>,
    },
    /// Exact distance, or "> w_max".
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        w_max: Option<usize>,
    },
    /// Construct a member of a known family and verify its claimed properties.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        #[arg(short = 'd')]
        d: usize,
    },
    /// Exhaustive search over offset sets of a given size.
    Search {
        #[arg(short = 'n')]
        n: usize,
        /// Offset set size |S|.
        #[arg(short = 'k', long = "size")]
        size: usize,
        /// Minimum distance of reported codes.
        #[arg(short = 'd', long = "target-d")]
        target_d: usize,
        /// Enumerate every subset instead of one per symmetry class.
        #[arg(long)]
        no_reduce: bool,
        #[arg(long)]
        w_cap: Option<usize>,
    },
    /// Monte Carlo sweep of the two-block Bell experiment.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    RotatedToric,
    CyclicCluster,
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[arg(short = 'n', requires = "offsets", conflicts_with = "spec")]
    n: Option<usize>,
    /// Comma-separated odd offsets; negative values are reduced mod n.
    #[arg(short = 'S', value_delimiter = ',', allow_hyphen_values = true, requires = "n")]
    offsets: Vec<i64>,
    /// TOML file with fields `n` and `S`.
    #[arg(long)]
    spec: Option<PathBuf>,
}

impl CodeArgs {
    fn load(&self) -> anyhow::Result<BccSpec> {
        match (&self.spec, self.n) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(toml::from_str(&text).map_err(|e| BccError::InvalidSpec(e.message().to_string()))?)
            }
            (None, Some(n)) => Ok(BccSpec::new(n, &self.offsets)?),
            (None, None) => Err(BccError::InvalidSpec("give -n and -S, or --spec".into()).into()),
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// none, per-block, shared, entangled or entangled:STEP.
    #[arg(long, default_value = "shared")]
    scheme: String,
    #[arg(long, value_enum, default_value_t = BasisArg::Both)]
    basis: BasisArg,
    /// Comma-separated physical error rates.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Shots per point: one value for all points, or one per point.
    #[arg(long, value_delimiter = ',', default_value = "100000")]
    shots: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Points with fewer logical failures are left out of the fit.
    #[arg(long, default_value_t = 10)]
    min_failures: u64,
    /// Decoder weight bound (default d - 1).
    #[arg(long)]
    w_max: Option<usize>,
    /// Directory for the sweep CSV files.
    #[arg(long, env = "BCC_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    X,
    Z,
    Both,
}

#[derive(Debug, Serialize, Deserialize)]
struct DistanceReport {
    n: usize,
    #[serde(rename = "S")]
    offsets: Vec<usize>,
    w_max: usize,
    d: Distance,
}

#[derive(Debug, Serialize, Deserialize)]
struct SimulateReport {
    n: usize,
    #[serde(rename = "S")]
    offsets: Vec<usize>,
    seed: u64,
    sweeps: Vec<SweepOutput>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SweepOutput {
    basis: Basis,
    scheme: Scheme,
    file: PathBuf,
    sweep: Sweep,
}

/// A report failed one of its claimed properties.
#[derive(Debug)]
struct ClaimFailed;

impl std::fmt::Display for ClaimFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for ClaimFailed {}

fn emit<T: Serialize + std::fmt::Display>(format: Format, value: &T) -> anyhow::Result<()> {
    match format {
        Format::Human => print!("{value}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
    }
    Ok(())
}

fn default_w_max(spec: &BccSpec) -> usize {
    spec.degree() + 1
}

fn cmd_family(format: Format, name: FamilyName, d: usize) -> anyhow::Result<()> {
    let report: FamilyReport = match name {
        FamilyName::RotatedToric => rotated_toric_report(d)?,
        FamilyName::CyclicCluster => cyclic_cluster_report(d)?,
    };
    emit(format, &report)?;
    if !report.passed() {
        return Err(ClaimFailed.into());
    }
    Ok(())
}

fn cmd_simulate(format: Format, args: &SimulateArgs) -> anyhow::Result<()> {
    let spec = args.code.load()?;
    let scheme: Scheme = args.scheme.parse()?;
    if let Some(&p) = args.p.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
        return Err(BccError::InvalidSpec(format!("p = {p} is outside (0, 1]; the log-log fit needs p > 0")).into());
    }
    let shots: Vec<u64> = match args.shots.len() {
        1 => vec![args.shots[0]; args.p.len()],
        k if k == args.p.len() => args.shots.clone(),
        k => {
            return Err(BccError::InvalidSpec(format!("{k} shot counts for {} error rates", args.p.len())).into());
        }
    };
    if shots.contains(&0) {
        return Err(BccError::InvalidSpec("shot counts must be positive".into()).into());
    }
    let points: Vec<(f64, u64)> = args.p.iter().copied().zip(shots).collect();
    let bases = match args.basis {
        BasisArg::X => vec![Basis::X],
        BasisArg::Z => vec![Basis::Z],
        BasisArg::Both => vec![Basis::Z, Basis::X],
    };
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut sweeps = Vec::new();
    for basis in bases {
        let experiment = match args.w_max {
            Some(w) => Experiment::with_w_max(&spec, scheme, basis, w)?,
            None => Experiment::new(&spec, scheme, basis)?,
        };
        let result = sweep(
            &experiment,
            &NoiseModel::depolarizing(1.0),
            &points,
            args.seed,
            args.min_failures,
        )?;
        for r in result.records.iter().filter(|r| r.accepted == 0) {
            eprintln!("warning: no shot accepted at p = {} ({basis} basis)", r.p);
        }
        let file = sweep_path(&args.out, &spec, scheme, basis, args.seed);
        std::fs::write(&file, result.to_csv()).with_context(|| format!("writing {}", file.display()))?;
        sweeps.push(SweepOutput {
            basis,
            scheme,
            file,
            sweep: result,
        });
    }
    let report = SimulateReport {
        n: spec.n(),
        offsets: spec.offsets().to_vec(),
        seed: args.seed,
        sweeps,
    };
    emit(format, &report)
}

fn sweep_path(dir: &Path, spec: &BccSpec, scheme: Scheme, basis: Basis, seed: u64) -> PathBuf {
    let s: Vec<String> = spec.offsets().iter().map(|o| o.to_string()).collect();
    let scheme = scheme.to_string().replace(':', "-");
    dir.join(format!(
        "sweep_n{}_S{}_{scheme}_{basis}_seed{seed}.csv",
        spec.n(),
        s.join("-")
    ))
}

impl std::fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}", self.d)
    }
}

impl std::fmt::Display for SimulateReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n={} S={:?} seed={}", self.n, self.offsets, self.seed)?;
        for s in &self.sweeps {
            writeln!(f, "{} basis, scheme {} -> {}", s.basis, s.scheme, s.file.display())?;
            writeln!(
                f,
                "  {:>10} {:>10} {:>10} {:>8} {:>11}  95% interval",
                "p", "shots", "accepted", "fails", "rate"
            )?;
            for r in &s.sweep.records {
                let rate = r.rate.map_or("-".to_string(), |v| format!("{v:.3e}"));
                writeln!(
                    f,
                    "  {:>10.3e} {:>10} {:>10} {:>8} {:>11}  [{:.2e}, {:.2e}]",
                    r.p, r.shots, r.accepted, r.failures, rate, r.ci_low, r.ci_high
                )?;
            }
            match s.sweep.exponent {
                Some(e) => writeln!(f, "  exponent: {e:.3}")?,
                None => writeln!(
                    f,
                    "  exponent: not enough points with {} failures",
                    s.sweep.min_failures
                )?,
            }
        }
        Ok(())
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(BccError::InvalidSpec("--jobs must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let format = cli.format;
    match cli.command {
        Command::Build { code, w_max } => {
            let spec = code.load()?;
            let w = w_max.unwrap_or_else(|| default_w_max(&spec));
            emit(format, &CodeReport::new(&spec, (w > 0).then_some(w)))
        }
        Command::Distance { code, w_max } => {
            let spec = code.load()?;
            let w_max = w_max.unwrap_or_else(|| default_w_max(&spec));
            let d = bcc_core::code::CssCode::from_offsets(&spec).distance(w_max);
            emit(
                format,
                &DistanceReport {
                    n: spec.n(),
                    offsets: spec.offsets().to_vec(),
                    w_max,
                    d,
                },
            )
        }
        Command::Family { name, d } => cmd_family(format, name, d),
        Command::Search {
            n,
            size,
            target_d,
            no_reduce,
            w_cap,
        } => {
            let mut task = SearchTask::new(n, size, target_d);
            task.symmetry_reduce = !no_reduce;
            if let Some(w) = w_cap {
                task.w_cap = w;
            }
            let hits = run_search(&task)?;
            emit(format, &SearchReport { task, hits })
        }
        Command::Simulate(args) => cmd_simulate(format, &args),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ClaimFailed>().is_some() {
        return 2;
    }
    match err.downcast_ref::<BccError>() {
        Some(BccError::Verification(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<ClaimFailed>().is_none() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
