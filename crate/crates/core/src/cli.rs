//! Command-line front end.
//!
//! Every subcommand writes one CSV table: a `# qdiscord ...` provenance comment, a header
//! row, then data rows with floats in round-trip exact scientific notation. Exit status is
//! 0 on success, 1 for computation and I/O failures, 2 for invalid arguments.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::discord::{q_discord_fast2_with, q_discord_with, DiscordResult, SearchConfig};
use crate::entropy::{QParam, Q_MAX};
use crate::error::{Error, Result};
use crate::experiments::{self, CsvTable, ExperimentKind, ExperimentSpec, ParamGrid};
use crate::linalg::{ComplexMatrix, Subsystem};
use crate::states::{
    alpha_beta_state, alpha_state, bell_diagonal, bell_params_valid, random_mixed, werner,
    DensityMatrix, RngStream,
};

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "qdiscord",
    version,
    about = "Tsallis q-discord of two-qubit states"
)]
pub struct CliConfig {
    /// Print progress information to stderr (repeat for more).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate I_q, C_q and D_q for a single state.
    Compute(ComputeArgs),
    /// Histogram of the conditional-entropy concavity gap over random states.
    Concavity(ConcavityArgs),
    /// D_q and linear entropy along the Werner family.
    WernerSweep(SweepArgs),
    /// D_q and linear entropy along the alpha family.
    AlphaSweep(SweepArgs),
    /// D_q(alpha1) - D_q(alpha2) as a function of q, with sign changes located.
    Ordering(OrderingArgs),
    /// D_1 against D_q over random states.
    Scatter(ScatterArgs),
    /// Differences D(rho) - D(sigma) at q = 1 against q over random pairs.
    DiffScatter(ScatterArgs),
    /// Histogram of D_q over random states.
    Pdf(PdfArgs),
    /// D_1 against D_q over a grid of the (alpha, beta) family.
    AlphabetaScatter(AlphaBetaArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compute(_) => "compute",
            Command::Concavity(_) => "concavity",
            Command::WernerSweep(_) => "werner-sweep",
            Command::AlphaSweep(_) => "alpha-sweep",
            Command::Ordering(_) => "ordering",
            Command::Scatter(_) => "scatter",
            Command::DiffScatter(_) => "diff-scatter",
            Command::Pdf(_) => "pdf",
            Command::AlphabetaScatter(_) => "alphabeta-scatter",
        }
    }
}

/// `--seed` value: a fixed integer (decimal or `0x` hex) or `random`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl SeedArg {
    fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Random => rand::random(),
        }
    }
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "random" {
            return Ok(SeedArg::Random);
        }
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse(),
        };
        parsed
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned integer or `random`, got `{s}`"))
    }
}

fn parse_q(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    QParam::new(v)
        .map(QParam::value)
        .map_err(|_| format!("q must lie in (0, {Q_MAX}], got {s}"))
}

fn parse_unit(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("expected a value in [0, 1], got {s}"))
    }
}

fn parse_signed_unit(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (-1.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("expected a value in [-1, 1], got {s}"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{s}`")),
    }
}

fn parse_at_least_two(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("expected an integer >= 2, got `{s}`")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    pub out: String,

    /// Worker threads (default: one per core). Does not affect output.
    #[arg(long, value_parser = parse_positive)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Coarse grid points in theta.
    #[arg(long, default_value_t = 64, value_parser = parse_at_least_two)]
    pub grid_theta: usize,

    /// Coarse grid points in phi.
    #[arg(long, default_value_t = 128, value_parser = parse_positive)]
    pub grid_phi: usize,

    /// Minimum number of refinement rounds.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=64))]
    pub refine: u8,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            grid_theta: self.grid_theta,
            grid_phi: self.grid_phi,
            refine: self.refine as usize,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// RNG seed (integer or `random`).
    #[arg(long, default_value = "0xD15C04D")]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Args)]
pub struct QArgs {
    /// Entropic index, repeatable or comma-separated.
    #[arg(long = "q", value_delimiter = ',', num_args = 1.., value_parser = parse_q)]
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Werner,
    Bell,
    Alpha,
    Alphabeta,
    Random,
    MatrixFile,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum)]
    pub family: Family,

    /// Werner parameter.
    #[arg(long, value_parser = parse_unit)]
    pub c: Option<f64>,
    /// Bell-diagonal correlation coefficients.
    #[arg(long, value_parser = parse_signed_unit, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, value_parser = parse_signed_unit, allow_hyphen_values = true)]
    pub c2: Option<f64>,
    #[arg(long, value_parser = parse_signed_unit, allow_hyphen_values = true)]
    pub c3: Option<f64>,
    #[arg(long, value_parser = parse_unit)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_signed_unit, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Density-matrix file for `--family matrix-file`.
    #[arg(long)]
    pub file: Option<String>,

    /// Use the q = 2 trace formula for the conditional entropy.
    #[arg(long)]
    pub fast2: bool,

    #[command(flatten)]
    pub q: QArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Conditioning {
    A,
    B,
}

#[derive(Debug, Clone, Args)]
pub struct ConcavityArgs {
    #[arg(long, default_value_t = experiments::DEFAULT_SAMPLES, value_parser = parse_positive)]
    pub samples: usize,
    #[arg(long, default_value_t = experiments::DEFAULT_BINS, value_parser = parse_at_least_two)]
    pub bins: usize,
    /// Subsystem traced out of the conditional entropies is the other one.
    #[arg(long, value_enum, default_value = "a")]
    pub condition_on: Conditioning,
    #[command(flatten)]
    pub q: QArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Grid points over [0, 1].
    #[arg(long, default_value_t = 101, value_parser = parse_at_least_two)]
    pub points: usize,
    #[command(flatten)]
    pub q: QArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OrderingArgs {
    #[arg(long, default_value_t = 0.4, value_parser = parse_unit)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 0.5, value_parser = parse_unit)]
    pub alpha2: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_q)]
    pub qmin: f64,
    #[arg(long, default_value_t = 3.0, value_parser = parse_q)]
    pub qmax: f64,
    #[arg(long, default_value_t = 200, value_parser = parse_positive)]
    pub steps: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[arg(long, default_value_t = experiments::DEFAULT_SAMPLES, value_parser = parse_positive)]
    pub samples: usize,
    #[command(flatten)]
    pub q: QArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PdfArgs {
    #[arg(long, default_value_t = experiments::DEFAULT_SAMPLES, value_parser = parse_positive)]
    pub samples: usize,
    #[arg(long, default_value_t = experiments::DEFAULT_BINS, value_parser = parse_at_least_two)]
    pub bins: usize,
    #[command(flatten)]
    pub q: QArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AlphaBetaArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = 50, value_parser = parse_at_least_two)]
    pub grid: usize,
    #[command(flatten)]
    pub q: QArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs the CLI with the process's stdout and stderr and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// [`run`] with explicit streams; `--out -` writes to `stdout`.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let sub = config.command.name();
    let job = match prepare(&config.command) {
        Ok(job) => job,
        Err(msg) => {
            let _ = writeln!(stderr, "qdiscord {sub}: usage error: {msg}");
            return 2;
        }
    };
    if config.verbose > 0 {
        let _ = writeln!(stderr, "{}", job.provenance);
    }
    let start = std::time::Instant::now();
    let result = job.execute().and_then(|table| {
        if config.verbose > 0 {
            let _ = writeln!(
                stderr,
                "qdiscord {sub}: {} rows in {:.2?}",
                table.rows().len(),
                start.elapsed()
            );
        }
        write_output(&table, &job.provenance, &job.out, stdout)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "qdiscord {sub}: error: {e}");
            1
        }
    }
}

enum Task {
    Compute {
        state: StateSource,
        q: Vec<QParam>,
        fast2: bool,
        search: SearchConfig,
    },
    Experiment(ExperimentSpec),
}

enum StateSource {
    Werner(f64),
    Bell(f64, f64, f64),
    Alpha(f64),
    AlphaBeta(f64, f64),
    Random(u64),
    MatrixFile(String),
}

impl StateSource {
    fn build(&self) -> Result<DensityMatrix> {
        match *self {
            StateSource::Werner(c) => werner(c),
            StateSource::Bell(c1, c2, c3) => bell_diagonal(c1, c2, c3),
            StateSource::Alpha(a) => alpha_state(a),
            StateSource::AlphaBeta(a, b) => alpha_beta_state(a, b),
            StateSource::Random(seed) => Ok(random_mixed(4, &mut RngStream::new(seed, 0))),
            StateSource::MatrixFile(ref path) => read_matrix_file(Path::new(path)),
        }
    }
}

struct Job {
    task: Task,
    provenance: String,
    out: String,
}

impl Job {
    fn execute(&self) -> Result<CsvTable> {
        match &self.task {
            Task::Compute {
                state,
                q,
                fast2,
                search,
            } => {
                let rho = state.build()?;
                let mut table = CsvTable::new(COMPUTE_HEADER);
                for &qv in q {
                    let r = if *fast2 {
                        q_discord_fast2_with(&rho, search)?
                    } else {
                        q_discord_with(&rho, qv, search)?
                    };
                    table.push(compute_row(&r))?;
                }
                Ok(table)
            }
            Task::Experiment(spec) => experiments::run(spec),
        }
    }
}

const COMPUTE_HEADER: [&str; 8] = [
    "q",
    "I_q",
    "C_q",
    "theta_q",
    "D_q",
    "best_theta",
    "best_phi",
    "evals",
];

fn compute_row(r: &DiscordResult) -> Vec<f64> {
    vec![
        r.q.value(),
        r.i_q,
        r.c_q,
        r.theta_raw,
        r.d_q,
        r.best_basis.theta(),
        r.best_basis.phi(),
        r.optimizer_evals as f64,
    ]
}

/// Builder for the provenance comment.
struct Provenance(String);

impl Provenance {
    fn new(sub: &str, seed: u64) -> Self {
        Provenance(format!("# qdiscord {sub} seed={seed}"))
    }

    fn add(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        let _ = write!(self.0, " {key}={value}");
        self
    }

    fn q(self, q: &[QParam]) -> Self {
        let list: Vec<String> = q.iter().map(|v| v.value().to_string()).collect();
        self.add("q", list.join(","))
    }

    fn search(self, s: &SearchConfig) -> Self {
        self.add("grid_theta", s.grid_theta)
            .add("grid_phi", s.grid_phi)
            .add("refine", s.refine)
            .add("min_step", s.min_step)
            .add("max_rounds", s.max_rounds)
    }

    fn finish(self) -> String {
        let version = env!("CARGO_PKG_VERSION");
        self.add("version", version).0
    }
}

fn q_list(q: &QArgs, defaults: &[QParam]) -> Vec<QParam> {
    if q.q.is_empty() {
        defaults.to_vec()
    } else {
        q.q.iter()
            .map(|&v| QParam::new(v).expect("validated by parser"))
            .collect()
    }
}

fn require(v: Option<f64>, flag: &str) -> std::result::Result<f64, String> {
    v.ok_or_else(|| format!("missing --{flag}"))
}

/// Validates cross-flag constraints and resolves defaults without doing any computation.
fn prepare(cmd: &Command) -> std::result::Result<Job, String> {
    let sub = cmd.name();
    match cmd {
        Command::Compute(a) => {
            let seed = a.seed.seed.resolve();
            let default_q = [QParam::new(if a.fast2 { 2.0 } else { 1.0 }).expect("valid")];
            let q = q_list(&a.q, &default_q);
            if a.fast2 && q.iter().any(|v| v.value() != 2.0) {
                return Err("--fast2 requires q = 2".into());
            }
            let mut prov = Provenance::new(sub, seed).add("family", family_name(a.family));
            let state = match a.family {
                Family::Werner => {
                    let c = require(a.c, "c")?;
                    prov = prov.add("c", c);
                    StateSource::Werner(c)
                }
                Family::Bell => {
                    let (c1, c2, c3) = (
                        require(a.c1, "c1")?,
                        require(a.c2, "c2")?,
                        require(a.c3, "c3")?,
                    );
                    if !bell_params_valid(c1, c2, c3) {
                        return Err(format!(
                            "({c1}, {c2}, {c3}) is not a valid Bell-diagonal state"
                        ));
                    }
                    prov = prov.add("c1", c1).add("c2", c2).add("c3", c3);
                    StateSource::Bell(c1, c2, c3)
                }
                Family::Alpha => {
                    let alpha = require(a.alpha, "alpha")?;
                    prov = prov.add("alpha", alpha);
                    StateSource::Alpha(alpha)
                }
                Family::Alphabeta => {
                    let (alpha, beta) = (require(a.alpha, "alpha")?, require(a.beta, "beta")?);
                    if beta.abs() > 1.0 - alpha {
                        return Err(format!(
                            "need |beta| <= 1 - alpha, got alpha={alpha} beta={beta}"
                        ));
                    }
                    prov = prov.add("alpha", alpha).add("beta", beta);
                    StateSource::AlphaBeta(alpha, beta)
                }
                Family::Random => StateSource::Random(seed),
                Family::MatrixFile => {
                    let file = a.file.clone().ok_or("missing --file")?;
                    prov = prov.add("file", &file);
                    StateSource::MatrixFile(file)
                }
            };
            let search = a.search.config();
            let prov = prov.q(&q).add("fast2", a.fast2).search(&search).finish();
            Ok(Job {
                task: Task::Compute {
                    state,
                    q,
                    fast2: a.fast2,
                    search,
                },
                provenance: prov,
                out: a.output.out.clone(),
            })
        }
        Command::Concavity(a) => {
            let mut spec = base_spec(ExperimentKind::ConcavityPdf, &a.q, &a.seed, &a.output);
            spec.samples = a.samples;
            spec.bins = a.bins;
            spec.conditioning = match a.condition_on {
                Conditioning::A => Subsystem::A,
                Conditioning::B => Subsystem::B,
            };
            let prov = Provenance::new(sub, spec.seed)
                .q(&spec.q_values)
                .add("samples", spec.samples)
                .add("bins", spec.bins)
                .add(
                    "condition_on",
                    if spec.conditioning == Subsystem::A {
                        "a"
                    } else {
                        "b"
                    },
                )
                .finish();
            experiment_job(spec, prov, &a.output)
        }
        Command::WernerSweep(a) | Command::AlphaSweep(a) => {
            let kind = if matches!(cmd, Command::WernerSweep(_)) {
                ExperimentKind::WernerSweep
            } else {
                ExperimentKind::AlphaSweep
            };
            let spec = base_spec(kind, &a.q, &a.seed, &a.output)
                .with_grid(ParamGrid::Linear { points: a.points });
            let prov = Provenance::new(sub, spec.seed)
                .q(&spec.q_values)
                .add("points", a.points)
                .finish();
            experiment_job(spec, prov, &a.output)
        }
        Command::Ordering(a) => {
            if a.qmax <= a.qmin {
                return Err(format!("need qmin < qmax, got {} and {}", a.qmin, a.qmax));
            }
            let spec = base_spec(
                ExperimentKind::OrderingScan,
                &QArgs { q: vec![] },
                &a.seed,
                &a.output,
            )
            .with_grid(ParamGrid::Ordering {
                alpha1: a.alpha1,
                alpha2: a.alpha2,
                q_min: a.qmin,
                q_max: a.qmax,
                steps: a.steps,
            });
            let prov = Provenance::new(sub, spec.seed)
                .add("alpha1", a.alpha1)
                .add("alpha2", a.alpha2)
                .add("qmin", a.qmin)
                .add("qmax", a.qmax)
                .add("steps", a.steps)
                .finish();
            experiment_job(spec, prov, &a.output)
        }
        Command::Scatter(a) | Command::DiffScatter(a) => {
            let kind = if matches!(cmd, Command::Scatter(_)) {
                ExperimentKind::RandomScatter
            } else {
                ExperimentKind::DiffScatter
            };
            let mut spec = base_spec(kind, &a.q, &a.seed, &a.output).with_samples(a.samples);
            spec.search = a.search.config();
            let prov = Provenance::new(sub, spec.seed)
                .q(&spec.q_values)
                .add("samples", spec.samples)
                .search(&spec.search)
                .finish();
            experiment_job(spec, prov, &a.output)
        }
        Command::Pdf(a) => {
            let mut spec = base_spec(ExperimentKind::DiscordPdf, &a.q, &a.seed, &a.output)
                .with_samples(a.samples)
                .with_bins(a.bins);
            spec.search = a.search.config();
            let prov = Provenance::new(sub, spec.seed)
                .q(&spec.q_values)
                .add("samples", spec.samples)
                .add("bins", spec.bins)
                .search(&spec.search)
                .finish();
            experiment_job(spec, prov, &a.output)
        }
        Command::AlphabetaScatter(a) => {
            let mut spec = base_spec(ExperimentKind::AlphaBetaScatter, &a.q, &a.seed, &a.output)
                .with_grid(ParamGrid::Rect {
                    n_alpha: a.grid,
                    n_beta: a.grid,
                });
            spec.search = a.search.config();
            let prov = Provenance::new(sub, spec.seed)
                .q(&spec.q_values)
                .add("grid", a.grid)
                .search(&spec.search)
                .finish();
            experiment_job(spec, prov, &a.output)
        }
    }
}

fn base_spec(kind: ExperimentKind, q: &QArgs, seed: &SeedArgs, out: &OutputArgs) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(kind)
        .with_seed(seed.seed.resolve())
        .with_threads(out.threads);
    spec.q_values = q_list(q, &spec.q_values);
    spec
}

fn experiment_job(
    spec: ExperimentSpec,
    provenance: String,
    out: &OutputArgs,
) -> std::result::Result<Job, String> {
    spec.validate().map_err(|e| e.to_string())?;
    Ok(Job {
        task: Task::Experiment(spec),
        provenance,
        out: out.out.clone(),
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Werner => "werner",
        Family::Bell => "bell",
        Family::Alpha => "alpha",
        Family::Alphabeta => "alphabeta",
        Family::Random => "random",
        Family::MatrixFile => "matrix-file",
    }
}

/// Renders `table` as CSV text: provenance line, header, then rows with 17 significant
/// digits per value.
pub fn render_csv(table: &CsvTable, provenance: &str) -> String {
    let mut s = String::new();
    s.push_str(provenance);
    s.push('\n');
    s.push_str(&table.header().join(","));
    s.push('\n');
    for row in table.rows() {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    }
    s
}

/// Writes `table` to `out` in the format of [`render_csv`].
pub fn emit_csv(table: &CsvTable, provenance: &str, out: &mut dyn Write) -> Result<()> {
    out.write_all(render_csv(table, provenance).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn write_output(
    table: &CsvTable,
    provenance: &str,
    dest: &str,
    stdout: &mut dyn Write,
) -> Result<()> {
    if dest == "-" {
        emit_csv(table, provenance, stdout)
    } else {
        let file = File::create(dest).map_err(|e| Error::Io(format!("{dest}: {e}")))?;
        emit_csv(table, provenance, &mut BufWriter::new(file))
    }
}

/// Parses a density matrix from text: a `dim=4` line followed by four rows of four
/// whitespace-separated complex entries such as `0.25`, `-0.1+0.2i` or `1e-3i`. Blank lines
/// and lines starting with `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<DensityMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dim: usize = first
        .strip_prefix("dim=")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `dim=4`, got `{first}`")))?;
    if dim != 4 {
        return Err(Error::Parse(format!(
            "only dim=4 is supported, got dim={dim}"
        )));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (r, line) in lines.by_ref().take(dim).enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != dim {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {dim}",
                r + 1,
                entries.len()
            )));
        }
        for e in entries {
            let z = Complex64::from_str(e)
                .map_err(|_| Error::Parse(format!("bad complex entry `{e}`")))?;
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(format!("matrix entry `{e}`")));
            }
            data.push(z);
        }
    }
    if data.len() != dim * dim {
        return Err(Error::Parse(format!(
            "expected {dim} rows, got {}",
            data.len() / dim
        )));
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line `{extra}`")));
    }
    DensityMatrix::two_qubit(ComplexMatrix::new(dim, data)?)
}

pub fn read_matrix_file(path: &Path) -> Result<DensityMatrix> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}
