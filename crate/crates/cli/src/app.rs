//! Argument parsing and the subcommand adapters.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qwalk::analysis::{
    self, average_conditioned, ballistic_fit, civilization_recurrence, conditioned_variance_series,
    joint_variance_series, mode_similarity, monitored_recurrence_single, position_similarity,
    walker_variance_series, AveragingKind, AveragingScheme, RecurrenceSeries,
};
use qwalk::emulator::{reconstruct_conditioned, EmulatorConfig};
use qwalk::two_photon::{
    conditioned_distribution, conditioned_survivor, ConditioningSpec, Convention,
};
use qwalk::{walk, CoinSpec, Mode, ModeDistribution, WalkerState};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::clicks;
use crate::error::CliError;
use crate::format::{distribution_table, read_distributions, Cell, Format, Table};
use crate::manifest::{manifest_path, RunManifest};
use crate::parallel::simulate_runs_parallel;

/// Directory for result files when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "QWALK_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Two-photon quantum walks with heralded loss"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-walker distribution after a number of steps.
    Walk(WalkArgs),
    /// Distribution of the surviving photon after one photon was lost.
    Condition(ConditionArgs),
    /// Mixture of conditioned distributions over loss steps and modes.
    Average(AverageArgs),
    /// Spatial variance against step, with an optional log-log fit.
    Variance(VarianceArgs),
    /// Return probability of a monitored single walker.
    Recurrence(RecurrenceArgs),
    /// Return probability of the second photon after the first returned.
    Civilization(CivilizationArgs),
    /// Monte-Carlo click stream of the loop experiment.
    Emulate(EmulateArgs),
    /// Conditioned distribution from a click stream by coincidence selection.
    Reconstruct(ReconstructArgs),
    /// Similarity of two distribution files.
    Similarity(SimilarityArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Walk(_) => "walk",
            Command::Condition(_) => "condition",
            Command::Average(_) => "average",
            Command::Variance(_) => "variance",
            Command::Recurrence(_) => "recurrence",
            Command::Civilization(_) => "civilization",
            Command::Emulate(_) => "emulate",
            Command::Reconstruct(_) => "reconstruct",
            Command::Similarity(_) => "similarity",
        }
    }
}

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_opt<T: fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct OutputArgs {
    /// Result file [default: <command>.<ext> in $QWALK_OUTPUT_DIR or the
    /// working directory]
    #[arg(long, short)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum InitState {
    Basis(Mode),
    Symmetric,
}

impl InitState {
    fn state(self) -> WalkerState {
        match self {
            InitState::Basis(m) => WalkerState::basis(m),
            InitState::Symmetric => WalkerState::symmetric_origin(),
        }
    }
}

impl FromStr for InitState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "symmetric" {
            return Ok(InitState::Symmetric);
        }
        s.parse()
            .map(InitState::Basis)
            .map_err(|_| format!("expected `symmetric` or a mode like `0,H`, got `{s}`"))
    }
}

impl fmt::Display for InitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitState::Basis(m) => write!(f, "{},{}", m.x, m.coin),
            InitState::Symmetric => f.write_str("symmetric"),
        }
    }
}

/// `a..b` (inclusive) or a comma-separated list.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct StepList(Vec<usize>);

impl FromStr for StepList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected `a..b` or a comma-separated list of steps, got `{s}`");
        if let Some((a, b)) = s.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            return Ok(StepList((a..=b).collect()));
        }
        s.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()
            .map(StepList)
    }
}

/// Inclusive window `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Window {
    start: usize,
    end: usize,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected a window `a..b`, got `{s}`");
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        Ok(Window {
            start: a.trim().parse().map_err(|_| bad())?,
            end: b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConventionArg {
    /// Doubly occupied mode enters with its bare amplitude.
    Paper,
    /// Bosonic annihilation operator (Born-rule weights).
    Annihilation,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::PaperProjector,
            ConventionArg::Annihilation => Convention::Annihilation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SchemeArg {
    Uniform,
    Born,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CompareArg {
    /// Single walker from |0>(|H> + i|V>)/√2.
    SymmetricSingle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VarianceKind {
    Single,
    Joint,
    Conditioned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ClickFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SimilarityBasis {
    Mode,
    Position,
}

#[derive(Debug, Args, Serialize)]
struct WalkArgs {
    #[arg(long)]
    steps: usize,
    /// `x,H`, `x,V` or `symmetric`
    #[arg(long, default_value = "0,H", allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    init: InitState,
    /// Coin angle in degrees
    #[arg(long, default_value_t = 45.0)]
    angle: f64,
    /// Emit every step from 0 up to --steps
    #[arg(long)]
    per_step: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct ConditionArgs {
    #[arg(long)]
    loss_step: usize,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    loss_mode: Mode,
    #[arg(long)]
    out_step: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
    convention: ConventionArg,
    #[arg(long, default_value_t = 45.0)]
    angle: f64,
    /// Emit every step from --loss-step up to --out-step
    #[arg(long)]
    per_step: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct AverageArgs {
    /// `a..b` (inclusive) or `1,3,5`
    #[arg(long)]
    loss_steps: StepList,
    #[arg(long)]
    out_step: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::Uniform)]
    scheme: SchemeArg,
    /// Loss modes with weight at or below this are skipped
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
    convention: ConventionArg,
    #[arg(long, value_enum)]
    compare: Option<CompareArg>,
    #[arg(long, default_value_t = 45.0)]
    angle: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct VarianceArgs {
    #[arg(long, value_enum, default_value_t = VarianceKind::Single)]
    kind: VarianceKind,
    /// Last step of the series
    #[arg(long)]
    steps: usize,
    /// Initial state of the single walker
    #[arg(long, default_value = "symmetric", allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    init: InitState,
    #[arg(long, required_if_eq("kind", "conditioned"))]
    loss_step: Option<usize>,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_if_eq("kind", "conditioned")
    )]
    #[serde(serialize_with = "display_opt")]
    loss_mode: Option<Mode>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
    convention: ConventionArg,
    /// Fit window `a..b` for the log-log slope
    #[arg(long)]
    fit: Option<Window>,
    #[arg(long, default_value_t = 45.0)]
    angle: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct RecurrenceArgs {
    #[arg(long)]
    horizon: usize,
    #[arg(long, default_value = "0,H", allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    init: InitState,
    #[arg(long, default_value_t = 45.0)]
    angle: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct CivilizationArgs {
    #[arg(long)]
    horizon: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
    convention: ConventionArg,
    #[arg(long, default_value_t = 45.0)]
    angle: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct EmulateArgs {
    #[arg(long, default_value_t = 100_000)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    max_step: usize,
    #[arg(long, default_value_t = 0.15)]
    outcoupling: f64,
    #[arg(long, default_value_t = 0.80)]
    efficiency: f64,
    #[arg(long, default_value_t = 70.0)]
    dead_time: f64,
    #[arg(long, default_value_t = 0.20)]
    klyshko: f64,
    #[arg(long, default_value_t = 0.1)]
    pair_prob: f64,
    #[arg(long, default_value_t = 1e4)]
    rep_rate: f64,
    #[arg(long, default_value_t = 5322.7)]
    roundtrip: f64,
    #[arg(long, default_value_t = 171.6)]
    bin_separation: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Annihilation)]
    convention: ConventionArg,
    /// Click stream file [default: emulate.<ext> in $QWALK_OUTPUT_DIR or the
    /// working directory]
    #[arg(long, short)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ClickFormat::Csv)]
    format: ClickFormat,
}

impl EmulateArgs {
    fn config(&self) -> EmulatorConfig {
        EmulatorConfig {
            roundtrip_ns: self.roundtrip,
            bin_separation_ns: self.bin_separation,
            outcoupling_prob: self.outcoupling,
            detector_efficiency: self.efficiency,
            dead_time_ns: self.dead_time,
            setup_klyshko: self.klyshko,
            pair_generation_prob: self.pair_prob,
            repetition_rate_hz: self.rep_rate,
            max_step: self.max_step,
            runs: self.runs,
            rng_seed: self.seed,
            convention: self.convention.into(),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct ReconstructArgs {
    /// Click stream, CSV or binary
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    loss_step: usize,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    loss_mode: Mode,
    #[arg(long)]
    out_step: usize,
    /// Convention of the reference distribution in the report
    #[arg(long, value_enum, default_value_t = ConventionArg::Annihilation)]
    convention: ConventionArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct SimilarityArgs {
    /// First distribution file
    #[arg(long)]
    a: PathBuf,
    /// Second distribution file
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value_t = SimilarityBasis::Mode)]
    by: SimilarityBasis,
    /// Step to compare when a file holds several [default: last]
    #[arg(long)]
    step: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, argv: &[OsString]) -> Result<(), CliError> {
    let name = command.name();
    let params = match &command {
        Command::Walk(a) => serde_json::to_value(a)?,
        Command::Condition(a) => serde_json::to_value(a)?,
        Command::Average(a) => serde_json::to_value(a)?,
        Command::Variance(a) => serde_json::to_value(a)?,
        Command::Recurrence(a) => serde_json::to_value(a)?,
        Command::Civilization(a) => serde_json::to_value(a)?,
        Command::Emulate(a) => serde_json::to_value(a)?,
        Command::Reconstruct(a) => serde_json::to_value(a)?,
        Command::Similarity(a) => serde_json::to_value(a)?,
    };
    let seed = match &command {
        Command::Emulate(a) => Some(a.seed),
        _ => None,
    };
    let mut manifest = RunManifest::new(name, argv, params, seed);
    let output = match command {
        Command::Walk(a) => walk_cmd(a, &mut manifest)?,
        Command::Condition(a) => condition_cmd(a, &mut manifest)?,
        Command::Average(a) => average_cmd(a, &mut manifest)?,
        Command::Variance(a) => variance_cmd(a, &mut manifest)?,
        Command::Recurrence(a) => recurrence_cmd(a, &mut manifest)?,
        Command::Civilization(a) => civilization_cmd(a, &mut manifest)?,
        Command::Emulate(a) => emulate_cmd(a, &mut manifest)?,
        Command::Reconstruct(a) => reconstruct_cmd(a, &mut manifest)?,
        Command::Similarity(a) => similarity_cmd(a, &mut manifest)?,
    };
    manifest.save(&manifest_path(&output))?;
    println!("wrote {}", output.display());
    if let Value::Object(report) = &manifest.report {
        for (k, v) in report {
            println!("{k}: {v}");
        }
    }
    Ok(())
}

fn output_path(explicit: &Option<PathBuf>, command: &str, ext: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_default();
        dir.join(format!("{command}.{ext}"))
    })
}

fn write_table(
    manifest: &mut RunManifest,
    out: &OutputArgs,
    key: &str,
    table: &Table,
) -> Result<PathBuf, CliError> {
    let path = output_path(&out.output, &manifest.command, out.format.extension());
    let bytes = table.render(key, out.format, &manifest.meta())?;
    manifest.write_output(&path, &bytes)?;
    Ok(path)
}

fn write_distributions(
    manifest: &mut RunManifest,
    out: &OutputArgs,
    dists: &[ModeDistribution],
) -> Result<PathBuf, CliError> {
    write_table(manifest, out, "distribution", &distribution_table(dists))
}

fn walk_cmd(a: WalkArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let coin = CoinSpec::Constant(a.angle);
    let mut state = a.init.state();
    let mut dists = Vec::new();
    for step in 0..=a.steps {
        if a.per_step || step == a.steps {
            dists.push(walk::mode_distribution(&state));
        }
        if step < a.steps {
            state = walk::evolve(&state, 1, &coin);
        }
    }
    write_distributions(manifest, &a.out, &dists)
}

fn condition_cmd(a: ConditionArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let coin = CoinSpec::Constant(a.angle);
    let spec = ConditioningSpec::new(a.loss_step, a.loss_mode, a.convention.into())?;
    let dists = if a.per_step {
        if a.out_step < a.loss_step {
            return Err(qwalk::Error::InvalidLossStep {
                loss_step: a.loss_step,
                out_step: a.out_step,
            }
            .into());
        }
        let outcome = conditioned_survivor(&spec, a.loss_step, &coin)?;
        manifest.report("weight", json!(outcome.weight));
        let mut state = outcome.survivor;
        let mut dists = vec![walk::mode_distribution(&state)];
        for _ in a.loss_step..a.out_step {
            state = walk::evolve(&state, 1, &coin);
            dists.push(walk::mode_distribution(&state));
        }
        dists
    } else {
        let (dist, weight) = conditioned_distribution(&spec, a.out_step, &coin)?;
        manifest.report("weight", json!(weight));
        vec![dist]
    };
    write_distributions(manifest, &a.out, &dists)
}

fn average_cmd(a: AverageArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let coin = CoinSpec::Constant(a.angle);
    let scheme = AveragingScheme {
        kind: match a.scheme {
            SchemeArg::Uniform => AveragingKind::UniformOverModes,
            SchemeArg::Born => AveragingKind::BornWeighted,
        },
        epsilon: a.epsilon,
    };
    let avg = average_conditioned(
        &a.loss_steps.0,
        a.out_step,
        &scheme,
        a.convention.into(),
        &coin,
    )?;
    if let Some(CompareArg::SymmetricSingle) = a.compare {
        let single = walk::evolve(&WalkerState::symmetric_origin(), a.out_step, &coin);
        let reference = walk::mode_distribution(&single);
        manifest.report("similarity_mode", json!(mode_similarity(&avg, &reference)?));
        manifest.report(
            "similarity_position",
            json!(position_similarity(
                &avg.positions(),
                &reference.positions()
            )?),
        );
    }
    write_distributions(manifest, &a.out, &[avg])
}

fn variance_cmd(a: VarianceArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let coin = CoinSpec::Constant(a.angle);
    let series = match a.kind {
        VarianceKind::Single => walker_variance_series(&a.init.state(), a.steps, &coin),
        VarianceKind::Joint => joint_variance_series(a.steps, &coin),
        VarianceKind::Conditioned => {
            let (Some(step), Some(mode)) = (a.loss_step, a.loss_mode) else {
                return Err(CliError::Usage(
                    "--kind conditioned needs --loss-step and --loss-mode".into(),
                ));
            };
            let spec = ConditioningSpec::new(step, mode, a.convention.into())?;
            conditioned_variance_series(&spec, a.steps, &coin)?
        }
    };
    if let Some(w) = a.fit {
        manifest.report("slope", json!(ballistic_fit(&series, w.start..=w.end)?));
    }
    let mut table = Table::new(&["step", "variance"]);
    for (t, v) in series {
        table.push(vec![Cell::Int(t as i64), Cell::Float(v)]);
    }
    write_table(manifest, &a.out, "series", &table)
}

fn recurrence_table(series: &RecurrenceSeries) -> Table {
    let mut table = Table::new(&["T", "probability"]);
    for (i, &r) in series.values().iter().enumerate() {
        table.push(vec![Cell::Int(i as i64 + 1), Cell::Float(r)]);
    }
    table
}

fn recurrence_cmd(a: RecurrenceArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let series =
        monitored_recurrence_single(&a.init.state(), a.horizon, &CoinSpec::Constant(a.angle));
    if let Some(&last) = series.values().last() {
        manifest.report("final", json!(last));
    }
    write_table(manifest, &a.out, "series", &recurrence_table(&series))
}

fn civilization_cmd(a: CivilizationArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let series =
        civilization_recurrence(a.horizon, a.convention.into(), &CoinSpec::Constant(a.angle))?;
    manifest.report("monotone", json!(series.is_monotone()));
    write_table(manifest, &a.out, "series", &recurrence_table(&series))
}

fn emulate_cmd(a: EmulateArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let sim = simulate_runs_parallel(a.config())?;
    let mut bytes = Vec::new();
    let ext = match a.format {
        ClickFormat::Csv => {
            clicks::write_csv(&mut bytes, &sim.clicks)?;
            "csv"
        }
        ClickFormat::Binary => {
            clicks::write_binary(&mut bytes, &sim.clicks)?;
            "bin"
        }
    };
    let path = output_path(&a.output, "emulate", ext);
    manifest.write_output(&path, &bytes)?;
    manifest.report("clicks", json!(sim.clicks.len()));
    manifest.report("dead_time_same_bin", json!(sim.dead_time.same_bin));
    manifest.report("dead_time_cross_bin", json!(sim.dead_time.cross_bin));
    Ok(path)
}

fn read_clicks(path: &Path) -> Result<Vec<qwalk::emulator::ClickEvent>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::file(path, e))?;
    let mut events = if bytes.starts_with(b"run_id") {
        clicks::read_csv(bytes.as_slice())?
    } else {
        clicks::read_binary(bytes.as_slice())?
    };
    events.sort_by(|a, b| {
        (a.run_id, a.time_ns)
            .partial_cmp(&(b.run_id, b.time_ns))
            .unwrap()
    });
    Ok(events)
}

fn reconstruct_cmd(a: ReconstructArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let events = read_clicks(&a.input)?;
    let rec = reconstruct_conditioned(&events, a.loss_step, a.loss_mode, a.out_step)?;
    manifest.report("total", json!(rec.total));
    manifest.report(
        "counts",
        Value::Object(
            rec.counts
                .iter()
                .map(|(m, c)| (m.to_string(), json!(c)))
                .collect(),
        ),
    );
    let spec = ConditioningSpec::new(a.loss_step, a.loss_mode, a.convention.into())?;
    if let Ok((theory, _)) = conditioned_distribution(&spec, a.out_step, &CoinSpec::hadamard()) {
        manifest.report(
            "similarity_to_conditioned",
            json!(mode_similarity(&rec.distribution, &theory)?),
        );
    }
    write_distributions(manifest, &a.out, &[rec.distribution])
}

fn pick_step(path: &Path, step: Option<usize>) -> Result<ModeDistribution, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::file(path, e))?;
    let dists = read_distributions(&bytes)?;
    let found = match step {
        Some(s) => dists.into_iter().find(|d| d.step() == s),
        None => dists.into_iter().last(),
    };
    found.ok_or_else(|| {
        CliError::Data(format!(
            "{}: no distribution for the requested step",
            path.display()
        ))
    })
}

fn similarity_cmd(a: SimilarityArgs, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
    let p = pick_step(&a.a, a.step)?;
    let q = pick_step(&a.b, a.step)?;
    let s = match a.by {
        SimilarityBasis::Mode => analysis::mode_similarity(&p, &q)?,
        SimilarityBasis::Position => analysis::position_similarity(&p.positions(), &q.positions())?,
    };
    manifest.report("similarity", json!(s));
    let mut table = Table::new(&["metric", "value"]);
    table.push(vec![Cell::Text("similarity".into()), Cell::Float(s)]);
    write_table(manifest, &a.out, "similarity", &table)
}
