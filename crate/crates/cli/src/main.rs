use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use rankagg::experiments::{run_decisiveness, run_fairness, DecisivenessConfig, FairnessConfig};
use rankagg::io::{self, FORMAT_VERSION};
use rankagg::ip::{build_model, export_model, RowKind};
use rankagg::measures::PairStats;
use rankagg::sampling::{generate_instance, sample_rankings, Generator, MallowsParams, ScenarioSpec, SizeDist};
use rankagg::{solve, BnbOptions, Coefficient, Instance, Measure, MeasureConfig, Ranking};

#[derive(Parser, Debug)]
#[command(name = "rankagg", about = "Compare and aggregate rankings with ties and unranked objects")]
struct Cli {
    /// Seed for randomized commands; one is generated and reported when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress warnings and informational messages.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare two rankings: two files with one row each, or one file with two rows.
    Compare {
        #[arg(long)]
        measure: Measure,
        #[arg(long, default_value_t = 4.0)]
        gamma: f64,
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
    },
    /// Find every consensus ranking of a set of judges.
    Aggregate {
        #[arg(long)]
        measure: Coefficient,
        #[command(flatten)]
        limits: Limits,
        /// File whose single row is the start solution.
        #[arg(long)]
        start: Option<PathBuf>,
        file: PathBuf,
    },
    /// Draw rankings from a Mallows model.
    Sample {
        #[arg(long, default_value = "rim")]
        generator: Generator,
        #[arg(long)]
        phi: f64,
        /// Reference ranking as comma-separated positions.
        #[arg(long, conflicts_with = "n")]
        r#ref: Option<String>,
        /// Object count for an identity reference.
        #[arg(long)]
        n: Option<usize>,
        /// Subset size distribution `l:u` for rime1/rime2.
        #[arg(long)]
        subset_size: Option<SizeDist>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance from a scenario JSON file.
    GenInstance {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the integer programming model of an instance in LP format.
    ExportIp {
        #[arg(long)]
        measure: Coefficient,
        #[arg(long)]
        out: PathBuf,
        file: PathBuf,
    },
    /// Run a simulation study.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
}

#[derive(Args, Debug)]
struct Limits {
    #[arg(long)]
    node_limit: Option<u64>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Config JSON; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report CSV; printed to stdout when omitted and --json is off.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON manifest (config and rows).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ExperimentKind {
    /// Average number of optimal consensus rankings per measure across dispersion levels.
    Decisiveness(ExperimentArgs),
    /// Similarity of consensus rankings to the ground truth under a minority group.
    Fairness(ExperimentArgs),
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
    Limit,
}

type Outcome = std::result::Result<(), Failure>;

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<rankagg::Error> for Failure {
    fn from(e: rankagg::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx {
    seed: Option<u64>,
    json: bool,
    quiet: bool,
}

impl Ctx {
    fn warn(&self, msg: &str) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }

    /// The explicit seed, or a fresh one reported on stderr.
    fn seed_or_generate(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let s: u64 = rand::random();
            if !self.quiet {
                eprintln!("seed={s}");
            }
            s
        })
    }
}

fn version() -> String {
    format!(
        "{} (rankings format v{FORMAT_VERSION}, instance format v{FORMAT_VERSION}, report format v{FORMAT_VERSION})",
        env!("CARGO_PKG_VERSION")
    )
}

/// Writes to stdout, exiting quietly when the reader has gone away.
fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

fn main() -> ExitCode {
    let version: &'static str = Box::leak(version().into_boxed_str());
    let cmd = Cli::command().version(version);
    let cli = match cmd.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Ctx { seed: cli.seed, json: cli.json, quiet: cli.quiet };
    let outcome = match cli.command {
        Command::Compare { measure, gamma, files } => compare(&ctx, measure, gamma, &files),
        Command::Aggregate { measure, limits, start, file } => aggregate(&ctx, measure, &limits, start.as_deref(), &file),
        Command::Sample { generator, phi, r#ref, n, subset_size, count, out } => {
            sample(&ctx, generator, phi, r#ref.as_deref(), n, subset_size, count, out.as_deref())
        }
        Command::GenInstance { spec, out } => gen_instance(&ctx, &spec, out.as_deref()),
        Command::ExportIp { measure, out, file } => export_ip(&ctx, measure, &out, &file),
        Command::Experiment { kind } => experiment(&ctx, kind),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{}", Cli::command().render_usage());
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Limit) => ExitCode::from(3),
    }
}

fn print_json<T: Serialize>(value: &T) {
    outln!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn read_rankings(path: &Path) -> Result<Vec<Ranking>, Failure> {
    io::read_rankings(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Data)
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    io::read_instance(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Data)
}

#[derive(Serialize)]
struct CompareRecord {
    measure: Measure,
    value: f64,
    n: usize,
    n_bar: usize,
    inner_product: i64,
}

fn compare(ctx: &Ctx, measure: Measure, gamma: f64, files: &[PathBuf]) -> Outcome {
    let cfg = MeasureConfig::new(gamma).map_err(|e| usage(e.to_string()))?;
    let (a, b) = match files {
        [one] => {
            let rows = read_rankings(one)?;
            match <[Ranking; 2]>::try_from(rows) {
                Ok([a, b]) => (a, b),
                Err(rows) => {
                    return Err(Failure::Data(anyhow!("{} must hold exactly two rows, found {}", one.display(), rows.len())))
                }
            }
        }
        [first, second] => {
            let pick = |p: &Path| -> Result<Ranking, Failure> {
                let rows = read_rankings(p)?;
                match <[Ranking; 1]>::try_from(rows) {
                    Ok([r]) => Ok(r),
                    Err(rows) => Err(Failure::Data(anyhow!("{} must hold exactly one row, found {}", p.display(), rows.len()))),
                }
            };
            (pick(first)?, pick(second)?)
        }
        _ => return Err(usage("compare takes one or two files")),
    };
    let value = measure.evaluate(&a, &b, &cfg)?;
    if ctx.json {
        let stats = PairStats::new(&a, &b)?;
        print_json(&CompareRecord { measure, value, n: stats.n, n_bar: stats.n_bar, inner_product: stats.inner_product });
    } else {
        outln!("{value}");
    }
    Ok(())
}

fn solver_options(limits: &Limits) -> Result<BnbOptions, Failure> {
    let time_limit = match limits.time_limit {
        None => None,
        Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(usage(format!("--time-limit {t} must be a positive number of seconds"))),
    };
    if limits.node_limit == Some(0) {
        return Err(usage("--node-limit must be positive"));
    }
    Ok(BnbOptions { start_solution: None, node_limit: limits.node_limit, time_limit })
}

#[derive(Serialize)]
struct AggregateRecord {
    measure: Coefficient,
    rankings: Vec<Ranking>,
    objective: f64,
    penalty: f64,
    nodes_explored: u64,
    proven_complete: bool,
    skipped_judges: usize,
}

fn aggregate(ctx: &Ctx, measure: Coefficient, limits: &Limits, start: Option<&Path>, file: &Path) -> Outcome {
    let mut opts = solver_options(limits)?;
    let inst = read_instance(file)?;
    if let Some(p) = start {
        let rows = read_rankings(p)?;
        let [s] = <[Ranking; 1]>::try_from(rows)
            .map_err(|_| Failure::Data(anyhow!("{} must hold exactly one row", p.display())))?;
        opts.start_solution = Some(s);
    }
    let set = solve(&inst, measure, &opts)?;
    if set.skipped_judges > 0 {
        ctx.warn(&format!("{} judge(s) rank fewer than two objects and were excluded", set.skipped_judges));
    }
    if !set.proven_complete {
        ctx.warn("search limit reached; the rankings are the best found, not proven optimal");
    }
    if ctx.json {
        print_json(&AggregateRecord {
            measure,
            rankings: set.rankings.clone(),
            objective: set.objective,
            penalty: set.penalty,
            nodes_explored: set.nodes_explored,
            proven_complete: set.proven_complete,
            skipped_judges: set.skipped_judges,
        });
    } else {
        for r in &set.rankings {
            outln!("{r}");
        }
        outln!("# objective={}", set.objective);
        outln!("# nodes={}", set.nodes_explored);
        outln!("# proven_complete={}", set.proven_complete);
    }
    if set.proven_complete {
        Ok(())
    } else {
        Err(Failure::Limit)
    }
}

fn parse_reference(text: &str) -> Result<Ranking, Failure> {
    let positions = text
        .split(',')
        .map(|c| c.trim().parse::<i64>().map(Some))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("--ref {text:?} must be comma-separated integers")))?;
    Ranking::new(positions).map_err(|e| usage(format!("--ref: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn sample(
    ctx: &Ctx,
    generator: Generator,
    phi: f64,
    reference: Option<&str>,
    n: Option<usize>,
    sizes: Option<SizeDist>,
    count: usize,
    out: Option<&Path>,
) -> Outcome {
    let reference = match (reference, n) {
        (Some(r), _) => parse_reference(r)?,
        (None, Some(n)) if n >= 1 => Ranking::identity(n),
        _ => return Err(usage("give either --ref or a positive --n")),
    };
    let params = MallowsParams::new(reference, phi).map_err(|e| usage(e.to_string()))?;
    if generator == Generator::Rim && sizes.is_some() {
        return Err(usage("--subset-size applies to rime1 and rime2 only"));
    }
    if let Some(d) = &sizes {
        d.check(params.len()).map_err(|e| usage(e.to_string()))?;
    }
    let seed = ctx.seed_or_generate();
    let rows = sample_rankings(generator, &params, sizes.as_ref(), count, seed)?;
    if ctx.json {
        let meta = serde_json::json!({
            "generator": generator,
            "phi": phi,
            "reference": params.reference(),
            "subset_size": sizes,
            "seed": seed,
        });
        let inst = Instance::new(params.len(), rows.clone())?.with_metadata(meta);
        match out {
            Some(p) => fs::write(p, io::instance_to_json(&inst)).map_err(anyhow::Error::from)?,
            None => outln!("{}", io::instance_to_json(&inst)),
        }
    } else {
        match out {
            Some(p) => io::write_csv(p, &rows)?,
            None => out!("{}", io::to_csv(&rows)),
        }
    }
    Ok(())
}

/// Reads a JSON object, filling `key` from --seed (or a generated seed) when
/// the flag is given or the key is missing.
fn json_with_seed(ctx: &Ctx, path: &Path, key: &str) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let obj = value.as_object_mut().ok_or_else(|| Failure::Data(anyhow!("{} must hold a JSON object", path.display())))?;
    if ctx.seed.is_some() || !obj.contains_key(key) {
        obj.insert(key.to_string(), Value::from(ctx.seed_or_generate()));
    }
    Ok(value)
}

fn gen_instance(ctx: &Ctx, spec_path: &Path, out: Option<&Path>) -> Outcome {
    let value = json_with_seed(ctx, spec_path, "seed")?;
    let spec: ScenarioSpec =
        serde_json::from_value(value).with_context(|| format!("invalid scenario in {}", spec_path.display()))?;
    spec.validate().map_err(|e| Failure::Data(anyhow!("invalid scenario: {e}")))?;
    let inst = generate_instance(&spec)?;
    let text = io::instance_to_json(&inst);
    match out {
        Some(p) => fs::write(p, text).map_err(anyhow::Error::from)?,
        None => outln!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct ExportRecord {
    path: String,
    n: usize,
    r_variables: usize,
    y_variables: usize,
    transitivity_rows: usize,
    no_double_negative_rows: usize,
    parity_rows: usize,
}

fn export_ip(ctx: &Ctx, measure: Coefficient, out: &Path, file: &Path) -> Outcome {
    let inst = read_instance(file)?;
    let model = build_model(&inst, measure)?;
    export_model(&model, out).with_context(|| format!("writing {}", out.display()))?;
    let rec = ExportRecord {
        path: out.display().to_string(),
        n: model.size(),
        r_variables: model.r_variables().len(),
        y_variables: model.y_variables().len(),
        transitivity_rows: model.row_count(RowKind::Transitivity),
        no_double_negative_rows: model.row_count(RowKind::NoDoubleNegative),
        parity_rows: model.row_count(RowKind::Parity),
    };
    if ctx.json {
        print_json(&rec);
    } else if !ctx.quiet {
        eprintln!(
            "wrote {}: {} r, {} y variables; {} transitivity, {} no-double-negative, {} parity rows",
            rec.path, rec.r_variables, rec.y_variables, rec.transitivity_rows, rec.no_double_negative_rows, rec.parity_rows
        );
    }
    Ok(())
}

fn load_config<T: serde::de::DeserializeOwned + Serialize + Default>(ctx: &Ctx, path: Option<&Path>) -> Result<T, Failure> {
    let value = match path {
        Some(p) => json_with_seed(ctx, p, "base_seed")?,
        None => {
            let mut v = serde_json::to_value(T::default()).expect("config serializes");
            v["base_seed"] = Value::from(ctx.seed_or_generate());
            v
        }
    };
    serde_json::from_value(value).map_err(|e| Failure::Data(anyhow!("invalid experiment config: {e}")))
}

fn emit_report(ctx: &Ctx, args: &ExperimentArgs, csv: String, json: String) -> Outcome {
    if let Some(p) = &args.manifest {
        fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
    }
    match &args.out {
        Some(p) => fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None if !ctx.json => out!("{csv}"),
        None => {}
    }
    if ctx.json {
        outln!("{json}");
    }
    Ok(())
}

fn experiment(ctx: &Ctx, kind: ExperimentKind) -> Outcome {
    match kind {
        ExperimentKind::Decisiveness(args) => {
            let cfg: DecisivenessConfig = load_config(ctx, args.config.as_deref())?;
            let report = run_decisiveness(&cfg)?;
            emit_report(ctx, &args, report.to_csv()?, report.to_json())
        }
        ExperimentKind::Fairness(args) => {
            let cfg: FairnessConfig = load_config(ctx, args.config.as_deref())?;
            let report = run_fairness(&cfg)?;
            emit_report(ctx, &args, report.to_csv()?, report.to_json())
        }
    }
}
