//! The `fastcons` command: argument grammar, config merging and the
//! subcommands. Human-readable summaries go to the supplied writer, CSV files
//! to `--out`.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use fastcons_core::finite_time::{deadbeat_schedule, final_consensus_state, product_annihilation, propagation_bound};
use fastcons_core::precise::{annihilation_multiprecision, simulate_deadbeat_extended};
use fastcons_core::rate::{
    consensus_check, convergence_rate, optimal_gains_general, optimal_gains_order2, rate_lower_bound, GainScaling,
    InitBox, OptimizerOptions,
};
use fastcons_core::sim::{error_series, simulate_constant, simulate_scheduled, uniform_initial_state, Trajectory};
use fastcons_core::spectrum::{eigenratio, spectrum_default};
use fastcons_core::{Error, GainVector, Graph, Spectrum, SystemConfig};

use crate::config::{read_config, to_args, ConfigError};
use crate::export;
use crate::harness::{optimize_parallel, ratio_row, standard_graphs, table1_rows, GraphError, GraphSpec, SMALL_WORLD_RATIO};

/// Design and verify fast-consensus controllers for high-order multi-agent
/// systems.
#[derive(Debug, Parser)]
#[command(name = "fastcons", version, args_override_self = true)]
pub struct Cli {
    /// Sampling period.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub tau: f64,
    /// Agent order n.
    #[arg(short = 'n', long = "order", global = true, default_value_t = 3)]
    pub order: usize,
    /// Seed for restarts and initial states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for CSV output.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file pre-filling flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplacian eigenvalues, λ₂, λ_N and the distinct nonzero eigenvalues.
    Spectrum(GraphArgs),
    /// Convergence rate of given constant gains.
    Rate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Gains K₁,…,K_n.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        gains: Vec<f64>,
    },
    /// Multi-start gradient descent on the convergence rate.
    Optimize {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Closed-form gains attaining the rate lower bound.
    OptimalGains(GraphArgs),
    /// Deadbeat gain schedule reaching consensus in n·l̄ steps.
    FiniteTime {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        init: InitArgs,
        /// Steps simulated past the consensus step.
        #[arg(long, default_value_t = 20)]
        extra_steps: usize,
        #[arg(long, value_enum, default_value_t = Precision::Extended)]
        precision: Precision,
    },
    /// Constant-gain trajectory and its fitted decay slope.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        init: InitArgs,
        /// Gains K₁,…,K_n; the closed-form optimal gains when omitted.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "optimize")]
        gains: Option<Vec<f64>>,
        /// Use the gradient-descent optimum instead.
        #[arg(long)]
        optimize: bool,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// First step of the slope window (default steps/5).
        #[arg(long)]
        window_start: Option<usize>,
        /// Last step of the slope window (default 4·steps/5).
        #[arg(long)]
        window_end: Option<usize>,
    },
    /// Lower bound and optimized rate on the reference graphs.
    Table1 {
        #[command(flatten)]
        opt: OptimizerArgs,
        /// Additional edge-list graphs.
        #[arg(long = "extra", value_name = "FILE")]
        extra: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct GraphArgs {
    #[arg(long, value_name = "N")]
    pub cycle: Option<usize>,
    #[arg(long, value_name = "N")]
    pub path: Option<usize>,
    /// Star on N nodes.
    #[arg(long, value_name = "N")]
    pub star: Option<usize>,
    #[arg(long, value_name = "N")]
    pub complete: Option<usize>,
    /// Complete bipartite graph with parts of size A and B.
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    pub bipartite: Option<(usize, usize)>,
    /// Edge-list file.
    #[arg(short = 'g', long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
}

impl GraphArgs {
    pub fn spec(&self) -> GraphSpec {
        match self {
            GraphArgs { cycle: Some(n), .. } => GraphSpec::Cycle(*n),
            GraphArgs { path: Some(n), .. } => GraphSpec::Path(*n),
            GraphArgs { star: Some(n), .. } => GraphSpec::Star(*n),
            GraphArgs { complete: Some(n), .. } => GraphSpec::Complete(*n),
            GraphArgs { bipartite: Some((a, b)), .. } => GraphSpec::Bipartite(*a, *b),
            GraphArgs { graph: Some(p), .. } => GraphSpec::File(p.clone()),
            _ => unreachable!("clap requires one graph source"),
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((num(a)?, num(b)?))
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// Iterations T per restart.
    #[arg(long, default_value_t = 5000)]
    pub iterations: usize,
    /// Step size η.
    #[arg(long, default_value_t = 0.01)]
    pub eta: f64,
    /// Forward-difference increment δ.
    #[arg(long, default_value_t = 1e-6)]
    pub delta: f64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value_t = Scaling::Bound)]
    pub scaling: Scaling,
    /// Draw restarts from the deadbeat box instead of the coordinate box.
    #[arg(long)]
    pub deadbeat_init: bool,
}

impl OptimizerArgs {
    pub fn options(&self, seed: u64) -> OptimizerOptions {
        OptimizerOptions {
            iterations: self.iterations,
            learning_rate: self.eta,
            delta: self.delta,
            restarts: self.restarts,
            seed,
            init: if self.deadbeat_init { InitBox::Deadbeat } else { InitBox::Default },
            scaling: match self.scaling {
                Scaling::Raw => GainScaling::Raw,
                Scaling::Deadbeat => GainScaling::Deadbeat,
                Scaling::Bound => GainScaling::BoundNormalized,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    Raw,
    Deadbeat,
    Bound,
}

#[derive(Debug, Clone, Args)]
pub struct InitArgs {
    /// Initial states are uniform in [−R, R].
    #[arg(long, value_name = "R")]
    pub init_range: Option<f64>,
    /// Seed of the initial state (defaults to --seed).
    #[arg(long)]
    pub init_seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    /// Double-double states, gains and eigenvalues.
    Extended,
    Double,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("writing {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for numerical nonconvergence, 1 for output failures.
    pub fn exit_code(&self) -> u8 {
        let core = |e: &Error| if matches!(e, Error::NonConvergence { .. }) { 3 } else { 2 };
        match self {
            CliError::Clap(e) => e.exit_code() as u8,
            CliError::Graph(GraphError::Core(e)) | CliError::Core(e) => core(e),
            CliError::Graph(GraphError::Parse(_)) | CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Output { .. } | CliError::Io(_) => 1,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Parses `args` (program name first), merging a `--config` file if given.
pub fn parse_args(args: Vec<OsString>) -> CliResult<Cli> {
    let Some(path) = config_path(&args) else {
        return Ok(Cli::try_parse_from(args)?);
    };
    let mut pairs = read_config(&path)?;
    if user_names_graph(&args) {
        pairs.retain(|(k, _)| !GRAPH_KEYS.contains(&k.as_str()));
    }
    let Some(at) = subcommand_index(&args) else {
        return Ok(Cli::try_parse_from(args)?);
    };
    let mut merged = args[..=at].to_vec();
    merged.extend(to_args(&pairs).into_iter().map(OsString::from));
    merged.extend(args[at + 1..].iter().cloned());
    Ok(Cli::try_parse_from(merged)?)
}

/// The last `--config` value, found before clap runs so the file can supply
/// required flags.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut found = None;
    let mut it = args.iter().skip(1).filter_map(|a| a.to_str());
    while let Some(a) = it.next() {
        if a == "--config" {
            found = it.next().map(PathBuf::from);
        } else if let Some(v) = a.strip_prefix("--config=") {
            found = Some(PathBuf::from(v));
        }
    }
    found
}

const GRAPH_KEYS: [&str; 6] = ["cycle", "path", "star", "complete", "bipartite", "graph"];

fn user_names_graph(args: &[OsString]) -> bool {
    args.iter().filter_map(|a| a.to_str()).any(|a| {
        a == "-g" || GRAPH_KEYS.iter().any(|k| a.strip_prefix("--").is_some_and(|f| f.split('=').next() == Some(k)))
    })
}

/// Position of the subcommand token: only global options may precede it.
fn subcommand_index(args: &[OsString]) -> Option<usize> {
    const WITH_VALUE: [&str; 6] = ["--tau", "-n", "--order", "--seed", "--out", "--config"];
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_str()?;
        if WITH_VALUE.contains(&a) {
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let cli = parse_args(args.into_iter().map(Into::into).collect())?;
    let cfg = SystemConfig::new(cli.order, cli.tau)?;
    let sink = Sink { dir: cli.out.clone() };
    match &cli.command {
        Command::Spectrum(g) => cmd_spectrum(g, &sink, out),
        Command::Rate { graph, gains } => cmd_rate(graph, &cfg, gains, &sink, out),
        Command::Optimize { graph, opt } => cmd_optimize(graph, &cfg, &opt.options(cli.seed), &sink, out),
        Command::OptimalGains(g) => cmd_optimal_gains(g, &cfg, &sink, out),
        Command::FiniteTime {
            graph,
            init,
            extra_steps,
            precision,
        } => {
            let x0 = InitState::new(init, 5.0, cli.seed);
            cmd_finite_time(graph, &cfg, x0, *extra_steps, *precision, &sink, out)
        }
        Command::Simulate {
            graph,
            init,
            gains,
            optimize,
            opt,
            steps,
            window_start,
            window_end,
        } => {
            let source = match (gains, optimize) {
                (Some(k), _) => GainSource::Given(k.clone()),
                (None, true) => GainSource::Optimized(opt.options(cli.seed)),
                (None, false) => GainSource::ClosedForm,
            };
            let window = (window_start.unwrap_or(steps / 5), window_end.unwrap_or(steps * 4 / 5));
            let x0 = InitState::new(init, 1.0, cli.seed);
            cmd_simulate(graph, &cfg, source, x0, *steps, window, &sink, out)
        }
        Command::Table1 { opt, extra } => cmd_table1(&cfg, &opt.options(cli.seed), extra, &sink, out),
    }
}

/// Optional CSV output directory.
struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn write(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> CliResult {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        let path = dir.join(name);
        let fail = |source| CliError::Output {
            path: path.display().to_string(),
            source,
        };
        fs::create_dir_all(dir).map_err(fail)?;
        let mut w = BufWriter::new(File::create(&path).map_err(fail)?);
        f(&mut w).and_then(|_| w.flush()).map_err(fail)
    }
}

struct InitState {
    half_width: f64,
    seed: u64,
}

impl InitState {
    fn new(a: &InitArgs, default_range: f64, seed: u64) -> Self {
        InitState {
            half_width: a.init_range.unwrap_or(default_range),
            seed: a.init_seed.unwrap_or(seed),
        }
    }

    fn draw(&self, agents: usize, order: usize) -> Vec<f64> {
        uniform_initial_state(agents, order, self.half_width, self.seed)
    }
}

enum GainSource {
    Given(Vec<f64>),
    ClosedForm,
    Optimized(OptimizerOptions),
}

fn load(g: &GraphArgs) -> CliResult<(GraphSpec, Graph, Spectrum)> {
    let spec = g.spec();
    let graph = spec.build()?;
    let s = spectrum_default(&graph)?;
    Ok((spec, graph, s))
}

fn gains_arg(cfg: &SystemConfig, k: &[f64]) -> CliResult<GainVector> {
    if k.len() != cfg.order() {
        return Err(CliError::Usage(format!("expected {} gains, got {}", cfg.order(), k.len())));
    }
    Ok(GainVector::new(k.to_vec()))
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", ")
}

fn header(out: &mut dyn Write, spec: &GraphSpec, g: &Graph) -> io::Result<()> {
    writeln!(out, "graph        {spec} ({} nodes, {} edges)", g.node_count(), g.edges().len())
}

fn cmd_spectrum(ga: &GraphArgs, sink: &Sink, out: &mut dyn Write) -> CliResult {
    let (spec, g, s) = load(ga)?;
    header(out, &spec, &g)?;
    // the zero eigenvalue comes out as ±1e-16
    let eigs: Vec<String> = s.eigenvalues.iter().map(|v| format!("{:.4}", v.max(0.0))).collect();
    writeln!(out, "eigenvalues  {}", eigs.join(" "))?;
    writeln!(out, "lambda_2     {:.6}", s.lambda2())?;
    writeln!(out, "lambda_N     {:.6}", s.lambda_max())?;
    match eigenratio(&s) {
        Ok(r) => writeln!(out, "eigenratio   {r:.6}")?,
        Err(_) => {
            eprintln!("warning: graph is disconnected (lambda_2 = {:e})", s.lambda2());
            writeln!(out, "eigenratio   undefined")?;
        }
    }
    let distinct: Vec<String> = s
        .distinct_nonzero
        .iter()
        .map(|c| format!("{:.6} (x{})", c.value, c.multiplicity))
        .collect();
    writeln!(out, "distinct     {}: {}", s.distinct_count(), distinct.join(", "))?;
    sink.write("spectrum.csv", |w| export::write_spectrum(&s, w))
}

fn cmd_rate(ga: &GraphArgs, cfg: &SystemConfig, k: &[f64], sink: &Sink, out: &mut dyn Write) -> CliResult {
    let (spec, g, s) = load(ga)?;
    let k = gains_arg(cfg, k)?;
    let r = convergence_rate(&s, cfg, &k)?;
    let report = consensus_check(&s, cfg, &k)?;
    header(out, &spec, &g)?;
    writeln!(out, "gains        {}", list(&k))?;
    writeln!(out, "rate         {:.6}", r.rate)?;
    writeln!(out, "attained at  lambda = {:.6}", r.argmax_lambda)?;
    writeln!(out, "lower bound  {:.6}", rate_lower_bound(&s, cfg.order())?)?;
    writeln!(out, "consensus    {}", if report.consensus { "yes" } else { "no" })?;
    for b in &report.blocks {
        writeln!(out, "  lambda {:>10.6}  max |z| {:.6}", b.lambda, b.max_modulus)?;
    }
    sink.write("blocks.csv", |w| {
        writeln!(w, "lambda,max_modulus")?;
        for b in &report.blocks {
            writeln!(w, "{},{}", export::real(b.lambda), export::real(b.max_modulus))?;
        }
        Ok(())
    })
}

fn cmd_optimize(ga: &GraphArgs, cfg: &SystemConfig, opts: &OptimizerOptions, sink: &Sink, out: &mut dyn Write) -> CliResult {
    let (spec, g, s) = load(ga)?;
    let report = optimize_parallel(&s, cfg, opts)?;
    header(out, &spec, &g)?;
    writeln!(out, "lower bound  {:.6}", rate_lower_bound(&s, cfg.order())?)?;
    writeln!(out, "best rate    {:.6}  gains {}", report.best_rate, list(&report.best_gains))?;
    writeln!(out, "final rate   {:.6}  gains {}", report.final_rate, list(&report.final_gains))?;
    for r in &report.runs {
        writeln!(
            out,
            "  restart {:>3}  start {:.6}  final {:.6}  best {:.6}",
            r.index, r.initial_rate, r.final_rate, r.best_rate
        )?;
    }
    sink.write("rate_trace.csv", |w| export::write_rate_trace(&report, w))?;
    sink.write("restarts.csv", |w| export::write_restarts(&report, w))
}

fn cmd_optimal_gains(ga: &GraphArgs, cfg: &SystemConfig, sink: &Sink, out: &mut dyn Write) -> CliResult {
    let (spec, g, s) = load(ga)?;
    let d = optimal_gains_general(&s, cfg)?;
    let achieved = convergence_rate(&s, cfg, &d.gains)?;
    header(out, &spec, &g)?;
    writeln!(out, "gains        {}", list(&d.gains))?;
    writeln!(out, "lower bound  {:.6}", d.target_rate)?;
    writeln!(out, "rate         {:.6}", achieved.rate)?;
    if cfg.order() == 2 {
        let k2 = optimal_gains_order2(&s, cfg.tau())?;
        writeln!(out, "order-2 form {}", list(&k2))?;
    }
    sink.write("gains.csv", |w| {
        writeln!(w, "j,K")?;
        for (j, k) in d.gains.iter().enumerate() {
            writeln!(w, "{},{}", j + 1, export::real(*k))?;
        }
        Ok(())
    })
}

fn max_deviation(t: &Trajectory, cfg: &SystemConfig, want: &[f64], k: usize) -> Option<f64> {
    let state = t.states()?.get(k)?;
    Some(
        state
            .chunks_exact(cfg.order())
            .flat_map(|a| a.iter().zip(want).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max),
    )
}

fn cmd_finite_time(
    ga: &GraphArgs,
    cfg: &SystemConfig,
    init: InitState,
    extra: usize,
    precision: Precision,
    sink: &Sink,
    out: &mut dyn Write,
) -> CliResult {
    let (spec, g, s) = load(ga)?;
    let sched = deadbeat_schedule(&s, cfg)?;
    let residuals = annihilation_multiprecision(&s.distinct_values(), cfg, &sched)?;
    let scaled_f64 = product_annihilation(&s, cfg, &sched)?;
    let gamma = propagation_bound(&s.distinct_values(), cfg, &sched);
    let x0 = init.draw(g.node_count(), cfg.order());
    let t = sched.consensus_step();
    let steps = t + extra;
    let double = simulate_scheduled(&g, cfg, &sched, &x0, steps)?;
    let extended = match precision {
        Precision::Extended => Some(simulate_deadbeat_extended(&g, cfg, &s, &x0, steps)?),
        Precision::Double => None,
    };
    let primary = extended.as_ref().unwrap_or(&double);
    let x0_norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(r.max_norm));
    let worst_f64 = scaled_f64.iter().fold(0.0f64, |m, r| m.max(r.residual));

    header(out, &spec, &g)?;
    writeln!(out, "distinct     {}", list(&sched.eigen_order().to_vec()))?;
    writeln!(out, "consensus    step {t}")?;
    writeln!(out, "residual     {worst:.3e} (max-norm of the block product)")?;
    writeln!(out, "f64 scaled   {worst_f64:.3e}")?;
    writeln!(out, "gamma        {gamma:.3e}")?;
    writeln!(out, "|x(0)|       {x0_norm:.6}")?;
    if let Some(e) = &extended {
        writeln!(out, "e({t}) ext    {:.3e}", e.errors()[t])?;
    }
    writeln!(out, "e({t}) f64    {:.3e}", double.errors()[t])?;
    for k in [t, steps] {
        let want = final_consensus_state(cfg, &x0, k as u64)?;
        let dev = max_deviation(primary, cfg, &want, k).unwrap_or(f64::NAN);
        writeln!(out, "x({k}) pred   [{}]  max deviation {dev:.3e}", list(&want))?;
    }
    sink.write("schedule.csv", |w| export::write_schedule(&sched, w))?;
    sink.write("residuals.csv", |w| export::write_residuals(&residuals, w))?;
    sink.write("trajectory.csv", |w| export::write_trajectory(primary, w))?;
    if extended.is_some() {
        sink.write("trajectory_f64.csv", |w| export::write_trajectory(&double, w))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    ga: &GraphArgs,
    cfg: &SystemConfig,
    source: GainSource,
    init: InitState,
    steps: usize,
    window: (usize, usize),
    sink: &Sink,
    out: &mut dyn Write,
) -> CliResult {
    let (spec, g, s) = load(ga)?;
    let k = match source {
        GainSource::Given(k) => gains_arg(cfg, &k)?,
        GainSource::ClosedForm => optimal_gains_general(&s, cfg)?.gains,
        GainSource::Optimized(opts) => optimize_parallel(&s, cfg, &opts)?.best_gains,
    };
    let x0 = init.draw(g.node_count(), cfg.order());
    let traj = simulate_constant(&g, cfg, &k, &x0, steps)?;
    let series = error_series(&traj, window.0..=window.1)?;
    let rate = convergence_rate(&s, cfg, &k)?.rate;
    header(out, &spec, &g)?;
    writeln!(out, "gains        {}", list(&k))?;
    writeln!(out, "rate         {rate:.6}  (ln {:.6})", rate.ln())?;
    writeln!(out, "e(0)         {:.6e}", traj.errors()[0])?;
    writeln!(out, "e({steps})       {:.6e}", traj.errors()[steps])?;
    match series.slope {
        Some(m) => writeln!(out, "slope        {m:.6} over [{}, {}] (exp {:.6})", series.window.0, series.window.1, m.exp())?,
        None => writeln!(out, "slope        undefined over [{}, {}]", series.window.0, series.window.1)?,
    }
    sink.write("trajectory.csv", |w| export::write_trajectory(&traj, w))
}

/// Reference bounds for `n = 3`, keyed by row name.
const REFERENCE_N3: [(&str, f64); 4] = [("C10", 0.9381), ("P10", 0.9834), ("K4,6", 0.7539), ("small-world", 0.8595)];

fn cmd_table1(cfg: &SystemConfig, opts: &OptimizerOptions, extra: &[PathBuf], sink: &Sink, out: &mut dyn Write) -> CliResult {
    let mut specs = standard_graphs();
    specs.push(GraphSpec::Complete(10));
    specs.extend(extra.iter().cloned().map(GraphSpec::File));
    let graphs = specs
        .iter()
        .map(|s| Ok((s.to_string(), s.build()?)))
        .collect::<CliResult<Vec<_>>>()?;
    let mut rows = table1_rows(&graphs, cfg, opts)?;
    rows.push(ratio_row("small-world", SMALL_WORLD_RATIO, cfg.order()));

    writeln!(out, "n = {}, tau = {}, T = {}, restarts = {}", cfg.order(), cfg.tau(), opts.iterations, opts.restarts)?;
    writeln!(out, "{:<14} {:>10} {:>8} {:>8} {:>8} {:>8}", "graph", "ratio", "r_lb", "r*", "final", "ref")?;
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
    for r in &rows {
        let reference = (cfg.order() == 3)
            .then(|| REFERENCE_N3.iter().find(|(n, _)| *n == r.name).map(|p| p.1))
            .flatten();
        writeln!(
            out,
            "{:<14} {:>10.4} {:>8.4} {:>8} {:>8} {:>8}",
            short_name(&r.name),
            r.eigenratio,
            r.lower_bound,
            cell(r.best_rate),
            cell(r.final_rate),
            cell(reference)
        )?;
    }
    sink.write("table1.csv", |w| export::write_table1(&rows, w))
}

fn short_name(name: &str) -> &str {
    Path::new(name).file_name().and_then(|s| s.to_str()).unwrap_or(name)
}
