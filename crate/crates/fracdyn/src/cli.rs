//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or input problems, 2 for domain
//! events (a diverged trajectory, a required orbit that is absent, a
//! kernel bound violation).
//!
//! Numbers are printed with 17 significant digits so that written series
//! parse back to the exact same doubles; every file output is paired with
//! a `<file>.manifest` listing the resolved parameters that produced it.

use std::fs::File;
use std::io::{BufWriter, Write as IoWrite};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    detect_nspo, distinct_levels, measurement_start, run_sweep, SweepAxis, SweepSpec,
    DEFAULT_MAX_PERIOD, DEFAULT_NSPO_TOLERANCE,
};
use crate::error::Error;
use crate::kernel::{partial_sum_deviation, KernelTable};
use crate::lyapunov::{lyapunov_exponent_from, DerivativeIndexing};
use crate::maps::{MapSpec, CANONICAL_P};
use crate::simulator::{
    simulate, ControlMode, ControlSchedule, SimConfig, Trajectory, TrajectoryStatus,
};
use crate::test01::{run_test01, Estimator, Test01Config};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_DOMAIN: i32 = 2;

/// Set once at the top of `run`; manifests report wall-clock time from here.
static COMMAND_START: OnceLock<Instant> = OnceLock::new();

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MapArg {
    Gompertz,
    Logistic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ControlArg {
    Mult,
    Add,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Regression,
    Correlation,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Regression => Estimator::LogLogRegression,
            EstimatorArg::Correlation => Estimator::CorrelationMethod,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IndexingArg {
    Paired,
    Shifted,
}

impl From<IndexingArg> for DerivativeIndexing {
    fn from(i: IndexingArg) -> Self {
        match i {
            IndexingArg::Paired => DerivativeIndexing::Paired,
            IndexingArg::Shifted => DerivativeIndexing::Shifted,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    R,
    P,
    Q,
    Gamma,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Map family driving the recurrence
    #[arg(long, value_enum, default_value = "gompertz")]
    map: MapArg,
    /// Growth parameter of the map
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Exponent of the gompertz family (ignored by logistic)
    #[arg(long, default_value_t = CANONICAL_P)]
    p: f64,
    /// Fractional order in (0, 1]
    #[arg(long, default_value_t = 0.8)]
    q: f64,
    /// Initial condition in [0, 1.5]
    #[arg(long, default_value_t = 0.2)]
    x0: f64,
    /// Number of steps to integrate
    #[arg(long, default_value_t = 1000)]
    steps: usize,
}

#[derive(Debug, Args)]
struct ControlArgs {
    /// Impulse type; omit for an uncontrolled run
    #[arg(long, value_enum)]
    control: Option<ControlArg>,
    /// Impulse strength
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Steps between impulses
    #[arg(long, default_value_t = 1)]
    delta: usize,
    /// First step at which impulses may fire
    #[arg(long, default_value_t = 500)]
    n_star: usize,
}

impl SimArgs {
    fn map_spec(&self) -> Result<MapSpec, Error> {
        match self.map {
            MapArg::Gompertz => MapSpec::gompertz(self.r, self.p),
            MapArg::Logistic => MapSpec::logistic(self.r),
        }
    }
}

impl ControlArgs {
    fn schedule(&self) -> Option<ControlSchedule> {
        self.control.map(|mode| ControlSchedule {
            mode: match mode {
                ControlArg::Mult => ControlMode::Multiplicative,
                ControlArg::Add => ControlMode::Additive,
            },
            gamma: self.gamma,
            delta: self.delta,
            n_star: self.n_star,
        })
    }
}

fn build_config(sim: &SimArgs, ctrl: Option<&ControlArgs>) -> Result<SimConfig, Error> {
    let cfg = SimConfig {
        map: sim.map_spec()?,
        q: sim.q,
        x0: sim.x0,
        steps: sim.steps,
        control: ctrl.and_then(|c| c.schedule()),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Parser)]
#[command(
    name = "fracdyn",
    version,
    about = "Fractional-order discrete maps: simulation, impulsive control, chaos tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the recurrence and emit the time series
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        ctrl: ControlArgs,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-time Lyapunov exponent of a run
    Lyapunov {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        ctrl: ControlArgs,
        /// Derivative indexing of the tangent recurrence
        #[arg(long, value_enum, default_value = "paired")]
        indexing: IndexingArg,
        /// Restart the tangent vector at this step
        #[arg(long, default_value_t = 0)]
        from: usize,
        /// Write the tangent evolution as CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 0-1 test for chaos on a stored series or an inline run
    ZeroOne {
        /// CSV file holding the series (default: simulate inline)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Column to read from the input file (headerless single column
        /// otherwise)
        #[arg(long, requires = "input")]
        column: Option<String>,
        /// Fraction of the series dropped as transient before testing
        #[arg(long, default_value_t = 0.2)]
        transient_frac: f64,
        #[arg(long, value_enum, default_value = "correlation")]
        estimator: EstimatorArg,
        /// Number of projection frequencies
        #[arg(long, default_value_t = 100)]
        c_count: usize,
        /// Displacement cutoff (default: a tenth of the tested length)
        #[arg(long)]
        n_cut: Option<usize>,
        /// Write the diagnostic translation path (n, p, q) here
        #[arg(long)]
        pq_path: Option<PathBuf>,
        /// Write the diagnostic displacement curve (n, m) here
        #[arg(long)]
        m_curve: Option<PathBuf>,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        ctrl: ControlArgs,
    },
    /// Sweep one parameter and measure each grid point
    Bifurcate {
        /// Parameter to sweep
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        /// Number of grid points
        #[arg(long)]
        grid: usize,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        ctrl: ControlArgs,
        /// Fraction of each run discarded before measuring
        #[arg(long, default_value_t = 0.5)]
        transient_cut: f64,
        /// Tail samples kept per grid point
        #[arg(long, default_value_t = 100)]
        tail_points: usize,
        /// Closing-error tolerance for orbit detection
        #[arg(long, default_value_t = DEFAULT_NSPO_TOLERANCE)]
        nspo_tol: f64,
        /// Largest period searched for
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, value_enum, default_value = "correlation")]
        estimator: EstimatorArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single controlled run with impulse markers and orbit summary
    Control {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        ctrl: ControlArgs,
        #[arg(long, default_value_t = DEFAULT_NSPO_TOLERANCE)]
        nspo_tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        /// Also report how many distinct levels the orbit shows at this
        /// resolution
        #[arg(long)]
        level_resolution: Option<f64>,
        /// Exit with a domain error when no orbit is found
        #[arg(long)]
        require_nspo: bool,
        /// Write the time series here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the kernel partial sums against their asymptotic bound
    ValidateKernel {
        /// Fractional order to check (default: a grid of orders)
        #[arg(long)]
        q: Option<f64>,
        /// Number of partial sums to examine
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
}

fn fmt(v: f64) -> String {
    format!("{:.16e}", v)
}

struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    fn new(subcommand: &str) -> Self {
        let mut m = Manifest { entries: Vec::new() };
        m.push("tool", format!("fracdyn {}", env!("CARGO_PKG_VERSION")));
        m.push("subcommand", subcommand.to_string());
        m
    }

    fn push(&mut self, key: &str, value: String) {
        self.entries.push((key.to_string(), value));
    }

    fn push_sim(&mut self, cfg: &SimConfig) {
        self.push("map", cfg.map.family.name().to_string());
        self.push("r", fmt(cfg.map.r));
        self.push("p", fmt(cfg.map.p));
        self.push("q", fmt(cfg.q));
        self.push("x0", fmt(cfg.x0));
        self.push("steps", cfg.steps.to_string());
        match &cfg.control {
            Some(c) => {
                self.push("control", c.mode.name().to_string());
                self.push("gamma", fmt(c.gamma));
                self.push("delta", c.delta.to_string());
                self.push("n_star", c.n_star.to_string());
            }
            None => self.push("control", "none".to_string()),
        }
    }

    fn write_for(&self, output: &Path) -> Result<(), Error> {
        let mut path = output.as_os_str().to_owned();
        path.push(".manifest");
        let mut f = BufWriter::new(File::create(PathBuf::from(path))?);
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        // Data files stay byte-identical across reruns; only this line varies.
        let elapsed = COMMAND_START.get().map_or(0.0, |s| s.elapsed().as_secs_f64());
        writeln!(f, "duration_s = {elapsed:.3}")?;
        Ok(())
    }
}

/// Writes either to the given file or to stdout.
fn open_sink(out: Option<&PathBuf>) -> Result<Box<dyn IoWrite>, Error> {
    match out {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p)?))),
        None => Ok(Box::new(BufWriter::new(std::io::stdout()))),
    }
}

fn write_trajectory(traj: &Trajectory, out: Option<&PathBuf>) -> Result<(), Error> {
    let mut fired = vec![false; traj.samples.len()];
    for &e in &traj.control_events {
        fired[e] = true;
    }
    let mut w = open_sink(out)?;
    writeln!(w, "step,x,impulse_fired")?;
    for (k, &x) in traj.samples.iter().enumerate() {
        writeln!(w, "{k},{},{}", fmt(x), fired[k])?;
    }
    w.flush()?;
    Ok(())
}

fn read_series(path: &Path, column: Option<&str>) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    match column {
        Some(name) => {
            let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
            let idx = rdr
                .headers()?
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::InvalidParameter {
                    name: "column",
                    value: 0.0,
                    expected: "a column present in the input header",
                })?;
            for record in rdr.records() {
                let record = record?;
                let field = record.get(idx).unwrap_or("");
                out.push(parse_float(field)?);
            }
        }
        None => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_path(path)?;
            for record in rdr.records() {
                let record = record?;
                let field = record.get(0).unwrap_or("");
                if field.is_empty() {
                    continue;
                }
                out.push(parse_float(field)?);
            }
        }
    }
    Ok(out)
}

fn parse_float(s: &str) -> Result<f64, Error> {
    s.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
        name: "input",
        value: 0.0,
        expected: "numeric series values",
    })
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Diverged { .. } => EXIT_DOMAIN,
        _ => EXIT_USAGE,
    }
}

fn cmd_simulate(sim: &SimArgs, ctrl: &ControlArgs, out: Option<&PathBuf>) -> Result<i32, Error> {
    let cfg = build_config(sim, Some(ctrl))?;
    let kernel = KernelTable::build(cfg.q, cfg.steps)?;
    let traj = simulate(&cfg, &kernel)?;
    write_trajectory(&traj, out)?;
    if let Some(path) = out {
        let mut m = Manifest::new("simulate");
        m.push_sim(&cfg);
        m.push("output", path.display().to_string());
        m.write_for(path)?;
    }
    match traj.status {
        TrajectoryStatus::Completed => Ok(EXIT_OK),
        TrajectoryStatus::Diverged { step, reason } => {
            eprintln!("trajectory diverged at step {step}: {}", reason.describe());
            Ok(EXIT_DOMAIN)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_lyapunov(
    sim: &SimArgs,
    ctrl: &ControlArgs,
    indexing: IndexingArg,
    from: usize,
    out: Option<&PathBuf>,
) -> Result<i32, Error> {
    let cfg = build_config(sim, Some(ctrl))?;
    let kernel = KernelTable::build(cfg.q, cfg.steps)?;
    let traj = simulate(&cfg, &kernel)?;
    if let TrajectoryStatus::Diverged { step, reason } = traj.status {
        return Err(Error::Diverged { step, reason: reason.describe().to_string() });
    }
    let state = lyapunov_exponent_from(&traj, &cfg, &kernel, indexing.into(), from)?;
    if let Some(path) = out {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "n,a,lambda_running")?;
        for m in 1..state.a.len() {
            let lam = state.a[m - 1].abs().ln() / m as f64;
            writeln!(w, "{},{},{}", from + m, fmt(state.a[m]), fmt(lam))?;
        }
        w.flush()?;
        let mut man = Manifest::new("lyapunov");
        man.push_sim(&cfg);
        man.push("indexing", format!("{:?}", indexing).to_lowercase());
        man.push("from", from.to_string());
        man.push("output", path.display().to_string());
        man.write_for(path)?;
    }
    if state.clamped > 0 {
        eprintln!("warning: {} samples clamped away from the derivative singularity", state.clamped);
    }
    if let Some(step) = state.halted_at {
        eprintln!("warning: tangent left the finite range at step {step}");
    }
    println!("{}", fmt(state.lambda));
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_zero_one(
    input: Option<&PathBuf>,
    column: Option<&str>,
    transient_frac: f64,
    estimator: EstimatorArg,
    c_count: usize,
    n_cut: Option<usize>,
    pq_path: Option<&PathBuf>,
    m_curve: Option<&PathBuf>,
    sim: &SimArgs,
    ctrl: &ControlArgs,
) -> Result<i32, Error> {
    if !(0.0..1.0).contains(&transient_frac) {
        return Err(Error::InvalidParameter {
            name: "transient_frac",
            value: transient_frac,
            expected: "[0, 1)",
        });
    }
    let series = match input {
        Some(path) => read_series(path, column)?,
        None => {
            let cfg = build_config(sim, Some(ctrl))?;
            let kernel = KernelTable::build(cfg.q, cfg.steps)?;
            let traj = simulate(&cfg, &kernel)?;
            if let TrajectoryStatus::Diverged { step, reason } = traj.status {
                return Err(Error::Diverged { step, reason: reason.describe().to_string() });
            }
            traj.samples
        }
    };
    let drop = (transient_frac * series.len() as f64).floor() as usize;
    let tested = &series[drop.min(series.len())..];
    let config = Test01Config {
        c_values: None,
        c_count,
        n_cut,
        estimator: estimator.into(),
    };
    let result = run_test01(tested, &config)?;
    if let Some(path) = pq_path {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "n,p,q")?;
        for (i, (p, q)) in result.pq_path.0.iter().zip(&result.pq_path.1).enumerate() {
            writeln!(w, "{},{},{}", i + 1, fmt(*p), fmt(*q))?;
        }
        w.flush()?;
        let mut man = Manifest::new("zero-one");
        man.push("diagnostic_c", fmt(result.diagnostic_c));
        man.push("output", path.display().to_string());
        man.write_for(path)?;
    }
    if let Some(path) = m_curve {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "n,m")?;
        for (i, m) in result.m_curve.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, fmt(*m))?;
        }
        w.flush()?;
        let mut man = Manifest::new("zero-one");
        man.push("diagnostic_c", fmt(result.diagnostic_c));
        man.push("output", path.display().to_string());
        man.write_for(path)?;
    }
    if result.degenerate {
        eprintln!("warning: displacement vanished everywhere (constant input); K fixed at 0");
    }
    println!("{}", fmt(result.k));
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bifurcate(
    axis: AxisArg,
    lo: f64,
    hi: f64,
    grid: usize,
    sim: &SimArgs,
    ctrl: &ControlArgs,
    transient_cut: f64,
    tail_points: usize,
    nspo_tol: f64,
    max_period: usize,
    estimator: EstimatorArg,
    out: Option<&PathBuf>,
) -> Result<i32, Error> {
    // A gamma sweep needs a schedule; default to multiplicative impulses
    // when none was named on the command line.
    let mut ctrl_args = ControlArgs {
        control: ctrl.control,
        gamma: ctrl.gamma,
        delta: ctrl.delta,
        n_star: ctrl.n_star,
    };
    if matches!(axis, AxisArg::Gamma) && ctrl_args.control.is_none() {
        ctrl_args.control = Some(ControlArg::Mult);
    }
    let map = sim.map_spec()?;
    let base = SimConfig {
        map,
        q: sim.q,
        x0: sim.x0,
        steps: sim.steps,
        control: ctrl_args.schedule(),
    };
    let sweep_axis = match axis {
        AxisArg::R => SweepAxis::R,
        AxisArg::P => SweepAxis::P,
        AxisArg::Q => SweepAxis::Q,
        AxisArg::Gamma => SweepAxis::Gamma,
    };
    let mut spec = SweepSpec::new(sweep_axis, lo, hi, grid, base);
    spec.transient_cut = transient_cut;
    spec.tail_points = tail_points;
    spec.nspo_tolerance = nspo_tol;
    spec.max_period = max_period;
    spec.test01.estimator = estimator.into();
    let rows = run_sweep(&spec)?;

    let mut w = open_sink(out)?;
    writeln!(w, "param,tail_index,x,le,K,diverged,nspo_period")?;
    for row in &rows {
        if row.diverged {
            writeln!(w, "{},,,,,true,0", fmt(row.param))?;
            continue;
        }
        let le = fmt(row.le.unwrap());
        let k = fmt(row.k.unwrap());
        let period = row.nspo.as_ref().map_or(0, |n| n.period);
        for (i, &x) in row.tail.iter().enumerate() {
            writeln!(w, "{},{i},{},{le},{k},false,{period}", fmt(row.param), fmt(x))?;
        }
    }
    w.flush()?;

    if let Some(path) = out {
        let mut m = Manifest::new("bifurcate");
        m.push("axis", spec.axis.name().to_string());
        m.push("lo", fmt(lo));
        m.push("hi", fmt(hi));
        m.push("grid", grid.to_string());
        m.push_sim(&spec.base);
        m.push("transient_cut", fmt(transient_cut));
        m.push("tail_points", tail_points.to_string());
        m.push("nspo_tol", fmt(nspo_tol));
        m.push("max_period", max_period.to_string());
        m.push("estimator", Estimator::from(estimator).name().to_string());
        m.push("output", path.display().to_string());
        m.write_for(path)?;
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_control(
    sim: &SimArgs,
    ctrl: &ControlArgs,
    nspo_tol: f64,
    max_period: usize,
    level_resolution: Option<f64>,
    require_nspo: bool,
    out: Option<&PathBuf>,
) -> Result<i32, Error> {
    if ctrl.control.is_none() {
        return Err(Error::InvalidParameter {
            name: "control",
            value: 0.0,
            expected: "an impulse mode (mult or add) for a control run",
        });
    }
    let cfg = build_config(sim, Some(ctrl))?;
    let kernel = KernelTable::build(cfg.q, cfg.steps)?;
    let traj = simulate(&cfg, &kernel)?;
    if let Some(path) = out {
        write_trajectory(&traj, Some(path))?;
        let mut m = Manifest::new("control");
        m.push_sim(&cfg);
        m.push("nspo_tol", fmt(nspo_tol));
        m.push("max_period", max_period.to_string());
        m.push("output", path.display().to_string());
        m.write_for(path)?;
    }
    if let TrajectoryStatus::Diverged { step, reason } = traj.status {
        println!("status = diverged");
        println!("diverged_at = {step}");
        eprintln!("trajectory diverged at step {step}: {}", reason.describe());
        return Ok(EXIT_DOMAIN);
    }
    let nspo = detect_nspo(&traj, nspo_tol, max_period)?;
    println!("status = completed");
    println!("impulses = {}", traj.control_events.len());
    println!("measurement_start = {}", measurement_start(
        cfg.steps,
        0.5,
        cfg.control.as_ref().map(|c| c.n_star),
    ));
    println!("nspo_found = {}", nspo.found);
    if nspo.found {
        println!("nspo_period = {}", nspo.period);
        println!("closing_error = {}", fmt(nspo.closing_error));
        let elements: Vec<String> = nspo.elements.iter().map(|&e| fmt(e)).collect();
        println!("elements = {}", elements.join(","));
        if let Some(res) = level_resolution {
            println!("levels = {}", distinct_levels(&nspo.elements, res));
        }
    } else {
        println!("best_closing_error = {}", fmt(nspo.closing_error));
    }
    if require_nspo && !nspo.found {
        eprintln!("no stabilised orbit found within tolerance {nspo_tol}");
        return Ok(EXIT_DOMAIN);
    }
    Ok(EXIT_OK)
}

fn cmd_validate_kernel(q: Option<f64>, n: usize) -> Result<i32, Error> {
    let orders = match q {
        Some(v) => vec![v],
        None => vec![0.1, 0.25, 0.5, 0.8, 1.0],
    };
    let mut ok = true;
    for q in orders {
        let table = KernelTable::build(q, n)?;
        let (worst, allowance) = partial_sum_deviation(&table, n)?;
        let verdict = if worst <= allowance { "ok" } else { "VIOLATION" };
        println!("q = {q}: max deviation {} (allowance {}) {verdict}", fmt(worst), fmt(allowance));
        ok &= worst <= allowance;
    }
    Ok(if ok { EXIT_OK } else { EXIT_DOMAIN })
}

/// Parses arguments and runs the requested command, returning the process
/// exit code.
pub fn run() -> i32 {
    let _ = COMMAND_START.set(Instant::now());
    if let Ok(threads) = std::env::var("FRACDYN_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate { sim, ctrl, out } => cmd_simulate(sim, ctrl, out.as_ref()),
        Command::Lyapunov { sim, ctrl, indexing, from, out } => {
            cmd_lyapunov(sim, ctrl, *indexing, *from, out.as_ref())
        }
        Command::ZeroOne {
            input,
            column,
            transient_frac,
            estimator,
            c_count,
            n_cut,
            pq_path,
            m_curve,
            sim,
            ctrl,
        } => cmd_zero_one(
            input.as_ref(),
            column.as_deref(),
            *transient_frac,
            *estimator,
            *c_count,
            *n_cut,
            pq_path.as_ref(),
            m_curve.as_ref(),
            sim,
            ctrl,
        ),
        Command::Bifurcate {
            axis,
            lo,
            hi,
            grid,
            sim,
            ctrl,
            transient_cut,
            tail_points,
            nspo_tol,
            max_period,
            estimator,
            out,
        } => cmd_bifurcate(
            *axis,
            *lo,
            *hi,
            *grid,
            sim,
            ctrl,
            *transient_cut,
            *tail_points,
            *nspo_tol,
            *max_period,
            *estimator,
            out.as_ref(),
        ),
        Command::Control { sim, ctrl, nspo_tol, max_period, level_resolution, require_nspo, out } => {
            cmd_control(
                sim,
                ctrl,
                *nspo_tol,
                *max_period,
                *level_resolution,
                *require_nspo,
                out.as_ref(),
            )
        }
        Command::ValidateKernel { q, n } => cmd_validate_kernel(*q, *n),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
