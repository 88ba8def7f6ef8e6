//! Post-processing: stabilised-orbit detection, window classification and
//! parameter sweeps.

use crate::error::{Error, Result};
use crate::kernel::KernelTable;
use crate::lyapunov::{lyapunov_exponent_from, DerivativeIndexing};
use crate::simulator::{simulate, SimConfig, Trajectory};
use crate::test01::{run_test01, Test01Config};
use rayon::prelude::*;

/// Default closing-error tolerance for orbit detection. Genuinely locked
/// orbits close to within about 1e-6..2.5e-6 after a thousand steps (the
/// unbounded memory keeps a slow drift alive), while windows that merely
/// squeeze the attractor without locking it bottom out near 4e-6; this
/// default sits between the two populations.
pub const DEFAULT_NSPO_TOLERANCE: f64 = 2e-6;

/// Default upper bound on the period searched for.
pub const DEFAULT_MAX_PERIOD: usize = 32;

/// Number of trailing samples inspected by [`detect_nspo`].
pub fn nspo_window(max_period: usize) -> usize {
    (3 * max_period).max(100)
}

/// A stabilised periodic pattern found in the tail of a trajectory.
///
/// The fractional system has unbounded memory, so these orbits are not
/// exactly periodic solutions; they are patterns that repeat to within the
/// closing tolerance over the inspected window.
#[derive(Debug, Clone)]
pub struct NspoResult {
    pub found: bool,
    /// Smallest repeat distance that closes; 0 when none was found.
    pub period: usize,
    /// Worst repeat mismatch over the window for the reported period, or
    /// the best mismatch seen when nothing closed.
    pub closing_error: f64,
    /// The last `period` samples, one full pattern; empty when not found.
    pub elements: Vec<f64>,
}

/// Scans the trajectory tail for the smallest repeating pattern.
///
/// For each candidate period `T` in `1..=max_period` the closing error is
/// `max |x(n + T) - x(n)|` over the last `nspo_window(max_period)` samples;
/// the first `T` at or below `tolerance` wins, so a reported period is
/// minimal, never a multiple of a shorter one.
pub fn detect_nspo(traj: &Trajectory, tolerance: f64, max_period: usize) -> Result<NspoResult> {
    if !traj.is_completed() {
        return Err(Error::TailTooShort { len: traj.samples.len(), max_period });
    }
    let window = nspo_window(max_period);
    if traj.samples.len() < window {
        return Err(Error::TailTooShort { len: traj.samples.len(), max_period });
    }
    let tail = &traj.samples[traj.samples.len() - window..];
    let mut best = f64::INFINITY;
    for period in 1..=max_period {
        let mut err = 0.0f64;
        for i in 0..window - period {
            err = err.max((tail[i + period] - tail[i]).abs());
        }
        if err <= tolerance {
            return Ok(NspoResult {
                found: true,
                period,
                closing_error: err,
                elements: tail[window - period..].to_vec(),
            });
        }
        best = best.min(err);
    }
    Ok(NspoResult { found: false, period: 0, closing_error: best, elements: Vec::new() })
}

/// Number of clusters in `values` when two samples closer than
/// `resolution` are considered the same level. This is how many distinct
/// branches a plotted orbit shows at a given graphical resolution.
pub fn distinct_levels(values: &[f64], resolution: f64) -> usize {
    if values.is_empty() {
        return 0;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut levels = 1;
    for w in v.windows(2) {
        if w[1] - w[0] > resolution {
            levels += 1;
        }
    }
    levels
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    R,
    P,
    Q,
    Gamma,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::R => "r",
            SweepAxis::P => "p",
            SweepAxis::Q => "q",
            SweepAxis::Gamma => "gamma",
        }
    }
}

/// One bifurcation-style scan over a single parameter.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub lo: f64,
    pub hi: f64,
    pub grid: usize,
    /// Template run; the axis parameter of each row overrides the value
    /// stored here.
    pub base: SimConfig,
    /// Fraction of the run discarded before measuring, unless the control
    /// settling point is later.
    pub transient_cut: f64,
    /// Samples kept per row for plotting.
    pub tail_points: usize,
    pub nspo_tolerance: f64,
    pub max_period: usize,
    pub test01: Test01Config,
    pub indexing: DerivativeIndexing,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, lo: f64, hi: f64, grid: usize, base: SimConfig) -> Self {
        Self {
            axis,
            lo,
            hi,
            grid,
            base,
            transient_cut: 0.5,
            tail_points: 100,
            nspo_tolerance: DEFAULT_NSPO_TOLERANCE,
            max_period: DEFAULT_MAX_PERIOD,
            test01: Test01Config::default(),
            indexing: DerivativeIndexing::default(),
        }
    }

    pub fn grid_values(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.grid - 1) as f64;
        (0..self.grid)
            .map(|i| {
                // pin the endpoint: accumulated rounding must not push the
                // last grid point outside the validated parameter range
                if i == self.grid - 1 {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }

    fn config_for(&self, value: f64) -> Result<SimConfig> {
        let mut cfg = self.base;
        match self.axis {
            SweepAxis::R => cfg.map.r = value,
            SweepAxis::P => cfg.map.p = value,
            SweepAxis::Q => cfg.q = value,
            SweepAxis::Gamma => match cfg.control.as_mut() {
                Some(c) => c.gamma = value,
                None => {
                    return Err(Error::InvalidParameter {
                        name: "axis",
                        value,
                        expected: "a control schedule on the base config for a gamma sweep",
                    })
                }
            },
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidGrid(self.grid));
        }
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidRange { lo: self.lo, hi: self.hi });
        }
        if !(0.0..1.0).contains(&self.transient_cut) {
            return Err(Error::InvalidParameter {
                name: "transient_cut",
                value: self.transient_cut,
                expected: "[0, 1)",
            });
        }
        for value in self.grid_values() {
            self.config_for(value)?;
        }
        Ok(())
    }
}

/// Measurements for one grid point of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param: f64,
    pub diverged: bool,
    /// Last `tail_points` samples; empty for diverged rows.
    pub tail: Vec<f64>,
    pub k: Option<f64>,
    pub le: Option<f64>,
    pub nspo: Option<NspoResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowClass {
    Chaotic,
    Regular,
    Indeterminate,
    Diverged,
}

impl WindowClass {
    pub fn name(self) -> &'static str {
        match self {
            WindowClass::Chaotic => "chaotic",
            WindowClass::Regular => "regular",
            WindowClass::Indeterminate => "indeterminate",
            WindowClass::Diverged => "diverged",
        }
    }
}

/// Coarse verdict for a measured window: chaotic needs a near-unity K and
/// expanding tangent, regular needs both statistics near zero, anything
/// else is left undecided rather than forced into a bucket.
pub fn classify_window(row: &SweepRow) -> WindowClass {
    if row.diverged {
        return WindowClass::Diverged;
    }
    let (k, le) = match (row.k, row.le) {
        (Some(k), Some(le)) => (k, le),
        _ => return WindowClass::Indeterminate,
    };
    if k >= 0.9 && le > 0.0 {
        WindowClass::Chaotic
    } else if k.abs() <= 0.1 && le <= 0.05 {
        WindowClass::Regular
    } else {
        WindowClass::Indeterminate
    }
}

/// First step of the measured window for a run of `steps` samples.
///
/// Uncontrolled runs drop `transient_cut` of the run. Controlled runs
/// additionally wait out a fifth of the post-activation span: the memory
/// kernel makes the stabilised pattern drift for a long while after the
/// impulses begin, and measuring too early biases both K and the exponent.
pub fn measurement_start(steps: usize, transient_cut: f64, n_star: Option<usize>) -> usize {
    let base = (transient_cut * steps as f64).ceil() as usize;
    match n_star {
        Some(ns) if ns < steps => {
            let settle = ns + ((steps - ns) as f64 / 5.0).ceil() as usize;
            base.max(settle)
        }
        _ => base,
    }
}

fn measure_row(spec: &SweepSpec, cfg: &SimConfig, kernel: &KernelTable, param: f64) -> Result<SweepRow> {
    let traj = simulate(cfg, kernel)?;
    if !traj.is_completed() {
        return Ok(SweepRow {
            param,
            diverged: true,
            tail: Vec::new(),
            k: None,
            le: None,
            nspo: None,
        });
    }
    let n_star = cfg.control.as_ref().map(|c| c.n_star);
    let start = measurement_start(cfg.steps, spec.transient_cut, n_star);
    let series = &traj.samples[start..];
    let k = run_test01(series, &spec.test01)?.k;
    let le = lyapunov_exponent_from(&traj, cfg, kernel, spec.indexing, start)?.lambda;
    let nspo = detect_nspo(&traj, spec.nspo_tolerance, spec.max_period)?;
    let tail = traj.tail(spec.tail_points)?.to_vec();
    Ok(SweepRow { param, diverged: false, tail, k: Some(k), le: Some(le), nspo: Some(nspo) })
}

/// Runs every grid point of the sweep, in parallel, returning rows in grid
/// order. Repeat invocations produce identical results; the parallelism
/// never reorders or re-associates any arithmetic.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let shared_kernel = match spec.axis {
        SweepAxis::Q => None,
        _ => Some(KernelTable::build(spec.base.q, spec.base.steps)?),
    };
    let values = spec.grid_values();
    values
        .par_iter()
        .map(|&value| {
            let cfg = spec.config_for(value)?;
            let row = match &shared_kernel {
                Some(k) => measure_row(spec, &cfg, k, value)?,
                None => {
                    let k = KernelTable::build(cfg.q, cfg.steps)?;
                    measure_row(spec, &cfg, &k, value)?
                }
            };
            Ok(row)
        })
        .collect()
}
