//! Full-memory simulation of the fractional difference system, with
//! optional impulsive control.
//!
//! Each new sample is
//!
//! ```text
//! x(n) = x(0) + sum_{j=1..n} s(n - j) * f(x(j - 1))
//! ```
//!
//! where `s(m)` are the kernel weights already divided by `Gamma(q)`.
//! The cost of a run is O(steps^2); no truncation of the memory is offered
//! because the slow weight decay is the mechanism under study.
//!
//! The accumulation is a left fold seeded at `x(0)` with the oldest term
//! added first. At q = 1 every scaled weight is exactly 1.0, so the fold
//! reproduces plain iteration `x(n) = x(n-1) + f(x(n-1))` bit for bit.

use crate::error::{Error, Result};
use crate::kernel::KernelTable;
use crate::maps::{MapFamily, MapSpec};

/// Absolute magnitude beyond which a trajectory is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

/// How an impulse rescales the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    /// `x <- (1 + gamma) * x`
    Multiplicative,
    /// `x <- x + gamma`
    Additive,
}

impl ControlMode {
    pub fn name(self) -> &'static str {
        match self {
            ControlMode::Multiplicative => "mult",
            ControlMode::Additive => "add",
        }
    }
}

/// Periodic impulse schedule: every `delta`-th step once the step counter
/// reaches `n_star`, i.e. steps `k` with `k >= n_star` and `k % delta == 0`.
/// The perturbed value is what enters the memory history.
#[derive(Debug, Clone, Copy)]
pub struct ControlSchedule {
    pub mode: ControlMode,
    pub gamma: f64,
    pub delta: usize,
    pub n_star: usize,
}

impl ControlSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.delta == 0 {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: 0.0,
                expected: "a positive step interval",
            });
        }
        let limit = match self.mode {
            ControlMode::Multiplicative => 0.1,
            ControlMode::Additive => 0.5,
        };
        if !self.gamma.is_finite() || self.gamma.abs() > limit {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: self.gamma,
                expected: match self.mode {
                    ControlMode::Multiplicative => "[-0.1, 0.1] for multiplicative impulses",
                    ControlMode::Additive => "[-0.5, 0.5] for additive impulses",
                },
            });
        }
        Ok(())
    }

    fn apply(&self, x: f64) -> f64 {
        match self.mode {
            ControlMode::Multiplicative => (1.0 + self.gamma) * x,
            ControlMode::Additive => x + self.gamma,
        }
    }

    fn fires_at(&self, step: usize) -> bool {
        step >= self.n_star && step % self.delta == 0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub map: MapSpec,
    pub q: f64,
    pub x0: f64,
    pub steps: usize,
    pub control: Option<ControlSchedule>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        if !(self.q > 0.0 && self.q <= 1.0) || !self.q.is_finite() {
            return Err(Error::InvalidOrder(self.q));
        }
        if !(0.0..=1.5).contains(&self.x0) {
            return Err(Error::InvalidParameter {
                name: "x0",
                value: self.x0,
                expected: "[0, 1.5]",
            });
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                value: 0.0,
                expected: "at least 1",
            });
        }
        if let Some(c) = &self.control {
            c.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceReason {
    NonFinite,
    Magnitude,
    NegativeDomain,
}

impl DivergenceReason {
    pub fn describe(self) -> &'static str {
        match self {
            DivergenceReason::NonFinite => "value is not finite",
            DivergenceReason::Magnitude => "magnitude exceeded the divergence threshold",
            DivergenceReason::NegativeDomain => "state left the admissible domain (x < 0)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    Completed,
    Diverged { step: usize, reason: DivergenceReason },
}

/// Result of a run. `samples[k]` is `x(k)`; `samples[0]` is the initial
/// condition, bit-identical to the configured `x0`. On divergence the
/// samples end with the offending value and no further steps are taken.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<f64>,
    pub status: TrajectoryStatus,
    /// Steps at which an impulse fired, in increasing order.
    pub control_events: Vec<usize>,
}

impl Trajectory {
    pub fn is_completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    /// Last `len` samples; errors if the run is shorter than that.
    pub fn tail(&self, len: usize) -> Result<&[f64]> {
        if self.samples.len() < len {
            return Err(Error::SeriesTooShort { len: self.samples.len(), min: len });
        }
        Ok(&self.samples[self.samples.len() - len..])
    }
}

fn check_divergence(x: f64, family: MapFamily) -> Option<DivergenceReason> {
    if !x.is_finite() {
        Some(DivergenceReason::NonFinite)
    } else if x.abs() > DIVERGENCE_THRESHOLD {
        Some(DivergenceReason::Magnitude)
    } else if family == MapFamily::GompertzLike && x < 0.0 {
        Some(DivergenceReason::NegativeDomain)
    } else {
        None
    }
}

/// Runs the recurrence for `config.steps` steps.
///
/// The kernel must have been built for the same `q` (bit-equal) and must
/// cover at least `steps` lags.
pub fn simulate(config: &SimConfig, kernel: &KernelTable) -> Result<Trajectory> {
    config.validate()?;
    if kernel.q().to_bits() != config.q.to_bits() {
        return Err(Error::KernelMismatch { kernel_q: kernel.q(), config_q: config.q });
    }
    kernel.require(config.steps)?;

    let n = config.steps;
    let w = kernel.scaled_weights();
    let mut samples = Vec::with_capacity(n + 1);
    let mut g = Vec::with_capacity(n);
    let mut events = Vec::new();
    samples.push(config.x0);
    g.push(config.map.eval(config.x0)?);

    let mut status = TrajectoryStatus::Completed;
    for k in 1..=n {
        let mut acc = config.x0;
        for j in 1..=k {
            acc += w[k - j] * g[j - 1];
        }
        let mut x = acc;
        if let Some(c) = &config.control {
            if c.fires_at(k) {
                x = c.apply(x);
                events.push(k);
            }
        }
        samples.push(x);
        if let Some(reason) = check_divergence(x, config.map.family) {
            status = TrajectoryStatus::Diverged { step: k, reason };
            break;
        }
        if k < n {
            g.push(config.map.eval(x)?);
        }
    }

    Ok(Trajectory { samples, status, control_events: events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base_config() -> SimConfig {
        SimConfig {
            map: MapSpec::gompertz_canonical(1.0).unwrap(),
            q: 0.8,
            x0: 0.3,
            steps: 200,
            control: None,
        }
    }

    #[test]
    fn sample_count_and_initial_condition() {
        let cfg = base_config();
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        assert!(traj.is_completed());
        assert_eq!(traj.samples.len(), cfg.steps + 1);
        assert_eq!(traj.samples[0].to_bits(), cfg.x0.to_bits());
        assert!(traj.control_events.is_empty());
        assert!(traj.samples.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn first_step_matches_hand_expansion() {
        // x(1) = x0 + s(0) * f(x0) and s(0) == 1 exactly.
        let cfg = base_config();
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        let expected = cfg.x0 + cfg.map.eval(cfg.x0).unwrap();
        assert_eq!(traj.samples[1].to_bits(), expected.to_bits());
        // x(2) = x0 + s(1) f(x0) + s(0) f(x(1))
        let s1 = kernel.scaled_weight(1);
        let x2 = cfg.x0
            + s1 * cfg.map.eval(cfg.x0).unwrap()
            + cfg.map.eval(traj.samples[1]).unwrap();
        assert!((traj.samples[2] - x2).abs() < 1e-15);
    }

    #[test]
    fn unit_order_collapses_to_plain_iteration() {
        // At q = 1 the memory sum telescopes into x(n) = x(n-1) + f(x(n-1)).
        // Equality must be bitwise: the gompertz map at r = 1 is chaotic and
        // amplifies any rounding difference within a few dozen steps.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let kernel = KernelTable::build(1.0, 200).unwrap();
        for _ in 0..20 {
            let r = rng.gen_range(0.9..1.0);
            let x0 = rng.gen_range(0.1..0.9);
            let cfg = SimConfig {
                map: MapSpec::gompertz_canonical(r).unwrap(),
                q: 1.0,
                x0,
                steps: 200,
                control: None,
            };
            let traj = simulate(&cfg, &kernel).unwrap();
            assert!(traj.is_completed());
            let mut y = x0;
            for k in 1..=200usize {
                y += cfg.map.eval(y).unwrap();
                assert_eq!(
                    traj.samples[k].to_bits(),
                    y.to_bits(),
                    "mismatch at step {k} (r = {r}, x0 = {x0})"
                );
            }
        }
    }

    #[test]
    fn memory_matters_below_unit_order() {
        // A fractional run must differ from the memoryless iteration.
        let cfg = base_config();
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        let mut y = cfg.x0;
        let mut max_diff = 0.0f64;
        for k in 1..=cfg.steps {
            y += cfg.map.eval(y).unwrap();
            max_diff = max_diff.max((traj.samples[k] - y).abs());
        }
        assert!(max_diff > 1e-3, "fractional memory had no effect: {max_diff}");
    }

    #[test]
    fn impulse_schedule_and_semantics() {
        let schedule = ControlSchedule {
            mode: ControlMode::Multiplicative,
            gamma: -0.05,
            delta: 3,
            n_star: 10,
        };
        let cfg = SimConfig { control: Some(schedule), steps: 40, ..base_config() };
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        let expected: Vec<usize> = (1..=40).filter(|k| k >= &10 && k % 3 == 0).collect();
        assert_eq!(traj.control_events, expected);

        // The recorded sample is the post-impulse value: recompute the raw
        // accumulator for the first event and compare.
        let first = traj.control_events[0];
        let mut acc = cfg.x0;
        for j in 1..=first {
            acc += kernel.scaled_weight(first - j) * cfg.map.eval(traj.samples[j - 1]).unwrap();
        }
        let expected_val = (1.0 + schedule.gamma) * acc;
        assert!((traj.samples[first] - expected_val).abs() < 1e-12);
    }

    #[test]
    fn delta_one_fires_every_step_from_n_star() {
        let cfg = SimConfig {
            control: Some(ControlSchedule {
                mode: ControlMode::Multiplicative,
                gamma: -0.01,
                delta: 1,
                n_star: 25,
            }),
            steps: 30,
            ..base_config()
        };
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        assert_eq!(traj.control_events, vec![25, 26, 27, 28, 29, 30]);
    }

    #[test]
    fn additive_impulse_applied() {
        let schedule =
            ControlSchedule { mode: ControlMode::Additive, gamma: 0.2, delta: 7, n_star: 0 };
        let cfg = SimConfig {
            map: MapSpec::gompertz_canonical(0.4).unwrap(),
            control: Some(schedule),
            steps: 21,
            ..base_config()
        };
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        assert_eq!(traj.control_events, vec![7, 14, 21]);
    }

    #[test]
    fn gompertz_negative_state_flags_divergence() {
        // A strong positive additive kick above the fixed point sends the
        // next raw accumulator negative for q = 1 at r = 1; the run must
        // stop with the domain reason instead of feeding NaN onwards.
        let cfg = SimConfig {
            map: MapSpec::gompertz_canonical(1.0).unwrap(),
            q: 1.0,
            x0: 1.45,
            steps: 50,
            control: Some(ControlSchedule {
                mode: ControlMode::Additive,
                gamma: 0.5,
                delta: 2,
                n_star: 0,
            }),
        };
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        match traj.status {
            TrajectoryStatus::Diverged { step, reason } => {
                assert_eq!(reason, DivergenceReason::NegativeDomain);
                assert_eq!(traj.samples.len(), step + 1);
                assert!(traj.samples[step] < 0.0);
            }
            TrajectoryStatus::Completed => panic!("expected divergence"),
        }
    }

    #[test]
    fn logistic_blowup_flags_magnitude() {
        // Outside [.., (r+1)/r] the logistic increment map explodes quickly.
        let cfg = SimConfig {
            map: MapSpec::logistic(4.0).unwrap(),
            q: 1.0,
            x0: 1.5,
            steps: 100,
            control: None,
        };
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let traj = simulate(&cfg, &kernel).unwrap();
        match traj.status {
            TrajectoryStatus::Diverged { reason, .. } => {
                assert!(matches!(
                    reason,
                    DivergenceReason::Magnitude | DivergenceReason::NonFinite
                ));
            }
            TrajectoryStatus::Completed => panic!("expected divergence"),
        }
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let kernel = KernelTable::build(0.8, 64).unwrap();
        let mut cfg = base_config();
        cfg.steps = 64;
        assert!(simulate(&cfg, &kernel).is_ok());

        let bad_q = SimConfig { q: 1.2, ..cfg };
        assert!(simulate(&bad_q, &kernel).is_err());
        let bad_x0 = SimConfig { x0: 1.6, ..cfg };
        assert!(simulate(&bad_x0, &kernel).is_err());
        let bad_x0_neg = SimConfig { x0: -0.1, ..cfg };
        assert!(simulate(&bad_x0_neg, &kernel).is_err());
        let mismatch = SimConfig { q: 0.5, ..cfg };
        assert!(matches!(simulate(&mismatch, &kernel), Err(Error::KernelMismatch { .. })));
        let too_long = SimConfig { steps: 65, ..cfg };
        assert!(matches!(simulate(&too_long, &kernel), Err(Error::KernelCapacity { .. })));
        let bad_gamma = SimConfig {
            control: Some(ControlSchedule {
                mode: ControlMode::Multiplicative,
                gamma: 0.2,
                delta: 1,
                n_star: 0,
            }),
            ..cfg
        };
        assert!(simulate(&bad_gamma, &kernel).is_err());
        let bad_delta = SimConfig {
            control: Some(ControlSchedule {
                mode: ControlMode::Additive,
                gamma: 0.1,
                delta: 0,
                n_star: 0,
            }),
            ..cfg
        };
        assert!(simulate(&bad_delta, &kernel).is_err());
    }

    #[test]
    fn determinism_across_repeat_runs() {
        let cfg = SimConfig { steps: 500, ..base_config() };
        let kernel = KernelTable::build(cfg.q, cfg.steps).unwrap();
        let a = simulate(&cfg, &kernel).unwrap();
        let b = simulate(&cfg, &kernel).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn random_valid_configs_stay_in_range_or_diverge_cleanly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut kernels: Vec<(f64, KernelTable)> = Vec::new();
        for _ in 0..25 {
            let q = [0.3, 0.5, 0.8, 1.0][rng.gen_range(0..4)];
            let kernel = match kernels.iter().find(|(kq, _)| *kq == q) {
                Some((_, k)) => k.clone(),
                None => {
                    let k = KernelTable::build(q, 300).unwrap();
                    kernels.push((q, k.clone()));
                    k
                }
            };
            let cfg = SimConfig {
                map: MapSpec::gompertz_canonical(rng.gen_range(0.05..1.0)).unwrap(),
                q,
                x0: rng.gen_range(0.0..1.5),
                steps: 300,
                control: None,
            };
            let traj = simulate(&cfg, &kernel).unwrap();
            match traj.status {
                TrajectoryStatus::Completed => {
                    assert_eq!(traj.samples.len(), 301);
                    assert!(traj.samples.iter().all(|x| x.is_finite()));
                }
                TrajectoryStatus::Diverged { step, .. } => {
                    assert_eq!(traj.samples.len(), step + 1);
                }
            }
        }
    }
}
