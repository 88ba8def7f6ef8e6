//! Simulation and diagnosis of fractional-order discrete dynamical
//! systems: a Gompertz-like growth map driven through a slowly decaying
//! memory kernel, impulsive stabilisation of its chaotic regime, and the
//! statistics used to tell the regimes apart (finite-time Lyapunov
//! exponents and the 0-1 test for chaos).

pub mod analysis;
pub mod cli;
pub mod error;
pub mod kernel;
pub mod lyapunov;
pub mod maps;
pub mod simulator;
pub mod test01;

pub use analysis::{
    classify_window, detect_nspo, distinct_levels, measurement_start, run_sweep, NspoResult,
    SweepAxis, SweepRow, SweepSpec, WindowClass, DEFAULT_MAX_PERIOD, DEFAULT_NSPO_TOLERANCE,
};
pub use error::{Error, Result};
pub use kernel::{ln_gamma, partial_sum_deviation, KernelTable};
pub use lyapunov::{
    lyapunov_exponent, lyapunov_exponent_from, DerivativeIndexing, TangentState,
};
pub use maps::{MapFamily, MapSpec};
pub use simulator::{
    simulate, ControlMode, ControlSchedule, DivergenceReason, SimConfig, Trajectory,
    TrajectoryStatus, DIVERGENCE_THRESHOLD,
};
pub use test01::{
    growth_rate, mean_square_displacement, run_test01, translation_variables, Estimator,
    Test01Config, Test01Result,
};
