use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order q must lie in (0, 1], got {0}")]
    InvalidOrder(f64),

    #[error("invalid parameter {name}: {value} (expected {expected})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("kernel table holds {capacity} weights but {needed} are required")]
    KernelCapacity { needed: usize, capacity: usize },

    #[error("kernel was built for q = {kernel_q} but the run requests q = {config_q}")]
    KernelMismatch { kernel_q: f64, config_q: f64 },

    #[error("series of length {len} is too short (need at least {min})")]
    SeriesTooShort { len: usize, min: usize },

    #[error("frequency c = {0} lies outside the admissible band [pi/5, 4pi/5]")]
    InvalidFrequency(f64),

    #[error("displacement cutoff {n_cut} exceeds the allowed {max} for a series of length {len}")]
    CutoffTooLarge { n_cut: usize, max: usize, len: usize },

    #[error("map evaluated outside its domain at x = {x}")]
    MapDomain { x: f64 },

    #[error("trajectory diverged at step {step}: {reason}")]
    Diverged { step: usize, reason: String },

    #[error("trajectory tail of length {len} is too short for period search up to {max_period}")]
    TailTooShort { len: usize, max_period: usize },

    #[error("sweep grid must contain at least 2 points, got {0}")]
    InvalidGrid(usize),

    #[error("sweep range is empty or inverted: [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
