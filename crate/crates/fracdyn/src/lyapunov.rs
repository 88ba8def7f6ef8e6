//! Finite-time Lyapunov exponents via the tangent-space recurrence.
//!
//! The tangent companion of the state recurrence is
//!
//! ```text
//! a(n) = 1 + sum_{j=start+1..n} s(n - j) * f'(x(j - 1)) * a(j - 1 - start)
//! ```
//!
//! with `a(0) = 1`, and the finite-time exponent after `n` steps is
//! `lambda = ln|a(n - 1)| / n`. At q = 1 the sum telescopes into the
//! familiar product `a(n) = (1 + f'(x(n-1))) * a(n-1)`.
//!
//! `start > 0` restarts the tangent vector at that step of an existing
//! trajectory, discarding earlier tangent memory. Controlled runs use this
//! to measure the exponent of the stabilised regime instead of averaging
//! over the uncontrolled transient.

use crate::error::{Error, Result};
use crate::kernel::KernelTable;
use crate::maps::MapFamily;
use crate::simulator::{SimConfig, Trajectory, TrajectoryStatus};

/// Floor applied to the state before evaluating the Gompertz-like
/// derivative, whose `x^(p-1)` factor is singular at zero.
pub const DERIVATIVE_CLAMP: f64 = 1e-12;

/// Which trajectory sample the derivative in term `j` is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeIndexing {
    /// `f'(x(j - 1))`, pairing the derivative with the same state whose map
    /// value enters the state recurrence in term `j`.
    #[default]
    Paired,
    /// `f'(x(j))`, one sample later.
    Shifted,
}

#[derive(Debug, Clone)]
pub struct TangentState {
    /// Tangent magnitudes `a(0)..`, indexed relative to the restart point.
    pub a: Vec<f64>,
    /// Finite-time exponent `ln|a(n - 1)| / n` over the evolved span.
    pub lambda: f64,
    /// Number of samples clamped away from the derivative singularity.
    pub clamped: usize,
    /// Step (absolute trajectory index) at which the tangent left the
    /// finite range, if it did; `lambda` then reflects the last finite step.
    pub halted_at: Option<usize>,
}

/// Tangent evolution over a full completed trajectory.
pub fn lyapunov_exponent(
    traj: &Trajectory,
    config: &SimConfig,
    kernel: &KernelTable,
    indexing: DerivativeIndexing,
) -> Result<TangentState> {
    lyapunov_exponent_from(traj, config, kernel, indexing, 0)
}

/// Tangent evolution restarted at step `start` of the trajectory.
pub fn lyapunov_exponent_from(
    traj: &Trajectory,
    config: &SimConfig,
    kernel: &KernelTable,
    indexing: DerivativeIndexing,
    start: usize,
) -> Result<TangentState> {
    if let TrajectoryStatus::Diverged { step, reason } = traj.status {
        return Err(Error::Diverged { step, reason: reason.describe().to_string() });
    }
    let n_total = traj.samples.len() - 1;
    if start + 1 > n_total {
        return Err(Error::SeriesTooShort { len: n_total, min: start + 1 });
    }
    let span = n_total - start;
    kernel.require(span)?;
    if kernel.q().to_bits() != config.q.to_bits() {
        return Err(Error::KernelMismatch { kernel_q: kernel.q(), config_q: config.q });
    }

    let mut clamped = 0usize;
    let mut deriv = Vec::with_capacity(span);
    for j in start + 1..=n_total {
        let idx = match indexing {
            DerivativeIndexing::Paired => j - 1,
            DerivativeIndexing::Shifted => j,
        };
        let mut x = traj.samples[idx];
        if config.map.family == MapFamily::GompertzLike && x < DERIVATIVE_CLAMP {
            x = DERIVATIVE_CLAMP;
            clamped += 1;
        }
        deriv.push(config.map.derivative(x)?);
    }

    let w = kernel.scaled_weights();
    let mut a = Vec::with_capacity(span + 1);
    a.push(1.0f64);
    let mut halted_at = None;
    for m in 1..=span {
        // local index m corresponds to absolute step start + m
        let mut acc = 1.0;
        for i in 0..m {
            acc += w[m - 1 - i] * deriv[i] * a[i];
        }
        if !acc.is_finite() {
            halted_at = Some(start + m);
            break;
        }
        a.push(acc);
    }

    let evolved = a.len(); // a holds indices 0..evolved-1
    let n_eff = if halted_at.is_some() { evolved } else { span };
    let lambda = if n_eff == 0 {
        0.0
    } else {
        a[n_eff - 1].abs().ln() / n_eff as f64
    };
    Ok(TangentState { a, lambda, clamped, halted_at })
}
