//! Memory kernel for the Caputo-like delta difference.
//!
//! The fractional sum that drives every simulation is
//!
//! ```text
//! x(n) = x(0) + (1 / Gamma(q)) * sum_{j=1..n} w(n - j) * f(x(j - 1))
//! w(m) = Gamma(m + q) / Gamma(m + 1)
//! ```
//!
//! The weights decay like `m^(q-1)`, so every step feels the whole past:
//! truncating the sum changes the dynamics and is deliberately not offered.
//! Weights are evaluated in log space; forming `Gamma(m + q)` directly
//! overflows `f64` once `m + q` exceeds roughly 171.

use crate::error::{Error, Result};

/// Natural log of the gamma function.
///
/// Thin wrapper over the C-library port in `libm`, which returns exactly
/// `0.0` at the integer arguments 1 and 2. That exactness matters: it is
/// what lets the q = 1 kernel collapse to ordinary iteration without
/// rounding residue.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Precomputed kernel weights for one fractional order.
#[derive(Debug, Clone)]
pub struct KernelTable {
    q: f64,
    /// Raw weights `w(m) = Gamma(m + q) / Gamma(m + 1)` for lags `m = 0..capacity`.
    weights: Vec<f64>,
    /// Weights with the global `1 / Gamma(q)` prefactor folded in.
    /// `scaled[0] == 1.0` holds bit-exactly for every q because the exponent
    /// argument collapses to zero before `exp` is applied.
    scaled: Vec<f64>,
}

impl KernelTable {
    /// Builds the weight table for `q` in `(0, 1]` covering lags `0..capacity`.
    pub fn build(q: f64, capacity: usize) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) || !q.is_finite() {
            return Err(Error::InvalidOrder(q));
        }
        let lg_q = ln_gamma(q);
        let mut weights = Vec::with_capacity(capacity);
        let mut scaled = Vec::with_capacity(capacity);
        for m in 0..capacity {
            let m = m as f64;
            let log_w = ln_gamma(m + q) - ln_gamma(m + 1.0);
            weights.push(log_w.exp());
            scaled.push((log_w - lg_q).exp());
        }
        Ok(Self { q, weights, scaled })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Number of lags covered; supports trajectories of up to this many steps.
    pub fn capacity(&self) -> usize {
        self.weights.len()
    }

    /// Raw weight `Gamma(m + q) / Gamma(m + 1)` at lag `m`.
    pub fn weight(&self, m: usize) -> f64 {
        self.weights[m]
    }

    /// Weight at lag `m` divided by `Gamma(q)`; this is what the recurrence
    /// actually multiplies against stored map outputs.
    pub fn scaled_weight(&self, m: usize) -> f64 {
        self.scaled[m]
    }

    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled
    }

    /// Sum of the first `n` raw weights, i.e. lags `0..n`.
    pub fn partial_sum(&self, n: usize) -> Result<f64> {
        if n > self.capacity() {
            return Err(Error::KernelCapacity {
                needed: n,
                capacity: self.capacity(),
            });
        }
        Ok(self.weights[..n].iter().sum())
    }

    /// Ensures the table can serve a trajectory of `steps` samples.
    pub fn require(&self, steps: usize) -> Result<()> {
        if steps > self.capacity() {
            return Err(Error::KernelCapacity {
                needed: steps,
                capacity: self.capacity(),
            });
        }
        Ok(())
    }
}

/// Largest deviation of the partial sums from their asymptotic law.
///
/// The partial sums obey `|sum_{m<n} w(m) - n^q / q| <= 1 / q` for all n.
/// Returns `(max deviation, allowance)` over `n = 1..=n_max`; callers treat
/// `max > allowance` as a defect in the weight evaluation.
pub fn partial_sum_deviation(table: &KernelTable, n_max: usize) -> Result<(f64, f64)> {
    table.require(n_max)?;
    let q = table.q;
    let mut running = 0.0;
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        running += table.weights[n - 1];
        let dev = (running - (n as f64).powf(q) / q).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok((worst, 1.0 / q))
}
