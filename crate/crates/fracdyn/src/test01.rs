//! Binary 0-1 test for chaos.
//!
//! A scalar series is projected onto rotating phases, giving translation
//! variables whose mean square displacement grows linearly for chaotic
//! signals and stays bounded for regular ones. The growth statistic K is
//! aggregated over a grid of projection frequencies by the median, which is
//! immune to the isolated resonant frequencies where a periodic signal
//! masquerades as ballistic transport.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Admissible band for projection frequencies, chosen away from 0 and pi
/// where the projection degenerates.
pub const C_MIN: f64 = std::f64::consts::PI / 5.0;
pub const C_MAX: f64 = 4.0 * std::f64::consts::PI / 5.0;

/// Values of the displacement curve at or below this level are treated as
/// numerically zero by the regression estimator.
const M_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Estimator {
    /// Least-squares slope of `log M(n)` against `log n`; 2 signals
    /// ballistic growth, 1 diffusive, 0 bounded.
    LogLogRegression,
    /// Pearson correlation between `n` and `M(n)`; hugs 1 for sustained
    /// growth and 0 for bounded oscillation. The more decisive classifier
    /// on short series, hence the default.
    #[default]
    CorrelationMethod,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::LogLogRegression => "regression",
            Estimator::CorrelationMethod => "correlation",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Test01Config {
    /// Explicit projection frequencies; all must lie in `[C_MIN, C_MAX]`.
    /// When absent, `c_count` evenly spaced frequencies spanning the band
    /// are used.
    pub c_values: Option<Vec<f64>>,
    pub c_count: usize,
    /// Displacement cutoff; defaults to a tenth of the series length and
    /// may not exceed it.
    pub n_cut: Option<usize>,
    pub estimator: Estimator,
}

impl Default for Test01Config {
    fn default() -> Self {
        Self { c_values: None, c_count: 100, n_cut: None, estimator: Estimator::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Test01Result {
    /// Median of the per-frequency growth rates.
    pub k: f64,
    pub c_values: Vec<f64>,
    pub per_c_k: Vec<f64>,
    /// Frequency whose growth rate sits closest to the median; the stored
    /// path and displacement curve belong to it.
    pub diagnostic_c: f64,
    pub pq_path: (Vec<f64>, Vec<f64>),
    pub m_curve: Vec<f64>,
    /// Set when every displacement curve is identically zero (constant
    /// input); `k` is 0 by convention.
    pub degenerate: bool,
}

/// Cumulative projections of the series onto `(cos(jc), sin(jc))`.
///
/// `p(n) = sum_{j=1..n} phi(j) cos(jc)`, likewise with sine for q; the
/// series is used as given, element `series[0]` playing the role of
/// `phi(1)`.
pub fn translation_variables(series: &[f64], c: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = Vec::with_capacity(series.len());
    let mut q = Vec::with_capacity(series.len());
    let (mut sp, mut sq) = (0.0f64, 0.0f64);
    for (i, &phi) in series.iter().enumerate() {
        let jc = (i + 1) as f64 * c;
        sp += phi * jc.cos();
        sq += phi * jc.sin();
        p.push(sp);
        q.push(sq);
    }
    (p, q)
}

/// Mean square displacement of the planar path `(p, q)` at lags `1..=n_cut`.
pub fn mean_square_displacement(p: &[f64], q: &[f64], n_cut: usize) -> Result<Vec<f64>> {
    let n = p.len();
    assert_eq!(n, q.len(), "p and q must have equal length");
    if n_cut >= n {
        return Err(Error::CutoffTooLarge { n_cut, max: n.saturating_sub(1), len: n });
    }
    let mut m = Vec::with_capacity(n_cut);
    for lag in 1..=n_cut {
        let mut acc = 0.0;
        for j in 0..n - lag {
            let dp = p[j + lag] - p[j];
            let dq = q[j + lag] - q[j];
            acc += dp * dp + dq * dq;
        }
        m.push(acc / (n - lag) as f64);
    }
    Ok(m)
}

/// Scalar growth verdict for one displacement curve.
///
/// Regression returns the log-log slope (`M = n^2` gives exactly 2, a
/// constant curve gives 0); correlation returns the Pearson coefficient of
/// `M` against the lag. Curves that are zero everywhere yield 0.
pub fn growth_rate(m: &[f64], estimator: Estimator) -> f64 {
    debug_assert!(m.len() >= 10, "displacement curve too short to classify");
    match estimator {
        Estimator::LogLogRegression => {
            let pts: Vec<(f64, f64)> = m
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > M_FLOOR)
                .map(|(i, &v)| (((i + 1) as f64).ln(), v.ln()))
                .collect();
            if pts.len() < 2 {
                return 0.0;
            }
            let n = pts.len() as f64;
            let (sx, sy): (f64, f64) =
                pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
            let (mx, my) = (sx / n, sy / n);
            let mut num = 0.0;
            let mut den = 0.0;
            for (x, y) in &pts {
                num += (x - mx) * (y - my);
                den += (x - mx) * (x - mx);
            }
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
        Estimator::CorrelationMethod => {
            let n = m.len() as f64;
            let mx = (n + 1.0) / 2.0;
            let my = m.iter().sum::<f64>() / n;
            let mut num = 0.0;
            let mut dx = 0.0;
            let mut dy = 0.0;
            for (i, &v) in m.iter().enumerate() {
                let x = (i + 1) as f64 - mx;
                let y = v - my;
                num += x * y;
                dx += x * x;
                dy += y * y;
            }
            let den = (dx * dy).sqrt();
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs the full 0-1 test on a scalar series.
///
/// The series is centred before projection: subtracting the mean removes
/// the oscillatory term that otherwise dominates the displacement of
/// strongly non-zero-mean signals and washes out weak growth.
pub fn run_test01(series: &[f64], config: &Test01Config) -> Result<Test01Result> {
    let n = series.len();
    if n < 100 {
        return Err(Error::SeriesTooShort { len: n, min: 100 });
    }
    let c_values: Vec<f64> = match &config.c_values {
        Some(v) => {
            if v.is_empty() {
                return Err(Error::InvalidParameter {
                    name: "c_values",
                    value: 0.0,
                    expected: "at least one frequency",
                });
            }
            v.clone()
        }
        None => {
            if config.c_count < 2 {
                return Err(Error::InvalidParameter {
                    name: "c_count",
                    value: config.c_count as f64,
                    expected: "at least 2",
                });
            }
            let step = (C_MAX - C_MIN) / (config.c_count - 1) as f64;
            (0..config.c_count).map(|i| C_MIN + i as f64 * step).collect()
        }
    };
    for &c in &c_values {
        if !(C_MIN..=C_MAX).contains(&c) || !c.is_finite() {
            return Err(Error::InvalidFrequency(c));
        }
    }
    let max_cut = n / 10;
    let n_cut = config.n_cut.unwrap_or(max_cut);
    if n_cut > max_cut {
        return Err(Error::CutoffTooLarge { n_cut, max: max_cut, len: n });
    }
    if n_cut < 10 {
        return Err(Error::InvalidParameter {
            name: "n_cut",
            value: n_cut as f64,
            expected: "at least 10",
        });
    }

    let mean = series.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.iter().map(|x| x - mean).collect();

    let per_c: Vec<(f64, bool)> = c_values
        .par_iter()
        .map(|&c| {
            let (p, q) = translation_variables(&centred, c);
            let m = mean_square_displacement(&p, &q, n_cut).expect("n_cut validated");
            let zero = m.iter().all(|&v| v.abs() <= M_FLOOR);
            (growth_rate(&m, config.estimator), zero)
        })
        .collect();

    let per_c_k: Vec<f64> = per_c.iter().map(|(k, _)| *k).collect();
    let degenerate = per_c.iter().all(|(_, z)| *z);
    let k = if degenerate { 0.0 } else { median(&per_c_k) };

    let mut diag_idx = 0;
    let mut best = f64::INFINITY;
    for (i, &kc) in per_c_k.iter().enumerate() {
        let d = (kc - k).abs();
        if d < best {
            best = d;
            diag_idx = i;
        }
    }
    let diagnostic_c = c_values[diag_idx];
    let (p, q) = translation_variables(&centred, diagnostic_c);
    let m_curve = mean_square_displacement(&p, &q, n_cut)?;

    Ok(Test01Result {
        k,
        c_values,
        per_c_k,
        diagnostic_c,
        pq_path: (p, q),
        m_curve,
        degenerate,
    })
}
