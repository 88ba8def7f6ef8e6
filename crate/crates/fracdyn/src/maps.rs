//! Map families that can drive the fractional recurrence.

use crate::error::{Error, Result};

/// Scale constant of the Gompertz-like family. Equal to 27/4, which places
/// the maximum of `6.75 * (x^(2/3) - x)` on [0, 1] exactly at height 1.
pub const GOMPERTZ_SCALE: f64 = 6.75;

/// Canonical exponent for the Gompertz-like family.
pub const CANONICAL_P: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFamily {
    /// `f(x) = 6.75 * r * (x^p - x)`, defined for x >= 0.
    GompertzLike,
    /// `f(x) = r * x * (1 - x)`.
    Logistic,
}

impl MapFamily {
    pub fn name(self) -> &'static str {
        match self {
            MapFamily::GompertzLike => "gompertz",
            MapFamily::Logistic => "logistic",
        }
    }
}

/// A validated map choice: family plus its parameters.
///
/// `p` is only meaningful for [`MapFamily::GompertzLike`] and is stored as
/// the canonical 2/3 for the logistic family.
#[derive(Debug, Clone, Copy)]
pub struct MapSpec {
    pub family: MapFamily,
    pub r: f64,
    pub p: f64,
}

impl MapSpec {
    /// Gompertz-like map with growth `r` in [0, 1] and exponent `p` in
    /// [0.66, 0.765].
    pub fn gompertz(r: f64, p: f64) -> Result<Self> {
        let spec = Self { family: MapFamily::GompertzLike, r, p };
        spec.validate()?;
        Ok(spec)
    }

    /// Gompertz-like map at the canonical exponent p = 2/3.
    pub fn gompertz_canonical(r: f64) -> Result<Self> {
        Self::gompertz(r, CANONICAL_P)
    }

    /// Logistic map with `r` in [0, 4].
    pub fn logistic(r: f64) -> Result<Self> {
        let spec = Self { family: MapFamily::Logistic, r, p: CANONICAL_P };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() || !self.p.is_finite() {
            return Err(Error::InvalidParameter {
                name: "r/p",
                value: if self.r.is_finite() { self.p } else { self.r },
                expected: "finite",
            });
        }
        match self.family {
            MapFamily::GompertzLike => {
                if !(0.0..=1.0).contains(&self.r) {
                    return Err(Error::InvalidParameter {
                        name: "r",
                        value: self.r,
                        expected: "[0, 1] for the gompertz family",
                    });
                }
                if !(0.66..=0.765).contains(&self.p) {
                    return Err(Error::InvalidParameter {
                        name: "p",
                        value: self.p,
                        expected: "[0.66, 0.765]",
                    });
                }
            }
            MapFamily::Logistic => {
                if !(0.0..=4.0).contains(&self.r) {
                    return Err(Error::InvalidParameter {
                        name: "r",
                        value: self.r,
                        expected: "[0, 4] for the logistic family",
                    });
                }
            }
        }
        Ok(())
    }

    /// Evaluates the map. The Gompertz-like branch rejects negative x,
    /// where the fractional power is undefined.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.family {
            MapFamily::GompertzLike => {
                if x < 0.0 {
                    return Err(Error::MapDomain { x });
                }
                Ok(GOMPERTZ_SCALE * self.r * (x.powf(self.p) - x))
            }
            MapFamily::Logistic => Ok(self.r * x * (1.0 - x)),
        }
    }

    /// Derivative of the map with respect to x.
    ///
    /// For the Gompertz-like family this is `6.75 r (p x^(p-1) - 1)`, which
    /// is singular at x = 0; callers that walk tangent dynamics clamp x away
    /// from zero before asking for it.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        match self.family {
            MapFamily::GompertzLike => {
                if x <= 0.0 {
                    return Err(Error::MapDomain { x });
                }
                Ok(GOMPERTZ_SCALE * self.r * (self.p * x.powf(self.p - 1.0) - 1.0))
            }
            MapFamily::Logistic => Ok(self.r * (1.0 - 2.0 * x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gompertz_vanishes_at_zero_and_one() {
        let m = MapSpec::gompertz_canonical(0.73).unwrap();
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert!(m.eval(1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gompertz_peak_is_exactly_one_at_full_growth() {
        // With p = 2/3 the maximum of x^p - x sits at x = (2/3)^3 = 8/27 and
        // the 27/4 prefactor normalises the peak value to 1.
        let m = MapSpec::gompertz_canonical(1.0).unwrap();
        let x_star = 8.0 / 27.0;
        assert!((m.eval(x_star).unwrap() - 1.0).abs() < 1e-12);
        assert!(m.derivative(x_star).unwrap().abs() < 1e-10);
        for x in [0.1, 0.2, 0.29, 0.3, 0.5, 0.9] {
            assert!(m.eval(x).unwrap() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn gompertz_positive_between_zero_and_one() {
        let m = MapSpec::gompertz(0.4, 0.7).unwrap();
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!(m.eval(x).unwrap() > 0.0, "f({x}) not positive");
        }
        // and negative beyond the fixed point at 1
        assert!(m.eval(1.2).unwrap() < 0.0);
    }

    #[test]
    fn gompertz_rejects_negative_x() {
        let m = MapSpec::gompertz_canonical(0.5).unwrap();
        assert!(m.eval(-0.001).is_err());
        assert!(m.derivative(-0.001).is_err());
        assert!(m.derivative(0.0).is_err());
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(MapSpec::gompertz(1.01, CANONICAL_P).is_err());
        assert!(MapSpec::gompertz(-0.1, CANONICAL_P).is_err());
        assert!(MapSpec::gompertz(0.5, 0.65).is_err());
        assert!(MapSpec::gompertz(0.5, 0.77).is_err());
        assert!(MapSpec::gompertz(0.5, f64::NAN).is_err());
        assert!(MapSpec::logistic(4.01).is_err());
        assert!(MapSpec::logistic(-0.01).is_err());
        assert!(MapSpec::logistic(4.0).is_ok());
    }

    #[test]
    fn logistic_matches_closed_form() {
        let m = MapSpec::logistic(3.9).unwrap();
        assert!((m.eval(0.5).unwrap() - 0.975).abs() < 1e-15);
        assert_eq!(m.derivative(0.5).unwrap(), 0.0);
        assert!((m.derivative(0.25).unwrap() - 1.95).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-7;
        for (m, lo) in [
            (MapSpec::gompertz_canonical(0.78).unwrap(), 0.05),
            (MapSpec::gompertz(0.3, 0.75).unwrap(), 0.05),
            (MapSpec::logistic(3.5).unwrap(), -0.5),
        ] {
            for i in 0..50 {
                let x = lo + i as f64 * 0.025;
                let fd = (m.eval(x + h).unwrap() - m.eval(x - h).unwrap()) / (2.0 * h);
                let an = m.derivative(x).unwrap();
                let scale = an.abs().max(1.0);
                assert!(
                    (fd - an).abs() / scale < 1e-6,
                    "family {:?} at x = {x}: fd {fd} vs {an}",
                    m.family
                );
            }
        }
    }
}
