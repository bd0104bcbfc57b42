//! Claim-size distributions and the proportional-retention transform.
//!
//! Two families are provided: the light-tailed exponential and the
//! regularly varying Pareto. Both are scale families, so the retained part
//! `b·Z` of a claim is represented lazily by [`RetainedLoss`] instead of a
//! reparameterised copy.

use rand::Rng;

use crate::error::{Error, Result};

/// Common interface of loss distributions used by the engine and the
/// simulator. New claim families plug in here.
pub trait LossDistribution {
    /// `P(X <= x)`.
    fn cdf(&self, x: f64) -> f64;

    /// `P(X > x)`, computed directly so that far tails keep relative accuracy.
    fn survival(&self, x: f64) -> f64;

    /// Lebesgue density; zero outside the support.
    fn density(&self, x: f64) -> f64;

    fn mean(&self) -> f64;

    /// Lower end of the support.
    fn support_low(&self) -> f64;

    /// Inverse cdf on `[0, 1)`.
    fn quantile(&self, p: f64) -> f64;

    /// `ln E[e^{zX}]`, or an error when the moment does not exist.
    fn log_mgf(&self, z: f64) -> Result<f64>;

    /// Index `α` of a regularly varying tail, `None` for light tails.
    fn tail_index(&self) -> Option<f64>;

    /// Inverse-cdf draw.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64
    where
        Self: Sized,
    {
        self.quantile(rng.random::<f64>())
    }
}

/// Claim-size distribution of the aggregate loss per period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClaimModel {
    /// `W(x) = 1 - exp(-x/μ)`, `x >= 0`.
    Exponential { mean: f64 },
    /// `W(x) = 1 - (β/x)^α`, `x >= β`.
    Pareto { shape: f64, scale: f64 },
}

impl ClaimModel {
    pub fn exponential(mean: f64) -> Result<Self> {
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::Domain(format!("exponential mean must be positive, got {mean}")));
        }
        Ok(ClaimModel::Exponential { mean })
    }

    /// Pareto law with tail index `shape` and the given mean; the scale is
    /// `β = μ(α-1)/α`.
    pub fn pareto(shape: f64, mean: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 1.0) {
            return Err(Error::Domain(format!("pareto shape must exceed 1 for a finite mean, got {shape}")));
        }
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::Domain(format!("pareto mean must be positive, got {mean}")));
        }
        Ok(ClaimModel::Pareto { shape, scale: mean * (shape - 1.0) / shape })
    }

    pub fn pareto_with_scale(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 1.0) {
            return Err(Error::Domain(format!("pareto shape must exceed 1 for a finite mean, got {shape}")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Domain(format!("pareto scale must be positive, got {scale}")));
        }
        Ok(ClaimModel::Pareto { shape, scale })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClaimModel::Exponential { .. } => "exponential",
            ClaimModel::Pareto { .. } => "pareto",
        }
    }

    /// The loss kept by the insurer under proportional reinsurance with
    /// retention `b`.
    pub fn retained(&self, retention: f64) -> Result<RetainedLoss> {
        RetainedLoss::new(*self, retention)
    }

    /// Moment generating function of the retained loss `b·Z`,
    /// `M(z) = 1/(1 - bμz)` for exponential claims.
    pub fn mgf(&self, retention: f64, z: f64) -> Result<f64> {
        match *self {
            ClaimModel::Exponential { mean } => {
                let scale = retention * mean;
                if z * scale >= 1.0 {
                    return Err(Error::Divergent(format!(
                        "mgf of the retained exponential loss requires z < {}, got {z}",
                        1.0 / scale
                    )));
                }
                Ok(1.0 / (1.0 - scale * z))
            }
            ClaimModel::Pareto { .. } => {
                Err(Error::Unsupported("pareto claims have no moment generating function".into()))
            }
        }
    }
}

impl LossDistribution for ClaimModel {
    fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    fn survival(&self, x: f64) -> f64 {
        match *self {
            ClaimModel::Exponential { mean } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x / mean).exp()
                }
            }
            ClaimModel::Pareto { shape, scale } => {
                if x <= scale {
                    1.0
                } else {
                    (scale / x).powf(shape)
                }
            }
        }
    }

    fn density(&self, x: f64) -> f64 {
        match *self {
            ClaimModel::Exponential { mean } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x / mean).exp() / mean
                }
            }
            ClaimModel::Pareto { shape, scale } => {
                if x < scale {
                    0.0
                } else {
                    shape / x * (scale / x).powf(shape)
                }
            }
        }
    }

    fn mean(&self) -> f64 {
        match *self {
            ClaimModel::Exponential { mean } => mean,
            ClaimModel::Pareto { shape, scale } => shape * scale / (shape - 1.0),
        }
    }

    fn support_low(&self) -> f64 {
        match *self {
            ClaimModel::Exponential { .. } => 0.0,
            ClaimModel::Pareto { scale, .. } => scale,
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        match *self {
            ClaimModel::Exponential { mean } => -mean * (-p).ln_1p(),
            ClaimModel::Pareto { shape, scale } => scale * (1.0 - p).powf(-1.0 / shape),
        }
    }

    fn log_mgf(&self, z: f64) -> Result<f64> {
        self.mgf(1.0, z).map(f64::ln)
    }

    fn tail_index(&self) -> Option<f64> {
        match *self {
            ClaimModel::Exponential { .. } => None,
            ClaimModel::Pareto { shape, .. } => Some(shape),
        }
    }
}

/// Retained part `h(Z, b) = bZ` of a claim; `V(z) = W(z/b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetainedLoss {
    base: ClaimModel,
    retention: f64,
}

impl RetainedLoss {
    pub fn new(base: ClaimModel, retention: f64) -> Result<Self> {
        check_retention(retention)?;
        Ok(Self { base, retention })
    }

    pub fn base(&self) -> &ClaimModel {
        &self.base
    }

    pub fn retention(&self) -> f64 {
        self.retention
    }
}

pub(crate) fn check_retention(b: f64) -> Result<()> {
    if b > 0.0 && b <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("retention must lie in (0, 1], got {b}")))
    }
}

impl LossDistribution for RetainedLoss {
    fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    fn survival(&self, x: f64) -> f64 {
        self.base.survival(x / self.retention)
    }

    fn density(&self, x: f64) -> f64 {
        self.base.density(x / self.retention) / self.retention
    }

    fn mean(&self) -> f64 {
        self.retention * self.base.mean()
    }

    fn support_low(&self) -> f64 {
        self.retention * self.base.support_low()
    }

    fn quantile(&self, p: f64) -> f64 {
        self.retention * self.base.quantile(p)
    }

    fn log_mgf(&self, z: f64) -> Result<f64> {
        self.base.mgf(self.retention, z).map(f64::ln)
    }

    fn tail_index(&self) -> Option<f64> {
        self.base.tail_index()
    }
}
