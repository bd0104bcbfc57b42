//! Proportional reinsurance economics: loadings, the retained premium and
//! the net-profit condition.

use crate::claims::check_retention;
use crate::error::{Error, Result};

/// Insurer loading `θ`, reinsurer loading `η` and retention `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReinsuranceTerms {
    insurer_loading: f64,
    reinsurer_loading: f64,
    retention: f64,
}

impl ReinsuranceTerms {
    /// Requires `η >= θ > 0` and `0 < b <= 1`.
    pub fn new(insurer_loading: f64, reinsurer_loading: f64, retention: f64) -> Result<Self> {
        if !(insurer_loading.is_finite() && insurer_loading > 0.0) {
            return Err(Error::Domain(format!("insurer loading must be positive, got {insurer_loading}")));
        }
        if !(reinsurer_loading.is_finite() && reinsurer_loading >= insurer_loading) {
            return Err(Error::Domain(format!(
                "reinsurer loading {reinsurer_loading} must be at least the insurer loading {insurer_loading}"
            )));
        }
        check_retention(retention)?;
        Ok(Self { insurer_loading, reinsurer_loading, retention })
    }

    pub fn with_retention(&self, retention: f64) -> Result<Self> {
        Self::new(self.insurer_loading, self.reinsurer_loading, retention)
    }

    pub fn insurer_loading(&self) -> f64 {
        self.insurer_loading
    }

    pub fn reinsurer_loading(&self) -> f64 {
        self.reinsurer_loading
    }

    pub fn retention(&self) -> f64 {
        self.retention
    }

    /// Premium kept by the insurer per period, `c(b) = ((1+η)b - (η-θ))μ`.
    /// Negative for very small retentions.
    pub fn retained_premium(&self, mean: f64) -> f64 {
        let (theta, eta, b) = (self.insurer_loading, self.reinsurer_loading, self.retention);
        ((1.0 + eta) * b - (eta - theta)) * mean
    }

    /// Premium ceded to the reinsurer, `(1+η)(1-b)μ`.
    pub fn ceded_premium(&self, mean: f64) -> f64 {
        (1.0 + self.reinsurer_loading) * (1.0 - self.retention) * mean
    }

    /// `E[bZ] < c(b)`, i.e. `b > 1 - θ/η`.
    pub fn net_profit_ok(&self, mean: f64) -> bool {
        self.retention * mean < self.retained_premium(mean)
    }

    /// Smallest retention excluded by the net-profit condition, `1 - θ/η`.
    pub fn net_profit_threshold(&self) -> f64 {
        1.0 - self.insurer_loading / self.reinsurer_loading
    }
}
