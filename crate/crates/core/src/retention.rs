//! Largest retention level whose ruin probability stays within a tolerance.

use crate::claims::ClaimModel;
use crate::contract::ReinsuranceTerms;
use crate::engine::{compute_ruin_table, EngineConfig};
use crate::error::{Error, Result};
use crate::market::InterestChain;

pub const DEFAULT_TOLERANCE: f64 = 0.05;

/// Width of the bracket left by [`refine_retention`].
pub const REFINE_WIDTH: f64 = 1e-3;

/// `0.2, 0.3, …, 1.0`.
pub fn default_retention_grid() -> Vec<f64> {
    (2..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetentionQuery {
    pub tolerance: f64,
    pub horizon: usize,
    pub capital: f64,
    pub state: usize,
    /// Strictly increasing retentions in `(0, 1]`.
    pub retentions: Vec<f64>,
}

impl RetentionQuery {
    pub fn new(horizon: usize, capital: f64, state: usize) -> Self {
        Self { tolerance: DEFAULT_TOLERANCE, horizon, capital, state, retentions: default_retention_grid() }
    }

    pub fn validate(&self) -> Result<()> {
        validate_grid(self.tolerance, &self.retentions)?;
        if !(self.capital.is_finite() && self.capital >= 0.0) {
            return Err(Error::Domain(format!("capital must be nonnegative, got {}", self.capital)));
        }
        if self.horizon == 0 {
            return Err(Error::Domain("horizon must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn validate_grid(tolerance: f64, retentions: &[f64]) -> Result<()> {
    if !(tolerance > 0.0 && tolerance <= 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1], got {tolerance}")));
    }
    if retentions.is_empty() {
        return Err(Error::Domain("retention grid is empty".into()));
    }
    if retentions.iter().any(|b| !(*b > 0.0 && *b <= 1.0)) {
        return Err(Error::Domain("retentions must lie in (0, 1]".into()));
    }
    if retentions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("retention grid must be strictly increasing".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RetentionOutcome {
    /// `b = 1` qualifies: no reinsurance is needed.
    Full,
    /// Largest qualifying grid retention below one.
    Retained(f64),
    /// No grid retention meets the tolerance.
    Lack,
}

/// The selected retention and the evidence for it.
#[derive(Debug, Clone, PartialEq)]
pub struct RetentionCertificate {
    pub outcome: RetentionOutcome,
    pub tolerance: f64,
    /// `(b, Ψ_n(u, i_s; b))` for every grid retention.
    pub profile: Vec<(f64, f64)>,
}

impl RetentionCertificate {
    /// Index of the selected retention in the profile.
    pub fn selected(&self) -> Option<usize> {
        self.profile.iter().rposition(|(_, psi)| *psi <= self.tolerance)
    }

    pub fn retention(&self) -> Option<f64> {
        self.selected().map(|k| self.profile[k].0)
    }

    /// The selected `b*` meets the tolerance, and the next grid point (if
    /// any) does not; with no selection, every grid point fails.
    pub fn verify(&self) -> bool {
        match self.selected() {
            Some(k) => {
                let ok = self.profile[k].1 <= self.tolerance;
                let next_fails = self.profile.get(k + 1).is_none_or(|(_, psi)| *psi > self.tolerance);
                let outcome_matches = match self.outcome {
                    RetentionOutcome::Full => self.profile[k].0 == 1.0,
                    RetentionOutcome::Retained(b) => b == self.profile[k].0 && b < 1.0,
                    RetentionOutcome::Lack => false,
                };
                ok && next_fails && outcome_matches
            }
            None => self.outcome == RetentionOutcome::Lack && self.profile.iter().all(|(_, p)| *p > self.tolerance),
        }
    }
}

/// Picks the largest `b` with `psi <= tolerance` from a computed profile.
pub fn select_retention(profile: Vec<(f64, f64)>, tolerance: f64) -> RetentionCertificate {
    let selected = profile.iter().rposition(|(_, psi)| *psi <= tolerance);
    let outcome = match selected {
        None => RetentionOutcome::Lack,
        Some(k) if profile[k].0 == 1.0 => RetentionOutcome::Full,
        Some(k) => RetentionOutcome::Retained(profile[k].0),
    };
    RetentionCertificate { outcome, tolerance, profile }
}

fn psi_at(
    retention: f64,
    query: &RetentionQuery,
    model: &ClaimModel,
    terms: &ReinsuranceTerms,
    chain: &InterestChain,
    config: &EngineConfig,
) -> Result<f64> {
    let terms = terms.with_retention(retention)?;
    let config = EngineConfig { horizon: query.horizon, capitals: vec![query.capital], ..config.clone() };
    compute_ruin_table(model, &terms, chain, &config)?.psi(query.horizon, query.state, query.capital)
}

/// Evaluates `Ψ_n(u, i_s; b)` on the query grid and selects `b*`.
/// Loadings are taken from `terms`; its retention is ignored.
pub fn max_retention(
    query: &RetentionQuery,
    model: &ClaimModel,
    terms: &ReinsuranceTerms,
    chain: &InterestChain,
    config: &EngineConfig,
) -> Result<RetentionCertificate> {
    query.validate()?;
    chain.check_state(query.state)?;
    let profile = query
        .retentions
        .iter()
        .map(|&b| psi_at(b, query, model, terms, chain, config).map(|psi| (b, psi)))
        .collect::<Result<Vec<_>>>()?;
    Ok(select_retention(profile, query.tolerance))
}

/// Bisection on `b` between `b*` and the next grid retention down to
/// [`REFINE_WIDTH`], using that `Ψ` increases with `b` once `u >= 1`.
/// Returns `None` for a "lack" outcome.
pub fn refine_retention(
    query: &RetentionQuery,
    certificate: &RetentionCertificate,
    model: &ClaimModel,
    terms: &ReinsuranceTerms,
    chain: &InterestChain,
    config: &EngineConfig,
) -> Result<Option<f64>> {
    if query.capital < 1.0 {
        return Err(Error::Domain(format!(
            "continuous refinement needs capital >= 1 where Ψ is monotone in b, got {}",
            query.capital
        )));
    }
    let Some(k) = certificate.selected() else {
        return Ok(None);
    };
    let Some(&(upper, _)) = certificate.profile.get(k + 1) else {
        return Ok(Some(certificate.profile[k].0));
    };
    let mut lo = certificate.profile[k].0;
    let mut hi = upper;
    while hi - lo > REFINE_WIDTH {
        let mid = 0.5 * (lo + hi);
        if psi_at(mid, query, model, terms, chain, config)? <= query.tolerance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}
