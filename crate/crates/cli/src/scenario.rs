//! Scenario files: a TOML tree describing the claim model, reinsurance
//! terms, interest chain, engine settings and per-command options.
//!
//! ```toml
//! [claims]
//! distribution = "pareto"   # or "exponential"
//! mean = 1.0
//! shape = 1.25              # pareto only
//!
//! [terms]
//! insurer_loading = 0.2
//! reinsurer_loading = 0.25
//! retentions = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
//!
//! [chain]
//! rates = [0.03, 0.05]
//! P = [[0.4, 0.6], [0.3, 0.7]]
//! initial = [0.5, 0.5]      # optional, uniform by default
//! ```
//!
//! Optional sections: `[engine]`, `[grid]`, `[lundberg]`, `[asymptotic]`,
//! `[retention]` and `[simulate]`; see the field defaults below. States are
//! numbered from 1 in scenario files and CSV output.

use std::path::Path;

use ruin_core::{ClaimModel, EngineConfig, InterestChain, ReinsuranceTerms};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub claims: ClaimsSection,
    pub terms: TermsSection,
    pub chain: ChainSection,
    #[serde(default)]
    pub engine: EngineSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub lundberg: LundbergSection,
    #[serde(default)]
    pub asymptotic: AsymptoticSection,
    #[serde(default)]
    pub retention: RetentionSection,
    #[serde(default)]
    pub simulate: SimulateSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Exponential,
    Pareto,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimsSection {
    pub distribution: Distribution,
    #[serde(default = "one")]
    pub mean: f64,
    pub shape: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermsSection {
    pub insurer_loading: f64,
    pub reinsurer_loading: f64,
    #[serde(default = "ruin_core::retention::default_retention_grid")]
    pub retentions: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub rates: Vec<f64>,
    #[serde(rename = "P")]
    pub transition: Vec<Vec<f64>>,
    pub initial: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSection {
    pub grid_step: f64,
    pub nodes_per_panel: usize,
    pub panel_width: f64,
    pub interpolation: String,
}

impl Default for EngineSection {
    fn default() -> Self {
        Self {
            grid_step: EngineConfig::DEFAULT_GRID_STEP,
            nodes_per_panel: EngineConfig::DEFAULT_NODES_PER_PANEL,
            panel_width: EngineConfig::DEFAULT_PANEL_WIDTH,
            interpolation: "linear".into(),
        }
    }
}

/// Cells reported by `ruin-table` and `retention`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub capitals: Vec<f64>,
    pub horizons: Vec<usize>,
    /// 1-based; all states when absent.
    pub states: Option<Vec<usize>>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { capitals: (0..=5).map(f64::from).collect(), horizons: vec![5, 10], states: None }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LundbergSection {
    /// Capitals at which the bound is reported; `[grid] capitals` when absent.
    pub capitals: Option<Vec<f64>>,
    pub allow_negative_rates: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AsymptoticSection {
    pub horizon: usize,
    pub capitals: Vec<f64>,
    /// `[terms] retentions` when absent.
    pub retentions: Option<Vec<f64>>,
}

impl Default for AsymptoticSection {
    fn default() -> Self {
        Self { horizon: 3, capitals: (0..=40).map(|k| k as f64 * 0.5).collect(), retentions: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RetentionSection {
    pub tolerance: f64,
    pub refine: bool,
}

impl Default for RetentionSection {
    fn default() -> Self {
        Self { tolerance: ruin_core::retention::DEFAULT_TOLERANCE, refine: false }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateSection {
    pub paths: u64,
    pub seed: u64,
    pub capital: f64,
    /// 1-based.
    pub state: usize,
    pub retention: f64,
    /// Largest `[grid] horizons` entry when absent.
    pub horizon: Option<usize>,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self { paths: 1_000_000, seed: 0, capital: 0.0, state: 1, retention: 1.0, horizon: None }
    }
}

fn one() -> f64 {
    1.0
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(vec![format!("{}: {e}", path.display())]))?;
        text.parse()
    }

    pub fn model(&self) -> Result<ClaimModel, CliError> {
        let c = &self.claims;
        let model = match c.distribution {
            Distribution::Exponential => {
                if c.shape.is_some() {
                    return Err(CliError::field("claims.shape", "only used by the pareto distribution"));
                }
                ClaimModel::exponential(c.mean)
            }
            Distribution::Pareto => {
                let shape = c.shape.ok_or_else(|| CliError::field("claims.shape", "required for the pareto distribution"))?;
                ClaimModel::pareto(shape, c.mean)
            }
        };
        model.map_err(|e| CliError::field("claims", &e.to_string()))
    }

    /// Terms carrying the loadings; the retention is the first grid entry.
    pub fn terms_template(&self) -> Result<ReinsuranceTerms, CliError> {
        let first = self.terms.retentions.first().copied().unwrap_or(1.0);
        ReinsuranceTerms::new(self.terms.insurer_loading, self.terms.reinsurer_loading, first)
            .map_err(|e| CliError::field("terms", &e.to_string()))
    }

    pub fn terms_at(&self, retention: f64) -> Result<ReinsuranceTerms, CliError> {
        self.terms_template()?
            .with_retention(retention)
            .map_err(|e| CliError::field("terms.retentions", &e.to_string()))
    }

    pub fn chain(&self) -> Result<InterestChain, CliError> {
        let l = self.chain.rates.len();
        let initial = self.chain.initial.clone().unwrap_or_else(|| vec![1.0 / l.max(1) as f64; l]);
        let chain = InterestChain::new_unchecked(self.chain.rates.clone(), self.chain.transition.clone(), initial);
        let report = chain.validate();
        if report.is_ok() {
            Ok(chain)
        } else {
            Err(CliError::Config(report.violations.iter().map(|v| v.to_string()).collect()))
        }
    }

    pub fn engine_config(&self, horizon: usize, capitals: Vec<f64>) -> Result<EngineConfig, CliError> {
        if self.engine.interpolation != "linear" {
            return Err(CliError::field("engine.interpolation", "only \"linear\" is supported"));
        }
        let config = EngineConfig {
            grid_step: self.engine.grid_step,
            nodes_per_panel: self.engine.nodes_per_panel,
            panel_width: self.engine.panel_width,
            ..EngineConfig::new(horizon, capitals)
        };
        config.validate().map_err(|e| match e {
            ruin_core::Error::Invalid(problems) => CliError::Config(problems),
            other => CliError::Config(vec![other.to_string()]),
        })?;
        Ok(config)
    }

    /// 0-based state indices selected by `[grid] states`.
    pub fn states(&self, chain: &InterestChain) -> Result<Vec<usize>, CliError> {
        match &self.grid.states {
            None => Ok((0..chain.len()).collect()),
            Some(states) => states
                .iter()
                .enumerate()
                .map(|(k, &s)| {
                    if s >= 1 && s <= chain.len() {
                        Ok(s - 1)
                    } else {
                        Err(CliError::field(&format!("grid.states[{k}]"), &format!("state {s} outside 1..={}", chain.len())))
                    }
                })
                .collect(),
        }
    }

    pub fn horizons(&self) -> Result<Vec<usize>, CliError> {
        if self.grid.horizons.is_empty() {
            return Err(CliError::field("grid.horizons", "at least one horizon is required"));
        }
        if let Some(k) = self.grid.horizons.iter().position(|n| *n == 0) {
            return Err(CliError::field(&format!("grid.horizons[{k}]"), "horizons start at 1"));
        }
        Ok(self.grid.horizons.clone())
    }

    pub fn retentions(&self) -> Result<Vec<f64>, CliError> {
        check_retentions("terms.retentions", &self.terms.retentions)?;
        Ok(self.terms.retentions.clone())
    }
}

pub(crate) fn check_retentions(field: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::field(field, "at least one retention is required"));
    }
    if let Some(k) = values.iter().position(|b| !(*b > 0.0 && *b <= 1.0)) {
        return Err(CliError::field(&format!("{field}[{k}]"), &format!("{} outside (0, 1]", values[k])));
    }
    if let Some(k) = values.windows(2).position(|w| w[0] >= w[1]) {
        return Err(CliError::field(&format!("{field}[{}]", k + 1), "retentions must be strictly increasing"));
    }
    Ok(())
}

impl std::str::FromStr for Scenario {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(vec![e.to_string().trim_end().to_string()]))
    }
}
