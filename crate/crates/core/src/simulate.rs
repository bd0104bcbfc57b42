//! Monte Carlo simulation of the surplus process
//! `U_k = U_{k-1}(1 + I_k) + c(b) - b Z_k`.
//!
//! Paths are split into fixed blocks of [`BLOCK_SIZE`]; block `k` draws from
//! the ChaCha8 stream `k` of the master seed. Ruin counts are integers, so
//! the estimates do not depend on how blocks are scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use rayon::prelude::*;

use crate::claims::{ClaimModel, LossDistribution};
use crate::contract::ReinsuranceTerms;
use crate::error::{Error, Result};
use crate::market::InterestChain;

pub const BLOCK_SIZE: u64 = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub paths: u64,
    pub horizon: usize,
    pub capital: f64,
    pub state: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    /// Cumulative ruin frequency by horizon `1..=n` (index 0 is horizon 1).
    pub estimates: Vec<f64>,
    /// `sqrt(p(1-p)/paths)` per horizon.
    pub std_errors: Vec<f64>,
    pub paths: u64,
    pub seed: u64,
}

impl SimulationResult {
    pub fn estimate(&self, horizon: usize) -> f64 {
        self.estimates[horizon - 1]
    }

    pub fn std_error(&self, horizon: usize) -> f64 {
        self.std_errors[horizon - 1]
    }
}

/// Simulates `spec.paths` surplus paths from `U_0 = u`, `I_0 = i_s`.
pub fn run(spec: &SimulationSpec, model: &ClaimModel, terms: &ReinsuranceTerms, chain: &InterestChain) -> Result<SimulationResult> {
    if spec.paths == 0 {
        return Err(Error::Domain("at least one path is required".into()));
    }
    if spec.horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    if !(spec.capital.is_finite() && spec.capital >= 0.0) {
        return Err(Error::Domain(format!("capital must be finite and nonnegative, got {}", spec.capital)));
    }
    let report = chain.validate();
    if !report.is_ok() {
        return Err(report.into());
    }
    chain.check_state(spec.state)?;

    let retained = model.retained(terms.retention())?;
    let premium = terms.retained_premium(model.mean());
    let n = spec.horizon;
    let blocks = spec.paths.div_ceil(BLOCK_SIZE);

    let first_ruin = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(block);
            let start = block * BLOCK_SIZE;
            let count = BLOCK_SIZE.min(spec.paths - start);
            let mut hits = vec![0u64; n];
            for _ in 0..count {
                let mut surplus = spec.capital;
                let mut state = spec.state;
                for slot in hits.iter_mut() {
                    state = chain.step_from_uniform(state, rng.random::<f64>());
                    let claim = retained.quantile(rng.random::<f64>());
                    surplus = surplus * (1.0 + chain.rate(state)) + premium - claim;
                    if surplus < 0.0 {
                        *slot += 1;
                        break;
                    }
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let paths = spec.paths as f64;
    let mut cumulative = 0u64;
    let mut estimates = Vec::with_capacity(n);
    let mut std_errors = Vec::with_capacity(n);
    for hits in first_ruin {
        cumulative += hits;
        let p = cumulative as f64 / paths;
        estimates.push(p);
        std_errors.push((p * (1.0 - p) / paths).sqrt());
    }
    Ok(SimulationResult { estimates, std_errors, paths: spec.paths, seed: spec.seed })
}
