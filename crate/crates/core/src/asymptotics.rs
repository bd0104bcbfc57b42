//! Large-capital approximation for regularly varying claims.
//!
//! For a retained loss with tail index `α`, `Ψ_n(u, i_s) ~ c_n(i_s) V̄(u)` as
//! `u → ∞`, where `c_0 ≡ 0` and
//! `c_n(i_s) = Σ_j p_sj (1 + c_{n-1}(i_j)) (1 + i_j)^{-α}`.

use crate::claims::{LossDistribution, RetainedLoss};
use crate::engine::RuinTable;
use crate::error::{Error, Result};
use crate::market::InterestChain;

/// `c_k(i_s)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoefficients {
    tail_index: f64,
    /// `values[k][s]`, with `values[0]` all zero.
    values: Vec<Vec<f64>>,
}

impl AsymptoticCoefficients {
    pub fn tail_index(&self) -> f64 {
        self.tail_index
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize, state: usize) -> f64 {
        self.values[k][state]
    }

    pub fn at_horizon(&self, k: usize) -> &[f64] {
        &self.values[k]
    }
}

/// Runs the coefficient recursion to horizon `n`.
pub fn coefficients(chain: &InterestChain, tail_index: f64, n: usize) -> Result<AsymptoticCoefficients> {
    let report = chain.validate();
    if !report.is_ok() {
        return Err(report.into());
    }
    if !(tail_index.is_finite() && tail_index > 0.0) {
        return Err(Error::Domain(format!("tail index must be positive, got {tail_index}")));
    }
    if let Some(s) = chain.rates().iter().position(|i| 1.0 + i <= 0.0) {
        return Err(Error::Domain(format!("discount factor undefined: 1 + i_{s} <= 0")));
    }
    let l = chain.len();
    let discount: Vec<f64> = chain.rates().iter().map(|i| (1.0 + i).powf(-tail_index)).collect();
    let mut values = vec![vec![0.0; l]];
    for k in 1..=n {
        let prev = &values[k - 1];
        let next: Vec<f64> = (0..l)
            .map(|s| {
                chain
                    .row(s)
                    .iter()
                    .enumerate()
                    .map(|(j, p)| p * (1.0 + prev[j]) * discount[j])
                    .sum()
            })
            .collect();
        values.push(next);
    }
    Ok(AsymptoticCoefficients { tail_index, values })
}

/// `c_n(i_s) V̄(u)` for a regularly varying retained loss.
pub fn asymptotic_psi(u: f64, state: usize, coeffs: &AsymptoticCoefficients, retained: &RetainedLoss) -> Result<f64> {
    if retained.tail_index().is_none() {
        return Err(Error::Unsupported(format!(
            "the large-capital approximation needs a regularly varying tail, {} claims are light-tailed",
            retained.base().name()
        )));
    }
    if state >= coeffs.at_horizon(0).len() {
        return Err(Error::Domain(format!("state index {state} out of range")));
    }
    Ok(coeffs.get(coeffs.horizon(), state) * retained.survival(u))
}

/// One point of the ratio diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub capital: f64,
    pub psi: f64,
    pub approx: f64,
    /// `psi / approx`, `None` when the approximation vanishes.
    pub ratio: Option<f64>,
}

/// `Ψ_n(u, i_s) / (c_n(i_s) V̄(u))` at each capital, reading `Ψ_n` from the
/// engine table at horizon `coeffs.horizon()`.
pub fn convergence_ratio(
    table: &RuinTable,
    coeffs: &AsymptoticCoefficients,
    retained: &RetainedLoss,
    capitals: &[f64],
    state: usize,
) -> Result<Vec<RatioPoint>> {
    let n = coeffs.horizon();
    capitals
        .iter()
        .map(|&u| {
            let psi = table.psi(n, state, u)?;
            let approx = asymptotic_psi(u, state, coeffs, retained)?;
            let ratio = (approx > 0.0).then(|| psi / approx);
            Ok(RatioPoint { capital: u, psi, approx, ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::claims::ClaimModel;

    fn defaults() -> InterestChain {
        InterestChain::new(vec![0.03, 0.05], vec![vec![0.4, 0.6], vec![0.3, 0.7]], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn starts_at_zero() {
        let c = coefficients(&defaults(), 1.25, 5).unwrap();
        assert_eq!(c.at_horizon(0), &[0.0, 0.0]);
    }

    #[test]
    fn first_coefficient_at_defaults() {
        let c = coefficients(&defaults(), 1.25, 1).unwrap();
        let hand = 0.4 * 1.03f64.powf(-1.25) + 0.6 * 1.05f64.powf(-1.25);
        assert!((c.get(1, 0) - hand).abs() < 1e-15);
        assert!((c.get(1, 0) - 0.9500).abs() < 1e-4);
    }

    #[test]
    fn zero_rate_gives_horizon() {
        let c = coefficients(&InterestChain::constant(0.0).unwrap(), 1.25, 12).unwrap();
        for k in 0..=12 {
            assert_eq!(c.get(k, 0), k as f64);
        }
    }

    #[test]
    fn positive_and_increasing() {
        let c = coefficients(&defaults(), 1.25, 10).unwrap();
        for k in 1..=10 {
            for s in 0..2 {
                assert!(c.get(k, s) > c.get(k - 1, s));
            }
        }
    }

    #[test]
    fn reverse_accumulation_agrees() {
        let chain = defaults();
        let c = coefficients(&chain, 1.25, 10).unwrap();
        let mut prev = vec![0.0; 2];
        for _ in 0..10 {
            prev = (0..2)
                .map(|s| {
                    (0..2).rev().map(|j| chain.row(s)[j] * (1.0 + prev[j]) * (1.0 + chain.rate(j)).powf(-1.25)).sum()
                })
                .collect();
        }
        for s in 0..2 {
            assert!((prev[s] - c.get(10, s)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(coefficients(&defaults(), 0.0, 3).is_err());
        let broken = InterestChain::new_unchecked(vec![-1.0], vec![vec![1.0]], vec![1.0]);
        assert!(coefficients(&broken, 1.25, 3).is_err());
    }

    #[test]
    fn approximation_is_a_power_law() {
        let chain = defaults();
        let c = coefficients(&chain, 1.25, 3).unwrap();
        let retained = ClaimModel::pareto(1.25, 1.0).unwrap().retained(1.0).unwrap();
        let at_edge = asymptotic_psi(0.2, 0, &c, &retained).unwrap();
        assert_eq!(at_edge, c.get(3, 0));
        let a = asymptotic_psi(20.0, 1, &c, &retained).unwrap();
        assert!((a - c.get(3, 1) * (0.2f64 / 20.0).powf(1.25)).abs() < 1e-16);
        let doubled = asymptotic_psi(40.0, 1, &c, &retained).unwrap();
        assert!((a / doubled - 2f64.powf(1.25)).abs() < 1e-12);
    }

    #[test]
    fn single_state_closed_form() {
        let c = coefficients(&InterestChain::constant(0.0).unwrap(), 1.25, 4).unwrap();
        let retained = ClaimModel::pareto(1.25, 1.0).unwrap().retained(0.6).unwrap();
        let v = asymptotic_psi(7.0, 0, &c, &retained).unwrap();
        assert!((v - 4.0 * (0.6f64 * 0.2 / 7.0).powf(1.25)).abs() < 1e-15);
    }

    #[test]
    fn light_tails_are_unsupported() {
        let c = coefficients(&defaults(), 1.25, 3).unwrap();
        let retained = ClaimModel::exponential(1.0).unwrap().retained(1.0).unwrap();
        assert!(matches!(asymptotic_psi(5.0, 0, &c, &retained), Err(Error::Unsupported(_))));
    }
}
