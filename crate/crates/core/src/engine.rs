//! Finite-horizon ruin probabilities by grid dynamic programming.
//!
//! For retention `b`, premium `c = c(b)` and `A_j(u) = u(1 + i_j) + c`,
//!
//! ```text
//! Ψ_1(u, s)     = Σ_j p_sj V̄(A_j)
//! Ψ_{k+1}(u, s) = Σ_j p_sj { V̄(A_j) + ∫_{low}^{A_j} Ψ_k(A_j - z, j) dV(z) }
//! ```
//!
//! where `low` is the lower end of the retained-loss support. `Ψ_k` is held
//! on a uniform grid in `u` and read back by linear interpolation; the
//! integral is a composite Gauss–Legendre rule against the retained-loss
//! density. The first horizon is known in closed form through `V̄`, so the
//! step to the second horizon integrates it exactly instead of its
//! interpolant.
//!
//! Each horizon's grid reaches exactly as far as the next horizon can
//! query it, so no value is ever extrapolated.

use rayon::prelude::*;

use crate::claims::{ClaimModel, LossDistribution, RetainedLoss};
use crate::contract::ReinsuranceTerms;
use crate::error::{Error, Result};
use crate::market::InterestChain;
use crate::quadrature::CompositeRule;

/// How `Ψ_k` is read between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Linear,
}

/// Numerical settings of the dynamic program.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Largest horizon `n` computed; every horizon `1..=n` is kept.
    pub horizon: usize,
    /// Initial capitals the table must cover.
    pub capitals: Vec<f64>,
    pub grid_step: f64,
    pub nodes_per_panel: usize,
    pub panel_width: f64,
    pub interpolation: Interpolation,
    /// Refuse grids with more points than this in any horizon.
    pub max_grid_points: usize,
}

impl EngineConfig {
    pub const DEFAULT_GRID_STEP: f64 = 0.004;
    pub const DEFAULT_NODES_PER_PANEL: usize = 16;
    pub const DEFAULT_PANEL_WIDTH: f64 = 0.5;
    pub const DEFAULT_MAX_GRID_POINTS: usize = 20_000_000;

    pub fn new(horizon: usize, capitals: Vec<f64>) -> Self {
        Self {
            horizon,
            capitals,
            grid_step: Self::DEFAULT_GRID_STEP,
            nodes_per_panel: Self::DEFAULT_NODES_PER_PANEL,
            panel_width: Self::DEFAULT_PANEL_WIDTH,
            interpolation: Interpolation::Linear,
            max_grid_points: Self::DEFAULT_MAX_GRID_POINTS,
        }
    }

    /// Half the grid step and twice the quadrature nodes.
    pub fn refined(&self) -> Self {
        Self { grid_step: self.grid_step / 2.0, nodes_per_panel: self.nodes_per_panel * 2, ..self.clone() }
    }

    pub fn max_capital(&self) -> f64 {
        self.capitals.iter().copied().fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.horizon == 0 {
            problems.push("engine.horizon: must be at least 1".to_string());
        }
        if !(self.grid_step.is_finite() && self.grid_step > 0.0) {
            problems.push(format!("engine.grid_step: must be positive, got {}", self.grid_step));
        }
        if self.nodes_per_panel < 2 {
            problems.push(format!("engine.nodes_per_panel: must be at least 2, got {}", self.nodes_per_panel));
        }
        if !(self.panel_width.is_finite() && self.panel_width > 0.0) {
            problems.push(format!("engine.panel_width: must be positive, got {}", self.panel_width));
        }
        if self.capitals.is_empty() {
            problems.push("engine.capitals: at least one capital is required".to_string());
        }
        for (k, u) in self.capitals.iter().enumerate() {
            if !(u.is_finite() && *u >= 0.0) {
                problems.push(format!("engine.capitals[{k}]: must be finite and nonnegative, got {u}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(problems))
        }
    }
}

/// Upper end of the arguments reachable from capitals up to `max_capital`
/// within `horizon` periods:
/// `u(1+i)^n + c((1+i)^n - 1)/i`, or `u + nc` at zero interest.
pub fn grid_upper_bound(max_capital: f64, premium: f64, max_rate: f64, horizon: usize) -> f64 {
    let c = premium.max(0.0);
    let growth = (1.0 + max_rate).powi(horizon as i32);
    if max_rate.abs() < 1e-14 {
        max_capital + horizon as f64 * c
    } else {
        max_capital * growth + c * (growth - 1.0) / max_rate
    }
}

/// Linear interpolation of `values` sampled at `k·step`; clamps outside the grid.
pub fn linear_interpolate(values: &[f64], step: f64, x: f64) -> f64 {
    let t = x / step;
    if t <= 0.0 {
        return values[0];
    }
    let i = t.floor() as usize;
    if i + 1 >= values.len() {
        return values[values.len() - 1];
    }
    let frac = t - i as f64;
    values[i] + frac * (values[i + 1] - values[i])
}

/// The previous horizon as seen by one recursion step.
#[derive(Debug, Clone, Copy)]
pub enum Previous<'a> {
    /// Horizon 1, evaluated exactly through the survival function.
    First,
    /// A grid slice `values[state][g]` at spacing `step`.
    Grid { step: f64, values: &'a [Vec<f64>] },
}

/// One model instance of the ruin recursion.
#[derive(Debug, Clone)]
pub struct Recursion<'a> {
    retained: RetainedLoss,
    premium: f64,
    chain: &'a InterestChain,
    rule: CompositeRule,
}

impl<'a> Recursion<'a> {
    pub fn new(model: &ClaimModel, terms: &ReinsuranceTerms, chain: &'a InterestChain, rule: CompositeRule) -> Result<Self> {
        let report = chain.validate();
        if !report.is_ok() {
            return Err(report.into());
        }
        Ok(Self {
            retained: model.retained(terms.retention())?,
            premium: terms.retained_premium(model.mean()),
            chain,
            rule,
        })
    }

    pub fn retained(&self) -> &RetainedLoss {
        &self.retained
    }

    pub fn premium(&self) -> f64 {
        self.premium
    }

    pub fn chain(&self) -> &InterestChain {
        self.chain
    }

    fn argument(&self, u: f64, j: usize) -> f64 {
        u * (1.0 + self.chain.rate(j)) + self.premium
    }

    /// `Ψ_1(u, s) = Σ_j p_sj V̄(u(1+i_j) + c)`.
    pub fn psi_one(&self, u: f64, s: usize) -> f64 {
        self.chain
            .row(s)
            .iter()
            .enumerate()
            .map(|(j, p)| p * self.retained.survival(self.argument(u, j)))
            .sum()
    }

    fn previous_at(&self, prev: &Previous<'_>, x: f64, j: usize) -> f64 {
        match prev {
            Previous::First => self.psi_one(x, j),
            Previous::Grid { step, values } => linear_interpolate(&values[j], *step, x),
        }
    }

    /// `v_j(u) = V̄(A_j) + ∫_{low}^{A_j} Ψ_k(A_j - z, j) dV(z)`, the entry of
    /// the row vector in `Ψ_{k+1}(u) = V_{k+1} P^T`.
    pub fn v_entry(&self, prev: &Previous<'_>, u: f64, j: usize) -> f64 {
        let a = self.argument(u, j);
        let low = self.retained.support_low();
        let tail = self.retained.survival(a);
        if a <= low {
            return tail;
        }
        let integral = self
            .rule
            .integrate(low, a, |z| self.previous_at(prev, a - z, j) * self.retained.density(z));
        tail + integral
    }

    /// Scalar form of one step: `Ψ_{k+1}(u, s)` summed state by state.
    pub fn psi_next(&self, prev: &Previous<'_>, u: f64, s: usize) -> Result<f64> {
        self.check_previous(prev)?;
        self.chain.check_state(s)?;
        Ok(self
            .chain
            .row(s)
            .iter()
            .enumerate()
            .map(|(j, p)| p * self.v_entry(prev, u, j))
            .sum())
    }

    fn check_previous(&self, prev: &Previous<'_>) -> Result<()> {
        if let Previous::Grid { values, .. } = prev {
            if values.len() != self.chain.len() {
                return Err(Error::Domain(format!(
                    "previous horizon has {} states, chain has {}",
                    values.len(),
                    self.chain.len()
                )));
            }
            if values.iter().any(|v| v.is_empty()) {
                return Err(Error::Domain("previous horizon has an empty state vector".into()));
            }
        }
        Ok(())
    }

    /// Matrix form of one step on the grid `g·step`, `g < len`:
    /// the vectors `V_{k+1}(u_g)` are formed once and multiplied by `P^T`.
    /// Returns `values[state][g]`.
    pub fn matrix_step(&self, prev: &Previous<'_>, step: f64, len: usize) -> Result<Vec<Vec<f64>>> {
        self.check_previous(prev)?;
        let l = self.chain.len();
        let p = self.chain.transition();
        let rows: Vec<Vec<f64>> = (0..len)
            .into_par_iter()
            .map(|g| {
                let u = g as f64 * step;
                let v: Vec<f64> = (0..l).map(|j| self.v_entry(prev, u, j)).collect();
                (0..l).map(|s| p[s].iter().zip(&v).map(|(pj, vj)| pj * vj).sum()).collect()
            })
            .collect();
        Ok((0..l).map(|s| rows.iter().map(|r| r[s]).collect()).collect())
    }
}

/// `Ψ_1(u, i_s)` evaluated in closed form from the retained survival function.
pub fn psi_one(u: f64, state: usize, model: &ClaimModel, terms: &ReinsuranceTerms, chain: &InterestChain) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("capital must be nonnegative, got {u}")));
    }
    let rec = Recursion::new(model, terms, chain, CompositeRule::new(2, 1.0))?;
    chain.check_state(state)?;
    Ok(rec.psi_one(u, state))
}

/// One matrix-form step from a horizon-`k` slice of a [`RuinTable`] to
/// horizon `k + 1` on a grid of `len` points.
pub fn ruin_matrix_step(
    prev: &[Vec<f64>],
    step: f64,
    len: usize,
    model: &ClaimModel,
    terms: &ReinsuranceTerms,
    chain: &InterestChain,
    config: &EngineConfig,
) -> Result<Vec<Vec<f64>>> {
    let rule = CompositeRule::new(config.nodes_per_panel, config.panel_width);
    let rec = Recursion::new(model, terms, chain, rule)?;
    rec.matrix_step(&Previous::Grid { step, values: prev }, step, len)
}

/// Ψ_k(u, i_s) for `k = 1..=n`, every state and every grid point.
#[derive(Debug, Clone)]
pub struct RuinTable {
    grid_step: f64,
    /// `horizons[k-1][s][g]`.
    horizons: Vec<Vec<Vec<f64>>>,
    grid_upper_bound: f64,
    premium: f64,
    net_profit_ok: bool,
    model: ClaimModel,
    terms: ReinsuranceTerms,
    chain: InterestChain,
    config: EngineConfig,
}

impl RuinTable {
    pub fn horizon(&self) -> usize {
        self.horizons.len()
    }

    pub fn states(&self) -> usize {
        self.chain.len()
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    /// Number of grid points stored for horizon `k`.
    pub fn grid_len(&self, k: usize) -> usize {
        self.horizons[k - 1][0].len()
    }

    /// Stored values of `Ψ_k(·, i_s)` at `g·grid_step`.
    pub fn values(&self, k: usize, state: usize) -> &[f64] {
        &self.horizons[k - 1][state]
    }

    /// Full horizon-`k` slice, `[state][g]`.
    pub fn slice(&self, k: usize) -> &[Vec<f64>] {
        &self.horizons[k - 1]
    }

    /// `U*` from the targets, premium and largest rate.
    pub fn grid_upper_bound(&self) -> f64 {
        self.grid_upper_bound
    }

    pub fn premium(&self) -> f64 {
        self.premium
    }

    /// False when `b <= 1 - θ/η`; the finite-horizon values are still valid
    /// but ruin is certain in infinite time.
    pub fn net_profit_ok(&self) -> bool {
        self.net_profit_ok
    }

    pub fn model(&self) -> &ClaimModel {
        &self.model
    }

    pub fn terms(&self) -> &ReinsuranceTerms {
        &self.terms
    }

    pub fn chain(&self) -> &InterestChain {
        &self.chain
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// `Ψ_k(u, i_s)` by linear interpolation on the horizon-`k` grid.
    pub fn psi(&self, k: usize, state: usize, u: f64) -> Result<f64> {
        if k == 0 || k > self.horizon() {
            return Err(Error::Domain(format!("horizon {k} outside 1..={}", self.horizon())));
        }
        self.chain.check_state(state)?;
        let values = self.values(k, state);
        let covered = (values.len() - 1) as f64 * self.grid_step;
        if !(u >= 0.0 && u <= covered * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!("capital {u} outside the horizon-{k} grid [0, {covered}]")));
        }
        Ok(linear_interpolate(values, self.grid_step, u))
    }

    /// Checks bounds and monotonicity of every stored value: `Ψ ∈ [0, 1]`,
    /// nonincreasing in `u`, nondecreasing in `k`. `tol` absorbs rounding.
    pub fn check_invariants(&self, tol: f64) -> std::result::Result<(), String> {
        for (k0, slice) in self.horizons.iter().enumerate() {
            let k = k0 + 1;
            for (s, values) in slice.iter().enumerate() {
                for (g, &v) in values.iter().enumerate() {
                    if !(-tol..=1.0 + tol).contains(&v) {
                        return Err(format!("Ψ_{k}(u_{g}, state {s}) = {v} outside [0, 1]"));
                    }
                }
                if let Some(g) = values.windows(2).position(|w| w[1] > w[0] + tol) {
                    return Err(format!(
                        "Ψ_{k}(·, state {s}) increases between u_{g} and u_{} ({} -> {})",
                        g + 1,
                        values[g],
                        values[g + 1]
                    ));
                }
                if k > 1 {
                    let lower = &self.horizons[k0 - 1][s];
                    if let Some(g) = values.iter().zip(lower).position(|(hi, lo)| *hi < *lo - tol) {
                        return Err(format!(
                            "Ψ_{k}(u_{g}, state {s}) = {} below Ψ_{}(u_{g}) = {}",
                            values[g],
                            k - 1,
                            lower[g]
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Grid lengths per horizon: horizon `n` covers the largest target, and each
/// earlier horizon covers every argument `A_j - z` the next one queries.
fn grid_lengths(config: &EngineConfig, premium: f64, max_rate: f64) -> Vec<usize> {
    let h = config.grid_step;
    let n = config.horizon;
    let mut lengths = vec![0usize; n];
    let mut points = (config.max_capital() / h - 1e-9).ceil().max(0.0) as usize;
    lengths[n - 1] = points + 1;
    for k in (0..n - 1).rev() {
        let reach = points as f64 * h * (1.0 + max_rate) + premium.max(0.0);
        points = (reach / h - 1e-9).ceil().max(0.0) as usize + 1;
        lengths[k] = points + 1;
    }
    lengths
}

/// Runs the recursion to `config.horizon` for one retention level.
pub fn compute_ruin_table(
    model: &ClaimModel,
    terms: &ReinsuranceTerms,
    chain: &InterestChain,
    config: &EngineConfig,
) -> Result<RuinTable> {
    config.validate()?;
    let rule = CompositeRule::new(config.nodes_per_panel, config.panel_width);
    let rec = Recursion::new(model, terms, chain, rule)?;
    let premium = rec.premium();
    let max_rate = chain.max_rate().max(0.0);
    let lengths = grid_lengths(config, premium, max_rate);
    let longest = lengths.iter().copied().max().unwrap_or(0);
    if longest > config.max_grid_points {
        return Err(Error::Config(format!(
            "grid needs {longest} points per horizon (limit {}); increase engine.grid_step or lower the capitals",
            config.max_grid_points
        )));
    }
    let h = config.grid_step;
    let l = chain.len();

    let mut horizons: Vec<Vec<Vec<f64>>> = Vec::with_capacity(config.horizon);
    let first: Vec<Vec<f64>> = (0..l)
        .map(|s| (0..lengths[0]).into_par_iter().map(|g| rec.psi_one(g as f64 * h, s)).collect())
        .collect();
    horizons.push(first);
    for k in 1..config.horizon {
        let next = {
            let prev = if k == 1 { Previous::First } else { Previous::Grid { step: h, values: &horizons[k - 1] } };
            rec.matrix_step(&prev, h, lengths[k])?
        };
        horizons.push(next);
    }

    Ok(RuinTable {
        grid_step: h,
        horizons,
        grid_upper_bound: grid_upper_bound(config.max_capital(), premium, max_rate, config.horizon),
        premium,
        net_profit_ok: terms.net_profit_ok(model.mean()),
        model: *model,
        terms: *terms,
        chain: chain.clone(),
        config: config.clone(),
    })
}

/// Closed forms for one state with zero interest and unit-mean exponential
/// claims: `Ψ_1 = e^{-(u+c)/b}` and
/// `Ψ_2 = e^{-(u+c)/b} + ((u+c)/b) e^{-(u+2c)/b}`.
pub fn closed_form_psi_exponential(u: f64, horizon: usize, terms: &ReinsuranceTerms) -> Result<f64> {
    let b = terms.retention();
    let c = terms.retained_premium(1.0);
    if c < 0.0 {
        return Err(Error::Domain(format!("closed forms assume a nonnegative retained premium, got {c}")));
    }
    let first = (-(u + c) / b).exp();
    match horizon {
        1 => Ok(first),
        2 => Ok(first + (u + c) / b * (-(u + 2.0 * c) / b).exp()),
        _ => Err(Error::Unsupported(format!("no closed form for horizon {horizon}; only 1 and 2"))),
    }
}

/// Closed form of `Ψ_1` for one state with zero interest and Pareto claims:
/// `(bβ/(u+c))^α`, or 1 when `u + c < bβ`.
pub fn closed_form_psi1_pareto(u: f64, terms: &ReinsuranceTerms, shape: f64, scale: f64) -> f64 {
    let b = terms.retention();
    let mean = shape * scale / (shape - 1.0);
    let a = u + terms.retained_premium(mean);
    let low = b * scale;
    if a < low {
        1.0
    } else {
        (low / a).powf(shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(b: f64) -> ReinsuranceTerms {
        ReinsuranceTerms::new(0.2, 0.25, b).unwrap()
    }

    fn defaults() -> InterestChain {
        InterestChain::new(vec![0.03, 0.05], vec![vec![0.4, 0.6], vec![0.3, 0.7]], vec![0.5, 0.5]).unwrap()
    }

    fn pareto() -> ClaimModel {
        ClaimModel::pareto(1.25, 1.0).unwrap()
    }

    #[test]
    fn interpolation_clamps_and_blends() {
        let v = [1.0, 0.5, 0.0];
        assert_eq!(linear_interpolate(&v, 0.5, -1.0), 1.0);
        assert_eq!(linear_interpolate(&v, 0.5, 0.25), 0.75);
        assert_eq!(linear_interpolate(&v, 0.5, 1.0), 0.0);
        assert_eq!(linear_interpolate(&v, 0.5, 7.0), 0.0);
    }

    #[test]
    fn upper_bound_at_defaults() {
        // 5·1.05^10 + 1.2(1.05^10 - 1)/0.05
        let g = 1.05f64.powi(10);
        let want = 5.0 * g + 1.2 * (g - 1.0) / 0.05;
        assert!((grid_upper_bound(5.0, 1.2, 0.05, 10) - want).abs() < 1e-12);
        assert!((want - 23.24).abs() < 0.01);
        assert_eq!(grid_upper_bound(5.0, 1.2, 0.0, 10), 17.0);
    }

    #[test]
    fn psi_one_reference_values() {
        let chain = InterestChain::constant(0.0).unwrap();
        let e = ClaimModel::exponential(1.0).unwrap();
        let v = psi_one(0.0, 0, &e, &terms(1.0), &chain).unwrap();
        assert!((v - (-1.2f64).exp()).abs() < 1e-15);
        assert!((v - 0.301194).abs() < 1e-6);

        let p = psi_one(0.0, 0, &pareto(), &terms(1.0), &chain).unwrap();
        assert!((p - (0.2f64 / 1.2).powf(1.25)).abs() < 1e-15);
        assert!((p - 0.1065).abs() < 1e-4);
    }

    #[test]
    fn psi_one_is_one_below_the_support() {
        // c(0.02) = 0.025 - 0.05 < 0 and bβ = 0.004 > 0.
        let chain = defaults();
        let t = terms(0.02);
        assert_eq!(psi_one(0.0, 0, &pareto(), &t, &chain).unwrap(), 1.0);
        assert!(psi_one(-1.0, 0, &pareto(), &t, &chain).is_err());
    }

    #[test]
    fn first_horizon_row_is_exact() {
        let chain = defaults();
        let config = EngineConfig::new(1, vec![5.0]);
        let table = compute_ruin_table(&pareto(), &terms(0.5), &chain, &config).unwrap();
        for s in 0..2 {
            for (g, v) in table.values(1, s).iter().enumerate() {
                let u = g as f64 * table.grid_step();
                assert_eq!(*v, psi_one(u, s, &pareto(), &terms(0.5), &chain).unwrap());
            }
        }
    }

    #[test]
    fn matrix_and_scalar_paths_agree() {
        let chain = defaults();
        let model = ClaimModel::exponential(1.0).unwrap();
        let mut config = EngineConfig::new(3, vec![2.0]);
        config.grid_step = 0.02;
        let table = compute_ruin_table(&model, &terms(0.6), &chain, &config).unwrap();
        let rec = Recursion::new(&model, &terms(0.6), &chain, CompositeRule::new(16, 0.5)).unwrap();
        let prev = Previous::Grid { step: 0.02, values: table.slice(2) };
        let stepped = ruin_matrix_step(table.slice(2), 0.02, table.grid_len(3), &model, &terms(0.6), &chain, &config).unwrap();
        for s in 0..2 {
            for (g, v) in stepped[s].iter().enumerate() {
                let scalar = rec.psi_next(&prev, g as f64 * 0.02, s).unwrap();
                assert!((v - scalar).abs() < 1e-12);
                assert!((v - table.values(3, s)[g]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_step_rejects_dimension_mismatch() {
        let chain = defaults();
        let config = EngineConfig::new(2, vec![1.0]);
        let one_state = vec![vec![0.5; 10]];
        let err = ruin_matrix_step(&one_state, 0.1, 5, &pareto(), &terms(1.0), &chain, &config);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn identity_transition_decouples_states() {
        let coupled = InterestChain::new(vec![0.0, 0.1], vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]).unwrap();
        let mut config = EngineConfig::new(3, vec![3.0]);
        config.grid_step = 0.02;
        let model = ClaimModel::exponential(1.0).unwrap();
        let both = compute_ruin_table(&model, &terms(0.7), &coupled, &config).unwrap();
        for (s, rate) in [(0usize, 0.0), (1usize, 0.1)] {
            let alone = compute_ruin_table(&model, &terms(0.7), &InterestChain::constant(rate).unwrap(), &config).unwrap();
            for k in 1..=3 {
                for u in [0.0, 1.0, 3.0] {
                    let a = both.psi(k, s, u).unwrap();
                    let b = alone.psi(k, 0, u).unwrap();
                    assert!((a - b).abs() < 1e-14, "k={k} s={s} u={u}");
                }
            }
        }
    }

    #[test]
    fn second_horizon_matches_closed_form() {
        let chain = InterestChain::constant(0.0).unwrap();
        let model = ClaimModel::exponential(1.0).unwrap();
        let config = EngineConfig::new(2, vec![5.0]);
        let t = terms(1.0);
        let table = compute_ruin_table(&model, &t, &chain, &config).unwrap();
        let v = table.psi(2, 0, 0.0).unwrap();
        let want = (-1.2f64).exp() + 1.2 * (-2.4f64).exp();
        assert!((want - 0.410056).abs() < 1e-6);
        assert!((v - want).abs() < 1e-9, "{v} vs {want}");
    }

    #[test]
    fn closed_forms_edge_cases() {
        let t = terms(1.0);
        assert!(closed_form_psi_exponential(200.0, 1, &t).unwrap() < 1e-80);
        assert!(closed_form_psi_exponential(200.0, 2, &t).unwrap() < 1e-80);
        assert!(matches!(closed_form_psi_exponential(0.0, 3, &t), Err(Error::Unsupported(_))));
        assert_eq!(closed_form_psi1_pareto(0.0, &terms(0.02), 1.25, 0.2), 1.0);
        let v = closed_form_psi1_pareto(10.0, &terms(0.2), 1.25, 0.2);
        assert!((v - (0.04f64 / 10.2).powf(1.25)).abs() < 1e-15);
        let chain = InterestChain::constant(0.0).unwrap();
        let direct = psi_one(10.0, 0, &pareto(), &terms(0.2), &chain).unwrap();
        assert!((v - direct).abs() < 1e-15);
    }

    #[test]
    fn config_errors_precede_computation() {
        let chain = defaults();
        let mut config = EngineConfig::new(2, vec![5.0]);
        config.grid_step = 1e-7;
        config.max_grid_points = 1000;
        assert!(matches!(compute_ruin_table(&pareto(), &terms(1.0), &chain, &config), Err(Error::Config(_))));

        let bad = EngineConfig::new(0, vec![-1.0]);
        match compute_ruin_table(&pareto(), &terms(1.0), &chain, &bad) {
            Err(Error::Invalid(problems)) => assert_eq!(problems.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn table_lookup_errors() {
        let chain = defaults();
        let mut config = EngineConfig::new(2, vec![1.0]);
        config.grid_step = 0.05;
        let table = compute_ruin_table(&pareto(), &terms(1.0), &chain, &config).unwrap();
        assert!(table.psi(0, 0, 0.5).is_err());
        assert!(table.psi(3, 0, 0.5).is_err());
        assert!(table.psi(2, 2, 0.5).is_err());
        assert!(table.psi(2, 0, 100.0).is_err());
        assert!(table.psi(2, 0, 1.0).is_ok());
    }

    #[test]
    fn flags_net_profit_violation() {
        let chain = defaults();
        let mut config = EngineConfig::new(2, vec![1.0]);
        config.grid_step = 0.05;
        let table = compute_ruin_table(&pareto(), &terms(0.2), &chain, &config).unwrap();
        assert!(!table.net_profit_ok());
        let table = compute_ruin_table(&pareto(), &terms(0.3), &chain, &config).unwrap();
        assert!(table.net_profit_ok());
    }

    #[test]
    fn invariants_hold_on_coarse_tables() {
        let chain = defaults();
        for model in [ClaimModel::exponential(1.0).unwrap(), pareto()] {
            for b in [0.2, 0.5, 1.0] {
                let mut config = EngineConfig::new(4, vec![5.0]);
                config.grid_step = 0.02;
                let table = compute_ruin_table(&model, &terms(b), &chain, &config).unwrap();
                table.check_invariants(1e-12).unwrap();
            }
        }
    }
}
