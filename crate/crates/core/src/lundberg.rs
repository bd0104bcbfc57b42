//! Adjustment coefficient and the Lundberg-type upper bound.
//!
//! `R(b)` is the positive root of `E e^{R·bZ} = e^{R·c(b)}`. With
//! `ξ(b) = sup_{x >= c(b)} e^{Rx} V̄(x) / ∫_x^∞ e^{Rz} dV(z)` the bound reads
//! `Ψ_n(u, i_s) <= ξ(b) Σ_t p_st e^{-R u (1 + i_t)}` for every `n`.

use crate::claims::{ClaimModel, LossDistribution, RetainedLoss};
use crate::contract::ReinsuranceTerms;
use crate::error::{Error, Result};
use crate::market::InterestChain;
use crate::quadrature::GaussLegendre;

/// Residual tolerance `|E e^{R bZ} - e^{R c}|` accepted from the solver.
pub const RESIDUAL_TOL: f64 = 1e-10;

const SCAN_STEPS: i32 = 64;
const MAX_ITERATIONS: usize = 400;

/// Solved adjustment coefficient with its `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LundbergResult {
    /// `R(b)`.
    pub adjustment: f64,
    /// `ξ(b) = 1 - bμR` for exponential claims.
    pub xi: f64,
    pub retention: f64,
    pub premium: f64,
    /// Mean of the unreinsured claim.
    pub mean: f64,
    /// `|E e^{R bZ} - e^{R c}|` at the returned root.
    pub residual: f64,
    pub model: ClaimModel,
}

/// Bound value together with a flag for values above one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LundbergBound {
    pub value: f64,
    pub exceeds_one: bool,
}

/// Right end of the convergence interval of the retained-loss mgf.
fn mgf_pole(retained: &RetainedLoss) -> Result<f64> {
    match *retained.base() {
        ClaimModel::Exponential { mean } => Ok(1.0 / (retained.retention() * mean)),
        ClaimModel::Pareto { .. } => Err(Error::NoAdjustmentCoefficient("pareto")),
    }
}

/// Solves `ln M(R) - R c(b) = 0` for the positive root.
///
/// The function is convex with a zero at the origin and a negative slope
/// there under the net-profit condition, so the positive root is its only
/// interior sign change. The interval `(0, pole)` is scanned on points
/// approaching the pole geometrically, then the bracket is refined by
/// alternating false-position and bisection steps.
pub fn solve_adjustment(model: &ClaimModel, terms: &ReinsuranceTerms) -> Result<LundbergResult> {
    let retained = model.retained(terms.retention())?;
    if model.tail_index().is_some() {
        return Err(Error::NoAdjustmentCoefficient(model.name()));
    }
    let mean = model.mean();
    let premium = terms.retained_premium(mean);
    if !terms.net_profit_ok(mean) {
        return Err(Error::NoPositiveRoot { mean: retained.mean(), premium });
    }
    let pole = mgf_pole(&retained)?;
    let f = |r: f64| retained.log_mgf(r).map(|m| m - r * premium);

    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=SCAN_STEPS {
        let r = pole * (1.0 - 0.5f64.powi(k));
        if f(r)? > 0.0 {
            hi = Some(r);
            break;
        }
        lo = r;
    }
    let mut hi = hi.ok_or_else(|| Error::Domain("no sign change found below the mgf pole".into()))?;

    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    for it in 0..MAX_ITERATIONS {
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let mid = if it % 2 == 0 && f_hi > f_lo {
            let cand = lo - f_lo * (hi - lo) / (f_hi - f_lo);
            if cand > lo && cand < hi {
                cand
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        let fm = f(mid)?;
        if fm > 0.0 {
            hi = mid;
            f_hi = fm;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    let adjustment = if lo == 0.0 || f_hi.abs() < f_lo.abs() { hi } else { lo };
    let mgf = retained.log_mgf(adjustment)?.exp();
    let residual = (mgf - (adjustment * premium).exp()).abs();
    if residual >= RESIDUAL_TOL {
        return Err(Error::Domain(format!("root refinement stalled with residual {residual:e}")));
    }
    Ok(LundbergResult {
        adjustment,
        xi: xi_closed_form(terms.retention(), mean, adjustment),
        retention: terms.retention(),
        premium,
        mean,
        residual,
        model: *model,
    })
}

/// `ξ(b) = 1 - bμR` for exponential claims.
pub fn xi_closed_form(retention: f64, mean: f64, adjustment: f64) -> f64 {
    1.0 - retention * mean * adjustment
}

/// `ξ(b)` as the supremum of `V̄(x) / ∫_x^∞ e^{R(z-x)} dV(z)` over a
/// geometric grid of `points` abscissae starting at `c(b)`, clipped to
/// `(0, 1]`.
pub fn xi_numeric_sup(model: &ClaimModel, terms: &ReinsuranceTerms, adjustment: f64, points: usize) -> Result<f64> {
    let retained = model.retained(terms.retention())?;
    if retained.log_mgf(adjustment).is_err() {
        return Err(Error::Divergent(format!(
            "∫ e^(Rz) dV(z) diverges for R = {adjustment} and {} claims",
            model.name()
        )));
    }
    let premium = terms.retained_premium(model.mean());
    if premium <= 0.0 {
        return Err(Error::Domain(format!("retained premium {premium} must be positive")));
    }
    let scale = retained.mean();
    let last = premium + 40.0 * scale;
    let points = points.max(2);
    let ratio = (last / premium).powf(1.0 / (points - 1) as f64);
    let rule = GaussLegendre::new(16);

    let mut best: f64 = 0.0;
    for k in 0..points {
        let x = premium * ratio.powi(k as i32);
        let tail = tail_integral(&retained, &rule, adjustment, x, scale)?;
        let survival = retained.survival(x);
        if tail > 0.0 && survival > 0.0 {
            best = best.max(survival / tail);
        }
    }
    if best <= 0.0 {
        return Err(Error::Domain("supremand vanished on the whole grid".into()));
    }
    Ok(best.min(1.0))
}

/// `∫_x^∞ e^{R(z-x)} v(z) dz` by Gauss–Legendre panels of width `scale`
/// until a panel adds less than `1e-17` of the running total.
fn tail_integral(retained: &RetainedLoss, rule: &GaussLegendre, r: f64, x: f64, scale: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = x;
    for _ in 0..100_000 {
        let hi = lo + scale;
        let piece = rule.integrate(lo, hi, |z| (r * (z - x)).exp() * retained.density(z));
        total += piece;
        if piece <= 1e-17 * total {
            return Ok(total);
        }
        lo = hi;
    }
    Err(Error::Divergent(format!("tail integral from {x} did not converge")))
}

/// `ξ(b) Σ_t p_st e^{-R u (1 + i_t)}`, reported unclipped.
///
/// The bound is only established for nonnegative rates; chains with a
/// negative rate are refused (see [`upper_bound_allowing_negative_rates`]).
pub fn upper_bound(u: f64, state: usize, result: &LundbergResult, chain: &InterestChain) -> Result<LundbergBound> {
    if chain.min_rate() < 0.0 {
        return Err(Error::Domain(format!(
            "the Lundberg bound requires nonnegative interest rates, found {}",
            chain.min_rate()
        )));
    }
    upper_bound_allowing_negative_rates(u, state, result, chain)
}

pub fn upper_bound_allowing_negative_rates(
    u: f64,
    state: usize,
    result: &LundbergResult,
    chain: &InterestChain,
) -> Result<LundbergBound> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("capital must be nonnegative, got {u}")));
    }
    chain.check_state(state)?;
    let sum: f64 = chain
        .row(state)
        .iter()
        .zip(chain.rates())
        .map(|(p, i)| p * (-result.adjustment * u * (1.0 + i)).exp())
        .sum();
    let value = result.xi * sum;
    Ok(LundbergBound { value, exceeds_one: value > 1.0 })
}
