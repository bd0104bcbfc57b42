//! Markov chain of per-period interest rates.

use rand::Rng;

use crate::error::{Error, Result};

/// Row-sum tolerance for the transition matrix and the initial distribution.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Time-homogeneous finite Markov chain of interest rates `i_1..i_l`.
///
/// States are indexed from zero in the API; `rates[s]` is the rate of state `s`
/// and `transition[s][t]` the probability of moving from `s` to `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterestChain {
    rates: Vec<f64>,
    transition: Vec<Vec<f64>>,
    initial: Vec<f64>,
}

/// One failed invariant, addressed by field path (e.g. `chain.P[1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violation found by [`InterestChain::validate`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: String, message: String) {
        self.violations.push(Violation { field, message });
    }
}

impl From<ValidationReport> for Error {
    fn from(report: ValidationReport) -> Self {
        Error::Invalid(report.violations.iter().map(|v| v.to_string()).collect())
    }
}

impl InterestChain {
    /// Builds and validates a chain.
    pub fn new(rates: Vec<f64>, transition: Vec<Vec<f64>>, initial: Vec<f64>) -> Result<Self> {
        let chain = Self::new_unchecked(rates, transition, initial);
        let report = chain.validate();
        if report.is_ok() {
            Ok(chain)
        } else {
            Err(report.into())
        }
    }

    /// Builds a chain without validation; call [`validate`](Self::validate)
    /// before use.
    pub fn new_unchecked(rates: Vec<f64>, transition: Vec<Vec<f64>>, initial: Vec<f64>) -> Self {
        Self { rates, transition, initial }
    }

    /// A single state with rate `rate`.
    pub fn constant(rate: f64) -> Result<Self> {
        Self::new(vec![rate], vec![vec![1.0]], vec![1.0])
    }

    /// Checks every invariant and lists each violation; never panics.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let l = self.rates.len();
        if l == 0 {
            report.push("chain.rates".into(), "at least one state is required".into());
        }
        for (s, &r) in self.rates.iter().enumerate() {
            if !r.is_finite() || 1.0 + r <= 0.0 {
                report.push(format!("chain.rates[{s}]"), format!("rate {r} must be finite with 1 + rate > 0"));
            }
        }
        if self.transition.len() != l {
            report.push("chain.P".into(), format!("expected {l} rows, found {}", self.transition.len()));
        }
        for (s, row) in self.transition.iter().enumerate() {
            if row.len() != l {
                report.push(format!("chain.P[{s}]"), format!("expected {l} entries, found {}", row.len()));
                continue;
            }
            if let Some((t, &p)) = row.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
                report.push(format!("chain.P[{s}][{t}]"), format!("transition probability {p} must be finite and nonnegative"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                report.push(format!("chain.P[{s}]"), format!("row sums to {sum}, expected 1"));
            }
        }
        if self.initial.len() != l {
            report.push("chain.initial".into(), format!("expected {l} entries, found {}", self.initial.len()));
        } else {
            if let Some((s, &p)) = self.initial.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
                report.push(format!("chain.initial[{s}]"), format!("probability {p} must be finite and nonnegative"));
            }
            let sum: f64 = self.initial.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                report.push("chain.initial".into(), format!("sums to {sum}, expected 1"));
            }
        }
        report
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn rate(&self, state: usize) -> f64 {
        self.rates[state]
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.transition[state]
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn max_rate(&self) -> f64 {
        self.rates.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_rate(&self) -> f64 {
        self.rates.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn check_state(&self, state: usize) -> Result<()> {
        if state < self.len() {
            Ok(())
        } else {
            Err(Error::Domain(format!("state index {state} out of range for a {}-state chain", self.len())))
        }
    }

    /// Draws the next state from row `state` of the transition matrix.
    pub fn step<R: Rng + ?Sized>(&self, state: usize, rng: &mut R) -> Result<usize> {
        self.check_state(state)?;
        Ok(self.step_from_uniform(state, rng.random::<f64>()))
    }

    /// Next state for a given uniform draw `u ∈ [0, 1)` by inversion of the
    /// row's cumulative distribution.
    pub fn step_from_uniform(&self, state: usize, u: f64) -> usize {
        let row = &self.transition[state];
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (t, &p) in row.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last_positive = t;
                if u < acc {
                    return t;
                }
            }
        }
        last_positive
    }
}
