//! Ruin probabilities of a discrete-time insurance surplus process
//!
//! ```text
//! U_n = U_{n-1}(1 + I_n) + c(b) - b Z_n
//! ```
//!
//! with proportional reinsurance at retention `b`, i.i.d. claims `Z_n` and
//! interest rates `I_n` driven by a finite Markov chain.
//!
//! - [`engine`]: finite-horizon ruin probabilities `Ψ_n(u, i_s)` on a grid.
//! - [`lundberg`]: adjustment coefficient and the exponential upper bound
//!   (light-tailed claims).
//! - [`asymptotics`]: large-capital approximation for regularly varying
//!   claims.
//! - [`simulate`]: Monte Carlo estimates of the same probabilities.
//! - [`retention`]: largest retention keeping ruin below a tolerance.

pub mod asymptotics;
pub mod claims;
pub mod contract;
pub mod engine;
pub mod error;
pub mod lundberg;
pub mod market;
pub mod quadrature;
pub mod retention;
pub mod simulate;

pub use asymptotics::{asymptotic_psi, coefficients, convergence_ratio, AsymptoticCoefficients, RatioPoint};
pub use claims::{ClaimModel, LossDistribution, RetainedLoss};
pub use contract::ReinsuranceTerms;
pub use engine::{compute_ruin_table, psi_one, EngineConfig, Interpolation, RuinTable};
pub use error::{Error, Result};
pub use lundberg::{solve_adjustment, upper_bound, LundbergBound, LundbergResult};
pub use market::{InterestChain, ValidationReport, Violation};
pub use retention::{max_retention, RetentionCertificate, RetentionOutcome, RetentionQuery};
pub use simulate::{SimulationResult, SimulationSpec};
