//! Age-of-information and energy analysis for a status-update link that
//! senses, transmits over an i.i.d. failing channel, and retransmits each
//! packet at most `M` times.
//!
//! * [`analytic`]: closed-form distributions, moments and averages, plus
//!   link-budget helpers.
//! * [`simulator`]: two seeded Monte Carlo estimators (slot-level and
//!   success-cycle level) of the same averages.
//! * [`sweep`]: tradeoff curves over `M`, transmit power and sensing energy,
//!   and Pareto filtering.
//! * [`validate`]: grid comparison of both estimators against the closed forms.
//! * [`output`] and [`cli`]: CSV/JSON emitters and the command-line front end.

pub mod analytic;
pub mod cli;
mod error;
pub mod exec;
pub mod output;
pub mod simulator;
pub mod sweep;
pub mod validate;

pub use analytic::{EnergyParams, LinkSpec, MetricPoint, Policy, PowerModel};
pub use error::{Error, Result};
pub use exec::Execution;
pub use simulator::{AgeTrace, Estimator, SimConfig, SimResult};
pub use sweep::{SweepSpec, TradeoffCurve};
pub use validate::ValidationReport;
