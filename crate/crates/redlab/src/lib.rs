//! Does component-level redundancy beat system-level redundancy for a
//! k-out-of-n system under the stochastic precedence order?
//!
//! A ≥_sp B means P(A > B) > P(B > A). This crate answers the question
//! three independent ways for both active and cold redundancy:
//!
//! * [`precedence`] - coupled Monte Carlo: both architectures are evaluated
//!   on the same sampled component lifetimes, so dominance and structural
//!   ties are observed exactly.
//! * [`oracle`] - exact enumeration of finite-support scenarios under
//!   rational arithmetic, the ground truth for the estimator.
//! * [`statespace`] - combinatorial replay of the underlying case analyses:
//!   every binary state assignment is enumerated, each case's inequality
//!   system is checked for feasibility, and divergence witnesses are
//!   listed.
//!
//! [`distributions`] and [`systems`] supply the lifetime models and the
//! k-out-of-n / composition machinery; [`config`], [`report`] and [`cli`]
//! are the batch front end.

pub mod cli;
pub mod config;
pub mod distributions;
pub mod error;
pub mod oracle;
pub mod precedence;
pub mod report;
pub mod statespace;
pub mod systems;

pub use distributions::{Atom, ComponentTag, LifetimeDistribution, RandomStream};
pub use error::{Error, Result};
pub use oracle::{exact_sp, ExactReport};
pub use precedence::{decide_sp, run_trials, wilson_ci, PrecedenceReport, Tally, Verdict};
pub use statespace::{
    check_case_analysis, enumerate_divergence, phi_component_level, phi_system_level, CaseReport,
    StateAssignment,
};
pub use systems::{
    compose_active_component, compose_cold_component, PairOutcome, Realization, RedundancyMode,
    Scenario, SystemSpec,
};
