//! Coupled Monte Carlo estimation of P(A>B), P(B>A), P(A=B) and the
//! stochastic-precedence verdict.
//!
//! A is the component-level architecture, B the system-level one. Every
//! trial evaluates both architectures on the identical component
//! realization (common random numbers), so structural ties and pathwise
//! dominance show up exactly, not approximately. Trials may run on any
//! number of workers; the tally is a commutative sum, so worker count never
//! changes the result.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::systems::{Realization, Scenario};

/// Win/loss/tie counts over a trial batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub n_trials: u64,
    /// trials with component-level lifetime strictly above system-level (+ tolerance)
    pub wins_a: u64,
    /// trials with system-level lifetime strictly above component-level (+ tolerance)
    pub wins_b: u64,
    pub ties: u64,
}

/// Outcome of the stochastic-precedence comparison.
///
/// `Inconclusive` is this tool's addition: the order's definition compares
/// two probabilities, and a finite sample can fail to separate them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "A_sp_greater")]
    ASpGreater,
    #[serde(rename = "B_sp_greater")]
    BSpGreater,
    #[serde(rename = "sp_equal")]
    SpEqual,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ASpGreater => "A_sp_greater",
            Verdict::BSpGreater => "B_sp_greater",
            Verdict::SpEqual => "sp_equal",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Estimated precedence probabilities with confidence intervals and verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrecedenceReport {
    pub n_trials: u64,
    pub wins_a: u64,
    pub wins_b: u64,
    pub ties: u64,
    pub p_gt: f64,
    pub p_lt: f64,
    pub p_eq: f64,
    pub ci_gt: (f64, f64),
    pub ci_lt: (f64, f64),
    pub verdict: Verdict,
    pub seed: u64,
    pub tie_tol: f64,
    pub alpha: f64,
    pub confidence: f64,
    pub scenario_digest: String,
}

/// Run `n_trials` coupled trials. Deterministic given
/// `(scenario, n_trials, seed, tie_tol)`, independent of worker count.
pub fn run_trials(scenario: &Scenario, n_trials: u64, seed: u64, tie_tol: f64) -> Result<Tally> {
    if n_trials == 0 {
        return Err(Error::Domain("n_trials must be at least 1".into()));
    }
    if !tie_tol.is_finite() || tie_tol < 0.0 {
        return Err(Error::Domain(format!("tie_tol must be finite and >= 0, got {tie_tol}")));
    }
    let (wins_a, wins_b, ties) = (0..n_trials)
        .into_par_iter()
        .map_init(Realization::default, |scratch, trial| {
            scenario.sample_into(seed, trial, scratch);
            let pair = scenario.evaluate_pair(scratch).expect("scratch matches scenario");
            if pair.component_level > pair.system_level + tie_tol {
                (1u64, 0u64, 0u64)
            } else if pair.system_level > pair.component_level + tie_tol {
                (0, 1, 0)
            } else {
                (0, 0, 1)
            }
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(Tally { n_trials, wins_a, wins_b, ties })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_ci(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Domain("wilson_ci requires at least one trial".into()));
    }
    if successes > trials {
        return Err(Error::Domain(format!(
            "successes ({successes}) cannot exceed trials ({trials})"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!("confidence must be in (0, 1), got {confidence}")));
    }
    let z = probit((1.0 + confidence) / 2.0);
    let n = trials as f64;
    let p_hat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z * ((p_hat * (1.0 - p_hat) + z2 / (4.0 * n)) / n).sqrt() / denom;
    // At the boundaries the interval analytically pins to 0 / 1.
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Map a tally to a verdict via a two-sided exact binomial symmetry test on
/// the non-tie trials.
///
/// Balanced strict wins (including the all-tie tally) read as sp-equal;
/// unbalanced wins that the test cannot separate at level `alpha` stay
/// inconclusive.
pub fn decide_sp(tally: &Tally, alpha: f64) -> Verdict {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    if tally.wins_a == tally.wins_b {
        return Verdict::SpEqual;
    }
    let contested = tally.wins_a + tally.wins_b;
    let leader = tally.wins_a.max(tally.wins_b);
    let p = binomial_two_sided_p(leader, contested);
    if p <= alpha {
        if tally.wins_a > tally.wins_b {
            Verdict::ASpGreater
        } else {
            Verdict::BSpGreater
        }
    } else {
        Verdict::Inconclusive
    }
}

/// Assemble a full report: probabilities, Wilson intervals at `confidence`,
/// and the verdict at `alpha`.
pub fn report(
    scenario: &Scenario,
    tally: &Tally,
    seed: u64,
    tie_tol: f64,
    alpha: f64,
    confidence: f64,
) -> Result<PrecedenceReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let n = tally.n_trials as f64;
    Ok(PrecedenceReport {
        n_trials: tally.n_trials,
        wins_a: tally.wins_a,
        wins_b: tally.wins_b,
        ties: tally.ties,
        p_gt: tally.wins_a as f64 / n,
        p_lt: tally.wins_b as f64 / n,
        p_eq: tally.ties as f64 / n,
        ci_gt: wilson_ci(tally.wins_a, tally.n_trials, confidence)?,
        ci_lt: wilson_ci(tally.wins_b, tally.n_trials, confidence)?,
        verdict: decide_sp(tally, alpha),
        seed,
        tie_tol,
        alpha,
        confidence,
        scenario_digest: crate::report::scenario_digest(scenario),
    })
}

/// Two-sided p-value for observing `x` or more successes out of `n` under
/// Binomial(n, 1/2), doubled and capped at 1. Requires 2x > n.
fn binomial_two_sided_p(x: u64, n: u64) -> f64 {
    debug_assert!(2 * x > n && x <= n);
    // tail sum relative to pmf(x): factors (n-i)/(i+1) stay below 1
    let ln_pmf = ln_choose(n, x) - n as f64 * std::f64::consts::LN_2;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut i = x;
    while i < n {
        term *= (n - i) as f64 / (i + 1) as f64;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
        i += 1;
    }
    (2.0 * (ln_pmf + sum.ln()).exp()).min(1.0)
}

fn ln_choose(n: u64, x: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(x as f64 + 1.0) - ln_gamma((n - x) as f64 + 1.0)
}

/// Lanczos approximation (g = 7, 9 coefficients), relative error < 2e-10.
fn ln_gamma(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const COEFFICIENTS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    const G: f64 = 7.0;
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = COEFFICIENTS[0];
    for (i, &c) in COEFFICIENTS[1..].iter().enumerate() {
        sum += c / (x + i as f64 + 1.0);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// relative error < 1.15e-9).
#[allow(clippy::excessive_precision)]
pub(crate) fn probit(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -probit(1.0 - p)
    }
}
