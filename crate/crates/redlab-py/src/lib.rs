//! Python bindings: the main redlab types and operations as an in-process
//! extension module.
//!
//! Usage from Python:
//!
//!     import redlab_py as rl
//!     d = rl.Dist.exponential(1.0)
//!     sc = rl.Scenario(2, 2, 1, "active", [d, d], [[d, d]])
//!     rep = rl.compare(sc, trials=100_000, seed=0)
//!     print(rep.p_gt, rep.verdict)

use std::str::FromStr;

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use redlab::distributions::Atom;
use redlab::error::Error;
use redlab::report;
use redlab::statespace::{self, DEFAULT_MAX_ENUM_BITS};
use redlab::systems::{RedundancyMode, SystemSpec};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<RedundancyMode> {
    RedundancyMode::from_str(mode).map_err(to_py_err)
}

fn bool_state(state: &[u8]) -> PyResult<Vec<bool>> {
    state
        .iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(PyValueError::new_err(format!("state entries must be 0 or 1, got {other}"))),
        })
        .collect()
}

/// A component lifetime distribution.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Dist {
    inner: redlab::LifetimeDistribution,
}

#[pymethods]
impl Dist {
    #[staticmethod]
    fn exponential(rate: f64) -> PyResult<Self> {
        Ok(Dist { inner: redlab::LifetimeDistribution::exponential(rate).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn weibull(shape: f64, scale: f64) -> PyResult<Self> {
        Ok(Dist { inner: redlab::LifetimeDistribution::weibull(shape, scale).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn uniform(lo: f64, hi: f64) -> PyResult<Self> {
        Ok(Dist { inner: redlab::LifetimeDistribution::uniform(lo, hi).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn point_mass(value: f64) -> PyResult<Self> {
        Ok(Dist { inner: redlab::LifetimeDistribution::point_mass(value).map_err(to_py_err)? })
    }

    /// Finite-support distribution from (value, weight) pairs, weights as
    /// exact rational strings like "1/2".
    #[staticmethod]
    fn discrete(atoms: Vec<(f64, String)>) -> PyResult<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(value, weight)| {
                let weight = BigRational::from_str(weight.trim()).map_err(|e| {
                    PyValueError::new_err(format!("weight {weight:?} is not a rational: {e}"))
                })?;
                Ok(Atom { value, weight })
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Dist { inner: redlab::LifetimeDistribution::discrete_finite(atoms).map_err(to_py_err)? })
    }

    /// Inverse CDF at level u in [0, 1].
    fn quantile(&self, u: f64) -> PyResult<f64> {
        self.inner.quantile(u).map_err(to_py_err)
    }

    /// Deterministic draw from the counter-based stream
    /// (seed, trial, layer, position).
    fn sample(&self, seed: u64, trial: u64, layer: u32, position: u32) -> PyResult<f64> {
        self.inner
            .sample(redlab::RandomStream::new(seed, trial, layer, position))
            .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Dist({})", self.inner.canonical_string())
    }
}

/// A full experiment: k-out-of-n structure, m redundancy layers, mode, and
/// one distribution per unit.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Scenario {
    inner: redlab::Scenario,
}

#[pymethods]
impl Scenario {
    #[new]
    fn new(n: usize, k: usize, m: usize, mode: &str, x: Vec<Dist>, y: Vec<Vec<Dist>>) -> PyResult<Self> {
        if y.len() != m {
            return Err(PyValueError::new_err(format!("y: expected {m} rows, got {}", y.len())));
        }
        let spec = SystemSpec::new(n, k).map_err(to_py_err)?;
        let x = x.into_iter().map(|d| d.inner).collect();
        let y = y.into_iter().map(|row| row.into_iter().map(|d| d.inner).collect()).collect();
        let inner =
            redlab::Scenario::new(spec, parse_mode(mode)?, x, y).map_err(to_py_err)?;
        Ok(Scenario { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode().as_str()
    }

    #[getter]
    fn digest(&self) -> String {
        report::scenario_digest(&self.inner)
    }

    /// Both architecture lifetimes for one explicit realization.
    fn evaluate_pair(&self, x: Vec<f64>, y: Vec<Vec<f64>>) -> PyResult<(f64, f64)> {
        let r = redlab::Realization::new(x, y);
        let pair = self.inner.evaluate_pair(&r).map_err(to_py_err)?;
        Ok((pair.component_level, pair.system_level))
    }

    /// The component matrix drawn for one trial, as (x, y).
    fn sample_realization(&self, seed: u64, trial: u64) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut r = redlab::Realization::default();
        self.inner.sample_into(seed, trial, &mut r);
        (r.x, r.y)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(n={}, k={}, m={}, mode={})",
            self.inner.n(),
            self.inner.k(),
            self.inner.m(),
            self.inner.mode().as_str()
        )
    }
}

/// Monte Carlo comparison result.
#[pyclass(frozen)]
struct PrecedenceReport {
    #[pyo3(get)]
    n_trials: u64,
    #[pyo3(get)]
    wins_a: u64,
    #[pyo3(get)]
    wins_b: u64,
    #[pyo3(get)]
    ties: u64,
    #[pyo3(get)]
    p_gt: f64,
    #[pyo3(get)]
    p_lt: f64,
    #[pyo3(get)]
    p_eq: f64,
    #[pyo3(get)]
    ci_gt: (f64, f64),
    #[pyo3(get)]
    ci_lt: (f64, f64),
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    seed: u64,
    #[pyo3(get)]
    scenario_digest: String,
    json: String,
}

#[pymethods]
impl PrecedenceReport {
    /// The same JSON document the CLI's compare subcommand emits.
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "PrecedenceReport(p_gt={}, p_lt={}, p_eq={}, verdict={})",
            self.p_gt, self.p_lt, self.p_eq, self.verdict
        )
    }
}

/// Exact enumeration result; probabilities are exact rational strings.
#[pyclass(frozen)]
struct ExactReport {
    #[pyo3(get)]
    p_gt: String,
    #[pyo3(get)]
    p_lt: String,
    #[pyo3(get)]
    p_eq: String,
    #[pyo3(get)]
    p_gt_float: f64,
    #[pyo3(get)]
    p_lt_float: f64,
    #[pyo3(get)]
    p_eq_float: f64,
    #[pyo3(get)]
    outcome_count: u64,
    #[pyo3(get)]
    scenario_digest: String,
    json: String,
}

#[pymethods]
impl ExactReport {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!("ExactReport(p_gt={}, p_lt={}, p_eq={})", self.p_gt, self.p_lt, self.p_eq)
    }
}

/// k-out-of-n structure function over a 0/1 state vector.
#[pyfunction]
fn structure_phi(n: usize, k: usize, state: Vec<u8>) -> PyResult<u8> {
    let spec = SystemSpec::new(n, k).map_err(to_py_err)?;
    let state = bool_state(&state)?;
    Ok(spec.structure_phi(&state).map_err(to_py_err)? as u8)
}

/// k-out-of-n system lifetime from component lifetimes.
#[pyfunction]
fn system_lifetime(n: usize, k: usize, lifetimes: Vec<f64>) -> PyResult<f64> {
    let spec = SystemSpec::new(n, k).map_err(to_py_err)?;
    spec.system_lifetime(&lifetimes).map_err(to_py_err)
}

/// Coupled Monte Carlo comparison; deterministic in (scenario, trials,
/// seed, tie_tol), independent of worker count.
#[pyfunction]
#[pyo3(signature = (scenario, trials=1_000_000, seed=0, tie_tol=0.0, alpha=0.01, confidence=0.95))]
fn compare(
    scenario: &Scenario,
    trials: u64,
    seed: u64,
    tie_tol: f64,
    alpha: f64,
    confidence: f64,
) -> PyResult<PrecedenceReport> {
    let tally =
        redlab::run_trials(&scenario.inner, trials, seed, tie_tol).map_err(to_py_err)?;
    let rep = redlab::precedence::report(&scenario.inner, &tally, seed, tie_tol, alpha, confidence)
        .map_err(to_py_err)?;
    let json = report::to_json(&report::CompareReport::new(&scenario.inner, &rep));
    Ok(PrecedenceReport {
        n_trials: rep.n_trials,
        wins_a: rep.wins_a,
        wins_b: rep.wins_b,
        ties: rep.ties,
        p_gt: rep.p_gt,
        p_lt: rep.p_lt,
        p_eq: rep.p_eq,
        ci_gt: rep.ci_gt,
        ci_lt: rep.ci_lt,
        verdict: rep.verdict.as_str().to_string(),
        seed: rep.seed,
        scenario_digest: rep.scenario_digest,
        json,
    })
}

/// Exact sp probabilities of a finite-support scenario.
#[pyfunction]
#[pyo3(signature = (scenario, max_outcomes=10_000_000))]
fn exact_sp(scenario: &Scenario, max_outcomes: u64) -> PyResult<ExactReport> {
    let rep = redlab::exact_sp(&scenario.inner, max_outcomes).map_err(to_py_err)?;
    let json = report::to_json(&report::OracleReport::new(&scenario.inner, &rep));
    Ok(ExactReport {
        p_gt: report::fmt_rational(&rep.p_gt),
        p_lt: report::fmt_rational(&rep.p_lt),
        p_eq: report::fmt_rational(&rep.p_eq),
        p_gt_float: rep.p_gt_f64(),
        p_lt_float: rep.p_lt_f64(),
        p_eq_float: rep.p_eq_f64(),
        outcome_count: rep.outcome_count,
        scenario_digest: rep.scenario_digest,
        json,
    })
}

/// Both divergence sets as rendered bit strings ("x=10 y1=01"), in
/// lexicographic order.
#[pyfunction]
#[pyo3(signature = (n, k, m, mode, max_bits=DEFAULT_MAX_ENUM_BITS))]
fn enumerate_divergence(
    n: usize,
    k: usize,
    m: usize,
    mode: &str,
    max_bits: u32,
) -> PyResult<(Vec<String>, Vec<String>)> {
    let spec = SystemSpec::new(n, k).map_err(to_py_err)?;
    let div = statespace::enumerate_divergence(spec, m, parse_mode(mode)?, max_bits)
        .map_err(to_py_err)?;
    Ok((
        div.sys_over_comp.iter().map(|a| a.render()).collect(),
        div.comp_over_sys.iter().map(|a| a.render()).collect(),
    ))
}

/// Run the case analysis for one configuration; returns the same
/// JSON cell the CLI's verify subcommand emits.
#[pyfunction]
#[pyo3(signature = (n, k, m, mode, max_bits=DEFAULT_MAX_ENUM_BITS))]
fn check_case_analysis(n: usize, k: usize, m: usize, mode: &str, max_bits: u32) -> PyResult<String> {
    let spec = SystemSpec::new(n, k).map_err(to_py_err)?;
    let rep = statespace::check_case_analysis(spec, m, parse_mode(mode)?, max_bits)
        .map_err(to_py_err)?;
    Ok(report::to_json(&report::VerifyCell::new(&rep)))
}

/// Sweep the case-analysis checks over n in 1..=n_max, k in 1..=n, m in 1..=m_max.
/// Returns (all_claims_hold, first_violation_or_None).
#[pyfunction]
#[pyo3(signature = (n_max, m_max, mode="both", max_bits=DEFAULT_MAX_ENUM_BITS))]
fn verify(n_max: usize, m_max: usize, mode: &str, max_bits: u32) -> PyResult<(bool, Option<String>)> {
    let modes = match mode {
        "both" => vec![RedundancyMode::Active, RedundancyMode::Cold],
        other => vec![parse_mode(other)?],
    };
    for mode in modes {
        for n in 1..=n_max {
            for m in 1..=m_max {
                for k in 1..=n {
                    let spec = SystemSpec::new(n, k).map_err(to_py_err)?;
                    let rep = statespace::check_case_analysis(spec, m, mode, max_bits)
                        .map_err(to_py_err)?;
                    if let Some(violation) = report::violated_claim(&rep) {
                        return Ok((
                            false,
                            Some(format!("n={n} k={k} m={m} mode={}: {violation}", mode.as_str())),
                        ));
                    }
                }
            }
        }
    }
    Ok((true, None))
}

#[pymodule]
fn redlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", report::TOOL_VERSION)?;
    m.add_class::<Dist>()?;
    m.add_class::<Scenario>()?;
    m.add_class::<PrecedenceReport>()?;
    m.add_class::<ExactReport>()?;
    m.add_function(wrap_pyfunction!(structure_phi, m)?)?;
    m.add_function(wrap_pyfunction!(system_lifetime, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(exact_sp, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(check_case_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
