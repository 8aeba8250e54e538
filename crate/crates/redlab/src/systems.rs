//! k-out-of-n structure function, system lifetime, and the four redundancy
//! architectures (active/cold x component-level/system-level).
//!
//! A k-out-of-n system functions while at least k of its n components do,
//! so its lifetime is the k-th largest component lifetime. Component-level
//! redundancy composes each component with its own spares before forming
//! the system; system-level redundancy backs the whole system with spare
//! systems. Active spares run in parallel (composite lifetime = max), cold
//! spares power on fresh at the predecessor's failure instant with perfect
//! switching (composite lifetime = sum).

use crate::distributions::{LifetimeDistribution, RandomStream};
use crate::error::{Error, Result};

/// A k-out-of-n structure: n components, functioning threshold k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSpec {
    n: usize,
    k: usize,
}

impl SystemSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if k == 0 || k > n {
            return Err(Error::Domain(format!("k must satisfy 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(SystemSpec { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Structure function: 1 iff at least k entries of `state` are up.
    pub fn structure_phi(&self, state: &[bool]) -> Result<bool> {
        if state.len() != self.n {
            return Err(Error::Dimension {
                what: "state vector",
                expected: self.n,
                got: state.len(),
            });
        }
        Ok(state.iter().filter(|&&b| b).count() >= self.k)
    }

    /// System lifetime: the k-th largest (equivalently (n-k+1)-th smallest)
    /// component lifetime, found by partial selection rather than a sort.
    pub fn system_lifetime(&self, lifetimes: &[f64]) -> Result<f64> {
        if lifetimes.len() != self.n {
            return Err(Error::Dimension {
                what: "lifetime vector",
                expected: self.n,
                got: lifetimes.len(),
            });
        }
        let mut buf = lifetimes.to_vec();
        let idx = self.n - self.k;
        let (_, kth, _) = buf.select_nth_unstable_by(idx, f64::total_cmp);
        Ok(*kth)
    }
}

/// How redundant units are operated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedundancyMode {
    Active,
    Cold,
}

impl RedundancyMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RedundancyMode::Active => "active",
            RedundancyMode::Cold => "cold",
        }
    }
}

impl std::str::FromStr for RedundancyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "active" => Ok(RedundancyMode::Active),
            "cold" => Ok(RedundancyMode::Cold),
            other => Err(Error::Domain(format!(
                "mode must be \"active\" or \"cold\", got \"{other}\""
            ))),
        }
    }
}

/// Full experiment description: the k-out-of-n structure, m redundancy
/// layers, the operating mode, and one lifetime distribution per unit.
/// All units are independent.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    spec: SystemSpec,
    mode: RedundancyMode,
    x_dists: Vec<LifetimeDistribution>,
    y_dists: Vec<Vec<LifetimeDistribution>>,
}

impl Scenario {
    pub fn new(
        spec: SystemSpec,
        mode: RedundancyMode,
        x_dists: Vec<LifetimeDistribution>,
        y_dists: Vec<Vec<LifetimeDistribution>>,
    ) -> Result<Self> {
        let n = spec.n();
        if x_dists.len() != n {
            return Err(Error::Dimension { what: "x distributions", expected: n, got: x_dists.len() });
        }
        if y_dists.is_empty() {
            return Err(Error::Domain("m must be positive (at least one redundancy layer)".into()));
        }
        for row in &y_dists {
            if row.len() != n {
                return Err(Error::Dimension {
                    what: "y distribution row",
                    expected: n,
                    got: row.len(),
                });
            }
        }
        Ok(Scenario { spec, mode, x_dists, y_dists })
    }

    pub fn spec(&self) -> SystemSpec {
        self.spec
    }

    pub fn mode(&self) -> RedundancyMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn k(&self) -> usize {
        self.spec.k()
    }

    pub fn m(&self) -> usize {
        self.y_dists.len()
    }

    pub fn x_dists(&self) -> &[LifetimeDistribution] {
        &self.x_dists
    }

    pub fn y_dists(&self) -> &[Vec<LifetimeDistribution>] {
        &self.y_dists
    }

    /// True when every unit's distribution has finite support, i.e. the
    /// scenario is exactly enumerable.
    pub fn is_finite_support(&self) -> bool {
        self.x_dists.iter().chain(self.y_dists.iter().flatten()).all(|d| {
            matches!(
                d,
                LifetimeDistribution::PointMass { .. } | LifetimeDistribution::DiscreteFinite { .. }
            )
        })
    }

    /// Stable one-line rendering of the whole scenario, hashed into report
    /// digests.
    pub fn canonical_string(&self) -> String {
        let xs: Vec<String> = self.x_dists.iter().map(|d| d.canonical_string()).collect();
        let ys: Vec<String> = self
            .y_dists
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|d| d.canonical_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!(
            "n={};k={};m={};mode={};x=[{}];y=[{}]",
            self.n(),
            self.k(),
            self.m(),
            self.mode.as_str(),
            xs.join(","),
            ys.join(",")
        )
    }

    /// Draw the full component matrix for one trial into `out`. The draws
    /// are a pure function of `(seed, trial)`: layer 0 holds X, layer i >= 1
    /// holds Y_i, positions are 1-based in the stream tag.
    pub fn sample_into(&self, seed: u64, trial: u64, out: &mut Realization) {
        let n = self.n();
        out.resize_for(n, self.m());
        for j in 0..n {
            let u = RandomStream::new(seed, trial, 0, (j + 1) as u32);
            out.x[j] = self.x_dists[j].sample(u).expect("uniform draw is in [0,1)");
        }
        for (i, row) in self.y_dists.iter().enumerate() {
            for (j, dist) in row.iter().enumerate() {
                let u = RandomStream::new(seed, trial, (i + 1) as u32, (j + 1) as u32);
                out.y[i][j] = dist.sample(u).expect("uniform draw is in [0,1)");
            }
        }
    }

    fn check_realization(&self, r: &Realization) -> Result<()> {
        let n = self.n();
        if r.x.len() != n {
            return Err(Error::Dimension { what: "realization x", expected: n, got: r.x.len() });
        }
        if r.y.len() != self.m() {
            return Err(Error::Dimension {
                what: "realization y rows",
                expected: self.m(),
                got: r.y.len(),
            });
        }
        for row in &r.y {
            if row.len() != n {
                return Err(Error::Dimension { what: "realization y row", expected: n, got: row.len() });
            }
        }
        Ok(())
    }

    /// Lifetime of the architecture with redundancy at the component level:
    /// compose each component with its spares (max for active, sum for
    /// cold), then take the k-out-of-n lifetime of the composed vector.
    pub fn component_level_lifetime(&self, r: &Realization) -> Result<f64> {
        self.check_realization(r)?;
        let composed = match self.mode {
            RedundancyMode::Active => compose_active_component(&r.x, &r.y)?,
            RedundancyMode::Cold => compose_cold_component(&r.x, &r.y)?,
        };
        self.spec.system_lifetime(&composed)
    }

    /// Lifetime of the architecture with redundancy at the system level:
    /// the k-out-of-n lifetime of each of the m+1 unit vectors, combined by
    /// max (active) or sum (cold; each standby system starts fresh when its
    /// predecessor fails, with perfect instantaneous switching).
    pub fn system_level_lifetime(&self, r: &Realization) -> Result<f64> {
        self.check_realization(r)?;
        let first = self.spec.system_lifetime(&r.x)?;
        let mut acc = first;
        for row in &r.y {
            let sub = self.spec.system_lifetime(row)?;
            acc = match self.mode {
                RedundancyMode::Active => acc.max(sub),
                RedundancyMode::Cold => acc + sub,
            };
        }
        Ok(acc)
    }

    /// Both architecture lifetimes from the identical realization.
    pub fn evaluate_pair(&self, r: &Realization) -> Result<PairOutcome> {
        Ok(PairOutcome {
            component_level: self.component_level_lifetime(r)?,
            system_level: self.system_level_lifetime(r)?,
        })
    }
}

/// Realized component lifetimes for one trial: x has n entries, y is m x n.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Realization {
    pub x: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Realization {
    pub fn new(x: Vec<f64>, y: Vec<Vec<f64>>) -> Self {
        Realization { x, y }
    }

    fn resize_for(&mut self, n: usize, m: usize) {
        self.x.resize(n, 0.0);
        self.y.resize(m, Vec::new());
        for row in &mut self.y {
            row.resize(n, 0.0);
        }
    }
}

/// Per-trial lifetimes of the two compared architectures.
/// `component_level` is the "A" side of every report, `system_level` the "B" side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOutcome {
    pub component_level: f64,
    pub system_level: f64,
}

/// Componentwise maxima of x and all redundancy rows.
pub fn compose_active_component(x: &[f64], ys: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut out = x.to_vec();
    for row in ys {
        if row.len() != x.len() {
            return Err(Error::Dimension { what: "redundancy row", expected: x.len(), got: row.len() });
        }
        for (o, &v) in out.iter_mut().zip(row) {
            *o = o.max(v);
        }
    }
    Ok(out)
}

/// Componentwise sums of x and all redundancy rows.
pub fn compose_cold_component(x: &[f64], ys: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut out = x.to_vec();
    for row in ys {
        if row.len() != x.len() {
            return Err(Error::Dimension { what: "redundancy row", expected: x.len(), got: row.len() });
        }
        for (o, &v) in out.iter_mut().zip(row) {
            *o += v;
        }
    }
    Ok(out)
}
