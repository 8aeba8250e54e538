//! Exact sp probabilities by exhaustive enumeration of finite-support
//! scenarios under exact rational arithmetic.
//!
//! This is the ground truth the Monte Carlo estimator is checked against:
//! every combination of atoms across all (m+1)*n unit positions is visited
//! once, its probability is the exact rational product of the atom weights
//! (units are independent), and the pair outcome is classified by exact
//! value comparison. Enumeration is row-major over (layer, position, atom
//! index): layer 0 position 1 is the outermost digit, the last position's
//! atom index varies fastest.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distributions::{rational_to_f64, Atom};
use crate::error::{Error, Result};
use crate::systems::{Realization, Scenario};

pub const DEFAULT_MAX_ORACLE_OUTCOMES: u64 = 10_000_000;

/// Exact precedence probabilities. The three rationals sum to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub p_gt: BigRational,
    pub p_lt: BigRational,
    pub p_eq: BigRational,
    pub outcome_count: u64,
    pub scenario_digest: String,
}

impl ExactReport {
    pub fn p_gt_f64(&self) -> f64 {
        rational_to_f64(&self.p_gt)
    }

    pub fn p_lt_f64(&self) -> f64 {
        rational_to_f64(&self.p_lt)
    }

    pub fn p_eq_f64(&self) -> f64 {
        rational_to_f64(&self.p_eq)
    }
}

/// Compute the exact sp probabilities of a finite-support scenario.
///
/// Errors with `UnsupportedScenario` if any unit's distribution is
/// continuous, and with `Budget` (naming the required count) if the product
/// of support sizes exceeds `max_outcomes`. There is no sampling fallback.
pub fn exact_sp(scenario: &Scenario, max_outcomes: u64) -> Result<ExactReport> {
    let positions = flatten_supports(scenario)?;

    let mut count: u128 = 1;
    for (idx, atoms) in positions.iter().enumerate() {
        count = count.saturating_mul(atoms.len() as u128);
        if count > max_outcomes as u128 {
            // finish the product (saturating) so the error names the real need
            let required = positions[idx + 1..]
                .iter()
                .fold(count, |acc, a| acc.saturating_mul(a.len() as u128));
            return Err(Error::Budget {
                what: "exact enumeration outcome count",
                required: required.min(u64::MAX as u128) as u64,
                limit: max_outcomes,
            });
        }
    }
    let outcome_count = count as u64;

    let n = scenario.n();
    let mut realization = Realization::new(vec![0.0; n], vec![vec![0.0; n]; scenario.m()]);
    let mut acc = ClassTotals::default();
    enumerate(scenario, &positions, 0, &BigRational::one(), &mut realization, &mut acc)?;

    debug_assert!((&acc.gt + &acc.lt + &acc.eq).is_one());
    Ok(ExactReport {
        p_gt: acc.gt,
        p_lt: acc.lt,
        p_eq: acc.eq,
        outcome_count,
        scenario_digest: crate::report::scenario_digest(scenario),
    })
}

struct ClassTotals {
    gt: BigRational,
    lt: BigRational,
    eq: BigRational,
}

impl Default for ClassTotals {
    fn default() -> Self {
        ClassTotals {
            gt: BigRational::zero(),
            lt: BigRational::zero(),
            eq: BigRational::zero(),
        }
    }
}

/// Atom lists for all (m+1)*n positions in row-major (layer, position) order.
fn flatten_supports(scenario: &Scenario) -> Result<Vec<Vec<Atom>>> {
    let mut positions = Vec::with_capacity((scenario.m() + 1) * scenario.n());
    for (j, dist) in scenario.x_dists().iter().enumerate() {
        positions.push(dist.finite_atoms().ok_or_else(|| {
            Error::UnsupportedScenario(format!(
                "exact enumeration needs finite support, x[{j}] is continuous"
            ))
        })?);
    }
    for (i, row) in scenario.y_dists().iter().enumerate() {
        for (j, dist) in row.iter().enumerate() {
            positions.push(dist.finite_atoms().ok_or_else(|| {
                Error::UnsupportedScenario(format!(
                    "exact enumeration needs finite support, y[{i}][{j}] is continuous"
                ))
            })?);
        }
    }
    Ok(positions)
}

fn enumerate(
    scenario: &Scenario,
    positions: &[Vec<Atom>],
    pos: usize,
    prob: &BigRational,
    realization: &mut Realization,
    acc: &mut ClassTotals,
) -> Result<()> {
    if pos == positions.len() {
        let pair = scenario.evaluate_pair(realization)?;
        if pair.component_level > pair.system_level {
            acc.gt += prob;
        } else if pair.component_level < pair.system_level {
            acc.lt += prob;
        } else {
            acc.eq += prob;
        }
        return Ok(());
    }
    let n = scenario.n();
    for atom in &positions[pos] {
        if pos < n {
            realization.x[pos] = atom.value;
        } else {
            realization.y[pos / n - 1][pos % n] = atom.value;
        }
        let next_prob = prob * &atom.weight;
        enumerate(scenario, positions, pos + 1, &next_prob, realization, acc)?;
    }
    Ok(())
}
