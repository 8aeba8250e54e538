//! Combinatorial verification of the dominance results: exhaustive
//! enumeration of binary state assignments, feasibility of each case's
//! inequality system, divergence witnesses, and a cross-check of the case
//! decomposition against direct enumeration.
//!
//! A state assignment fixes, at one time instant, which units are up: the
//! vector x for the original components and one vector y_i per redundancy
//! layer. In cold mode the assignments additionally satisfy a per-position
//! exclusivity constraint: a component and its standbys are never up
//! simultaneously, so at most one of {x_j, y_1j, ..., y_mj} is 1.
//!
//! The component-level architecture is up iff the componentwise join (or,
//! in cold mode, the componentwise sum, which the constraint keeps binary)
//! passes the k-out-of-n structure function. The system-level architecture
//! is up iff some unit vector passes it (active), or - following the
//! two-case structure of the cold analysis - iff exactly one unit vector
//! passes it (cold). Cold assignments where two or more subsystems pass
//! simultaneously fall outside the case enumeration; they are counted and
//! reported, never silently folded into either side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::systems::{RedundancyMode, SystemSpec};

/// Default cap on n*(m+1), the bit width of the enumeration.
pub const DEFAULT_MAX_ENUM_BITS: u32 = 24;

/// Joint binary states of the original components and all redundancy
/// layers, packed layer-major: bit `layer * n + j` is unit j of that layer
/// (layer 0 is x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateAssignment {
    n: u32,
    m: u32,
    bits: u64,
}

impl StateAssignment {
    pub fn from_states(x: &[bool], ys: &[Vec<bool>]) -> Result<Self> {
        let n = x.len();
        if n == 0 || ys.is_empty() {
            return Err(Error::Domain("assignment needs n >= 1 and m >= 1".into()));
        }
        if n as u32 * (ys.len() as u32 + 1) > 63 {
            return Err(Error::Domain("assignment exceeds 63 packed bits".into()));
        }
        let mut bits = 0u64;
        for (j, &b) in x.iter().enumerate() {
            bits |= (b as u64) << j;
        }
        for (i, row) in ys.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension { what: "assignment y row", expected: n, got: row.len() });
            }
            for (j, &b) in row.iter().enumerate() {
                bits |= (b as u64) << ((i + 1) * n + j);
            }
        }
        Ok(StateAssignment { n: n as u32, m: ys.len() as u32, bits })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    /// State of one unit; layer 0 is x, layers 1..=m are the y rows.
    pub fn unit(&self, layer: usize, position: usize) -> bool {
        debug_assert!(layer <= self.m as usize && position < self.n as usize);
        self.bits >> (layer * self.n as usize + position) & 1 == 1
    }

    pub fn x(&self) -> Vec<bool> {
        (0..self.n as usize).map(|j| self.unit(0, j)).collect()
    }

    pub fn ys(&self) -> Vec<Vec<bool>> {
        (1..=self.m as usize)
            .map(|i| (0..self.n as usize).map(|j| self.unit(i, j)).collect())
            .collect()
    }

    /// Bit string grouped by subsystem, e.g. `x=10 y1=01`.
    pub fn render(&self) -> String {
        let mut out = String::from("x=");
        for j in 0..self.n as usize {
            out.push(if self.unit(0, j) { '1' } else { '0' });
        }
        for i in 1..=self.m as usize {
            out.push_str(&format!(" y{i}="));
            for j in 0..self.n as usize {
                out.push(if self.unit(i, j) { '1' } else { '0' });
            }
        }
        out
    }

    fn layer_mask(&self, layer: usize) -> u64 {
        self.bits >> (layer * self.n as usize) & ((1u64 << self.n) - 1)
    }

    /// Per-position exclusivity: no position is up in two different layers.
    pub fn satisfies_cold_constraint(&self) -> bool {
        let mut seen = 0u64;
        for layer in 0..=self.m as usize {
            let mask = self.layer_mask(layer);
            if seen & mask != 0 {
                return false;
            }
            seen |= mask;
        }
        true
    }
}

fn check_dims(spec: SystemSpec, assignment: &StateAssignment) -> Result<()> {
    if assignment.n() != spec.n() {
        return Err(Error::Dimension { what: "assignment width", expected: spec.n(), got: assignment.n() });
    }
    Ok(())
}

fn check_cold(mode: RedundancyMode, assignment: &StateAssignment) -> Result<()> {
    if mode == RedundancyMode::Cold && !assignment.satisfies_cold_constraint() {
        return Err(Error::InvalidAssignment(format!(
            "cold assignment has a position up in two layers: {}",
            assignment.render()
        )));
    }
    Ok(())
}

/// State of the component-level architecture: the structure function of the
/// componentwise join (active) or componentwise sum (cold; binary under the
/// exclusivity constraint, so identical to the join of disjoint layers).
pub fn phi_component_level(
    spec: SystemSpec,
    assignment: &StateAssignment,
    mode: RedundancyMode,
) -> Result<bool> {
    check_dims(spec, assignment)?;
    check_cold(mode, assignment)?;
    let mut join = 0u64;
    for layer in 0..=assignment.m() {
        join |= assignment.layer_mask(layer);
    }
    Ok(join.count_ones() as usize >= spec.k())
}

/// State of the system-level architecture: some subsystem up (active), or
/// exactly one subsystem up (cold; the two-case structure).
pub fn phi_system_level(
    spec: SystemSpec,
    assignment: &StateAssignment,
    mode: RedundancyMode,
) -> Result<bool> {
    check_dims(spec, assignment)?;
    check_cold(mode, assignment)?;
    let live = live_subsystems(spec, assignment);
    Ok(match mode {
        RedundancyMode::Active => live > 0,
        RedundancyMode::Cold => live == 1,
    })
}

fn live_subsystems(spec: SystemSpec, assignment: &StateAssignment) -> usize {
    (0..=assignment.m())
        .filter(|&layer| assignment.layer_mask(layer).count_ones() as usize >= spec.k())
        .count()
}

/// The two divergence sets, in lexicographic order of the concatenated bit
/// string.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceSets {
    /// system level up while component level down (the impossible direction)
    pub sys_over_comp: Vec<StateAssignment>,
    /// component level up while every subsystem is down (the witness
    /// direction: nonempty exactly when k >= 2)
    pub comp_over_sys: Vec<StateAssignment>,
}

/// Exhaustively enumerate all valid assignments and collect both divergence
/// directions.
///
/// `comp_over_sys` collects assignments with every subsystem down and the
/// composed vector up - the reverse-direction inequality system of both
/// analyses. In cold mode this excludes multi-live assignments (which have
/// system-level phi 0 under the two-case formalism but are not "all
/// subsystems down"); those are surfaced by [`check_case_analysis`] instead.
pub fn enumerate_divergence(
    spec: SystemSpec,
    m: usize,
    mode: RedundancyMode,
    max_bits: u32,
) -> Result<DivergenceSets> {
    let report = sweep_assignments(spec, m, mode, max_bits)?;
    Ok(DivergenceSets {
        sys_over_comp: report.sys_over_comp,
        comp_over_sys: report.comp_over_sys,
    })
}

/// Feasibility verdict for one case's inequality system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseFeasibility {
    /// case label: active I-V, cold I-II
    pub label: &'static str,
    pub feasible: bool,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<StateAssignment>,
}

fn serialize_witness<S: serde::Serializer>(
    w: &Option<StateAssignment>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(a) => s.serialize_some(&a.render()),
        None => s.serialize_none(),
    }
}

/// Full case-analysis result for one (n, k, m, mode) configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub spec: SystemSpec,
    pub m: usize,
    pub mode: RedundancyMode,
    pub cases: Vec<CaseFeasibility>,
    pub sys_over_comp: Vec<StateAssignment>,
    pub comp_over_sys: Vec<StateAssignment>,
    /// true iff the union of the case systems' solution sets equals the
    /// directly enumerated set {phi_sys = 1 and phi_comp = 0}
    pub partition_check: bool,
    /// cold only: count of constraint-satisfying assignments with two or
    /// more live subsystems, which the two-case analysis does not cover
    pub multi_live_count: Option<u64>,
}

/// Run the case analysis for one configuration: encode each case's
/// inequality system, search for witnesses by exhaustive enumeration, and
/// cross-validate the decomposition against direct enumeration.
pub fn check_case_analysis(
    spec: SystemSpec,
    m: usize,
    mode: RedundancyMode,
    max_bits: u32,
) -> Result<CaseReport> {
    sweep_assignments(spec, m, mode, max_bits)
}

/// Which case an assignment's subsystem pattern falls in, if any.
///
/// `x_live` is the state of subsystem 0, `live_y` the number of live
/// redundancy subsystems out of `m`.
fn case_index(mode: RedundancyMode, m: usize, x_live: bool, live_y: usize) -> Option<usize> {
    match mode {
        RedundancyMode::Active => match (x_live, live_y) {
            (true, 0) => Some(0),             // I
            (true, ly) if ly == m => Some(1), // II
            (true, _) => Some(2),             // III: 1..m-1 live
            (false, 0) => None,
            (false, ly) if ly == m => Some(3), // IV
            (false, _) => Some(4),             // V: 1..m-1 live
        },
        RedundancyMode::Cold => match (x_live, live_y) {
            (true, 0) => Some(0),  // I
            (false, 1) => Some(1), // II
            _ => None,
        },
    }
}

fn case_labels(mode: RedundancyMode) -> &'static [&'static str] {
    match mode {
        RedundancyMode::Active => &["I", "II", "III", "IV", "V"],
        RedundancyMode::Cold => &["I", "II"],
    }
}

fn sweep_assignments(
    spec: SystemSpec,
    m: usize,
    mode: RedundancyMode,
    max_bits: u32,
) -> Result<CaseReport> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let n = spec.n();
    let bits = (n * (m + 1)) as u32;
    if bits > max_bits {
        return Err(Error::Budget {
            what: "state enumeration bits",
            required: u64::from(bits),
            limit: u64::from(max_bits),
        });
    }
    if bits > 62 {
        return Err(Error::Budget { what: "state enumeration bits", required: u64::from(bits), limit: 62 });
    }

    let labels = case_labels(mode);
    let mut cases: Vec<CaseFeasibility> = labels
        .iter()
        .map(|&label| CaseFeasibility { label, feasible: false, witness: None })
        .collect();
    let mut sys_over_comp = Vec::new();
    let mut comp_over_sys = Vec::new();
    let mut case_union = Vec::new();
    let mut multi_live_count = 0u64;

    // Rank r enumerates assignments in lexicographic order of the
    // concatenated bit string (x then y_1 .. y_m): bit b of the assignment
    // is bit (bits-1-b) of r.
    for rank in 0u64..(1u64 << bits) {
        let packed = rank.reverse_bits() >> (64 - bits);
        let assignment = StateAssignment { n: n as u32, m: m as u32, bits: packed };
        if mode == RedundancyMode::Cold && !assignment.satisfies_cold_constraint() {
            continue;
        }

        let x_live = assignment.layer_mask(0).count_ones() as usize >= spec.k();
        let live_y = (1..=m)
            .filter(|&i| assignment.layer_mask(i).count_ones() as usize >= spec.k())
            .count();
        let live_total = live_y + usize::from(x_live);
        let phi_comp = phi_component_level(spec, &assignment, mode)?;
        let phi_sys = match mode {
            RedundancyMode::Active => live_total > 0,
            RedundancyMode::Cold => live_total == 1,
        };

        if phi_sys && !phi_comp {
            sys_over_comp.push(assignment);
        }
        if live_total == 0 && phi_comp {
            comp_over_sys.push(assignment);
        }
        if mode == RedundancyMode::Cold && live_total >= 2 {
            multi_live_count += 1;
        }

        // the case's full inequality system = its phi pattern plus the
        // composed-vector inequality (phi_comp = 0)
        if let Some(ci) = case_index(mode, m, x_live, live_y) {
            if !phi_comp {
                case_union.push(assignment);
                let slot = &mut cases[ci];
                if !slot.feasible {
                    slot.feasible = true;
                    slot.witness = Some(assignment);
                }
            }
        }
    }

    let partition_check = case_union == sys_over_comp;

    Ok(CaseReport {
        spec,
        m,
        mode,
        cases,
        sys_over_comp,
        comp_over_sys,
        partition_check,
        multi_live_count: (mode == RedundancyMode::Cold).then_some(multi_live_count),
    })
}
