//! Report serialization: scenario digests, JSON with full-precision floats,
//! and the fixed-order CSV schemas.
//!
//! Floating values are written with 17 significant digits (`1.25e-1` style)
//! so every report round-trips bit-exactly; rationals are written as
//! `"numerator/denominator"` strings; counts stay integers. Identical
//! inputs produce byte-identical reports regardless of worker count.

use std::io::Write;

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::oracle::ExactReport;
use crate::precedence::PrecedenceReport;
use crate::statespace::CaseReport;
use crate::systems::Scenario;

pub const TOOL_NAME: &str = "redlab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// First 16 hex chars of the SHA-256 of the scenario's canonical rendering.
pub fn scenario_digest(scenario: &Scenario) -> String {
    digest_str(&scenario.canonical_string())
}

/// Digest of an arbitrary config text (used for sweep/verify documents).
pub fn digest_str(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// 17-significant-digit rendering used in both JSON and CSV.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// serde_json formatter that writes every f64 with 17 significant digits.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serialize any report value to a JSON string with full-precision floats
/// and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser).expect("report serialization is infallible");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// JSON report for the compare subcommand.
#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub scenario_digest: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mode: &'static str,
    pub n_trials: u64,
    pub seed: u64,
    pub tie_tol: f64,
    pub alpha: f64,
    pub confidence: f64,
    pub wins_a: u64,
    pub wins_b: u64,
    pub ties: u64,
    pub p_gt: f64,
    pub p_lt: f64,
    pub p_eq: f64,
    pub ci_gt: (f64, f64),
    pub ci_lt: (f64, f64),
    pub verdict: &'static str,
}

impl CompareReport {
    pub fn new(scenario: &Scenario, rep: &PrecedenceReport) -> Self {
        CompareReport {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            command: "compare",
            scenario_digest: rep.scenario_digest.clone(),
            n: scenario.n(),
            k: scenario.k(),
            m: scenario.m(),
            mode: scenario.mode().as_str(),
            n_trials: rep.n_trials,
            seed: rep.seed,
            tie_tol: rep.tie_tol,
            alpha: rep.alpha,
            confidence: rep.confidence,
            wins_a: rep.wins_a,
            wins_b: rep.wins_b,
            ties: rep.ties,
            p_gt: rep.p_gt,
            p_lt: rep.p_lt,
            p_eq: rep.p_eq,
            ci_gt: rep.ci_gt,
            ci_lt: rep.ci_lt,
            verdict: rep.verdict.as_str(),
        }
    }

    /// Same row schema as the sweep CSV, prefixed with provenance comments.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# tool={} version={} command=compare digest={}\n",
            self.tool, self.version, self.scenario_digest
        ));
        out.push_str(SWEEP_CSV_HEADER);
        out.push('\n');
        out.push_str(&sweep_csv_row(
            self.n, self.k, self.m, self.mode, self.p_gt, self.p_lt, self.p_eq, self.ci_gt,
            self.ci_lt, self.verdict, self.seed,
        ));
        out.push('\n');
        out
    }
}

/// JSON report for the oracle subcommand. Rationals are exact strings.
#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub scenario_digest: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mode: &'static str,
    pub outcome_count: u64,
    pub p_gt: String,
    pub p_lt: String,
    pub p_eq: String,
}

impl OracleReport {
    pub fn new(scenario: &Scenario, rep: &ExactReport) -> Self {
        OracleReport {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            command: "oracle",
            scenario_digest: rep.scenario_digest.clone(),
            n: scenario.n(),
            k: scenario.k(),
            m: scenario.m(),
            mode: scenario.mode().as_str(),
            outcome_count: rep.outcome_count,
            p_gt: fmt_rational(&rep.p_gt),
            p_lt: fmt_rational(&rep.p_lt),
            p_eq: fmt_rational(&rep.p_eq),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# tool={} version={} command=oracle digest={}\n",
            self.tool, self.version, self.scenario_digest
        ));
        out.push_str("n,k,m,mode,outcome_count,p_gt,p_lt,p_eq\n");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            self.n, self.k, self.m, self.mode, self.outcome_count, self.p_gt, self.p_lt, self.p_eq
        ));
        out
    }
}

/// One verify cell; divergence lists are reported as counts plus a capped
/// preview of rendered assignments.
#[derive(Debug, Serialize)]
pub struct VerifyCell {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mode: &'static str,
    pub cases: Vec<crate::statespace::CaseFeasibility>,
    pub sys_over_comp_count: u64,
    pub comp_over_sys_count: u64,
    pub sys_over_comp_preview: Vec<String>,
    pub comp_over_sys_preview: Vec<String>,
    pub partition_check: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multi_live_count: Option<u64>,
    pub claims_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_claim: Option<String>,
}

pub const DIVERGENCE_PREVIEW_CAP: usize = 32;

impl VerifyCell {
    pub fn new(report: &CaseReport) -> Self {
        let preview = |list: &[crate::statespace::StateAssignment]| {
            list.iter().take(DIVERGENCE_PREVIEW_CAP).map(|a| a.render()).collect::<Vec<_>>()
        };
        let mut cell = VerifyCell {
            n: report.spec.n(),
            k: report.spec.k(),
            m: report.m,
            mode: report.mode.as_str(),
            cases: report.cases.clone(),
            sys_over_comp_count: report.sys_over_comp.len() as u64,
            comp_over_sys_count: report.comp_over_sys.len() as u64,
            sys_over_comp_preview: preview(&report.sys_over_comp),
            comp_over_sys_preview: preview(&report.comp_over_sys),
            partition_check: report.partition_check,
            multi_live_count: report.multi_live_count,
            claims_hold: true,
            violated_claim: None,
        };
        cell.violated_claim = violated_claim(report);
        cell.claims_hold = cell.violated_claim.is_none();
        cell
    }
}

/// The dominance claims for one configuration; None when all hold.
pub fn violated_claim(report: &CaseReport) -> Option<String> {
    if let Some(c) = report.cases.iter().find(|c| c.feasible) {
        return Some(format!("case {} feasible (witness {})", c.label, c.witness.as_ref().map(|w| w.render()).unwrap_or_default()));
    }
    if !report.sys_over_comp.is_empty() {
        return Some(format!("sys_over_comp nonempty ({} assignments)", report.sys_over_comp.len()));
    }
    let k = report.spec.k();
    if k >= 2 && report.comp_over_sys.is_empty() {
        return Some("comp_over_sys empty although k >= 2".to_string());
    }
    if k == 1 && !report.comp_over_sys.is_empty() {
        return Some(format!("comp_over_sys nonempty ({} assignments) although k = 1", report.comp_over_sys.len()));
    }
    if !report.partition_check {
        return Some("case union differs from direct enumeration".to_string());
    }
    None
}

/// Top-level verify report.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_digest: String,
    pub n_max: usize,
    pub m_max: usize,
    pub modes: Vec<&'static str>,
    pub max_enum_bits: u32,
    pub all_claims_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
    pub cells: Vec<VerifyCell>,
}

pub const SWEEP_CSV_HEADER: &str =
    "n,k,m,mode,p_gt,p_lt,p_eq,ci_gt_lo,ci_gt_hi,ci_lt_lo,ci_lt_hi,verdict,seed";

#[allow(clippy::too_many_arguments)]
pub fn sweep_csv_row(
    n: usize,
    k: usize,
    m: usize,
    mode: &str,
    p_gt: f64,
    p_lt: f64,
    p_eq: f64,
    ci_gt: (f64, f64),
    ci_lt: (f64, f64),
    verdict: &str,
    seed: u64,
) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        n,
        k,
        m,
        mode,
        fmt_f64(p_gt),
        fmt_f64(p_lt),
        fmt_f64(p_eq),
        fmt_f64(ci_gt.0),
        fmt_f64(ci_gt.1),
        fmt_f64(ci_lt.0),
        fmt_f64(ci_lt.1),
        verdict,
        seed
    )
}

/// One sweep cell for the JSON variant of the sweep report.
#[derive(Debug, Serialize)]
pub struct SweepCell {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mode: &'static str,
    pub scenario_digest: String,
    pub p_gt: f64,
    pub p_lt: f64,
    pub p_eq: f64,
    pub ci_gt: (f64, f64),
    pub ci_lt: (f64, f64),
    pub verdict: &'static str,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_digest: String,
    pub n_trials: u64,
    pub seed: u64,
    pub cells: Vec<SweepCell>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# tool={} version={} command=sweep digest={} trials={} seed={}\n",
            self.tool, self.version, self.config_digest, self.n_trials, self.seed
        ));
        out.push_str(SWEEP_CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&sweep_csv_row(
                c.n, c.k, c.m, c.mode, c.p_gt, c.p_lt, c.p_eq, c.ci_gt, c.ci_lt, c.verdict, c.seed,
            ));
            out.push('\n');
        }
        out
    }
}
