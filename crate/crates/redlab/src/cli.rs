//! Command-line front end: compare, oracle, verify, and sweep subcommands
//! with reproducible JSON/CSV reports.
//!
//! Exit codes: 0 success, 1 config/validation error, 2 budget guard
//! exceeded, 3 verify found a violated claim. Reports go to stdout or the
//! `--out` path; diagnostics go to stderr. The `--threads` flag caps the
//! worker count without changing a single output byte.

use std::fs;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::config::{
    self, OutputFormat, RunConfig, SweepConfig, VerifyConfig, DEFAULT_ALPHA, DEFAULT_CONFIDENCE,
    DEFAULT_TRIALS,
};
use crate::error::{Error, Result};
use crate::oracle;
use crate::precedence;
use crate::report::{
    self, CompareReport, OracleReport, SweepCell, SweepReport, VerifyCell, VerifyReport,
};
use crate::statespace::{self, DEFAULT_MAX_ENUM_BITS};
use crate::systems::RedundancyMode;

pub const ENV_MAX_ENUM_BITS: &str = "REDLAB_MAX_ENUM_BITS";

#[derive(Debug, Parser)]
#[command(name = "redlab", version, about = "Component-level vs system-level redundancy comparison for k-out-of-n systems", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coupled Monte Carlo comparison of the two architectures
    Compare(CompareArgs),
    /// Exact probabilities by exhaustive enumeration (finite supports only)
    Oracle(OracleArgs),
    /// Check the case-analysis claims over a (n, k, m, mode) grid
    Verify(VerifyArgs),
    /// Monte Carlo grid over (n, k, m) cells from a distribution template
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct CommonOut {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// Report format
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Scenario config document (JSON)
    #[arg(long)]
    config: String,
    #[command(flatten)]
    out: CommonOut,
    /// Override the config's trial count
    #[arg(long)]
    trials: Option<u64>,
    /// Override the config's seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker count cap (output is identical for any value)
    #[arg(long)]
    threads: Option<usize>,
    /// Override the verdict test level
    #[arg(long)]
    alpha: Option<f64>,
    /// Override the reported CI confidence
    #[arg(long)]
    confidence: Option<f64>,
    /// Override the tie tolerance
    #[arg(long)]
    tie_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Scenario config document (JSON)
    #[arg(long)]
    config: String,
    #[command(flatten)]
    out: CommonOut,
    /// Override the enumeration guard on the outcome count
    #[arg(long)]
    max_outcomes: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Verify config document (JSON); flags below override it
    #[arg(long)]
    config: Option<String>,
    #[command(flatten)]
    out: CommonOut,
    /// Largest n to sweep (k runs over 1..=n)
    #[arg(long)]
    n_max: Option<usize>,
    /// Largest m to sweep
    #[arg(long)]
    m_max: Option<usize>,
    /// "active", "cold", or "both"
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Sweep config document (JSON)
    #[arg(long)]
    config: String,
    #[command(flatten)]
    out: CommonOut,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    tie_tol: Option<f64>,
}

/// Run the CLI against explicit argv and output streams; returns the exit
/// status. `argv[0]` is the program name.
pub fn run_command<O: Write, E: Write>(argv: &[String], stdout: &mut O, stderr: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version land on stdout with status 0
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 1;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let outcome = match cli.command {
        Command::Compare(args) => cmd_compare(args, stdout),
        Command::Oracle(args) => cmd_oracle(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout),
    };
    match outcome {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_config_file(path: &str) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read config {path}: {e}")))
}

fn emit<O: Write>(report: &str, out: &Option<String>, stdout: &mut O) -> Result<()> {
    match out {
        Some(path) => fs::write(path, report)?,
        None => stdout.write_all(report.as_bytes())?,
    }
    Ok(())
}

fn resolve_format(flag: &Option<String>, config_default: OutputFormat) -> Result<OutputFormat> {
    match flag {
        None => Ok(config_default),
        Some(s) => OutputFormat::from_str(s),
    }
}

fn install_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => f(),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("thread pool");
            pool.install(f)
        }
    }
}

fn apply_compare_overrides(cfg: &mut RunConfig, args: &CompareArgs) -> Result<()> {
    if let Some(t) = args.trials {
        if t == 0 {
            return Err(Error::validation("trials", "must be positive"));
        }
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(a) = args.alpha {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::validation("alpha", "must be in (0, 1)"));
        }
        cfg.alpha = a;
    }
    if let Some(c) = args.confidence {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::validation("confidence", "must be in (0, 1)"));
        }
        cfg.confidence = c;
    }
    if let Some(t) = args.tie_tol {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::validation("tie_tol", "must be finite and >= 0"));
        }
        cfg.tie_tol = t;
    }
    Ok(())
}

fn cmd_compare<O: Write>(args: CompareArgs, stdout: &mut O) -> Result<i32> {
    let mut cfg = config::parse_config(&read_config_file(&args.config)?)?;
    apply_compare_overrides(&mut cfg, &args)?;
    let format = resolve_format(&args.out.format, cfg.output_format)?;

    let tally = install_pool(args.threads, || {
        precedence::run_trials(&cfg.scenario, cfg.trials, cfg.seed, cfg.tie_tol)
    })?;
    let rep = precedence::report(&cfg.scenario, &tally, cfg.seed, cfg.tie_tol, cfg.alpha, cfg.confidence)?;
    let full = CompareReport::new(&cfg.scenario, &rep);
    let text = match format {
        OutputFormat::Json => report::to_json(&full),
        OutputFormat::Csv => full.to_csv(),
    };
    emit(&text, &args.out.out, stdout)?;
    Ok(0)
}

fn cmd_oracle<O: Write>(args: OracleArgs, stdout: &mut O) -> Result<i32> {
    let cfg = config::parse_config(&read_config_file(&args.config)?)?;
    let format = resolve_format(&args.out.format, cfg.output_format)?;
    let guard = args.max_outcomes.unwrap_or(cfg.max_oracle_outcomes);
    let rep = oracle::exact_sp(&cfg.scenario, guard)?;
    let full = OracleReport::new(&cfg.scenario, &rep);
    let text = match format {
        OutputFormat::Json => report::to_json(&full),
        OutputFormat::Csv => full.to_csv(),
    };
    emit(&text, &args.out.out, stdout)?;
    Ok(0)
}

fn parse_modes(modes: &Option<Vec<String>>) -> Result<Vec<RedundancyMode>> {
    match modes {
        None => Ok(vec![RedundancyMode::Active, RedundancyMode::Cold]),
        Some(list) => list.iter().map(|s| RedundancyMode::from_str(s)).collect(),
    }
}

/// The statespace guard: env var beats config beats default.
fn resolve_enum_bits(config_bits: Option<u32>) -> Result<u32> {
    match std::env::var(ENV_MAX_ENUM_BITS) {
        Ok(v) => v.parse::<u32>().map_err(|_| {
            Error::validation(ENV_MAX_ENUM_BITS, format!("not a bit count: {v:?}"))
        }),
        Err(_) => Ok(config_bits.unwrap_or(DEFAULT_MAX_ENUM_BITS)),
    }
}

fn cmd_verify<O: Write>(args: VerifyArgs, stdout: &mut O) -> Result<i32> {
    let (mut vc, digest) = match &args.config {
        Some(path) => {
            let text = read_config_file(path)?;
            (config::parse_verify_config(&text)?, report::digest_str(&text))
        }
        None => (
            VerifyConfig { n_max: 5, m_max: 3, modes: None, max_enum_bits: None },
            report::digest_str("verify-defaults"),
        ),
    };
    if let Some(n) = args.n_max {
        if n == 0 {
            return Err(Error::validation("n_max", "must be positive"));
        }
        vc.n_max = n;
    }
    if let Some(m) = args.m_max {
        if m == 0 {
            return Err(Error::validation("m_max", "must be positive"));
        }
        vc.m_max = m;
    }
    if let Some(mode) = &args.mode {
        vc.modes = match mode.as_str() {
            "both" => None,
            other => Some(vec![other.to_string()]),
        };
    }
    let modes = parse_modes(&vc.modes)?;
    let max_bits = resolve_enum_bits(vc.max_enum_bits)?;

    let mut cells = Vec::new();
    let mut first_violation: Option<String> = None;
    for &mode in &modes {
        for n in 1..=vc.n_max {
            for m in 1..=vc.m_max {
                for k in 1..=n {
                    let spec = crate::systems::SystemSpec::new(n, k)?;
                    let case_report = statespace::check_case_analysis(spec, m, mode, max_bits)?;
                    let cell = VerifyCell::new(&case_report);
                    if !cell.claims_hold && first_violation.is_none() {
                        first_violation = Some(format!(
                            "n={n} k={k} m={m} mode={}: {}",
                            mode.as_str(),
                            cell.violated_claim.as_deref().unwrap_or("unknown")
                        ));
                    }
                    cells.push(cell);
                }
            }
        }
    }

    let all_hold = first_violation.is_none();
    let full = VerifyReport {
        tool: report::TOOL_NAME,
        version: report::TOOL_VERSION,
        command: "verify",
        config_digest: digest,
        n_max: vc.n_max,
        m_max: vc.m_max,
        modes: modes.iter().map(|m| m.as_str()).collect(),
        max_enum_bits: max_bits,
        all_claims_hold: all_hold,
        first_violation: first_violation.clone(),
        cells,
    };
    emit(&report::to_json(&full), &args.out.out, stdout)?;
    // the one-line human summary always lands on stdout
    match &first_violation {
        None => writeln!(stdout, "ALL CLAIMS HOLD")?,
        Some(v) => writeln!(stdout, "CLAIM VIOLATED: {v}")?,
    }
    Ok(if all_hold { 0 } else { 3 })
}

fn cmd_sweep<O: Write>(args: SweepArgs, stdout: &mut O) -> Result<i32> {
    let text = read_config_file(&args.config)?;
    let cfg: SweepConfig = config::parse_sweep_config(&text)?;
    let digest = report::digest_str(&text);

    let trials = match args.trials.or(cfg.trials) {
        Some(0) => return Err(Error::validation("trials", "must be positive")),
        Some(t) => t,
        None => DEFAULT_TRIALS,
    };
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let tie_tol = args.tie_tol.or(cfg.tie_tol).unwrap_or(0.0);
    if !tie_tol.is_finite() || tie_tol < 0.0 {
        return Err(Error::validation("tie_tol", "must be finite and >= 0"));
    }
    let alpha = args.alpha.or(cfg.alpha).unwrap_or(DEFAULT_ALPHA);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::validation("alpha", "must be in (0, 1)"));
    }
    let confidence = args.confidence.or(cfg.confidence).unwrap_or(DEFAULT_CONFIDENCE);
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::validation("confidence", "must be in (0, 1)"));
    }
    let format = resolve_format(&args.out.format, OutputFormat::Csv)?;

    let modes = parse_modes(&Some(cfg.modes.clone()))?;
    let mut cells = Vec::new();
    install_pool(args.threads, || -> Result<()> {
        for &mode in &modes {
            for &n in &cfg.n_values {
                for &m in &cfg.m_values {
                    let ks: Vec<usize> = match &cfg.k_values {
                        Some(ks) => ks.iter().copied().filter(|&k| k <= n).collect(),
                        None => (1..=n).collect(),
                    };
                    for k in ks {
                        let scenario = config::sweep_cell_scenario(&cfg, n, k, m, mode)?;
                        let tally = precedence::run_trials(&scenario, trials, seed, tie_tol)?;
                        let rep = precedence::report(&scenario, &tally, seed, tie_tol, alpha, confidence)?;
                        cells.push(SweepCell {
                            n,
                            k,
                            m,
                            mode: mode.as_str(),
                            scenario_digest: rep.scenario_digest.clone(),
                            p_gt: rep.p_gt,
                            p_lt: rep.p_lt,
                            p_eq: rep.p_eq,
                            ci_gt: rep.ci_gt,
                            ci_lt: rep.ci_lt,
                            verdict: rep.verdict.as_str(),
                            seed,
                        });
                    }
                }
            }
        }
        Ok(())
    })?;

    let full = SweepReport {
        tool: report::TOOL_NAME,
        version: report::TOOL_VERSION,
        command: "sweep",
        config_digest: digest,
        n_trials: trials,
        seed,
        cells,
    };
    let out_text = match format {
        OutputFormat::Json => report::to_json(&full),
        OutputFormat::Csv => full.to_csv(),
    };
    emit(&out_text, &args.out.out, stdout)?;
    Ok(0)
}
