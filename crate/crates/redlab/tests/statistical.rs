//! Desk-scale statistical checks and independent re-derivations that cross
//! modules: Monte Carlo coverage of the exact oracle value, and a naive
//! re-enumeration of the statespace divergence sets.

use num_bigint::BigInt;
use num_rational::BigRational;

use redlab::distributions::{rational_to_f64, Atom};
use redlab::oracle::exact_sp;
use redlab::precedence::{run_trials, wilson_ci};
use redlab::statespace::{enumerate_divergence, StateAssignment};
use redlab::systems::{RedundancyMode, Scenario, SystemSpec};
use redlab::LifetimeDistribution;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn coin_scenario() -> Scenario {
    let d = LifetimeDistribution::discrete_finite(vec![
        Atom { value: 1.0, weight: ratio(1, 2) },
        Atom { value: 2.0, weight: ratio(1, 2) },
    ])
    .unwrap();
    Scenario::new(
        SystemSpec::new(2, 2).unwrap(),
        RedundancyMode::Active,
        vec![d.clone(); 2],
        vec![vec![d; 2]],
    )
    .unwrap()
}

/// The MC estimate's 99.9% Wilson interval must cover the oracle's exact
/// value in at least 99 of 100 independently seeded runs.
#[test]
fn monte_carlo_covers_oracle_value() {
    let scenario = coin_scenario();
    let exact = rational_to_f64(&exact_sp(&scenario, 1000).unwrap().p_gt);
    let trials = 10_000u64;
    let mut covered = 0;
    for seed in 0..100u64 {
        let tally = run_trials(&scenario, trials, seed, 0.0).unwrap();
        let (lo, hi) = wilson_ci(tally.wins_a, trials, 0.999).unwrap();
        if lo <= exact && exact <= hi {
            covered += 1;
        }
    }
    assert!(covered >= 99, "oracle value covered in only {covered}/100 runs");
}

// ---------------------------------------------------------------------------
// independent replay of the divergence enumeration: plain Vec<bool> vectors,
// naive counting, no bit tricks
// ---------------------------------------------------------------------------

fn naive_phi(k: usize, state: &[bool]) -> bool {
    state.iter().filter(|&&b| b).count() >= k
}

fn naive_cold_ok(x: &[bool], ys: &[Vec<bool>]) -> bool {
    (0..x.len()).all(|j| {
        let ups = usize::from(x[j]) + ys.iter().filter(|row| row[j]).count();
        ups <= 1
    })
}

/// All (x, ys) assignments for (n, m) in lexicographic order of the
/// concatenated bit string, built by recursive extension.
fn naive_assignments(n: usize, m: usize) -> Vec<(Vec<bool>, Vec<Vec<bool>>)> {
    let bits = n * (m + 1);
    let mut out = Vec::new();
    let mut current = vec![false; bits];
    fn recurse(
        pos: usize,
        bits: usize,
        n: usize,
        current: &mut Vec<bool>,
        out: &mut Vec<(Vec<bool>, Vec<Vec<bool>>)>,
    ) {
        if pos == bits {
            let x = current[..n].to_vec();
            let ys = current[n..].chunks(n).map(|c| c.to_vec()).collect();
            out.push((x, ys));
            return;
        }
        for value in [false, true] {
            current[pos] = value;
            recurse(pos + 1, bits, n, current, out);
        }
    }
    recurse(0, bits, n, &mut current, &mut out);
    out
}

fn render(x: &[bool], ys: &[Vec<bool>]) -> String {
    let bit = |b: &bool| if *b { '1' } else { '0' };
    let mut s = format!("x={}", x.iter().map(bit).collect::<String>());
    for (i, row) in ys.iter().enumerate() {
        s.push_str(&format!(" y{}={}", i + 1, row.iter().map(bit).collect::<String>()));
    }
    s
}

/// Re-derive both divergence sets naively and compare the rendered lists
/// entry for entry (order included).
#[test]
fn divergence_sets_match_naive_enumeration() {
    for mode in [RedundancyMode::Active, RedundancyMode::Cold] {
        for n in 1..=4usize {
            for m in 1..=2usize {
                for k in 1..=n {
                    let spec = SystemSpec::new(n, k).unwrap();
                    let lib = enumerate_divergence(spec, m, mode, 24).unwrap();

                    let mut sys_over_comp = Vec::new();
                    let mut comp_over_sys = Vec::new();
                    for (x, ys) in naive_assignments(n, m) {
                        if mode == RedundancyMode::Cold && !naive_cold_ok(&x, &ys) {
                            continue;
                        }
                        let live: Vec<bool> = std::iter::once(naive_phi(k, &x))
                            .chain(ys.iter().map(|row| naive_phi(k, row)))
                            .collect();
                        let live_count = live.iter().filter(|&&b| b).count();
                        let phi_sys = match mode {
                            RedundancyMode::Active => live_count > 0,
                            RedundancyMode::Cold => live_count == 1,
                        };
                        let join: Vec<bool> = (0..n)
                            .map(|j| x[j] || ys.iter().any(|row| row[j]))
                            .collect();
                        let phi_comp = naive_phi(k, &join);
                        if phi_sys && !phi_comp {
                            sys_over_comp.push(render(&x, &ys));
                        }
                        if live_count == 0 && phi_comp {
                            comp_over_sys.push(render(&x, &ys));
                        }
                    }

                    let lib_sys: Vec<String> =
                        lib.sys_over_comp.iter().map(StateAssignment::render).collect();
                    let lib_comp: Vec<String> =
                        lib.comp_over_sys.iter().map(StateAssignment::render).collect();
                    assert_eq!(lib_sys, sys_over_comp, "sys_over_comp at n={n} k={k} m={m} {mode:?}");
                    assert_eq!(lib_comp, comp_over_sys, "comp_over_sys at n={n} k={k} m={m} {mode:?}");
                }
            }
        }
    }
}

/// Every assignment a divergence list returns must satisfy its defining
/// predicates when re-evaluated from the unpacked vectors.
#[test]
fn divergence_entries_satisfy_their_predicates() {
    for mode in [RedundancyMode::Active, RedundancyMode::Cold] {
        for n in 2..=4usize {
            for k in 2..=n {
                let spec = SystemSpec::new(n, k).unwrap();
                let lib = enumerate_divergence(spec, 2, mode, 24).unwrap();
                assert!(!lib.comp_over_sys.is_empty());
                for a in &lib.comp_over_sys {
                    let x = a.x();
                    let ys = a.ys();
                    assert!(!naive_phi(k, &x), "x subsystem live in {}", a.render());
                    for row in &ys {
                        assert!(!naive_phi(k, row));
                    }
                    let join: Vec<bool> =
                        (0..n).map(|j| x[j] || ys.iter().any(|row| row[j])).collect();
                    assert!(naive_phi(k, &join));
                    if mode == RedundancyMode::Cold {
                        assert!(naive_cold_ok(&x, &ys));
                    }
                }
            }
        }
    }
}

/// Cold mode at k=1 under the state formalism: both divergence directions
/// empty, while multi-live assignments do exist and are counted.
#[test]
fn cold_k1_formalism_vs_multi_live_accounting() {
    let spec = SystemSpec::new(2, 1).unwrap();
    let div = enumerate_divergence(spec, 1, RedundancyMode::Cold, 24).unwrap();
    assert!(div.sys_over_comp.is_empty());
    assert!(div.comp_over_sys.is_empty());
    let report = redlab::check_case_analysis(spec, 1, RedundancyMode::Cold, 24).unwrap();
    // e.g. x=(1,0), y=(0,1): both subsystems live under the constraint
    assert!(report.multi_live_count.unwrap() > 0);
}
