//! One line per release criterion. Every criterion runs even when an earlier one fails;
//! the test fails if any line reads FAIL.

use std::path::Path;
use std::process::Command;

use polariton_sweep::validate::{self, Outcome};

// Tolerances, pinned. The suite refuses to run if the library drifts from these.
const SINGLE_MODE_TOL: f64 = 1e-10;
const SOLVER_TOL: f64 = 1e-10;
const RANDOM_SPECS: usize = 1000;
const DARK_SIZES: [usize; 3] = [2, 5, 20];
const DECOUPLED_TOL: f64 = 1e-6;
const FREQUENCY_TOL: f64 = 1e-4;
const LINEAR_ZETA_EXPONENT: (f64, f64) = (1.7, 2.3);
const LINEAR_ZETA_RATIOS: (f64, f64) = (0.05, 0.35);
const LINEAR_ZETA_BANDWIDTH_SLOPE: f64 = -0.1;
const ADIABATIC_EXPONENT: f64 = 2.7;
const KT: f64 = 0.026;
const FIG4_THRESHOLD: f64 = 0.30;
const FIG4_FINESSE: (f64, f64) = (4.0, 5.0);

fn pinned() {
    assert_eq!(validate::SINGLE_MODE_TOL, SINGLE_MODE_TOL);
    assert_eq!(validate::SOLVER_EQUIVALENCE_TOL, SOLVER_TOL);
    assert_eq!(validate::SOLVER_EQUIVALENCE_SPECS, RANDOM_SPECS);
    assert_eq!(validate::DARK_STATE_SIZES, DARK_SIZES);
    assert_eq!(validate::DECOUPLED_RATE_TOL, DECOUPLED_TOL);
    assert_eq!(validate::ORACLE_FREQUENCY_TOL, FREQUENCY_TOL);
    assert_eq!(validate::LINEAR_ZETA_EXPONENT_RANGE, LINEAR_ZETA_EXPONENT);
    assert_eq!(validate::LINEAR_ZETA_RATIO_RANGE, LINEAR_ZETA_RATIOS);
    assert_eq!(validate::LINEAR_ZETA_BANDWIDTH_SLOPE, LINEAR_ZETA_BANDWIDTH_SLOPE);
    assert_eq!(validate::ADIABATIC_MIN_EXPONENT, ADIABATIC_EXPONENT);
    assert_eq!(validate::THERMAL_ENERGY, KT);
    assert_eq!(validate::FIG4_THRESHOLD, FIG4_THRESHOLD);
    assert_eq!(validate::FIG4_FINESSE_RANGE, FIG4_FINESSE);
}

fn all(parts: Vec<anyhow::Result<Outcome>>) -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for p in parts {
        match p {
            Ok(o) => {
                passed &= o.passed;
                detail.push(o.detail);
            }
            Err(e) => {
                passed = false;
                detail.push(format!("error: {e:#}"));
            }
        }
    }
    Outcome { passed, detail: detail.join(" | ") }
}

fn figure_csv(dir: &Path, threads: &str) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_polsweep"))
        .args(["figure", "fig3", "--threads", threads, "--out"])
        .arg(dir)
        .status()
        .expect("polsweep runs");
    assert!(status.success());
    std::fs::read(dir.join("fig3-a.csv")).expect("csv written")
}

fn determinism() -> anyhow::Result<Outcome> {
    let tmp = tempfile::tempdir()?;
    let manifest = tmp.path().join("fig3-a.manifest.json");
    let first = figure_csv(tmp.path(), "1");
    let first_manifest = std::fs::read(&manifest)?;
    let second = figure_csv(tmp.path(), "4");
    let manifests_agree = std::fs::read(&manifest)? == first_manifest;
    Ok(Outcome {
        passed: first == second && manifests_agree && !first.is_empty(),
        detail: format!(
            "two fig3 runs (1 and 4 threads): {} bytes each, CSV identical: {}, manifest identical: {manifests_agree}",
            first.len(),
            first == second
        ),
    })
}

#[test]
fn acceptance() {
    pinned();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("single-mode limit", all(vec![validate::check_single_mode_limit()])),
        (
            "solver equivalence",
            all(vec![validate::check_solver_equivalence(0, RANDOM_SPECS), validate::check_dark_states()]),
        ),
        (
            "oracle lock",
            all(vec![
                validate::check_decoupled_mode(polariton_core::spectra::BANDWIDTH_SIGN),
                validate::check_oracle_frequencies(),
            ]),
        ),
        ("linear-zeta accuracy band", all(vec![validate::check_linear_zeta_scaling(), validate::check_bandwidth_sum()])),
        ("adiabatic convergence", all(vec![validate::check_adiabatic_convergence()])),
        ("two-body loss magnitude", all(vec![validate::check_two_body_loss()])),
        ("fig4 qualitative", all(vec![validate::check_fig4()])),
        ("fig3 qualitative", all(vec![validate::check_fig3()])),
        ("determinism", all(vec![determinism()])),
    ];
    for (name, o) in &criteria {
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<&str> = criteria.iter().filter(|(_, o)| !o.passed).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
