//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! Criterion 1 is additionally checked end to end through the `coprime`
//! binary, with its wall-clock budget applied to the process.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use coprime_cli::reproduce::{
    self, parse_decimal, CriterionOutcome, ReproduceConfig, DENSITY_REFERENCE, DENSITY_SIDE,
    DENSITY_TOLERANCE,
};
use coprime_core::constants::{six_over_pi_squared, six_over_pi_squared_ulp};
use coprime_core::rational::{abs_diff_le, cmp, ratio};
use coprime_core::{BigInt, BigRational};
use num_traits::Signed;

fn field(v: &serde_json::Value, key: &str) -> BigInt {
    v[key]
        .as_str()
        .unwrap_or_else(|| panic!("missing field {key}"))
        .parse()
        .expect("integer field")
}

fn fraction(v: &serde_json::Value, stem: &str) -> BigRational {
    BigRational::new(
        field(v, &format!("{stem}_num")),
        field(v, &format!("{stem}_den")),
    )
}

/// `density --n 100000` through the binary: the ratio is close to the
/// reference and the printed envelope plus the tail of Σ μ(k)/k² covers
/// the distance to 6/π².
fn density_via_binary() -> Result<String, String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_coprime"))
        .args(["density", "--n", &DENSITY_SIDE.to_string()])
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON: {e}"))?;
    let r = &doc["result"];
    let value = fraction(r, "ratio");
    let reference = parse_decimal(DENSITY_REFERENCE);
    if !abs_diff_le(
        &value,
        &reference,
        &ratio(DENSITY_TOLERANCE.0, DENSITY_TOLERANCE.1),
    ) {
        return Err(format!("ratio {} not within 5e-4", r["ratio_decimal"]));
    }
    let m = DENSITY_SIDE as i64;
    let bound = fraction(r, "error") + ratio(1, m - 1) + six_over_pi_squared_ulp();
    let gap = (&value - six_over_pi_squared()).abs();
    if cmp(&gap, &bound).is_gt() {
        return Err("gap to 6/pi^2 exceeds the certified bound".into());
    }
    if elapsed > Duration::from_secs(5) {
        return Err(format!("binary took {:.2} s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "binary: ratio {}, {:.2} s",
        r["ratio_decimal"].as_str().unwrap_or_default(),
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let cfg = ReproduceConfig::default();
    let mut failed = 0;
    for (i, criterion) in reproduce::CRITERIA.iter().enumerate() {
        let outcome: CriterionOutcome = criterion(&cfg);
        let mut line = outcome.summary_line();
        let mut passed = outcome.passed();
        if i == 0 {
            match density_via_binary() {
                Ok(note) => line.push_str(&format!("; {note}")),
                Err(e) => {
                    passed = false;
                    line = line.replacen("PASS", "FAIL", 1);
                    line.push_str(&format!("; binary check failed: {e}"));
                }
            }
        }
        println!("{line}");
        failed += usize::from(!passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        reproduce::CRITERIA.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
