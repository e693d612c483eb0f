use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{is_lower_bound, CaseSpec, Suite};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Inputs of one sample, enough to recompute every residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleInput {
    pub q: Vec<Complex64>,
    #[serde(default)]
    pub p: Vec<Complex64>,
    #[serde(default)]
    pub xi: Vec<Complex64>,
    /// Spectral parameters used by the check (`z₁, z₂, z₃` for the CDYBE,
    /// `z, w` for the bracket relations).
    #[serde(default)]
    pub z: Vec<Complex64>,
}

/// A failing sample in replayable form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub suite: Suite,
    pub check: String,
    pub case: CaseSpec,
    pub sample: usize,
    pub input: SampleInput,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Pass iff the largest residual is at most the tolerance.
    Upper,
    /// Pass iff the smallest residual is at least the tolerance.
    Lower,
}

/// Statistics of one check over the samples of one case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub check: String,
    pub case: String,
    pub samples: usize,
    pub max_residual: f64,
    pub median_residual: f64,
    pub min_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    pub failures: Vec<Failure>,
}

/// Residuals of a single sample.
#[derive(Clone, Debug)]
pub(crate) struct SampleOutcome {
    pub index: usize,
    pub input: SampleInput,
    pub residuals: Vec<(&'static str, f64)>,
}

fn passes(bound: Bound, residual: f64, tolerance: f64) -> bool {
    match bound {
        Bound::Upper => residual <= tolerance,
        Bound::Lower => residual >= tolerance,
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

impl CheckRecord {
    /// Aggregates the residuals of `check` over `outcomes`. A NaN residual
    /// counts as a failure and makes the extremes NaN.
    pub(crate) fn aggregate(
        suite: Suite,
        check: &str,
        case: &CaseSpec,
        tolerance: f64,
        outcomes: &[SampleOutcome],
    ) -> Option<Self> {
        let bound = if is_lower_bound(check) {
            Bound::Lower
        } else {
            Bound::Upper
        };
        let mut values = Vec::new();
        let mut failures = Vec::new();
        for o in outcomes {
            for &(name, r) in &o.residuals {
                if name != check {
                    continue;
                }
                values.push(r);
                if !passes(bound, r, tolerance) {
                    failures.push(Failure {
                        suite,
                        check: check.to_string(),
                        case: case.clone(),
                        sample: o.index,
                        input: o.input.clone(),
                        residual: r,
                    });
                }
            }
        }
        if values.is_empty() {
            return None;
        }
        let has_nan = values.iter().any(|v| v.is_nan());
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let (min, max) = if has_nan {
            (f64::NAN, f64::NAN)
        } else {
            (sorted[0], sorted[sorted.len() - 1])
        };
        Some(Self {
            suite,
            check: check.to_string(),
            case: case.label(),
            samples: values.len(),
            max_residual: max,
            median_residual: median(&sorted),
            min_residual: min,
            tolerance,
            bound,
            pass: failures.is_empty(),
            failures,
        })
    }
}

/// Outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub suite: Suite,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub(crate) fn new(suite: Suite, seed: u64, checks: Vec<CheckRecord>) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            suite,
            seed,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Failure> {
        self.checks.iter().flat_map(|c| c.failures.iter())
    }

    /// Records for one check name across all cases.
    pub fn check(&self, name: &str) -> impl Iterator<Item = &CheckRecord> {
        let name = name.to_string();
        self.checks.iter().filter(move |c| c.check == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Fixed-width table, one line per record.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let case_w = self.checks.iter().map(|c| c.case.len()).max().unwrap_or(4).max(4);
        let _ = writeln!(
            out,
            "{:<20} {:<case_w$} {:>7} {:>11} {:>11} {:>11} {:>4}",
            "check", "case", "samples", "max", "median", "tolerance", ""
        );
        for c in &self.checks {
            let (extreme, rel) = match c.bound {
                Bound::Upper => (c.max_residual, "<="),
                Bound::Lower => (c.min_residual, ">="),
            };
            let _ = writeln!(
                out,
                "{:<20} {:<case_w$} {:>7} {:>11.3e} {:>11.3e} {rel}{:>9.1e} {:>4}",
                c.check,
                c.case,
                c.samples,
                extreme,
                c.median_residual,
                c.tolerance,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "{} suite: {}", self.suite, if self.pass { "PASS" } else { "FAIL" });
        out
    }
}
