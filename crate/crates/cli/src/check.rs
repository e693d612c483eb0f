use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;
use spincm::algebra::AlgebraId;
use spincm::rmatrix::FamilyKind;
use spincm::verify::{run_suite, validate_suite, Suite, SuiteConfig, Tolerances};

use crate::config::{set, RunConfig};
use crate::system::half_periods;
use crate::{base_config, CheckArgs, EXIT_CHECK_FAILED, EXIT_OK};

const DEFAULT_REPORT: &str = "spincm-report.json";

fn list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(Into::into))
        .collect()
}

fn suites(names: &[String]) -> Result<Vec<Suite>> {
    if names.is_empty() || names.iter().any(|n| n.trim().eq_ignore_ascii_case("all")) {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        let s: Suite = n.parse()?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

fn merge(args: &CheckArgs) -> Result<RunConfig> {
    let mut cfg = base_config(&args.common)?;
    if !args.suites.is_empty() {
        cfg.check.suites = Some(args.suites.clone());
    }
    set(&mut cfg.check.samples, args.samples);
    if args.negative_control {
        cfg.check.negative_control = Some(true);
    }
    for t in &args.tolerances {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| anyhow!("--tolerance expects name=value, got '{t}'"))?;
        let value: f64 = value.trim().parse().with_context(|| format!("tolerance '{name}'"))?;
        cfg.check.tolerances.insert(name.trim().to_string(), value);
    }
    if let Some(path) = &args.output {
        cfg.output.path = Some(path.clone());
    }
    Ok(cfg)
}

/// The verify configuration of one suite under `cfg`.
pub fn suite_config(suite: Suite, cfg: &RunConfig) -> Result<SuiteConfig> {
    let mut sc = SuiteConfig::defaults(suite);
    if let Some(f) = &cfg.family {
        sc.families = list::<FamilyKind>(f)?;
    }
    if let Some(a) = &cfg.algebra {
        sc.algebras = list::<AlgebraId>(a)?;
    }
    if let Some(n) = cfg.check.samples {
        sc.samples = n;
    }
    sc.seed = cfg.seed.unwrap_or(spincm::verify::DEFAULT_SEED);
    sc.tolerances = Tolerances::with_overrides(&cfg.check.tolerances)?;
    sc.delta_prime = cfg.delta_prime.clone().map(|d| vec![d]);
    sc.pi_prime = cfg.pi_prime.clone().map(|d| vec![d]);
    sc.half_periods = half_periods(cfg)?;
    sc.negative_control = cfg.check.negative_control.unwrap_or(false);
    Ok(sc)
}

pub fn run(args: CheckArgs) -> Result<u8> {
    let cfg = merge(&args)?;
    let selected = suites(cfg.check.suites.as_deref().unwrap_or_default())?;
    if selected.is_empty() {
        bail!("no suites selected");
    }
    let mut plans = Vec::new();
    for &suite in &selected {
        let sc = suite_config(suite, &cfg)?;
        validate_suite(suite, &sc).with_context(|| format!("{suite} suite configuration"))?;
        plans.push((suite, sc));
    }
    let path = cfg.output.path.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_REPORT));

    let mut reports = Vec::new();
    for (suite, sc) in &plans {
        let report = run_suite(*suite, sc).with_context(|| format!("{suite} suite"))?;
        print!("{}", report.table());
        println!();
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass);
    let doc = json!({
        "config": cfg.echo(),
        "pass": pass,
        "reports": reports,
    });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    std::fs::write(&path, text).with_context(|| format!("cannot write report {}", path.display()))?;
    println!("report written to {}", path.display());
    println!("overall: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
