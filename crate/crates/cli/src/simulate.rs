use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use spincm::dynamics::{integrate_partial, project_to_sigma, sigma_distance, IntegrateOptions, Method};
use spincm::verify::{random_phase_point, ConservationSettings};
use spincm::Error;

use crate::config::{parse_list, set, RunConfig};
use crate::{base_config, system, SimulateArgs, EXIT_OK, EXIT_SINGULAR};

const DEFAULT_TRAJECTORY: &str = "spincm-trajectory.csv";
const DEFAULT_RECORD_EVERY: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn merge(args: &SimulateArgs) -> Result<RunConfig> {
    let mut cfg = base_config(&args.common)?;
    let init = &mut cfg.initial;
    set(
        &mut init.q,
        args.q.as_deref().map(parse_list).transpose().context("--q")?,
    );
    set(
        &mut init.p,
        args.p.as_deref().map(parse_list).transpose().context("--p")?,
    );
    set(
        &mut init.xi,
        args.xi.as_deref().map(parse_list).transpose().context("--xi")?,
    );
    if args.random {
        init.random = Some(true);
    }
    if args.sigma {
        init.sigma = Some(true);
    }
    let int = &mut cfg.integrate;
    set(&mut int.method, args.method.clone());
    set(&mut int.dt, args.dt);
    set(&mut int.t_end, args.t_end);
    set(&mut int.record_every, args.record_every);
    set(
        &mut int.spectral_z,
        args.spectral_z
            .as_deref()
            .map(parse_list)
            .transpose()
            .context("--spectral-z")?,
    );
    set(&mut int.spectral_kmax, args.spectral_kmax);
    set(&mut cfg.output.path, args.output.clone());
    set(&mut cfg.output.format, args.format.clone());
    Ok(cfg)
}

fn options(cfg: &RunConfig) -> Result<IntegrateOptions> {
    let int = &cfg.integrate;
    let defaults = ConservationSettings::default();
    let opts = IntegrateOptions {
        method: match &int.method {
            Some(m) => m.parse::<Method>()?,
            None => Method::Rk4,
        },
        dt: int.dt.unwrap_or(defaults.dt),
        t_end: int.t_end.unwrap_or(defaults.t_end),
        record_every: int.record_every.unwrap_or(DEFAULT_RECORD_EVERY),
        spectral_z: match &int.spectral_z {
            Some(z) => z.iter().map(|c| c.0).collect(),
            None => defaults.spectral_z,
        },
        spectral_kmax: int.spectral_kmax.unwrap_or(defaults.spectral_kmax),
        ..IntegrateOptions::default()
    };
    opts.validate()?;
    Ok(opts)
}

fn format(cfg: &RunConfig, path: &Path) -> Result<Format> {
    let name = match &cfg.output.format {
        Some(f) => f.to_ascii_lowercase(),
        None => path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("csv")
            .to_ascii_lowercase(),
    };
    match name.as_str() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => bail!("unknown output format '{other}' (expected csv or json)"),
    }
}

pub fn run(args: SimulateArgs) -> Result<u8> {
    let cfg = merge(&args)?;
    let opts = options(&cfg)?;
    let path = cfg
        .output
        .path
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_TRAJECTORY));
    let fmt = format(&cfg, &path)?;
    let setup = system::build(&cfg)?;
    let sys = &setup.system;

    let random = cfg.initial.random.unwrap_or(false);
    if random && (cfg.initial.q.is_some() || cfg.initial.p.is_some() || cfg.initial.xi.is_some()) {
        bail!("give either an explicit initial point or --random, not both");
    }
    let mut x0 = if random {
        random_phase_point(sys.spec(), cfg.seed.unwrap_or_default())?
    } else {
        system::explicit_point(&cfg, sys)?
    };
    if cfg.initial.sigma.unwrap_or(false) {
        x0 = project_to_sigma(sys, &x0);
    }
    x0.validate(sys.representation())?;

    let (traj, stopped) = integrate_partial(sys, &x0, &opts)?;
    let echo = cfg.echo();
    match fmt {
        Format::Csv => {
            let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
            traj.write_csv(BufWriter::new(file), Some(&echo))?;
        }
        Format::Json => {
            let text = serde_json::to_string(&traj.to_json(Some(&echo)))? + "\n";
            std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }

    println!("system: {}", setup.case.label());
    println!("method: {:?}, dt = {}, t_end = {}", opts.method, opts.dt, opts.t_end);
    println!("initial distance from sigma: {:.3e}", sigma_distance(sys, &x0));
    if let (Some(t), Some(h)) = (traj.times.last(), traj.energy.first()) {
        println!("recorded states: {} (last t = {t})", traj.len());
        println!("H(0): {}", h);
    }
    println!("energy drift: {:.3e}", traj.energy_drift());
    println!("momentum drift: {:.3e}", traj.momentum_drift());
    for k in 1..=opts.spectral_kmax {
        println!("spectral drift k={k}: {:.3e}", traj.spectral_drift(k));
    }
    println!("sigma excursion: {:.3e}", traj.sigma_excursion(sys));
    println!("trajectory written to {}", path.display());

    match stopped {
        None => Ok(EXIT_OK),
        Some(e) => {
            if let Error::SingularApproach { t, .. } = e.root_cause() {
                println!("aborted at t = {t}");
            }
            if matches!(
                e.root_cause(),
                Error::SingularApproach { .. } | Error::SingularConfiguration { .. }
            ) {
                eprintln!("error: {:#}", anyhow::Error::from(e));
                Ok(EXIT_SINGULAR)
            } else {
                Err(e.into())
            }
        }
    }
}
