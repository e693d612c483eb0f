use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};
use spincm::dynamics::{hamiltonian, lax, spectral_invariants, PhasePoint, SpinSystem};
use spincm::Complex64;

use crate::config::{parse_list, set, Cplx, RunConfig};
use crate::{base_config, system, EvalArgs, EXIT_OK};

const DEFAULT_Z: f64 = 0.5;
const DEFAULT_KMAX: usize = 3;
const QUANTITIES: [&str; 4] = ["h", "lax", "r", "spectral"];

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn merge(args: &EvalArgs) -> Result<RunConfig> {
    let mut cfg = base_config(&args.common)?;
    set(
        &mut cfg.initial.q,
        args.q.as_deref().map(parse_list).transpose().context("--q")?,
    );
    set(
        &mut cfg.initial.p,
        args.p.as_deref().map(parse_list).transpose().context("--p")?,
    );
    set(
        &mut cfg.initial.xi,
        args.xi.as_deref().map(parse_list).transpose().context("--xi")?,
    );
    set(
        &mut cfg.eval.z,
        args.z.as_deref().map(str::parse::<Cplx>).transpose().context("--z")?,
    );
    if !args.what.is_empty() {
        cfg.eval.what = Some(args.what.clone());
    }
    set(&mut cfg.eval.kmax, args.kmax);
    Ok(cfg)
}

fn selected(cfg: &RunConfig) -> Result<Vec<&'static str>> {
    let Some(what) = &cfg.eval.what else {
        return Ok(QUANTITIES.to_vec());
    };
    let mut out = Vec::new();
    for w in what {
        let w = w.trim().to_ascii_lowercase();
        if w == "all" {
            return Ok(QUANTITIES.to_vec());
        }
        match QUANTITIES.iter().find(|&&q| q == w) {
            Some(q) if !out.contains(q) => out.push(*q),
            Some(_) => {}
            None => bail!("unknown quantity '{w}' (expected h, lax, r, spectral or all)"),
        }
    }
    Ok(out)
}

fn r_table(sys: &SpinSystem, x: &PhasePoint, z: Complex64) -> Result<Value> {
    let spec = sys.spec();
    let rs = spec.root_system();
    let c = spec.coefficients(&x.q, z)?;
    let mut roots = Map::new();
    let mut residue = Map::new();
    for (k, v) in c.roots.iter().enumerate() {
        roots.insert(rs.label(k), pair(*v));
        residue.insert(rs.label(k), pair(z * v));
    }
    Ok(json!({
        "cartan": pair(c.cartan),
        "roots": roots,
        "residue": { "cartan": pair(z * c.cartan), "roots": residue },
    }))
}

pub fn run(args: EvalArgs) -> Result<u8> {
    let cfg = merge(&args)?;
    let what = selected(&cfg)?;
    let setup = system::build(&cfg)?;
    let sys = &setup.system;
    let x = system::explicit_point(&cfg, sys)?;
    x.validate(sys.representation())?;
    let z = cfg.eval.z.map_or(Complex64::new(DEFAULT_Z, 0.0), |c| c.0);
    let kmax = cfg.eval.kmax.unwrap_or(DEFAULT_KMAX);
    sys.spec().check_q(&x.q)?;

    let mut out = Map::new();
    out.insert("config".into(), cfg.echo());
    out.insert("system".into(), json!(setup.case.label()));
    out.insert("z".into(), pair(z));
    for w in what {
        let value = match w {
            "h" => pair(hamiltonian(sys, &x)?),
            "lax" => {
                let l = lax(sys, &x, z)?;
                Value::Array(
                    l.row_iter()
                        .map(|row| Value::Array(row.iter().map(|v| pair(*v)).collect()))
                        .collect(),
                )
            }
            "r" => r_table(sys, &x, z)?,
            _ => Value::Array(spectral_invariants(sys, &x, z, kmax)?.into_iter().map(pair).collect()),
        };
        out.insert(w.to_string(), value);
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(out))?);
    Ok(EXIT_OK)
}
