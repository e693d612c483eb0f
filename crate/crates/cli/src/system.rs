//! Builds the single system used by `simulate` and `eval`.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use spincm::algebra::{AlgebraId, Representation};
use spincm::dynamics::{PhasePoint, SpinSystem};
use spincm::rmatrix::FamilyKind;
use spincm::verify::{resolve_roots, CaseSpec};
use spincm::Complex64;

use crate::config::{Cplx, RunConfig};

pub struct Setup {
    pub case: CaseSpec,
    pub system: SpinSystem,
}

pub fn half_periods(cfg: &RunConfig) -> Result<Option<[Complex64; 2]>> {
    match (cfg.omega1, cfg.omega2) {
        (Some(a), Some(b)) => Ok(Some([a.0, b.0])),
        (None, None) => Ok(None),
        _ => bail!("omega1 and omega2 must be given together"),
    }
}

/// Defaults: A1, rational, `Δ′ = Π′ = all`, square lattice. Single values only.
pub fn build(cfg: &RunConfig) -> Result<Setup> {
    let algebra: AlgebraId = cfg.algebra.as_deref().unwrap_or("A1").parse()?;
    let family: FamilyKind = cfg.family.as_deref().unwrap_or("rational").parse()?;
    let rep = Arc::new(Representation::new(algebra)?);
    let selection = match family {
        FamilyKind::Rational => cfg.delta_prime.as_deref(),
        FamilyKind::Trigonometric => cfg.pi_prime.as_deref(),
        FamilyKind::Elliptic => None,
    };
    let roots = match family {
        FamilyKind::Elliptic => Vec::new(),
        _ => resolve_roots(rep.root_system(), family, selection.unwrap_or("all"))?,
    };
    let case = CaseSpec {
        algebra,
        family,
        roots,
        half_periods: half_periods(cfg)?,
        unchecked: false,
    };
    let spec = case.build(rep).with_context(|| case.label())?;
    Ok(Setup {
        case,
        system: SpinSystem::new(spec),
    })
}

fn values(name: &str, given: Option<&Vec<Cplx>>, len: usize) -> Result<Vec<Complex64>> {
    match given {
        None => Ok(vec![Complex64::new(0.0, 0.0); len]),
        Some(v) if v.len() == len => Ok(v.iter().map(|c| c.0).collect()),
        Some(v) => Err(anyhow!("{name} needs {len} values, got {}", v.len())),
    }
}

/// The explicit point of `[initial]`; `p` and `ξ` default to zero.
pub fn explicit_point(cfg: &RunConfig, sys: &SpinSystem) -> Result<PhasePoint> {
    let rep = sys.representation();
    let q = cfg
        .initial
        .q
        .as_ref()
        .ok_or_else(|| anyhow!("no initial q given (use --q or --random)"))?;
    let q = values("q", Some(q), rep.rank())?;
    let p = values("p", cfg.initial.p.as_ref(), rep.rank())?;
    let xi = values("xi", cfg.initial.xi.as_ref(), rep.dim_g())?;
    Ok(PhasePoint::from_complex(&q, &p, &xi))
}
