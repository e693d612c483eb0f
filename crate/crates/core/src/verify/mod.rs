//! Seeded property suites.
//!
//! Each suite sweeps a list of r-matrix configurations ([`CaseSpec`]), draws
//! samples from a ChaCha8 stream keyed by `(seed, suite, case, sample)`,
//! evaluates residuals in parallel and aggregates them per check and case.
//! Aggregation only takes maxima, minima and medians of the collected set, so
//! reports do not depend on scheduling and rerunning with the same
//! configuration gives byte-identical JSON.

mod config;
mod report;
mod sampling;

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

pub use config::{
    is_lower_bound, resolve_roots, CaseSpec, ConservationSettings, Suite, SuiteConfig, Tolerances, DEFAULT_SEED,
};
pub use report::{Bound, CheckRecord, CheckReport, Failure, SampleInput, REPORT_SCHEMA_VERSION};
pub use sampling::{conservation_seed, random_phase_point, MIN_CLEARANCE};

use crate::algebra::Representation;
use crate::dynamics::{
    contour_offset, energy_via_contour, fpb_terms, hamiltonian, hamiltonian_gradient, integrate_partial, lax,
    lax_gradient, poisson_bracket, sigma_distance, vector_field, Coordinate, Energy, IntegrateOptions, Observable,
    PhaseGradient, PhasePoint, SpinSystem,
};
use crate::linalg::{max_abs, max_norm, CMatrix};
use crate::rmatrix::{
    cdybe_residual, dq_derivative, eval_r, residue_check, unitarity_check, zero_weight_check, FamilyKind,
};
use crate::{Error, Result};
use report::SampleOutcome;

/// Contour used by the energy suite.
pub const CONTOUR_RADIUS: f64 = 0.5;
pub const CONTOUR_NODES: usize = 256;
/// Central-difference step of the gradient suite.
pub const FD_STEP: f64 = 1e-5;

struct Prepared {
    case: CaseSpec,
    system: SpinSystem,
}

fn prepare(case: &CaseSpec, reps: &mut Vec<Arc<Representation>>) -> Result<Prepared> {
    let rep = match reps.iter().find(|r| r.id() == case.algebra) {
        Some(r) => r.clone(),
        None => {
            let r = Arc::new(Representation::new(case.algebra)?);
            reps.push(r.clone());
            r
        }
    };
    let spec = case.build(rep).map_err(|e| e.context(case.label()))?;
    Ok(Prepared {
        case: case.clone(),
        system: SpinSystem::new(spec),
    })
}

pub fn run_rmatrix_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    run_suite(Suite::Rmatrix, cfg)
}

pub fn run_fpb_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    run_suite(Suite::Fpb, cfg)
}

pub fn run_energy_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    run_suite(Suite::Energy, cfg)
}

pub fn run_gradient_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    run_suite(Suite::Gradients, cfg)
}

pub fn run_conservation_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    run_suite(Suite::Conservation, cfg)
}

fn prepare_all(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Prepared>> {
    cfg.validate()?;
    let mut reps = Vec::new();
    let prepared = cfg
        .cases(suite)?
        .iter()
        .map(|c| prepare(c, &mut reps))
        .collect::<Result<Vec<_>>>()?;
    if suite == Suite::Conservation {
        for p in &prepared {
            conservation_seed(p.system.spec(), true).map_err(|e| e.context(p.case.label()))?;
        }
    }
    Ok(prepared)
}

/// Validates `cfg` and builds every configuration of `suite` without
/// sampling, so that bad root subsets or lattices surface before any work.
pub fn validate_suite(suite: Suite, cfg: &SuiteConfig) -> Result<()> {
    prepare_all(suite, cfg).map(|_| ())
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<CheckReport> {
    let prepared = prepare_all(suite, cfg)?;
    let per_case = match suite {
        Suite::Conservation => 2,
        _ => cfg.samples,
    };
    let jobs: Vec<(usize, usize)> = (0..prepared.len())
        .flat_map(|ci| (0..per_case).map(move |si| (ci, si)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(ci, si)| {
            let p = &prepared[ci];
            let input = draw(suite, cfg, p, ci, si)?;
            let residuals = evaluate(suite, cfg, &p.system, &input)
                .map_err(|e| e.context(format!("{suite} suite, {} sample {si}", p.case.label())))?;
            Ok((
                ci,
                SampleOutcome {
                    index: si,
                    input,
                    residuals,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    for (ci, p) in prepared.iter().enumerate() {
        let mine: Vec<SampleOutcome> = outcomes
            .iter()
            .filter(|(c, _)| *c == ci)
            .map(|(_, o)| o.clone())
            .collect();
        for &check in suite.checks() {
            let tol = cfg.tolerances.get(check, p.case.family)?;
            if let Some(r) = CheckRecord::aggregate(suite, check, &p.case, tol, &mine) {
                records.push(r);
            }
        }
    }
    Ok(CheckReport::new(suite, cfg.seed, records))
}

/// Recomputes the residual of a recorded failure from its stored inputs.
pub fn replay(cfg: &SuiteConfig, failure: &Failure) -> Result<f64> {
    let p = prepare(&failure.case, &mut Vec::new())?;
    evaluate(failure.suite, cfg, &p.system, &failure.input)?
        .into_iter()
        .find(|(name, _)| *name == failure.check)
        .map(|(_, r)| r)
        .ok_or_else(|| Error::Invalid(format!("check '{}' was not evaluated on replay", failure.check)))
}

fn draw(suite: Suite, cfg: &SuiteConfig, p: &Prepared, case: usize, sample: usize) -> Result<SampleInput> {
    let spec = p.system.spec();
    if suite == Suite::Conservation {
        let x = conservation_seed(spec, sample == 0)?;
        return Ok(point_input(&x, cfg.conservation.spectral_z.clone()));
    }
    let mut rng = sampling::stream(cfg.seed, suite, case, sample);
    let q = sampling::positions(&mut rng, spec)?;
    let rep = spec.representation();
    let (p_vec, xi) = sampling::momenta_and_spins(&mut rng, rep);
    let nz = match suite {
        Suite::Rmatrix => 3,
        Suite::Fpb => 2,
        Suite::Gradients => 1,
        _ => 0,
    };
    let z = sampling::spectral(&mut rng, spec, nz)?;
    Ok(SampleInput {
        q: q.iter().copied().collect(),
        p: p_vec.iter().copied().collect(),
        xi: xi.iter().copied().collect(),
        z,
    })
}

fn point_input(x: &PhasePoint, z: Vec<Complex64>) -> SampleInput {
    SampleInput {
        q: x.q.iter().copied().collect(),
        p: x.p.iter().copied().collect(),
        xi: x.xi.iter().copied().collect(),
        z,
    }
}

fn point(input: &SampleInput) -> PhasePoint {
    PhasePoint::new(
        DVector::from_column_slice(&input.q),
        DVector::from_column_slice(&input.p),
        DVector::from_column_slice(&input.xi),
    )
}

fn need_z(input: &SampleInput, n: usize) -> Result<()> {
    if input.z.len() < n {
        return Err(Error::Shape {
            expected: format!("{n} spectral parameters"),
            got: input.z.len().to_string(),
        });
    }
    Ok(())
}

fn evaluate(
    suite: Suite,
    cfg: &SuiteConfig,
    sys: &SpinSystem,
    input: &SampleInput,
) -> Result<Vec<(&'static str, f64)>> {
    let spec = sys.spec();
    let q = DVector::from_column_slice(&input.q);
    match suite {
        Suite::Rmatrix => {
            need_z(input, 3)?;
            let z = &input.z;
            Ok(vec![
                ("zero_weight", zero_weight_check(spec, &q, z[0])?),
                ("unitarity", unitarity_check(spec, &q, z[0])?),
                ("residue", residue_check(spec, &q)?),
                ("cdybe", cdybe_residual(spec, &q, z[0], z[1], z[2])?),
            ])
        }
        Suite::Fpb => {
            need_z(input, 2)?;
            let x = point(input);
            x.validate(sys.representation())?;
            let t = fpb_terms(sys, &x, input.z[0], input.z[1])?;
            let mut out = vec![("fpb", t.residual()), ("fpb_forms", t.forms_disagreement())];
            if max_abs(&t.anomaly) > 0.0 {
                out.push(("fpb_ablation", t.ablated_residual()));
            }
            Ok(out)
        }
        Suite::Energy => {
            let x = point(input);
            x.validate(sys.representation())?;
            let e256 = energy_via_contour(sys, &x, CONTOUR_RADIUS, CONTOUR_NODES)?;
            let e128 = energy_via_contour(sys, &x, CONTOUR_RADIUS, CONTOUR_NODES / 2)?;
            let h = hamiltonian(sys, &x)?;
            Ok(vec![
                ("energy_contour", (h - e256 - contour_offset(sys, &x)).norm()),
                ("contour_convergence", (e256 - e128).norm()),
            ])
        }
        Suite::Gradients => {
            need_z(input, 1)?;
            let x = point(input);
            x.validate(sys.representation())?;
            gradient_residuals(sys, &x, input.z[0])
        }
        Suite::Conservation => {
            let x = point(input);
            x.validate(sys.representation())?;
            conservation_residuals(cfg, sys, &x, &input.z)
        }
    }
}

fn relative_gap(analytic: &[Complex64], numeric: &[Complex64]) -> f64 {
    let scale = max_norm(analytic.iter()).max(1.0);
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

fn flatten(g: &PhaseGradient) -> Vec<Complex64> {
    g.dq.iter().chain(g.dp.iter()).chain(g.dxi.iter()).copied().collect()
}

/// Central differences of a scalar function along every phase coordinate,
/// in `(q, p, ξ)` order.
fn fd_phase<F>(x: &PhasePoint, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(&PhasePoint) -> Result<Complex64>,
{
    let flat = x.to_flat();
    let rank = x.q.len();
    let h = Complex64::new(FD_STEP, 0.0);
    (0..flat.len())
        .map(|i| {
            let mut plus = flat.clone();
            let mut minus = flat.clone();
            plus[i] += h;
            minus[i] -= h;
            let fp = f(&PhasePoint::from_flat(rank, &plus))?;
            let fm = f(&PhasePoint::from_flat(rank, &minus))?;
            Ok((fp - fm) / (h * 2.0))
        })
        .collect()
}

fn gradient_residuals(sys: &SpinSystem, x: &PhasePoint, z: Complex64) -> Result<Vec<(&'static str, f64)>> {
    let spec = sys.spec();
    let rep = sys.representation();
    let n = rep.n();

    let analytic = flatten(&hamiltonian_gradient(sys, x)?);
    let numeric = fd_phase(x, |y| hamiltonian(sys, y))?;
    let h_gap = relative_gap(&analytic, &numeric);

    let lg = lax_gradient(sys, x, z)?;
    let mut l_gap: f64 = 0.0;
    for row in 0..n {
        for col in 0..n {
            let analytic = flatten(&lg.entry(row, col));
            let numeric = fd_phase(x, |y| lax(sys, y, z).map(|l| l[(row, col)]))?;
            l_gap = l_gap.max(relative_gap(&analytic, &numeric));
        }
    }

    let h = Complex64::new(FD_STEP, 0.0);
    let mut d_gap: f64 = 0.0;
    for i in 0..sys.rank() {
        let mut dir = DVector::zeros(sys.rank());
        dir[i] = Complex64::new(1.0, 0.0);
        let analytic = dq_derivative(spec, &x.q, z, &dir)?;
        let plus = eval_r(spec, &(&x.q + &dir * h), z)?;
        let minus = eval_r(spec, &(&x.q - &dir * h), z)?;
        let numeric: CMatrix = (plus.matrix() - minus.matrix()) / (h * 2.0);
        let a: Vec<Complex64> = analytic.matrix().iter().copied().collect();
        let b: Vec<Complex64> = numeric.iter().copied().collect();
        d_gap = d_gap.max(relative_gap(&a, &b));
    }

    let v = vector_field(sys, x)?;
    let energy = Energy(sys);
    let mut coords: Vec<Coordinate> = (0..sys.rank())
        .flat_map(|i| [Coordinate::Q(i), Coordinate::P(i)])
        .collect();
    coords.extend((0..rep.dim_g()).map(Coordinate::Xi));
    let mut f_gap: f64 = 0.0;
    for c in coords {
        let rate = c.gradient(x)?.apply(&v);
        let bracket = poisson_bracket(sys.poisson(), &energy, &c, x)?;
        f_gap = f_gap.max((rate - bracket).norm());
    }

    Ok(vec![
        ("hamiltonian_gradient", h_gap),
        ("lax_gradient", l_gap),
        ("dq_derivative", d_gap),
        ("flow_bracket", f_gap),
    ])
}

fn conservation_residuals(
    cfg: &SuiteConfig,
    sys: &SpinSystem,
    x0: &PhasePoint,
    spectral_z: &[Complex64],
) -> Result<Vec<(&'static str, f64)>> {
    let c = &cfg.conservation;
    let opts = IntegrateOptions {
        dt: c.dt,
        t_end: c.t_end,
        record_every: c.record_every,
        spectral_z: spectral_z.to_vec(),
        spectral_kmax: c.spectral_kmax,
        ..IntegrateOptions::default()
    };
    let (traj, err) = integrate_partial(sys, x0, &opts)?;
    if let Some(e) = err {
        return Err(e.context(format!(
            "integration stopped after {} recorded states (last t = {})",
            traj.len(),
            traj.times.last().copied().unwrap_or(0.0)
        )));
    }
    let on_sigma = sigma_distance(sys, x0) <= cfg.tolerances.get("sigma_persistence", sys.kind())?;
    let d0 = sigma_distance(sys, x0);
    let persistence = traj
        .states
        .iter()
        .map(|x| (sigma_distance(sys, x) - d0).abs())
        .fold(0.0, f64::max);
    let mut out = vec![
        ("energy_drift", traj.energy_drift()),
        ("momentum_drift", traj.momentum_drift()),
        ("sigma_persistence", persistence),
    ];
    if on_sigma {
        let drift = (2..=c.spectral_kmax)
            .map(|k| traj.spectral_drift(k))
            .fold(0.0, f64::max);
        out.push(("spectral_drift", drift));
    } else if sys.kind() == FamilyKind::Trigonometric {
        out.push(("anomaly_witness", traj.spectral_drift(2)));
    }
    Ok(out)
}
