use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hamiltonian, hamiltonian_gradient, momentum_map, spectral_invariants, PhasePoint, SpinSystem, Trajectory};
use crate::{Error, Result};

/// Time derivative `(dq, dp, dξ)` of the flow generated by `H`.
pub fn vector_field(sys: &SpinSystem, x: &PhasePoint) -> Result<PhasePoint> {
    let g = hamiltonian_gradient(sys, x)?;
    let dxi = sys.poisson().coadjoint_flow(&g.dxi, &x.xi);
    Ok(PhasePoint::new(g.dp, -g.dq, dxi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Adaptive Runge-Kutta-Fehlberg 7(8), propagating the eighth-order solution.
    Rk8,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "rk8" | "rkf78" => Ok(Method::Rk8),
            other => Err(Error::Invalid(format!(
                "unknown method '{other}' (expected rk4 or rk8)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegrateOptions {
    pub method: Method,
    /// Step for RK4; output spacing (and first trial step) for RK8.
    pub dt: f64,
    pub t_end: f64,
    /// Record every `record_every`-th output step (the final state is always recorded).
    pub record_every: usize,
    /// Spectral parameters at which `tr L(z)^k` is recorded.
    pub spectral_z: Vec<Complex64>,
    pub spectral_kmax: usize,
    /// Abort when the family's singular measure of some root drops below this.
    pub guard: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            method: Method::Rk4,
            dt: 1e-3,
            t_end: 10.0,
            record_every: 1,
            spectral_z: Vec::new(),
            spectral_kmax: 2,
            guard: 1e-6,
            rtol: 1e-12,
            atol: 1e-14,
        }
    }
}

impl IntegrateOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Step(format!("dt must be positive and finite, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Step(format!(
                "t_end must be non-negative and finite, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Step("record_every must be at least 1".into()));
        }
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::Step("tolerances must be positive".into()));
        }
        Ok(())
    }
}

struct Flow<'a> {
    sys: &'a SpinSystem,
    rank: usize,
    guard: f64,
}

impl Flow<'_> {
    fn eval(&self, t: f64, y: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let x = PhasePoint::from_flat(self.rank, y);
        self.check(t, &x)?;
        vector_field(self.sys, &x)
            .map(|v| v.to_flat())
            .map_err(|e| approach(t, e))
    }

    fn check(&self, t: f64, x: &PhasePoint) -> Result<()> {
        let spec = self.sys.spec();
        if let Some((k, m)) = spec.closest_singular_root(&x.q)? {
            if !(m >= self.guard) {
                let label = spec.root_system().label(k);
                return Err(Error::SingularApproach {
                    t,
                    detail: format!("root {label} is within {m:.3e} of the singular set"),
                });
            }
        }
        Ok(())
    }

    /// Rejects a step whose root pairings pass through the singular set.
    fn check_step(&self, t: f64, from: &DVector<Complex64>, to: &DVector<Complex64>) -> Result<()> {
        let spec = self.sys.spec();
        let (a, b) = (from.rows(0, self.rank).into_owned(), to.rows(0, self.rank).into_owned());
        if let Some((k, m)) = spec.segment_clearance(&a, &b)? {
            if !(m >= self.guard) {
                let label = spec.root_system().label(k);
                return Err(Error::SingularApproach {
                    t,
                    detail: format!("root {label} crossed the singular set during a step"),
                });
            }
        }
        Ok(())
    }
}

fn approach(t: f64, e: Error) -> Error {
    match e {
        Error::SingularConfiguration { detail, .. } => Error::SingularApproach { t, detail },
        other => other,
    }
}

fn rk4_step(f: &Flow, t: f64, y: &DVector<Complex64>, h: f64) -> Result<DVector<Complex64>> {
    let hc = Complex64::new(h, 0.0);
    let half = Complex64::new(0.5 * h, 0.0);
    let k1 = f.eval(t, y)?;
    let k2 = f.eval(t + 0.5 * h, &(y + &k1 * half))?;
    let k3 = f.eval(t + 0.5 * h, &(y + &k2 * half))?;
    let k4 = f.eval(t + h, &(y + &k3 * hc))?;
    let two = Complex64::new(2.0, 0.0);
    Ok(y + (k1 + k2 * two + k3 * two + k4) * (hc / 6.0))
}

/// Fehlberg 7(8) tableau.
pub(crate) mod rkf78 {
    pub const C: [f64; 13] = [
        0.0,
        2.0 / 27.0,
        1.0 / 9.0,
        1.0 / 6.0,
        5.0 / 12.0,
        1.0 / 2.0,
        5.0 / 6.0,
        1.0 / 6.0,
        2.0 / 3.0,
        1.0 / 3.0,
        1.0,
        0.0,
        1.0,
    ];

    pub const A: [&[f64]; 13] = [
        &[],
        &[2.0 / 27.0],
        &[1.0 / 36.0, 1.0 / 12.0],
        &[1.0 / 24.0, 0.0, 1.0 / 8.0],
        &[5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0],
        &[1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0],
        &[-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0],
        &[31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0],
        &[2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0],
        &[
            -91.0 / 108.0,
            0.0,
            0.0,
            23.0 / 108.0,
            -976.0 / 135.0,
            311.0 / 54.0,
            -19.0 / 60.0,
            17.0 / 6.0,
            -1.0 / 12.0,
        ],
        &[
            2383.0 / 4100.0,
            0.0,
            0.0,
            -341.0 / 164.0,
            4496.0 / 1025.0,
            -301.0 / 82.0,
            2133.0 / 4100.0,
            45.0 / 82.0,
            45.0 / 164.0,
            18.0 / 41.0,
        ],
        &[
            3.0 / 205.0,
            0.0,
            0.0,
            0.0,
            0.0,
            -6.0 / 41.0,
            -3.0 / 205.0,
            -3.0 / 41.0,
            3.0 / 41.0,
            6.0 / 41.0,
            0.0,
        ],
        &[
            -1777.0 / 4100.0,
            0.0,
            0.0,
            -341.0 / 164.0,
            4496.0 / 1025.0,
            -289.0 / 82.0,
            2193.0 / 4100.0,
            51.0 / 82.0,
            33.0 / 164.0,
            12.0 / 41.0,
            0.0,
            1.0,
        ],
    ];

    /// Eighth-order weights.
    pub const B8: [f64; 13] = [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        34.0 / 105.0,
        9.0 / 35.0,
        9.0 / 35.0,
        9.0 / 280.0,
        9.0 / 280.0,
        0.0,
        41.0 / 840.0,
        41.0 / 840.0,
    ];

    /// Seventh-order weights.
    #[cfg(test)]
    pub const B7: [f64; 13] = [
        41.0 / 840.0,
        0.0,
        0.0,
        0.0,
        0.0,
        34.0 / 105.0,
        9.0 / 35.0,
        9.0 / 35.0,
        9.0 / 280.0,
        9.0 / 280.0,
        41.0 / 840.0,
        0.0,
        0.0,
    ];
}

/// One RKF7(8) step: eighth-order solution and the local error estimate.
fn rkf78_step(f: &Flow, t: f64, y: &DVector<Complex64>, h: f64) -> Result<(DVector<Complex64>, Vec<f64>)> {
    let mut k: Vec<DVector<Complex64>> = Vec::with_capacity(13);
    for s in 0..13 {
        let mut ys = y.clone();
        for (j, a) in rkf78::A[s].iter().enumerate() {
            if *a != 0.0 {
                ys += &k[j] * Complex64::new(h * a, 0.0);
            }
        }
        k.push(f.eval(t + rkf78::C[s] * h, &ys)?);
    }
    let mut y8 = y.clone();
    for (s, b) in rkf78::B8.iter().enumerate() {
        if *b != 0.0 {
            y8 += &k[s] * Complex64::new(h * b, 0.0);
        }
    }
    let err_vec = (&k[0] + &k[10] - &k[11] - &k[12]) * Complex64::new(h * 41.0 / 840.0, 0.0);
    let err: Vec<f64> = err_vec.iter().map(|e| e.norm()).collect();
    Ok((y8, err))
}

fn record(sys: &SpinSystem, opts: &IntegrateOptions, traj: &mut Trajectory, t: f64, x: PhasePoint) -> Result<()> {
    let h = hamiltonian(sys, &x).map_err(|e| approach(t, e))?;
    let j = momentum_map(&x, sys.rank());
    let mut spectral = Vec::with_capacity(opts.spectral_z.len() * opts.spectral_kmax);
    for z in &opts.spectral_z {
        spectral.extend(spectral_invariants(sys, &x, *z, opts.spectral_kmax).map_err(|e| approach(t, e))?);
    }
    traj.push(t, x, h, j, spectral);
    Ok(())
}

/// Integrates the flow of `H` from `x0`.
///
/// Returns the trajectory recorded so far together with the error that
/// stopped it, if any. Invalid options fail before any step is taken.
pub fn integrate_partial(
    sys: &SpinSystem,
    x0: &PhasePoint,
    opts: &IntegrateOptions,
) -> Result<(Trajectory, Option<Error>)> {
    opts.validate()?;
    x0.validate(sys.representation())?;
    let rank = sys.rank();
    let flow = Flow {
        sys,
        rank,
        guard: opts.guard,
    };
    let mut traj = Trajectory::new(opts.spectral_z.clone(), opts.spectral_kmax);
    if let Err(e) = flow
        .check(0.0, x0)
        .and_then(|_| record(sys, opts, &mut traj, 0.0, x0.clone()))
    {
        return Ok((traj, Some(e)));
    }
    let steps = (opts.t_end / opts.dt).round() as usize;
    let steps = if (steps as f64 * opts.dt - opts.t_end).abs() > 1e-9 * opts.t_end.max(1.0) {
        // t_end is not a multiple of dt: finish with a short step
        (opts.t_end / opts.dt).ceil() as usize
    } else {
        steps
    };
    let mut y = x0.to_flat();
    let mut t = 0.0;
    let mut h_trial = opts.dt;
    for step in 1..=steps {
        let t_next = (step as f64 * opts.dt).min(opts.t_end);
        let result = match opts.method {
            Method::Rk4 => rk4_step(&flow, t, &y, t_next - t),
            Method::Rk8 => adaptive_segment(&flow, t, &y, t_next, &mut h_trial, opts),
        };
        match result.and_then(|next| flow.check_step(t_next, &y, &next).map(|_| next)) {
            Ok(next) => y = next,
            Err(e) => return Ok((traj, Some(e))),
        }
        t = t_next;
        let x = PhasePoint::from_flat(rank, &y);
        if let Err(e) = flow.check(t, &x) {
            return Ok((traj, Some(e)));
        }
        if step % opts.record_every == 0 || step == steps {
            if let Err(e) = record(sys, opts, &mut traj, t, x) {
                return Ok((traj, Some(e)));
            }
        }
    }
    Ok((traj, None))
}

pub fn integrate(sys: &SpinSystem, x0: &PhasePoint, opts: &IntegrateOptions) -> Result<Trajectory> {
    match integrate_partial(sys, x0, opts)? {
        (traj, None) => Ok(traj),
        (_, Some(e)) => Err(e),
    }
}

/// Adaptive RKF7(8) steps from `t` to exactly `t_end`.
fn adaptive_segment(
    f: &Flow,
    mut t: f64,
    y0: &DVector<Complex64>,
    t_end: f64,
    h_trial: &mut f64,
    opts: &IntegrateOptions,
) -> Result<DVector<Complex64>> {
    let mut y = y0.clone();
    let mut rejections = 0usize;
    while t < t_end {
        let remaining = t_end - t;
        let last = *h_trial >= remaining;
        let h = if last { remaining } else { *h_trial };
        let (y_new, err) = rkf78_step(f, t, &y, h)?;
        let ratio = err
            .iter()
            .zip(y.iter().zip(y_new.iter()))
            .map(|(e, (a, b))| e / (opts.atol + opts.rtol * a.norm().max(b.norm())))
            .fold(0.0, f64::max);
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-1.0 / 8.0)).clamp(0.2, 5.0)
        };
        if ratio <= 1.0 {
            f.check_step(t + h, &y, &y_new)?;
            t = if last { t_end } else { t + h };
            y = y_new;
            *h_trial = if last { h_trial.min(h * factor) } else { h * factor };
            rejections = 0;
        } else {
            *h_trial = h * factor;
            rejections += 1;
            if rejections > 50 || *h_trial < 1e-14 * t_end.abs().max(1.0) {
                return Err(Error::Step(format!("adaptive step size underflow at t = {t}")));
            }
        }
    }
    Ok(y)
}
