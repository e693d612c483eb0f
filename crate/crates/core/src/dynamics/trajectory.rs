use std::io::Write;

use nalgebra::DVector;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::{sigma_distance, PhasePoint, SpinSystem};
use crate::{Error, Result};

pub const TRAJECTORY_SCHEMA_VERSION: u32 = 1;

/// Recorded states and diagnostics of one integration.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub energy: Vec<Complex64>,
    pub momentum: Vec<DVector<Complex64>>,
    /// Per time: `tr L(z)^k` for each sampled `z`, `k = 1..=spectral_kmax`, `z`-major.
    pub spectral: Vec<Vec<Complex64>>,
    pub spectral_z: Vec<Complex64>,
    pub spectral_kmax: usize,
}

fn pair(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn pairs<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> Value {
    Value::Array(values.into_iter().map(pair).collect())
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

impl Trajectory {
    pub fn new(spectral_z: Vec<Complex64>, spectral_kmax: usize) -> Self {
        Self {
            spectral_z,
            spectral_kmax,
            ..Self::default()
        }
    }

    pub(crate) fn push(
        &mut self,
        t: f64,
        x: PhasePoint,
        h: Complex64,
        j: DVector<Complex64>,
        spectral: Vec<Complex64>,
    ) {
        self.times.push(t);
        self.states.push(x);
        self.energy.push(h);
        self.momentum.push(j);
        self.spectral.push(spectral);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&PhasePoint> {
        self.states.last()
    }

    /// `max_t |H(t) - H(0)| / max(1, |H(0)|)`.
    pub fn energy_drift(&self) -> f64 {
        let Some(h0) = self.energy.first() else { return 0.0 };
        self.energy.iter().map(|h| relative(*h, *h0)).fold(0.0, f64::max)
    }

    /// `max_t ‖J(t) - J(0)‖_∞`.
    pub fn momentum_drift(&self) -> f64 {
        let Some(j0) = self.momentum.first() else { return 0.0 };
        self.momentum
            .iter()
            .map(|j| crate::linalg::max_norm((j - j0).iter()))
            .fold(0.0, f64::max)
    }

    /// Largest relative drift of the recorded `tr L(z)^k` with `k = power`.
    pub fn spectral_drift(&self, power: usize) -> f64 {
        let Some(s0) = self.spectral.first() else { return 0.0 };
        if power == 0 || power > self.spectral_kmax {
            return 0.0;
        }
        let idx: Vec<usize> = (0..self.spectral_z.len())
            .map(|zi| zi * self.spectral_kmax + power - 1)
            .collect();
        self.spectral
            .iter()
            .flat_map(|s| idx.iter().map(move |&i| relative(s[i], s0[i])))
            .fold(0.0, f64::max)
    }

    /// Largest distance from `Σ` along the recorded states.
    pub fn sigma_excursion(&self, sys: &SpinSystem) -> f64 {
        self.states.iter().map(|x| sigma_distance(sys, x)).fold(0.0, f64::max)
    }

    /// CSV with one row per recorded time. Phase-space columns hold real
    /// parts; `H` and the spectral invariants carry real and imaginary parts.
    /// If `config` is given it is written first as a `# config: ...` line.
    pub fn write_csv<W: Write>(&self, mut out: W, config: Option<&Value>) -> Result<()> {
        if let Some(cfg) = config {
            writeln!(out, "# config: {cfg}").map_err(io_err)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let rank = self.states.first().map_or(0, |x| x.q.len());
        let dim = self.states.first().map_or(0, |x| x.xi.len());
        let mut header = vec!["t".to_string()];
        header.extend((1..=rank).map(|i| format!("q{i}")));
        header.extend((1..=rank).map(|i| format!("p{i}")));
        header.extend((1..=dim).map(|a| format!("xi{a}")));
        header.extend(["H_re".to_string(), "H_im".to_string(), "J_norm".to_string()]);
        for zi in 0..self.spectral_z.len() {
            for k in 1..=self.spectral_kmax {
                header.push(format!("tr_z{}_k{k}_re", zi + 1));
                header.push(format!("tr_z{}_k{k}_im", zi + 1));
            }
        }
        w.write_record(&header).map_err(csv_err)?;
        for (i, t) in self.times.iter().enumerate() {
            let x = &self.states[i];
            let mut row = vec![format!("{t}")];
            row.extend(
                x.q.iter()
                    .chain(x.p.iter())
                    .chain(x.xi.iter())
                    .map(|v| format!("{}", v.re)),
            );
            row.push(format!("{}", self.energy[i].re));
            row.push(format!("{}", self.energy[i].im));
            row.push(format!("{}", self.momentum[i].norm()));
            for s in &self.spectral[i] {
                row.push(format!("{}", s.re));
                row.push(format!("{}", s.im));
            }
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(io_err)?;
        Ok(())
    }

    /// JSON document with fixed field names; complex numbers are `[re, im]`.
    pub fn to_json(&self, config: Option<&Value>) -> Value {
        json!({
            "schema_version": TRAJECTORY_SCHEMA_VERSION,
            "config": config.cloned().unwrap_or(Value::Null),
            "spectral_z": pairs(&self.spectral_z),
            "spectral_kmax": self.spectral_kmax,
            "t": self.times,
            "q": self.states.iter().map(|x| pairs(x.q.iter())).collect::<Vec<_>>(),
            "p": self.states.iter().map(|x| pairs(x.p.iter())).collect::<Vec<_>>(),
            "xi": self.states.iter().map(|x| pairs(x.xi.iter())).collect::<Vec<_>>(),
            "H": pairs(&self.energy),
            "J_norm": self.momentum.iter().map(|j| j.norm()).collect::<Vec<_>>(),
            "spectral": self.spectral.iter().map(pairs).collect::<Vec<_>>(),
        })
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
