use nalgebra::DVector;
use num_complex::Complex64;

use super::{PhaseGradient, PhasePoint, SpinSystem};
use crate::linalg::CMatrix;
use crate::rmatrix::Family;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-root potential `V_α((α,q))` and its derivative, so that
/// `H = ½Σp_i² - ½Σ_α V_α ξ_α ξ_{-α}`.
pub(crate) fn potentials(sys: &SpinSystem, q: &DVector<Complex64>) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let spec = sys.spec();
    let x = spec.check_q(q)?;
    let rs = spec.root_system();
    let m = rs.len();
    let mut v = vec![ZERO; m];
    let mut dv = vec![ZERO; m];
    match spec.family() {
        Family::Rational { subset } => {
            for k in subset.members() {
                let inv = x[k].inv();
                v[k] = inv * inv;
                dv[k] = -2.0 * inv * inv * inv;
            }
        }
        Family::Trigonometric { span, .. } => {
            for k in 0..m {
                if span.contains(k) {
                    let s = x[k].sin();
                    v[k] = (s * s).inv() - 1.0 / 3.0;
                    dv[k] = -2.0 * x[k].cos() / (s * s * s);
                } else {
                    v[k] = Complex64::new(5.0 / 3.0, 0.0);
                }
            }
        }
        Family::Elliptic { lattice } => {
            for k in 0..m {
                let wrap = |e: Error| match e {
                    Error::Pole { .. } => {
                        let label = rs.label(k);
                        Error::singular_root(label.clone(), format!("℘ has a pole at ({label}, q) = {}", x[k]))
                    }
                    other => other,
                };
                v[k] = lattice.wp(x[k]).map_err(wrap)?;
                dv[k] = lattice.wp_prime(x[k]).map_err(wrap)?;
            }
        }
    }
    Ok((v, dv))
}

/// The family's Hamiltonian, exactly as displayed for each canonical r-matrix.
pub fn hamiltonian(sys: &SpinSystem, x: &PhasePoint) -> Result<Complex64> {
    x.validate(sys.representation())?;
    let (v, _) = potentials(sys, &x.q)?;
    let rs = sys.spec().root_system();
    let rank = sys.rank();
    let kinetic: Complex64 = x.p.iter().map(|p| p * p).sum::<Complex64>() * 0.5;
    let spin: Complex64 = (0..rs.len())
        .map(|k| v[k] * x.xi[rank + k] * x.xi[rank + rs.negation(k)])
        .sum();
    Ok(kinetic - spin * 0.5)
}

/// Analytic gradient of [`hamiltonian`].
pub fn hamiltonian_gradient(sys: &SpinSystem, x: &PhasePoint) -> Result<PhaseGradient> {
    x.validate(sys.representation())?;
    let (v, dv) = potentials(sys, &x.q)?;
    let rs = sys.spec().root_system();
    let rank = sys.rank();
    let mut dq = DVector::zeros(rank);
    let mut dxi = DVector::zeros(sys.representation().dim_g());
    for k in 0..rs.len() {
        let own = x.xi[rank + k];
        let partner = x.xi[rank + rs.negation(k)];
        let weight = dv[k] * own * partner * -0.5;
        for (i, a) in rs.root(k).iter().enumerate() {
            dq[i] += weight * *a;
        }
        // V is even in α, so both occurrences of ξ_α contribute V_α ξ_{-α}/2
        dxi[rank + k] = -v[k] * partner;
    }
    Ok(PhaseGradient {
        dq,
        dp: x.p.clone(),
        dxi,
    })
}

/// `L(z) = p + Σ_a c_a(q, z) ξ_a B_a`, where `c_a` is the coefficient of
/// `B_a⊗B_a^∨` in `r(q, z)`; this reproduces every displayed Lax operator.
pub fn lax(sys: &SpinSystem, x: &PhasePoint, z: Complex64) -> Result<CMatrix> {
    let rep = sys.representation();
    x.validate(rep)?;
    let coeffs = sys.spec().coefficients(&x.q, z)?.by_basis(rep.rank());
    let mut l = x.momentum_matrix(rep);
    for (a, c) in coeffs.iter().enumerate() {
        let w = c * x.xi[a];
        if w != ZERO {
            l += rep.basis_element(a) * w;
        }
    }
    Ok(l)
}

/// Matrix-valued partial derivatives of `L(z)` in every phase coordinate.
#[derive(Clone, Debug)]
pub struct LaxGradient {
    pub dq: Vec<CMatrix>,
    pub dp: Vec<CMatrix>,
    pub dxi: Vec<CMatrix>,
}

impl LaxGradient {
    /// Gradient of the single entry `L(z)_{row,col}`.
    pub fn entry(&self, row: usize, col: usize) -> PhaseGradient {
        let pick = |ms: &[CMatrix]| DVector::from_iterator(ms.len(), ms.iter().map(|m| m[(row, col)]));
        PhaseGradient {
            dq: pick(&self.dq),
            dp: pick(&self.dp),
            dxi: pick(&self.dxi),
        }
    }
}

pub fn lax_gradient(sys: &SpinSystem, x: &PhasePoint, z: Complex64) -> Result<LaxGradient> {
    let rep = sys.representation();
    x.validate(rep)?;
    let rank = rep.rank();
    let rs = rep.root_system();
    let coeffs = sys.spec().coefficients(&x.q, z)?.by_basis(rank);
    let slopes = sys.spec().root_derivatives(&x.q, z)?;
    let n = rep.n();
    let dq = (0..rank)
        .map(|i| {
            let mut m = CMatrix::zeros(n, n);
            for k in 0..rs.len() {
                let w = slopes[k] * rs.root(k)[i] * x.xi[rank + k];
                if w != ZERO {
                    m += rep.root_vector(k) * w;
                }
            }
            m
        })
        .collect();
    let dp = rep.cartan().to_vec();
    let dxi = coeffs
        .iter()
        .enumerate()
        .map(|(a, c)| rep.basis_element(a) * *c)
        .collect();
    Ok(LaxGradient { dq, dp, dxi })
}
