use num_complex::Complex64;

use super::{lax, lax_gradient, momentum_map, PhasePoint, SpinSystem};
use crate::linalg::{commutator, kron, max_abs, swap_operator, CMatrix};
use crate::rmatrix::{dq_derivative, eval_r};
use crate::Result;

/// Both sides of the fundamental Poisson bracket relations at `(x, z, w)`.
#[derive(Clone, Debug)]
pub struct FpbTerms {
    /// `{L₁(z), L₂(w)}`, entry by entry.
    pub lhs: CMatrix,
    /// `-[r¹²(z-w), L₁(z) + L₂(w)] - X_{i*ξ} r(z-w)`.
    pub rhs_joint: CMatrix,
    /// `-[r¹²(z-w), L₁(z)] + [r²¹(w-z), L₂(w)] - X_{i*ξ} r(z-w)`.
    pub rhs_split: CMatrix,
    /// `X_{i*ξ} r(z-w)`.
    pub anomaly: CMatrix,
}

impl FpbTerms {
    pub fn residual(&self) -> f64 {
        max_abs(&(&self.lhs - &self.rhs_joint))
    }

    /// Disagreement between the two displayed right-hand sides.
    pub fn forms_disagreement(&self) -> f64 {
        max_abs(&(&self.rhs_joint - &self.rhs_split))
    }

    /// Residual when the anomaly term is dropped.
    pub fn ablated_residual(&self) -> f64 {
        max_abs(&(&self.lhs - &self.rhs_joint - &self.anomaly))
    }
}

pub fn fpb_terms(sys: &SpinSystem, x: &PhasePoint, z: Complex64, w: Complex64) -> Result<FpbTerms> {
    let rep = sys.representation();
    let n = rep.n();
    let spec = sys.spec();
    let id = CMatrix::identity(n, n);

    let gz = lax_gradient(sys, x, z)?;
    let gw = lax_gradient(sys, x, w)?;
    let entries_z: Vec<_> = (0..n * n).map(|k| gz.entry(k / n, k % n)).collect();
    let entries_w: Vec<_> = (0..n * n).map(|k| gw.entry(k / n, k % n)).collect();
    let mut lhs = CMatrix::zeros(n * n, n * n);
    for (kz, fz) in entries_z.iter().enumerate() {
        let (a, b) = (kz / n, kz % n);
        for (kw, fw) in entries_w.iter().enumerate() {
            let (c, d) = (kw / n, kw % n);
            lhs[(a * n + c, b * n + d)] = sys.poisson().bracket(fz, fw, x);
        }
    }

    let lz = kron(&lax(sys, x, z)?, &id);
    let lw = kron(&id, &lax(sys, x, w)?);
    let r = eval_r(spec, &x.q, z - w)?.into_matrix();
    let p = swap_operator(n);
    let r21 = &p * eval_r(spec, &x.q, w - z)?.matrix() * &p;
    let j = momentum_map(x, sys.rank());
    let anomaly = dq_derivative(spec, &x.q, z - w, &j)?.into_matrix();

    let rhs_joint = -commutator(&r, &(&lz + &lw)) - &anomaly;
    let rhs_split = -commutator(&r, &lz) + commutator(&r21, &lw) - &anomaly;
    Ok(FpbTerms {
        lhs,
        rhs_joint,
        rhs_split,
        anomaly,
    })
}

pub fn fpb_residual(sys: &SpinSystem, x: &PhasePoint, z: Complex64, w: Complex64) -> Result<f64> {
    Ok(fpb_terms(sys, x, z, w)?.residual())
}
