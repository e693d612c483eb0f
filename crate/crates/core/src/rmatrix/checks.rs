use nalgebra::DVector;
use num_complex::Complex64;

use super::{dq_derivative, eval_r, RMatrixSpec};
use crate::algebra::{casimir_tensor, Representation};
use crate::linalg::{commutator, kron, max_abs, swap23_operator, swap_operator, CMatrix};
use crate::Result;

/// Largest `‖[h⊗1 + 1⊗h, t]‖` over the Cartan basis, for any `n²×n²` tensor `t`.
pub fn zero_weight_residual(rep: &Representation, tensor: &CMatrix) -> f64 {
    let id = CMatrix::identity(rep.n(), rep.n());
    rep.cartan()
        .iter()
        .map(|h| {
            let ad = kron(h, &id) + kron(&id, h);
            max_abs(&commutator(&ad, tensor))
        })
        .fold(0.0, f64::max)
}

pub fn zero_weight_check(spec: &RMatrixSpec, q: &DVector<Complex64>, z: Complex64) -> Result<f64> {
    let r = eval_r(spec, q, z)?;
    Ok(zero_weight_residual(spec.representation(), r.matrix()))
}

/// `‖r(q,z) + r²¹(q,-z)‖`.
pub fn unitarity_check(spec: &RMatrixSpec, q: &DVector<Complex64>, z: Complex64) -> Result<f64> {
    let r = eval_r(spec, q, z)?;
    let r_neg = eval_r(spec, q, -z)?;
    let p = swap_operator(spec.representation().n());
    Ok(max_abs(&(r.matrix() + &p * r_neg.matrix() * &p)))
}

/// Distance between `lim_{z→0} z·r(q,z)` and `Ω`.
///
/// The limit is estimated from the even part `½[z r(z) + (-z) r(-z)]`, which
/// has an expansion in `z²`, by two rounds of Richardson extrapolation over
/// `z = 10⁻², 5·10⁻³, 2.5·10⁻³`.
pub fn residue_check(spec: &RMatrixSpec, q: &DVector<Complex64>) -> Result<f64> {
    let omega = casimir_tensor(spec.representation());
    let sample = |h: f64| -> Result<CMatrix> {
        let z = Complex64::new(h, 0.0);
        let plus = eval_r(spec, q, z)?.into_matrix() * z;
        let minus = eval_r(spec, q, -z)?.into_matrix() * (-z);
        Ok((plus + minus) * Complex64::new(0.5, 0.0))
    };
    let g0 = sample(1e-2)?;
    let g1 = sample(5e-3)?;
    let g2 = sample(2.5e-3)?;
    let r0 = (&g1 * Complex64::new(4.0, 0.0) - &g0) / Complex64::new(3.0, 0.0);
    let r1 = (&g2 * Complex64::new(4.0, 0.0) - &g1) / Complex64::new(3.0, 0.0);
    let limit = (&r1 * Complex64::new(16.0, 0.0) - &r0) / Complex64::new(15.0, 0.0);
    Ok(max_abs(&(limit - omega.matrix())))
}

/// The two halves of the CDYBE as `n³×n³` matrices.
#[derive(Clone, Debug)]
pub struct CdybeTerms {
    /// `Alt(d_h r)`.
    pub alt: CMatrix,
    /// `[r¹², r¹³] + [r¹², r²³] + [r¹³, r²³]`.
    pub quadratic: CMatrix,
}

impl CdybeTerms {
    pub fn residual(&self) -> f64 {
        max_abs(&(&self.alt + &self.quadratic))
    }
}

/// Evaluates both sides of the CDYBE at `z_ij = z_i - z_j`.
///
/// `Alt(d_h r) = Σ_i [h_i⁽¹⁾ ∂_i r²³(z₂₃) - h_i⁽²⁾ ∂_i r¹³(z₁₃) + h_i⁽³⁾ ∂_i r¹²(z₁₂)]`,
/// the cyclic sum with `r³¹(z₃₁)` rewritten through unitarity.
pub fn cdybe_terms(
    spec: &RMatrixSpec,
    q: &DVector<Complex64>,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<CdybeTerms> {
    let rep = spec.representation();
    let n = rep.n();
    let id = CMatrix::identity(n, n);
    let p23 = swap23_operator(n);
    let slot13 = |t: &CMatrix| &p23 * kron(t, &id) * &p23;

    let (z12, z13, z23) = (z1 - z2, z1 - z3, z2 - z3);
    let r12 = kron(eval_r(spec, q, z12)?.matrix(), &id);
    let r13 = slot13(eval_r(spec, q, z13)?.matrix());
    let r23 = kron(&id, eval_r(spec, q, z23)?.matrix());
    let quadratic = commutator(&r12, &r13) + commutator(&r12, &r23) + commutator(&r13, &r23);

    let mut alt = CMatrix::zeros(n * n * n, n * n * n);
    for (i, h) in rep.cartan().iter().enumerate() {
        let mut dir = DVector::zeros(rep.rank());
        dir[i] = Complex64::new(1.0, 0.0);
        let d23 = dq_derivative(spec, q, z23, &dir)?;
        let d13 = dq_derivative(spec, q, z13, &dir)?;
        let d12 = dq_derivative(spec, q, z12, &dir)?;
        alt += kron(h, d23.matrix());
        alt -= &p23 * kron(d13.matrix(), h) * &p23;
        alt += kron(d12.matrix(), h);
    }
    Ok(CdybeTerms { alt, quadratic })
}

pub fn cdybe_residual(
    spec: &RMatrixSpec,
    q: &DVector<Complex64>,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<f64> {
    Ok(cdybe_terms(spec, q, z1, z2, z3)?.residual())
}
