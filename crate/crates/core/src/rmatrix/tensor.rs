use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::Representation;
use crate::linalg::{kron, max_abs, CMatrix};

/// Element of `g⊗g`, held both as an `n²×n²` matrix and as the coefficient
/// table `t` with `value = Σ t[a,b] B_a⊗B_b`.
#[derive(Clone, Debug)]
pub struct TensorValue {
    coefficients: DMatrix<Complex64>,
    matrix: CMatrix,
}

impl TensorValue {
    pub fn from_coefficients(rep: &Representation, coefficients: DMatrix<Complex64>) -> Self {
        let n = rep.n();
        let mut matrix = CMatrix::zeros(n * n, n * n);
        for a in 0..coefficients.nrows() {
            for b in 0..coefficients.ncols() {
                let t = coefficients[(a, b)];
                if t.norm() != 0.0 {
                    matrix += kron(rep.basis_element(a), rep.basis_element(b)) * t;
                }
            }
        }
        Self { coefficients, matrix }
    }

    /// Coefficients `t[a,b] = κ²·tr(M·(B_a^∨⊗B_b^∨))`.
    pub fn from_matrix(rep: &Representation, matrix: CMatrix) -> Self {
        let d = rep.dim_g();
        let k2 = rep.form_scale() * rep.form_scale();
        let coefficients = DMatrix::from_fn(d, d, |a, b| {
            let dual = kron(rep.dual(a), rep.dual(b));
            (&matrix * dual).trace() * k2
        });
        Self { coefficients, matrix }
    }

    pub(crate) fn from_parts(coefficients: DMatrix<Complex64>, matrix: CMatrix) -> Self {
        Self { coefficients, matrix }
    }

    pub fn zeros(rep: &Representation) -> Self {
        let d = rep.dim_g();
        let n = rep.n();
        Self {
            coefficients: DMatrix::zeros(d, d),
            matrix: CMatrix::zeros(n * n, n * n),
        }
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coefficients
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Largest disagreement between the table and the matrix.
    pub fn round_trip_residual(&self, rep: &Representation) -> f64 {
        let rebuilt = Self::from_coefficients(rep, self.coefficients.clone());
        let back = Self::from_matrix(rep, self.matrix.clone());
        max_abs(&(&rebuilt.matrix - &self.matrix)).max(max_abs(&(&back.coefficients - &self.coefficients)))
    }
}
