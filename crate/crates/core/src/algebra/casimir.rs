use super::Representation;
use crate::linalg::{kron, max_abs, swap_operator, CMatrix};

/// `Ω = Σ_i h_i⊗h_i + Σ_{α∈Δ} e_α⊗e_{-α}` as an `n²×n²` matrix.
#[derive(Clone, Debug)]
pub struct CasimirTensor {
    matrix: CMatrix,
}

impl CasimirTensor {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `‖Ω - Ω²¹‖`.
    pub fn swap_residual(&self) -> f64 {
        let n2 = self.matrix.nrows();
        let n = (n2 as f64).sqrt().round() as usize;
        let p = swap_operator(n);
        max_abs(&(&self.matrix - &p * &self.matrix * &p))
    }

    /// Largest `‖[x⊗1 + 1⊗x, Ω]‖` over the basis of `g`.
    pub fn invariance_residual(&self, rep: &Representation) -> f64 {
        let id = CMatrix::identity(rep.n(), rep.n());
        rep.basis()
            .iter()
            .map(|x| {
                let ad = kron(x, &id) + kron(&id, x);
                max_abs(&(&ad * &self.matrix - &self.matrix * &ad))
            })
            .fold(0.0, f64::max)
    }
}

pub fn casimir_tensor(rep: &Representation) -> CasimirTensor {
    let n = rep.n();
    let mut matrix = CMatrix::zeros(n * n, n * n);
    for a in 0..rep.dim_g() {
        matrix += kron(rep.basis_element(a), rep.dual(a));
    }
    CasimirTensor { matrix }
}
