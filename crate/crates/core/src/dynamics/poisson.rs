use nalgebra::DVector;
use num_complex::Complex64;

use super::{Observable, PhaseGradient, PhasePoint};
use crate::algebra::Representation;
use crate::Result;

/// One term `Π_ab += value·ξ_e` of the Lie-Poisson tensor `Π_ab = (ξ, [B_a^∨, B_b^∨])`.
#[derive(Clone, Copy, Debug)]
struct Term {
    a: usize,
    b: usize,
    e: usize,
    value: Complex64,
}

/// Product bracket on `T*h* × g*` for a fixed realization of `g`.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    rank: usize,
    dim: usize,
    terms: Vec<Term>,
}

impl PoissonStructure {
    pub fn new(rep: &Representation) -> Self {
        // [B_a', B_b'] = Σ_c v B_c with a' = σ(a), b' = σ(b); (ξ, B_c) = ξ_{σ(c)}.
        let terms = rep
            .structure_constants()
            .iter()
            .map(|sc| Term {
                a: rep.dual_index(sc.a),
                b: rep.dual_index(sc.b),
                e: rep.dual_index(sc.c),
                value: sc.value,
            })
            .collect();
        Self {
            rank: rep.rank(),
            dim: rep.dim_g(),
            terms,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Π_ab = (ξ, [B_a^∨, B_b^∨])` as a dense `d×d` table (row-major).
    pub fn lie_poisson_tensor(&self, xi: &DVector<Complex64>) -> Vec<Complex64> {
        let d = self.dim;
        let mut t = vec![Complex64::new(0.0, 0.0); d * d];
        for term in &self.terms {
            t[term.a * d + term.b] += term.value * xi[term.e];
        }
        t
    }

    /// `{F, G}` from the two gradients.
    pub fn bracket(&self, f: &PhaseGradient, g: &PhaseGradient, x: &PhasePoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rank {
            acc += f.dp[i] * g.dq[i] - f.dq[i] * g.dp[i];
        }
        for term in &self.terms {
            let (fa, gb) = (f.dxi[term.a], g.dxi[term.b]);
            if fa.norm_sqr() != 0.0 && gb.norm_sqr() != 0.0 {
                acc += fa * gb * term.value * x.xi[term.e];
            }
        }
        acc
    }

    /// `dξ_c = Σ_a g_a Π_ac`: the Lie-Poisson part of the flow of a function
    /// with `ξ`-gradient `g`.
    pub fn coadjoint_flow(&self, grad_xi: &DVector<Complex64>, xi: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.dim);
        for term in &self.terms {
            let g = grad_xi[term.a];
            if g.norm_sqr() != 0.0 {
                out[term.b] += g * term.value * xi[term.e];
            }
        }
        out
    }
}

/// `{F, G}(x)`.
pub fn poisson_bracket(
    ps: &PoissonStructure,
    f: &dyn Observable,
    g: &dyn Observable,
    x: &PhasePoint,
) -> Result<Complex64> {
    Ok(ps.bracket(&f.gradient(x)?, &g.gradient(x)?, x))
}
