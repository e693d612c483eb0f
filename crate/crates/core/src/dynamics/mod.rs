//! Spin Calogero-Moser systems on `T*h* × g*`.
//!
//! A phase point is `(q, p, ξ)` with `q ∈ h*`, `p = Σ p_i h_i ∈ h` and
//! `ξ ∈ g*` stored through its coordinates `ξ_a = (ξ, B_a^∨)`: first the
//! Cartan components `ξ_i = (ξ, h_i)`, then `ξ_α = (ξ, e_{-α})` per root.
//!
//! The bracket is the product of the cotangent structure on `T*h*` and the
//! plus Lie-Poisson structure on `g*`:
//!
//! ```text
//! {F, G} = Σ_i (∂F/∂p_i ∂G/∂q_i - ∂F/∂q_i ∂G/∂p_i) + (ξ, [dF, dG])
//! ```
//!
//! with `dF = Σ_a ∂F/∂ξ_a B_a^∨`. Flows are `dF/dt = {H, F}`, which gives
//! `dq = p`, `dp = -∂H/∂q` and `dξ = [ξ, dH]` under `g* ≅ g`.

mod contour;
mod flow;
mod fpb;
mod hamiltonian;
mod observable;
mod poisson;
mod trajectory;

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::Representation;
use crate::linalg::CMatrix;
use crate::rmatrix::{FamilyKind, RMatrixSpec};
use crate::{Error, Result};

pub use contour::{contour_offset, energy_via_contour};
pub use flow::{integrate, integrate_partial, vector_field, IntegrateOptions, Method};
pub use fpb::{fpb_residual, fpb_terms, FpbTerms};
pub use hamiltonian::{hamiltonian, hamiltonian_gradient, lax, lax_gradient, LaxGradient};
pub use observable::{Coordinate, Energy, LaxEntry, Observable, PhaseGradient, Product};
pub use poisson::{poisson_bracket, PoissonStructure};
pub use trajectory::{Trajectory, TRAJECTORY_SCHEMA_VERSION};

/// `(q, p, ξ)` in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub q: DVector<Complex64>,
    pub p: DVector<Complex64>,
    pub xi: DVector<Complex64>,
}

fn cvec(values: &[f64]) -> DVector<Complex64> {
    DVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)))
}

impl PhasePoint {
    pub fn new(q: DVector<Complex64>, p: DVector<Complex64>, xi: DVector<Complex64>) -> Self {
        Self { q, p, xi }
    }

    pub fn from_real(q: &[f64], p: &[f64], xi: &[f64]) -> Self {
        Self::new(cvec(q), cvec(p), cvec(xi))
    }

    pub fn from_complex(q: &[Complex64], p: &[Complex64], xi: &[Complex64]) -> Self {
        Self::new(
            DVector::from_column_slice(q),
            DVector::from_column_slice(p),
            DVector::from_column_slice(xi),
        )
    }

    pub fn zeros(rep: &Representation) -> Self {
        Self::new(
            DVector::zeros(rep.rank()),
            DVector::zeros(rep.rank()),
            DVector::zeros(rep.dim_g()),
        )
    }

    pub fn validate(&self, rep: &Representation) -> Result<()> {
        let (n, d) = (rep.rank(), rep.dim_g());
        if self.q.len() != n || self.p.len() != n || self.xi.len() != d {
            return Err(Error::Shape {
                expected: format!("q, p of length {n} and xi of length {d}"),
                got: format!("{}, {}, {}", self.q.len(), self.p.len(), self.xi.len()),
            });
        }
        Ok(())
    }

    /// `ξ` as a matrix under `g* ≅ g`.
    pub fn xi_matrix(&self, rep: &Representation) -> Result<CMatrix> {
        rep.from_coordinates(&self.xi)
    }

    pub fn with_xi_matrix(&self, rep: &Representation, xi: &CMatrix) -> Result<Self> {
        Ok(Self::new(self.q.clone(), self.p.clone(), rep.coordinates(xi)?))
    }

    /// `p` as an element of `h`.
    pub fn momentum_matrix(&self, rep: &Representation) -> CMatrix {
        rep.cartan_from_coordinates(&self.p)
    }

    /// Concatenation `(q, p, ξ)`.
    pub fn to_flat(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.q.len() + self.p.len() + self.xi.len());
        let n = self.q.len();
        v.rows_mut(0, n).copy_from(&self.q);
        v.rows_mut(n, n).copy_from(&self.p);
        v.rows_mut(2 * n, self.xi.len()).copy_from(&self.xi);
        v
    }

    pub fn from_flat(rank: usize, v: &DVector<Complex64>) -> Self {
        let d = v.len() - 2 * rank;
        Self::new(
            v.rows(0, rank).into_owned(),
            v.rows(rank, rank).into_owned(),
            v.rows(2 * rank, d).into_owned(),
        )
    }

    /// `(q, -p, -ξ)`: reverses the direction of every flow.
    pub fn time_reversed(&self) -> Self {
        Self::new(self.q.clone(), -&self.p, -&self.xi)
    }

    /// Largest coordinate difference.
    pub fn distance(&self, other: &Self) -> f64 {
        crate::linalg::max_norm((self.to_flat() - other.to_flat()).iter())
    }
}

/// The spin Calogero-Moser system of a canonical r-matrix.
#[derive(Clone, Debug)]
pub struct SpinSystem {
    spec: RMatrixSpec,
    poisson: PoissonStructure,
}

impl SpinSystem {
    pub fn new(spec: RMatrixSpec) -> Self {
        let poisson = PoissonStructure::new(spec.representation());
        Self { spec, poisson }
    }

    pub fn spec(&self) -> &RMatrixSpec {
        &self.spec
    }

    pub fn representation(&self) -> &Representation {
        self.spec.representation()
    }

    pub fn representation_arc(&self) -> &Arc<Representation> {
        self.spec.representation_arc()
    }

    pub fn poisson(&self) -> &PoissonStructure {
        &self.poisson
    }

    pub fn kind(&self) -> FamilyKind {
        self.spec.kind()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }
}

/// `J(q, p, ξ) = i*ξ`: the Cartan components of `ξ`.
pub fn momentum_map(x: &PhasePoint, rank: usize) -> DVector<Complex64> {
    x.xi.rows(0, rank).into_owned()
}

/// Membership in `Σ`: `J = 0` (trigonometric, elliptic) or `J ⊥ Δ′` (rational).
pub fn sigma_membership(sys: &SpinSystem, x: &PhasePoint, tol: f64) -> bool {
    sigma_distance(sys, x) <= tol
}

/// `‖J‖_∞`, or `max_{α∈Δ′} |(α, J)|` in the rational family.
pub fn sigma_distance(sys: &SpinSystem, x: &PhasePoint) -> f64 {
    let j = momentum_map(x, sys.rank());
    match sys.spec().family() {
        crate::rmatrix::Family::Rational { subset } => {
            let rs = sys.spec().root_system();
            subset
                .members()
                .map(|k| {
                    rs.root(k)
                        .iter()
                        .zip(j.iter())
                        .map(|(a, v)| v * *a)
                        .sum::<Complex64>()
                        .norm()
                })
                .fold(0.0, f64::max)
        }
        _ => crate::linalg::max_norm(j.iter()),
    }
}

/// The point of `Σ` with the same `q`, `p` and root spins whose `J` is
/// nearest to `J(x)`: `J = 0` for the trigonometric and elliptic families,
/// the orthogonal projection of `J` onto `(Δ′)^⊥` for the rational family.
pub fn project_to_sigma(sys: &SpinSystem, x: &PhasePoint) -> PhasePoint {
    let rank = sys.rank();
    let mut out = x.clone();
    let j = momentum_map(x, rank);
    let projected = match sys.spec().family() {
        crate::rmatrix::Family::Rational { subset } if !subset.is_empty() => {
            let rs = sys.spec().root_system();
            let members = subset.member_vec();
            let a = nalgebra::DMatrix::from_fn(rank, members.len(), |i, k| Complex64::new(rs.root(members[k])[i], 0.0));
            // components along span(Δ′) via the normal equations' minimum-norm solution
            let gram = a.adjoint() * &a;
            let pinv = gram.pseudo_inverse(1e-12).expect("pseudo-inverse of a Gram matrix");
            &j - &a * (pinv * (a.adjoint() * &j))
        }
        crate::rmatrix::Family::Rational { .. } => j,
        _ => DVector::zeros(rank),
    };
    out.xi.rows_mut(0, rank).copy_from(&projected);
    out
}

/// `tr L(z)^k` for `k = 1..=k_max`.
pub fn spectral_invariants(sys: &SpinSystem, x: &PhasePoint, z: Complex64, k_max: usize) -> Result<Vec<Complex64>> {
    let l = lax(sys, x, z)?;
    let mut power = l.clone();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k > 1 {
            power = &power * &l;
        }
        out.push(power.trace());
    }
    Ok(out)
}
