//! The three canonical dynamical r-matrices with spectral parameter,
//!
//! ```text
//! rational:       r = Ω/z + Σ_{α∈Δ′} 1/(α,q) · e_α⊗e_{-α}
//! trigonometric:  r = (cot z + z/3) Σ h_i⊗h_i + Σ_α φ_α((α,q), z) e_α⊗e_{-α}
//! elliptic:       r = ζ(z) Σ h_i⊗h_i - Σ_α l((α,q), z) e_α⊗e_{-α}
//! ```
//!
//! with, for `x = (α,q)`,
//!
//! ```text
//! φ_α = sin(x+z)/(sin x sin z) · e^{zx/3}    α ∈ Δ(Π′)
//! φ_α = e^{-iz}/sin z · e^{zx/3}             α ∈ Δ₊ ∖ Δ(Π′)
//! φ_α = e^{iz}/sin z · e^{zx/3}              α ∈ Δ₋ ∖ Δ(Π′)
//! ```
//!
//! Every canonical r is diagonal in the basis pairs `B_a⊗B_a^∨`, so the
//! evaluators work with one Cartan coefficient and one coefficient per root.

mod checks;
mod polarization;
mod tensor;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Representation, RootSubset, RootSystem};
use crate::elliptic::{segment_distance, Lattice};
use crate::linalg::{kron, CMatrix};
use crate::{Error, Result};

pub use checks::{
    cdybe_residual, cdybe_terms, residue_check, unitarity_check, zero_weight_check, zero_weight_residual, CdybeTerms,
};
pub use polarization::Polarization;
pub use tensor::TensorValue;

/// Values of `|(α,q)|`, `|sin(α,q)|`, `|σ((α,q))|` (and the `z` analogues)
/// below this are treated as singular.
pub const SINGULAR_GUARD: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Rational,
    Trigonometric,
    Elliptic,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::Rational, FamilyKind::Trigonometric, FamilyKind::Elliptic];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Rational => "rational",
            FamilyKind::Trigonometric => "trigonometric",
            FamilyKind::Elliptic => "elliptic",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rational" | "rat" => Ok(FamilyKind::Rational),
            "trigonometric" | "trig" => Ok(FamilyKind::Trigonometric),
            "elliptic" | "ell" => Ok(FamilyKind::Elliptic),
            other => Err(Error::Invalid(format!(
                "unknown family '{other}' (expected rational, trigonometric or elliptic)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    Rational {
        subset: RootSubset,
    },
    Trigonometric {
        polarization: Polarization,
        /// `Π′`, simple roots of `Δ₊`.
        simple: Vec<usize>,
        /// `Δ(Π′)`.
        span: RootSubset,
    },
    Elliptic {
        lattice: Lattice,
    },
}

/// A canonical r-matrix bound to a concrete realization of `g`.
#[derive(Clone, Debug)]
pub struct RMatrixSpec {
    rep: Arc<Representation>,
    family: Family,
}

/// `r = cartan · Σ h_i⊗h_i + Σ_k roots[k] · e_{α_k}⊗e_{-α_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalCoefficients {
    pub cartan: Complex64,
    pub roots: Vec<Complex64>,
}

impl DiagonalCoefficients {
    /// Coefficient of `B_a⊗B_a^∨` in basis order.
    pub fn by_basis(&self, rank: usize) -> Vec<Complex64> {
        std::iter::repeat_n(self.cartan, rank)
            .chain(self.roots.iter().copied())
            .collect()
    }
}

impl RMatrixSpec {
    /// Rational family; `Δ′` must be closed under addition and negation.
    pub fn rational(rep: Arc<Representation>, subset: RootSubset) -> Result<Self> {
        let subset = RootSubset::closed(rep.root_system(), &subset.member_vec())?;
        Ok(Self {
            rep,
            family: Family::Rational { subset },
        })
    }

    /// Rational formula with an arbitrary root set. Only for negative controls:
    /// with a non-closed set the result is not a dynamical r-matrix.
    pub fn rational_unchecked(rep: Arc<Representation>, indices: &[usize]) -> Result<Self> {
        let subset = RootSubset::unchecked(rep.root_system(), indices)?;
        Ok(Self {
            rep,
            family: Family::Rational { subset },
        })
    }

    pub fn trigonometric(rep: Arc<Representation>, polarization: Polarization, simple: &[usize]) -> Result<Self> {
        let rs = rep.root_system();
        if polarization.signs().len() != rs.len() {
            return Err(Error::Shape {
                expected: format!("polarization over {} roots", rs.len()),
                got: polarization.signs().len().to_string(),
            });
        }
        let span = polarization.span_of(rs, simple)?;
        let mut simple = simple.to_vec();
        simple.sort_unstable();
        simple.dedup();
        Ok(Self {
            rep,
            family: Family::Trigonometric {
                polarization,
                simple,
                span,
            },
        })
    }

    /// Trigonometric family with the standard polarization.
    pub fn trigonometric_standard(rep: Arc<Representation>, simple: &[usize]) -> Result<Self> {
        let pol = Polarization::standard(rep.root_system());
        Self::trigonometric(rep, pol, simple)
    }

    pub fn elliptic(rep: Arc<Representation>, lattice: Lattice) -> Self {
        Self {
            rep,
            family: Family::Elliptic { lattice },
        }
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn representation_arc(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rep.root_system()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> FamilyKind {
        match self.family {
            Family::Rational { .. } => FamilyKind::Rational,
            Family::Trigonometric { .. } => FamilyKind::Trigonometric,
            Family::Elliptic { .. } => FamilyKind::Elliptic,
        }
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    /// Roots carrying a `q`-dependent coefficient: `Δ′`, `Δ(Π′)` or all of `Δ`.
    /// For the trigonometric family the other roots still depend on `q`
    /// through `e^{z(α,q)/3}` but are never singular.
    pub fn singular_roots(&self) -> Vec<usize> {
        match &self.family {
            Family::Rational { subset } => subset.member_vec(),
            Family::Trigonometric { span, .. } => span.member_vec(),
            Family::Elliptic { .. } => (0..self.root_system().len()).collect(),
        }
    }

    /// `(α_k, q)` for every root.
    pub fn root_pairings(&self, q: &DVector<Complex64>) -> Result<Vec<Complex64>> {
        let rank = self.rank();
        if q.len() != rank {
            return Err(Error::Shape {
                expected: format!("q with {rank} components"),
                got: q.len().to_string(),
            });
        }
        Ok(self
            .root_system()
            .roots()
            .iter()
            .map(|a| a.iter().zip(q.iter()).map(|(ai, qi)| qi * *ai).sum())
            .collect())
    }

    /// Size of the family's singular function at `x`: `|x|`, `|sin x|` or `|σ(x)|`.
    pub fn singular_measure(&self, x: Complex64) -> f64 {
        match &self.family {
            Family::Rational { .. } => x.norm(),
            Family::Trigonometric { .. } => x.sin().norm(),
            Family::Elliptic { lattice } => lattice.sigma(x).norm(),
        }
    }

    /// Smallest singular measure over the contributing roots, with the root index.
    pub fn closest_singular_root(&self, q: &DVector<Complex64>) -> Result<Option<(usize, f64)>> {
        let x = self.root_pairings(q)?;
        Ok(self
            .singular_roots()
            .into_iter()
            .map(|k| (k, self.singular_measure(x[k])))
            .min_by(|a, b| a.1.total_cmp(&b.1)))
    }

    /// Smallest distance between a root pairing moving linearly from `a` to
    /// `b` and the singular set, with the root index. Catches steps that jump
    /// across a pole.
    pub fn segment_clearance(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> Result<Option<(usize, f64)>> {
        let (xa, xb) = (self.root_pairings(a)?, self.root_pairings(b)?);
        let clearance = |k: usize| match &self.family {
            Family::Rational { .. } => segment_distance(Complex64::new(0.0, 0.0), xa[k], xb[k]),
            Family::Trigonometric { .. } => {
                let lo = (xa[k].re.min(xb[k].re) / PI).floor() as i64;
                let hi = (xa[k].re.max(xb[k].re) / PI).ceil() as i64;
                (lo..=hi)
                    .map(|m| segment_distance(Complex64::new(m as f64 * PI, 0.0), xa[k], xb[k]))
                    .fold(f64::INFINITY, f64::min)
            }
            Family::Elliptic { lattice } => lattice.segment_lattice_distance(xa[k], xb[k]),
        };
        Ok(self
            .singular_roots()
            .into_iter()
            .map(|k| (k, clearance(k)))
            .min_by(|a, b| a.1.total_cmp(&b.1)))
    }

    /// Fails with [`Error::SingularConfiguration`] naming the first root whose
    /// singular measure is below `guard`.
    pub fn check_q_with(&self, q: &DVector<Complex64>, guard: f64) -> Result<Vec<Complex64>> {
        let x = self.root_pairings(q)?;
        for k in self.singular_roots() {
            let m = self.singular_measure(x[k]);
            if !(m >= guard) {
                let label = self.root_system().label(k);
                return Err(Error::singular_root(
                    label.clone(),
                    format!("({label}, q) = {} lies on the singular set ({m:.3e} < {guard:e})", x[k]),
                ));
            }
        }
        Ok(x)
    }

    pub fn check_q(&self, q: &DVector<Complex64>) -> Result<Vec<Complex64>> {
        self.check_q_with(q, SINGULAR_GUARD)
    }

    pub fn check_z(&self, z: Complex64) -> Result<()> {
        let m = match &self.family {
            Family::Rational { .. } => z.norm(),
            Family::Trigonometric { .. } => z.sin().norm(),
            Family::Elliptic { lattice } => lattice.sigma(z).norm(),
        };
        if !(m >= SINGULAR_GUARD) {
            return Err(Error::singular(format!(
                "spectral parameter z = {z} is a pole of the {} family",
                self.kind()
            )));
        }
        Ok(())
    }

    /// Cartan and root coefficients of `r(q, z)`.
    pub fn coefficients(&self, q: &DVector<Complex64>, z: Complex64) -> Result<DiagonalCoefficients> {
        self.check_z(z)?;
        let x = self.check_q(q)?;
        let rs = self.root_system();
        let roots = match &self.family {
            Family::Rational { subset } => {
                let inv_z = z.inv();
                (0..rs.len())
                    .map(|k| if subset.contains(k) { inv_z + x[k].inv() } else { inv_z })
                    .collect()
            }
            Family::Trigonometric { polarization, span, .. } => {
                let sz = z.sin();
                (0..rs.len())
                    .map(|k| {
                        let shift = (z * x[k] / 3.0).exp();
                        if span.contains(k) {
                            (x[k] + z).sin() / (x[k].sin() * sz) * shift
                        } else if polarization.is_positive(k) {
                            (-I * z).exp() / sz * shift
                        } else {
                            (I * z).exp() / sz * shift
                        }
                    })
                    .collect()
            }
            Family::Elliptic { lattice } => (0..rs.len())
                .map(|k| lattice.l(x[k], z).map(|v| -v).map_err(|e| pole_to_singular(rs, k, e)))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(DiagonalCoefficients {
            cartan: self.cartan_coefficient(z),
            roots,
        })
    }

    fn cartan_coefficient(&self, z: Complex64) -> Complex64 {
        match &self.family {
            Family::Rational { .. } => z.inv(),
            Family::Trigonometric { .. } => z.cos() / z.sin() + z / 3.0,
            Family::Elliptic { lattice } => lattice.zeta(z).expect("z checked against the lattice"),
        }
    }

    /// `∂/∂x` of each root coefficient at `x = (α,q)`.
    pub fn root_derivatives(&self, q: &DVector<Complex64>, z: Complex64) -> Result<Vec<Complex64>> {
        self.check_z(z)?;
        let x = self.check_q(q)?;
        let rs = self.root_system();
        match &self.family {
            Family::Rational { subset } => Ok((0..rs.len())
                .map(|k| {
                    if subset.contains(k) {
                        -(x[k] * x[k]).inv()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()),
            Family::Trigonometric { .. } => {
                let phi = self.coefficients(q, z)?.roots;
                let Family::Trigonometric { span, .. } = &self.family else {
                    unreachable!()
                };
                Ok((0..rs.len())
                    .map(|k| {
                        let own = phi[k] * z / 3.0;
                        if span.contains(k) {
                            let s = x[k].sin();
                            own - (z * x[k] / 3.0).exp() / (s * s)
                        } else {
                            own
                        }
                    })
                    .collect())
            }
            Family::Elliptic { lattice } => (0..rs.len())
                .map(|k| {
                    lattice
                        .l_dx(x[k], z)
                        .map(|v| -v)
                        .map_err(|e| pole_to_singular(rs, k, e))
                })
                .collect(),
        }
    }

    /// Assembles `cartan·Σh⊗h + Σ roots[k] e_k⊗e_{-k}`.
    pub fn assemble(&self, coeffs: &DiagonalCoefficients) -> TensorValue {
        let rep = &*self.rep;
        let rank = rep.rank();
        let d = rep.dim_g();
        let by_basis = coeffs.by_basis(rank);
        let mut table = DMatrix::zeros(d, d);
        let n = rep.n();
        let mut matrix = CMatrix::zeros(n * n, n * n);
        for (a, t) in by_basis.iter().enumerate() {
            let b = rep.dual_index(a);
            table[(a, b)] = *t;
            if t.norm() != 0.0 {
                matrix += kron(rep.basis_element(a), rep.basis_element(b)) * *t;
            }
        }
        TensorValue::from_parts(table, matrix)
    }
}

fn pole_to_singular(rs: &RootSystem, k: usize, e: Error) -> Error {
    match e {
        Error::Pole { z, .. } => {
            let label = rs.label(k);
            Error::singular_root(
                label.clone(),
                format!("elliptic kernel has a pole at ({label}, q) or z: {z}"),
            )
        }
        other => other,
    }
}

/// `r(q, z)`.
pub fn eval_r(spec: &RMatrixSpec, q: &DVector<Complex64>, z: Complex64) -> Result<TensorValue> {
    let coeffs = spec.coefficients(q, z)?;
    Ok(spec.assemble(&coeffs))
}

/// Directional derivative `Σ_i d_i ∂r/∂q_i`; the Cartan part is `q`-independent.
pub fn dq_derivative(
    spec: &RMatrixSpec,
    q: &DVector<Complex64>,
    z: Complex64,
    direction: &DVector<Complex64>,
) -> Result<TensorValue> {
    let slopes = spec.root_derivatives(q, z)?;
    let along = spec.root_pairings(direction)?;
    let roots = slopes.iter().zip(&along).map(|(s, a)| s * a).collect();
    Ok(spec.assemble(&DiagonalCoefficients {
        cartan: Complex64::new(0.0, 0.0),
        roots,
    }))
}

#[cfg(test)]
mod tests;
