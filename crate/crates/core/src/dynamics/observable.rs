use nalgebra::DVector;
use num_complex::Complex64;

use super::{hamiltonian, hamiltonian_gradient, lax, lax_gradient, PhasePoint, SpinSystem};
use crate::Result;

/// Partial derivatives of a scalar function on phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGradient {
    pub dq: DVector<Complex64>,
    pub dp: DVector<Complex64>,
    pub dxi: DVector<Complex64>,
}

impl PhaseGradient {
    pub fn zeros(x: &PhasePoint) -> Self {
        Self {
            dq: DVector::zeros(x.q.len()),
            dp: DVector::zeros(x.p.len()),
            dxi: DVector::zeros(x.xi.len()),
        }
    }

    /// Directional derivative along a tangent vector `(δq, δp, δξ)`.
    pub fn apply(&self, tangent: &PhasePoint) -> Complex64 {
        self.dq.dot(&tangent.q) + self.dp.dot(&tangent.p) + self.dxi.dot(&tangent.xi)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            dq: &self.dq * s,
            dp: &self.dp * s,
            dxi: &self.dxi * s,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dq: &self.dq + &other.dq,
            dp: &self.dp + &other.dp,
            dxi: &self.dxi + &other.dxi,
        }
    }
}

/// A function on phase space with an analytic gradient.
pub trait Observable {
    fn evaluate(&self, x: &PhasePoint) -> Result<Complex64>;
    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient>;
}

/// A single coordinate function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Q(usize),
    P(usize),
    Xi(usize),
}

impl Observable for Coordinate {
    fn evaluate(&self, x: &PhasePoint) -> Result<Complex64> {
        Ok(match *self {
            Coordinate::Q(i) => x.q[i],
            Coordinate::P(i) => x.p[i],
            Coordinate::Xi(a) => x.xi[a],
        })
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        let mut g = PhaseGradient::zeros(x);
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Coordinate::Q(i) => g.dq[i] = one,
            Coordinate::P(i) => g.dp[i] = one,
            Coordinate::Xi(a) => g.dxi[a] = one,
        }
        Ok(g)
    }
}

/// Pointwise product of two observables.
pub struct Product<A, B>(pub A, pub B);

impl<A: Observable, B: Observable> Observable for Product<A, B> {
    fn evaluate(&self, x: &PhasePoint) -> Result<Complex64> {
        Ok(self.0.evaluate(x)? * self.1.evaluate(x)?)
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        let (fa, fb) = (self.0.evaluate(x)?, self.1.evaluate(x)?);
        Ok(self.0.gradient(x)?.scaled(fb).add(&self.1.gradient(x)?.scaled(fa)))
    }
}

/// The Hamiltonian of a spin system.
pub struct Energy<'a>(pub &'a SpinSystem);

impl Observable for Energy<'_> {
    fn evaluate(&self, x: &PhasePoint) -> Result<Complex64> {
        hamiltonian(self.0, x)
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        hamiltonian_gradient(self.0, x)
    }
}

/// The entry `L(z)_{row,col}` of the Lax operator.
pub struct LaxEntry<'a> {
    pub system: &'a SpinSystem,
    pub z: Complex64,
    pub row: usize,
    pub col: usize,
}

impl Observable for LaxEntry<'_> {
    fn evaluate(&self, x: &PhasePoint) -> Result<Complex64> {
        Ok(lax(self.system, x, self.z)?[(self.row, self.col)])
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        Ok(lax_gradient(self.system, x, self.z)?.entry(self.row, self.col))
    }
}
