//! `H` as the constant Laurent coefficient of `½(L(z), L(z))`.
//!
//! The contour average `∮ ½(L, L) dz/(2πi z)` over `|z| = ρ` picks the
//! `z⁰` coefficient of `½(L, L)`. Expanding the displayed Lax operators:
//!
//! * rational: the `z⁰` term is `½Σp_i² + ½Σ_{Δ′} ξ_α ξ_{-α}/((α,q)(-α,q))`, i.e. `H`.
//! * elliptic: `l(x,z) l(-x,z) = ℘(z) - ℘(x)` and `ζ(z)² - ℘(z) = O(z²)` leave `H`.
//! * trigonometric: on `Δ(Π′)` the product of coefficients has `z⁰` term
//!   `-(1/sin²x - 1/3)`, but off `Δ(Π′)` it is `e^{∓iz}e^{±iz}/sin²z` whose
//!   `z⁰` term is `1/3`. The displayed `H` uses `-5/6` on those roots, so
//!   `H - E = -Σ_{α∈Δ∖Δ(Π′)} ξ_α ξ_{-α}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{lax, PhasePoint, SpinSystem};
use crate::rmatrix::Family;
use crate::{Error, Result};

pub const MIN_CONTOUR_NODES: usize = 64;

/// `H - E` for the family at `x`.
pub fn contour_offset(sys: &SpinSystem, x: &PhasePoint) -> Complex64 {
    match sys.spec().family() {
        Family::Trigonometric { span, .. } => {
            let rs = sys.spec().root_system();
            let rank = sys.rank();
            -(0..rs.len())
                .filter(|&k| !span.contains(k))
                .map(|k| x.xi[rank + k] * x.xi[rank + rs.negation(k)])
                .sum::<Complex64>()
        }
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Trapezoid rule for `∮ ½(L(z), L(z)) dz/(2πi z)` on `|z| = radius`.
pub fn energy_via_contour(sys: &SpinSystem, x: &PhasePoint, radius: f64, nodes: usize) -> Result<Complex64> {
    if nodes < MIN_CONTOUR_NODES {
        return Err(Error::Invalid(format!(
            "contour needs at least {MIN_CONTOUR_NODES} nodes, got {nodes}"
        )));
    }
    if !(radius > 0.0) {
        return Err(Error::Invalid(format!("contour radius must be positive, got {radius}")));
    }
    let limit = match sys.spec().family() {
        Family::Rational { .. } => f64::INFINITY,
        Family::Trigonometric { .. } => PI,
        Family::Elliptic { lattice } => lattice.shortest_period(),
    };
    if radius >= limit {
        return Err(Error::Invalid(format!(
            "contour radius {radius} reaches the next pole of the {} family (at distance {limit})",
            sys.kind()
        )));
    }
    let rep = sys.representation();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let theta = 2.0 * PI * (k as f64 + 0.5) / nodes as f64;
        let z = Complex64::from_polar(radius, theta);
        let l = lax(sys, x, z)?;
        total += rep.invariant_form(&l, &l)? * 0.5;
    }
    Ok(total / nodes as f64)
}
