//! Truncated lattice-sum oracle for the Weierstrass functions, independent of
//! the theta-function implementation in the library.
//!
//! Sums run over the parallelogram shells `max(|m|, |n|) ≤ K` of
//! `w = 2mω₁ + 2nω₂`. The odd terms cancel shell by shell, so the truncation
//! error of each sum behaves like `a/K² + b/K³ + …`; three levels `K, 2K, 4K`
//! are combined to remove the two leading terms.

#![allow(dead_code)]

use spincm::Complex64;

pub const BASE_SHELLS: i64 = 60;

fn lattice_sum(w1: Complex64, w2: Complex64, shells: i64, term: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for m in -shells..=shells {
        for n in -shells..=shells {
            if m == 0 && n == 0 {
                continue;
            }
            total += term(w1 * (2 * m) as f64 + w2 * (2 * n) as f64);
        }
    }
    total
}

/// Removes the `1/K²` and `1/K³` terms from sums at `K`, `2K`, `4K`.
fn extrapolate(s1: Complex64, s2: Complex64, s4: Complex64) -> Complex64 {
    let r1 = (s2 * 4.0 - s1) / 3.0;
    let r2 = (s4 * 4.0 - s2) / 3.0;
    // the 1/K³ remainder of r2 is an eighth of that of r1
    (r2 * 8.0 - r1) / 7.0
}

fn extrapolated(w1: Complex64, w2: Complex64, term: impl Fn(Complex64) -> Complex64 + Copy) -> Complex64 {
    let k = BASE_SHELLS;
    extrapolate(
        lattice_sum(w1, w2, k, term),
        lattice_sum(w1, w2, 2 * k, term),
        lattice_sum(w1, w2, 4 * k, term),
    )
}

pub fn wp(w1: Complex64, w2: Complex64, z: Complex64) -> Complex64 {
    z.powi(-2) + extrapolated(w1, w2, |w| (z - w).powi(-2) - w.powi(-2))
}

pub fn zeta(w1: Complex64, w2: Complex64, z: Complex64) -> Complex64 {
    z.inv() + extrapolated(w1, w2, |w| (z - w).inv() + w.inv() + z / (w * w))
}

/// `σ` from the logarithm of its Weierstrass product.
pub fn sigma(w1: Complex64, w2: Complex64, z: Complex64) -> Complex64 {
    let log = extrapolated(w1, w2, |w| {
        let u = z / w;
        (Complex64::new(1.0, 0.0) - u).ln() + u + u * u * 0.5
    });
    z * log.exp()
}

/// `(g₂, g₃) = (60 Σ′ w⁻⁴, 140 Σ′ w⁻⁶)`.
pub fn invariants(w1: Complex64, w2: Complex64) -> (Complex64, Complex64) {
    let g2 = extrapolated(w1, w2, |w| w.powi(-4)) * 60.0;
    let g3 = extrapolated(w1, w2, |w| w.powi(-6)) * 140.0;
    (g2, g3)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Half-period pairs used by the oracle comparisons.
pub fn lattices() -> Vec<(Complex64, Complex64)> {
    vec![
        (c(1.0, 0.0), c(0.0, 1.0)),
        (c(1.0, 0.0), c(0.3, 1.1)),
        (c(0.8, 0.2), c(-0.1, 0.9)),
    ]
}

/// Sample points inside the fundamental cell, away from lattice points.
pub fn points() -> Vec<Complex64> {
    vec![
        c(0.31, 0.12),
        c(-0.45, 0.27),
        c(0.6, -0.5),
        c(0.05, 0.7),
        c(-0.2, -0.35),
    ]
}
