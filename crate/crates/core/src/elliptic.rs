//! Weierstrass `σ`, `ζ`, `℘`, `℘′` and the kernel `l(x, z) = -σ(x+z)/(σ(x)σ(z))`.
//!
//! Everything is evaluated through the Jacobi theta function `θ₁(v | q)` in
//! the nome `q = exp(iπτ)`, `τ = ω₂/ω₁`, after reducing the argument into the
//! fundamental cell `{2ω₁a + 2ω₂b : |a|, |b| ≤ ½}` with the exact
//! quasi-periodicity factors. With `v = πz/(2ω₁)`:
//!
//! ```text
//! σ(z) = (2ω₁/π) · exp(η₁z²/(2ω₁)) · θ₁(v)/θ₁′(0)
//! ζ(z) = η₁z/ω₁ + (π/(2ω₁)) · θ₁′(v)/θ₁(v)
//! η₁   = -π²θ₁‴(0) / (12ω₁θ₁′(0))
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Smallest supported `Im(ω₂/ω₁)`.
pub const MIN_IM_TAU: f64 = 0.1;

/// Relative distance (in units of `|ω₁|`) below which a point counts as a
/// lattice point.
pub const POLE_GUARD: f64 = 1e-12;

/// Period lattice `2ω₁Z + 2ω₂Z` with its precomputed invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
    tau: Complex64,
    nome: Complex64,
    theta1_prime0: Complex64,
    eta1: Complex64,
    eta2: Complex64,
    g2: Complex64,
    g3: Complex64,
}

/// `θ₁` and its first three `v`-derivatives.
#[derive(Clone, Copy, Debug)]
struct Theta {
    t0: Complex64,
    t1: Complex64,
    t2: Complex64,
    t3: Complex64,
}

fn theta1(v: Complex64, tau: Complex64) -> Theta {
    // θ₁(v) = 2 Σ_{n≥0} (-1)ⁿ q^{(n+½)²} sin((2n+1)v)
    let mut t = Theta {
        t0: Complex64::new(0.0, 0.0),
        t1: Complex64::new(0.0, 0.0),
        t2: Complex64::new(0.0, 0.0),
        t3: Complex64::new(0.0, 0.0),
    };
    let growth = v.im.abs();
    for n in 0..400usize {
        let k = (2 * n + 1) as f64;
        let e = (n as f64 + 0.5).powi(2);
        let bound = (-PI * tau.im * e + k * growth).exp() * k.powi(3);
        let qn = (I * PI * tau * e).exp();
        let sign = if n % 2 == 0 { 2.0 } else { -2.0 };
        let s = (v * k).sin();
        let c = (v * k).cos();
        let w = qn * sign;
        t.t0 += w * s;
        t.t1 += w * c * k;
        t.t2 -= w * s * (k * k);
        t.t3 -= w * c * (k * k * k);
        let scale = t.t0.norm().max(t.t1.norm()).max(1e-300);
        if n > 2 && bound < 1e-18 * scale {
            break;
        }
    }
    t
}

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if omega1.norm() == 0.0 || !omega1.is_finite() || !omega2.is_finite() {
            return Err(Error::Lattice("half-periods must be finite and nonzero".into()));
        }
        let tau = omega2 / omega1;
        if tau.im <= 0.0 {
            return Err(Error::Lattice(format!("Im(ω₂/ω₁) = {} must be positive", tau.im)));
        }
        if tau.im < MIN_IM_TAU {
            return Err(Error::Lattice(format!(
                "Im(ω₂/ω₁) = {} below the supported minimum {MIN_IM_TAU}",
                tau.im
            )));
        }
        let nome = (I * PI * tau).exp();
        let th0 = theta1(Complex64::new(0.0, 0.0), tau);
        let eta1 = -(PI * PI) * th0.t3 / (omega1 * th0.t1 * 12.0);
        let mut lattice = Self {
            omega1,
            omega2,
            tau,
            nome,
            theta1_prime0: th0.t1,
            eta1,
            eta2: Complex64::new(0.0, 0.0),
            g2: Complex64::new(0.0, 0.0),
            g3: Complex64::new(0.0, 0.0),
        };
        // ζ(ω₂) straight from the series: no reduction, so no use of η₂.
        lattice.eta2 = lattice.zeta_cell(omega2);
        let e1 = lattice.wp_cell(omega1);
        let e2 = lattice.wp_cell(omega1 + omega2 - 2.0 * omega1);
        let e3 = lattice.wp_cell(omega2 - 2.0 * omega2);
        lattice.g2 = (e1 * e1 + e2 * e2 + e3 * e3) * 2.0;
        lattice.g3 = e1 * e2 * e3 * 4.0;
        let disc = lattice.g2.powu(3) - lattice.g3 * lattice.g3 * 27.0;
        if disc.norm() < 1e-12 * (1.0 + lattice.g2.norm().powi(3)) {
            return Err(Error::Lattice("degenerate lattice (g₂³ = 27g₃²)".into()));
        }
        Ok(lattice)
    }

    /// `ω₁ = 1, ω₂ = i`.
    pub fn square() -> Self {
        Self::new(Complex64::new(1.0, 0.0), I).expect("square lattice is admissible")
    }

    pub fn half_periods(&self) -> (Complex64, Complex64) {
        (self.omega1, self.omega2)
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn nome(&self) -> Complex64 {
        self.nome
    }

    /// `η₁ = ζ(ω₁)`.
    pub fn eta1(&self) -> Complex64 {
        self.eta1
    }

    /// `η₂ = ζ(ω₂)`.
    pub fn eta2(&self) -> Complex64 {
        self.eta2
    }

    pub fn g2(&self) -> Complex64 {
        self.g2
    }

    pub fn g3(&self) -> Complex64 {
        self.g3
    }

    pub fn discriminant(&self) -> Complex64 {
        self.g2.powu(3) - self.g3 * self.g3 * 27.0
    }

    /// Splits `z = z₀ + 2mω₁ + 2nω₂` with `z₀` in the fundamental cell.
    fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        // solve z = 2ω₁a + 2ω₂b for real a, b
        let (w1, w2) = (self.omega1 * 2.0, self.omega2 * 2.0);
        let det = w1.re * w2.im - w1.im * w2.re;
        let a = (z.re * w2.im - z.im * w2.re) / det;
        let b = (w1.re * z.im - w1.im * z.re) / det;
        let m = a.round();
        let n = b.round();
        (z - w1 * m - w2 * n, m as i64, n as i64)
    }

    fn is_lattice_point(&self, z0: Complex64) -> bool {
        z0.norm() < POLE_GUARD * self.omega1.norm()
    }

    /// Length of the shortest nonzero period.
    pub fn shortest_period(&self) -> f64 {
        let (w1, w2) = (self.omega1 * 2.0, self.omega2 * 2.0);
        let mut best = f64::INFINITY;
        // |i + jτ| ≥ |j|·Im τ, so |j| ≤ 1/Im τ suffices to beat (i, j) = (1, 0)
        let jmax = (1.0 / self.tau.im).ceil() as i32 + 1;
        let imax = (jmax as f64 * self.tau.re.abs()).ceil() as i32 + 2;
        for i in -imax..=imax {
            for j in -jmax..=jmax {
                if (i, j) != (0, 0) {
                    best = best.min((w1 * i as f64 + w2 * j as f64).norm());
                }
            }
        }
        best
    }

    /// Distance from `z` to the nearest lattice point.
    /// Distance from the segment `[a, b]` to the nearest lattice point.
    pub fn segment_lattice_distance(&self, a: Complex64, b: Complex64) -> f64 {
        let (w1, w2) = (self.omega1 * 2.0, self.omega2 * 2.0);
        // lattice coordinates of a point: z = s·w1 + t·w2
        let det = w1.re * w2.im - w1.im * w2.re;
        let coords = |z: Complex64| ((z.re * w2.im - z.im * w2.re) / det, (w1.re * z.im - w1.im * z.re) / det);
        let (sa, ta) = coords(a);
        let (sb, tb) = coords(b);
        let (s0, s1) = (sa.min(sb).floor() as i64 - 1, sa.max(sb).ceil() as i64 + 1);
        let (t0, t1) = (ta.min(tb).floor() as i64 - 1, ta.max(tb).ceil() as i64 + 1);
        let mut best = f64::INFINITY;
        for i in s0..=s1 {
            for j in t0..=t1 {
                best = best.min(segment_distance(w1 * i as f64 + w2 * j as f64, a, b));
            }
        }
        best
    }

    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let (z0, _, _) = self.reduce(z);
        let (w1, w2) = (self.omega1 * 2.0, self.omega2 * 2.0);
        let mut best = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                best = best.min((z0 - w1 * i as f64 - w2 * j as f64).norm());
            }
        }
        best
    }

    fn v(&self, z: Complex64) -> Complex64 {
        z * PI / (self.omega1 * 2.0)
    }

    fn sigma_cell(&self, z0: Complex64) -> Complex64 {
        let th = theta1(self.v(z0), self.tau);
        (self.omega1 * 2.0 / PI) * (self.eta1 * z0 * z0 / (self.omega1 * 2.0)).exp() * th.t0 / self.theta1_prime0
    }

    fn zeta_cell(&self, z0: Complex64) -> Complex64 {
        let th = theta1(self.v(z0), self.tau);
        self.eta1 * z0 / self.omega1 + (PI / (self.omega1 * 2.0)) * th.t1 / th.t0
    }

    fn wp_cell(&self, z0: Complex64) -> Complex64 {
        let th = theta1(self.v(z0), self.tau);
        let k = PI / (self.omega1 * 2.0);
        -self.eta1 / self.omega1 - k * k * (th.t2 * th.t0 - th.t1 * th.t1) / (th.t0 * th.t0)
    }

    fn wp_prime_cell(&self, z0: Complex64) -> Complex64 {
        let th = theta1(self.v(z0), self.tau);
        let k = PI / (self.omega1 * 2.0);
        let r1 = th.t1 / th.t0;
        -(k * k * k) * (th.t3 / th.t0 - th.t2 * r1 * 3.0 / th.t0 + r1 * r1 * r1 * 2.0)
    }

    fn translation_eta(&self, m: i64, n: i64) -> Complex64 {
        self.eta1 * (2 * m) as f64 + self.eta2 * (2 * n) as f64
    }

    /// Weierstrass `σ(z)`; entire.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let (z0, m, n) = self.reduce(z);
        if self.is_lattice_point(z0) {
            return Complex64::new(0.0, 0.0);
        }
        let half_w = self.omega1 * m as f64 + self.omega2 * n as f64;
        let sign = if (m + n + m * n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (self.translation_eta(m, n) * (z0 + half_w)).exp() * self.sigma_cell(z0) * sign
    }

    /// `ζ = σ′/σ`.
    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        let (z0, m, n) = self.reduce(z);
        if self.is_lattice_point(z0) {
            return Err(Error::Pole { function: "zeta", z });
        }
        Ok(self.zeta_cell(z0) + self.translation_eta(m, n))
    }

    /// `℘ = -ζ′`.
    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        let (z0, _, _) = self.reduce(z);
        if self.is_lattice_point(z0) {
            return Err(Error::Pole { function: "wp", z });
        }
        Ok(self.wp_cell(z0))
    }

    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        let (z0, _, _) = self.reduce(z);
        if self.is_lattice_point(z0) {
            return Err(Error::Pole {
                function: "wp_prime",
                z,
            });
        }
        Ok(self.wp_prime_cell(z0))
    }

    /// `l(x, z) = -σ(x+z) / (σ(x)σ(z))`.
    pub fn l(&self, x: Complex64, z: Complex64) -> Result<Complex64> {
        let sx = self.sigma(x);
        let sz = self.sigma(z);
        if sx.norm() == 0.0 {
            return Err(Error::Pole {
                function: "l (first argument)",
                z: x,
            });
        }
        if sz.norm() == 0.0 {
            return Err(Error::Pole { function: "l", z });
        }
        Ok(-self.sigma(x + z) / (sx * sz))
    }

    /// `∂ₓ l(x, z) = l(x, z)·(ζ(x+z) - ζ(x))`.
    pub fn l_dx(&self, x: Complex64, z: Complex64) -> Result<Complex64> {
        let l = self.l(x, z)?;
        let (s0, _, _) = self.reduce(x + z);
        if self.is_lattice_point(s0) {
            // l has a zero of order one there; use the product form of the limit.
            return Ok(-self.sigma_derivative_at_lattice(x + z) / (self.sigma(x) * self.sigma(z)));
        }
        Ok(l * (self.zeta(x + z)? - self.zeta(x)?))
    }

    /// `σ′` at a lattice point `w`, where `σ′(w) = ±e^{η(w)w/2}`.
    fn sigma_derivative_at_lattice(&self, w: Complex64) -> Complex64 {
        let (_, m, n) = self.reduce(w);
        let half_w = self.omega1 * m as f64 + self.omega2 * n as f64;
        let sign = if (m + n + m * n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (self.translation_eta(m, n) * half_w).exp() * sign
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> Vec<Complex64> {
        let mut g = Vec::new();
        for i in -4..=4 {
            for j in -4..=4 {
                let z = c(0.37 * i as f64 + 0.11, 0.29 * j as f64 - 0.07);
                g.push(z);
            }
        }
        g
    }

    #[test]
    fn sigma_is_odd_and_vanishes_at_zero() {
        let l = Lattice::square();
        assert_eq!(l.sigma(c(0.0, 0.0)), c(0.0, 0.0));
        for z in grid() {
            assert!((l.sigma(z) + l.sigma(-z)).norm() < 1e-12 * (1.0 + l.sigma(z).norm()));
        }
        let z = c(1e-3, 2e-3);
        assert!((l.sigma(z) - z).norm() < 1e-12);
    }

    #[test]
    fn zeta_parity_and_principal_part() {
        let l = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        for z in grid() {
            assert!((l.zeta(z).unwrap() + l.zeta(-z).unwrap()).norm() < 1e-11);
        }
        let (w1, _) = l.half_periods();
        let z = w1 * 1e-3;
        assert!(((z * l.zeta(z).unwrap()) - 1.0).norm() < 1e-5);
        assert!(matches!(l.zeta(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(
            l.zeta(c(2.0, 2.0 * 0.0) + c(0.6, 2.2)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn wp_even_periodic() {
        let l = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let (w1, w2) = l.half_periods();
        for z in grid() {
            let p = l.wp(z).unwrap();
            assert!((p - l.wp(-z).unwrap()).norm() < 1e-11 * (1.0 + p.norm()));
            assert!((p - l.wp(z + w1 * 2.0).unwrap()).norm() < 1e-9 * (1.0 + p.norm()));
            assert!((p - l.wp(z + w2 * 2.0).unwrap()).norm() < 1e-9 * (1.0 + p.norm()));
        }
        assert!(l.wp(w1 * 2.0).is_err());
        assert!(l.wp_prime(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn square_lattice_has_g3_zero() {
        let l = Lattice::square();
        assert!(l.g3().norm() < 1e-12);
        assert!(l.g2().re > 0.0 && l.g2().im.abs() < 1e-12);
        // η₁ = π/4 for the square lattice with ω₁ = 1
        assert!((l.eta1() - c(PI / 4.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn quasi_periodicity() {
        let l = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let (w1, w2) = l.half_periods();
        for z in grid().into_iter().take(20) {
            let lhs = l.sigma(z + w1 * 2.0);
            let rhs = -(l.eta1() * 2.0 * (z + w1)).exp() * l.sigma(z);
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
            let lhs = l.sigma(z + w2 * 2.0);
            let rhs = -(l.eta2() * 2.0 * (z + w2)).exp() * l.sigma(z);
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn l_kernel_parity_and_residue() {
        let l = Lattice::square();
        for x in [c(0.3, 0.1), c(-0.7, 0.4), c(1.3, -0.2)] {
            for z in [c(0.2, 0.5), c(0.6, -0.3)] {
                let a = l.l(x, -z).unwrap();
                let b = -l.l(-x, z).unwrap();
                assert!((a - b).norm() < 1e-10);
            }
            let z = c(1e-3, 0.0);
            assert!((z * l.l(x, z).unwrap() + 1.0 + z * l.zeta(x).unwrap()).norm() < 1e-5);
        }
        assert!(l.l(c(0.0, 0.0), c(0.3, 0.0)).is_err());
        assert!(l.l(c(0.3, 0.0), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn l_dx_matches_finite_differences() {
        let l = Lattice::new(c(1.0, 0.0), c(0.2, 0.9)).unwrap();
        let h = 1e-5;
        for (x, z) in [(c(0.3, 0.1), c(0.4, 0.2)), (c(-0.8, 0.3), c(0.5, -0.4))] {
            let fd = (l.l(x + h, z).unwrap() - l.l(x - h, z).unwrap()) / (2.0 * h);
            let an = l.l_dx(x, z).unwrap();
            assert!((fd - an).norm() < 1e-6 * (1.0 + an.norm()));
        }
    }

    #[test]
    fn rejects_bad_lattices() {
        assert!(Lattice::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(Lattice::new(c(1.0, 0.0), c(0.0, -1.0)).is_err());
        assert!(Lattice::new(c(1.0, 0.0), c(3.0, 0.05)).is_err());
        assert!(Lattice::new(c(0.0, 0.0), c(0.0, 1.0)).is_err());
    }
}
