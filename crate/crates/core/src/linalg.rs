//! Small dense complex helpers shared by the tensor code.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entry modulus; the residual norm used throughout the crate.
pub fn max_abs(m: &CMatrix) -> f64 {
    max_norm(m.iter())
}

/// Largest modulus over any sequence of complex numbers.
pub fn max_norm<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    values.into_iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    a.kronecker(b).kronecker(c)
}

/// Permutation matrix exchanging the two factors of `C^n ⊗ C^n`.
pub fn swap_operator(n: usize) -> CMatrix {
    let mut p = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p[(i * n + j, j * n + i)] = c(1.0);
        }
    }
    p
}

/// Permutation of `C^n ⊗ C^n ⊗ C^n` exchanging factors 2 and 3.
pub fn swap23_operator(n: usize) -> CMatrix {
    let m = n * n * n;
    let mut p = CMatrix::zeros(m, m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                p[(i * n * n + j * n + k, i * n * n + k * n + j)] = c(1.0);
            }
        }
    }
    p
}

/// `tr(XY)` without forming the product.
pub fn trace_product(x: &CMatrix, y: &CMatrix) -> Complex64 {
    let n = x.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}
