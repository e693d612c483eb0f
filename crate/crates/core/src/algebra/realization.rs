//! Defining matrix realizations of the classical algebras.
//!
//! `sl(n)` is the traceless matrices; `so(N)` and `sp(2n)` are the matrices
//! `X` with `XᵀS + SX = 0` for the anti-diagonal form `S` (symmetric for
//! `so`, skew for `sp`). In this gauge the diagonal matrices form a Cartan
//! subalgebra and the strictly upper triangular part is the positive Borel.

use nalgebra::{DMatrix, DVector};

use super::roots::{AlgebraId, LieFamily};
use crate::Result;

pub(crate) struct Realization {
    pub id: AlgebraId,
    pub n: usize,
    pub kappa: f64,
    /// Orthonormal (for `κ·tr`) Cartan basis.
    pub cartan: Vec<DMatrix<f64>>,
    /// Roots in `cartan` coordinates; positives first, then negatives in matching order.
    pub roots: Vec<DVector<f64>>,
    /// Root vectors normalised so `κ·tr(e_α e_{-α}) = 1`.
    pub root_vectors: Vec<DMatrix<f64>>,
    pub simple: Vec<usize>,
}

impl Realization {
    pub fn positive_count(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn build(id: AlgebraId) -> Result<Self> {
        let id = id.validate()?;
        let n = id.defining_dim();
        let rank = id.rank;
        let form = invariant_matrix(id);

        let project = |x: &DMatrix<f64>| -> DMatrix<f64> {
            match &form {
                None => x.clone(),
                Some(s) => {
                    // S is a signed permutation, so S⁻¹ = Sᵀ.
                    (x - s.transpose() * x.transpose() * s) * 0.5
                }
            }
        };

        let raw_cartan: Vec<DMatrix<f64>> = (0..rank)
            .map(|i| {
                let mut d = DMatrix::zeros(n, n);
                match id.family {
                    LieFamily::A => {
                        d[(i, i)] = 1.0;
                        d[(i + 1, i + 1)] = -1.0;
                    }
                    _ => {
                        d[(i, i)] = 1.0;
                        d[(n - 1 - i, n - 1 - i)] = -1.0;
                    }
                }
                d
            })
            .collect();

        // Gram-Schmidt under tr(XY).
        let mut cartan: Vec<DMatrix<f64>> = Vec::with_capacity(rank);
        for raw in raw_cartan {
            let mut x = raw;
            for h in &cartan {
                let proj = (&x * h).trace();
                x -= h * proj;
            }
            let norm = (&x * &x).trace().sqrt();
            cartan.push(x / norm);
        }

        // Weight vectors E_ij projected into the algebra; keep one per weight,
        // preferring the upper-triangular representative.
        let mut found: Vec<(DVector<f64>, (usize, usize), DMatrix<f64>)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut e = DMatrix::zeros(n, n);
                e[(i, j)] = 1.0;
                let x = project(&e);
                if x.amax() < 1e-12 {
                    continue;
                }
                let w = DVector::from_iterator(rank, cartan.iter().map(|h| h[(i, i)] - h[(j, j)]));
                if w.amax() < 1e-12 || found.iter().any(|(v, _, _)| (v - &w).amax() < 1e-9) {
                    continue;
                }
                let scale = x.amax();
                found.push((w, (i, j), x / scale));
            }
        }

        // Long roots get (α,α) = 2; (α,α) scales like 1/κ.
        let longest = found.iter().map(|(w, _, _)| w.norm_squared()).fold(0.0, f64::max);
        let kappa = longest / 2.0;
        let scale = kappa.sqrt();
        for h in &mut cartan {
            *h /= scale;
        }
        for (w, _, _) in &mut found {
            *w /= scale;
        }

        let mut positive: Vec<(DVector<f64>, (usize, usize), DMatrix<f64>)> =
            found.into_iter().filter(|(_, (i, j), _)| i < j).collect();

        let is_sum = |target: &DVector<f64>, set: &[(DVector<f64>, (usize, usize), DMatrix<f64>)]| {
            set.iter().any(|(a, _, _)| {
                let rest = target - a;
                set.iter().any(|(b, _, _)| (&rest - b).amax() < 1e-9)
            })
        };
        let mut simple_pos: Vec<(usize, usize)> = positive
            .iter()
            .filter(|(w, _, _)| !is_sum(w, &positive))
            .map(|(_, ij, _)| *ij)
            .collect();
        simple_pos.sort();

        // Height from the simple expansion decides the order of positive roots.
        let simple_vectors: Vec<DVector<f64>> = simple_pos
            .iter()
            .map(|ij| positive.iter().find(|(_, p, _)| p == ij).unwrap().0.clone())
            .collect();
        let mut basis = DMatrix::<f64>::zeros(rank, rank);
        for (c, v) in simple_vectors.iter().enumerate() {
            basis.set_column(c, v);
        }
        let inv = basis
            .try_inverse()
            .ok_or_else(|| crate::Error::UnsupportedAlgebra(format!("{id}: simple roots are not a basis")))?;
        let height = |w: &DVector<f64>| (&inv * w).sum().round() as i64;
        positive.sort_by(|a, b| {
            let ha = height(&a.0);
            let hb = height(&b.0);
            ha.cmp(&hb).then_with(|| {
                if ha == 1 {
                    a.1.cmp(&b.1)
                } else {
                    // by simple-root coefficients, lexicographically
                    let ca: Vec<i64> = (&inv * &a.0).iter().map(|c| c.round() as i64).collect();
                    let cb: Vec<i64> = (&inv * &b.0).iter().map(|c| c.round() as i64).collect();
                    cb.cmp(&ca)
                }
            })
        });

        let p = positive.len();
        let mut roots = Vec::with_capacity(2 * p);
        let mut root_vectors = Vec::with_capacity(2 * p);
        let mut negatives = Vec::with_capacity(p);
        for (w, _, x) in &positive {
            let pairing = kappa * (x * x.transpose()).trace();
            let s = 1.0 / pairing.sqrt();
            roots.push(w.clone());
            root_vectors.push(x * s);
            negatives.push((-w, x.transpose() * s));
        }
        for (w, x) in negatives {
            roots.push(w);
            root_vectors.push(x);
        }
        let simple = simple_pos
            .iter()
            .map(|ij| positive.iter().position(|(_, p, _)| p == ij).unwrap())
            .collect();

        Ok(Self {
            id,
            n,
            kappa,
            cartan,
            roots,
            root_vectors,
            simple,
        })
    }
}

fn invariant_matrix(id: AlgebraId) -> Option<DMatrix<f64>> {
    let n = id.defining_dim();
    match id.family {
        LieFamily::A => None,
        LieFamily::B | LieFamily::D => {
            let mut s = DMatrix::zeros(n, n);
            for i in 0..n {
                s[(i, n - 1 - i)] = 1.0;
            }
            Some(s)
        }
        LieFamily::C => {
            let mut s = DMatrix::zeros(n, n);
            let half = n / 2;
            for i in 0..half {
                s[(i, n - 1 - i)] = 1.0;
                s[(n - 1 - i, i)] = -1.0;
            }
            Some(s)
        }
    }
}
