use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::realization::Realization;
use super::roots::{AlgebraId, RootSystem};
use crate::linalg::{c, commutator, trace_product, CMatrix};
use crate::{Error, Result};

/// Nonzero structure constant `[B_a, B_b] = Σ_c value·B_c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureConstant {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: Complex64,
}

/// Defining matrix realization of a classical simple Lie algebra together
/// with the invariant form `(X, Y) = κ·tr(XY)`.
///
/// The linear basis of `g` is ordered `h_1..h_N`, then `e_α` for the
/// positive roots, then `e_{-α}` in matching order, i.e. basis index
/// `N + k` holds the root vector of `root_system().root(k)`. The dual basis
/// under the form is the same list with `e_α ↔ e_{-α}` exchanged.
#[derive(Clone, Debug)]
pub struct Representation {
    roots: RootSystem,
    n: usize,
    kappa: f64,
    cartan: Vec<CMatrix>,
    root_vectors: Vec<CMatrix>,
    basis: Vec<CMatrix>,
    dual_index: Vec<usize>,
    structure: Vec<StructureConstant>,
}

fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(c)
}

pub fn build_root_system(id: AlgebraId) -> Result<RootSystem> {
    RootSystem::from_realization(&Realization::build(id)?)
}

pub fn build_representation(rs: &RootSystem) -> Result<Representation> {
    let real = Realization::build(rs.id())?;
    let check = RootSystem::from_realization(&real)?;
    if check.len() != rs.len() || (0..rs.len()).any(|k| (check.root(k) - rs.root(k)).amax() > 1e-9) {
        return Err(Error::UnsupportedAlgebra(format!(
            "{}: root data does not match the defining realization",
            rs.id()
        )));
    }
    Representation::from_realization(rs.clone(), &real)
}

impl Representation {
    pub fn new(id: AlgebraId) -> Result<Self> {
        let real = Realization::build(id)?;
        let rs = RootSystem::from_realization(&real)?;
        Self::from_realization(rs, &real)
    }

    fn from_realization(roots: RootSystem, real: &Realization) -> Result<Self> {
        let cartan: Vec<CMatrix> = real.cartan.iter().map(complexify).collect();
        let root_vectors: Vec<CMatrix> = real.root_vectors.iter().map(complexify).collect();
        let rank = cartan.len();
        let basis: Vec<CMatrix> = cartan.iter().chain(root_vectors.iter()).cloned().collect();
        let dual_index: Vec<usize> = (0..basis.len())
            .map(|a| if a < rank { a } else { rank + roots.negation(a - rank) })
            .collect();
        let mut rep = Self {
            roots,
            n: real.n,
            kappa: real.kappa,
            cartan,
            root_vectors,
            basis,
            dual_index,
            structure: Vec::new(),
        };
        let d = rep.dim_g();
        let mut structure = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let br = commutator(&rep.basis[a], &rep.basis[b]);
                if crate::linalg::max_abs(&br) < 1e-14 {
                    continue;
                }
                for cc in 0..d {
                    let value = rep.form_unchecked(&br, rep.dual(cc));
                    if value.norm() > 1e-13 {
                        structure.push(StructureConstant { a, b, c: cc, value });
                    }
                }
            }
        }
        rep.structure = structure;
        Ok(rep)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn id(&self) -> AlgebraId {
        self.roots.id()
    }

    /// Matrix size of the defining representation.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn dim_g(&self) -> usize {
        self.basis.len()
    }

    pub fn form_scale(&self) -> f64 {
        self.kappa
    }

    pub fn cartan(&self) -> &[CMatrix] {
        &self.cartan
    }

    pub fn cartan_element(&self, i: usize) -> &CMatrix {
        &self.cartan[i]
    }

    /// Root vector `e_α` for `α = root_system().root(k)`.
    pub fn root_vector(&self, k: usize) -> &CMatrix {
        &self.root_vectors[k]
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn basis_element(&self, a: usize) -> &CMatrix {
        &self.basis[a]
    }

    /// Index `σ(a)` with `B_{σ(a)}` dual to `B_a`: `(B_a, B_{σ(b)}) = δ_ab`.
    pub fn dual_index(&self, a: usize) -> usize {
        self.dual_index[a]
    }

    pub fn dual(&self, a: usize) -> &CMatrix {
        &self.basis[self.dual_index[a]]
    }

    pub fn structure_constants(&self) -> &[StructureConstant] {
        &self.structure
    }

    /// Basis index of the root vector for root `k`.
    pub fn root_basis_index(&self, k: usize) -> usize {
        self.rank() + k
    }

    fn check_shape(&self, x: &CMatrix) -> Result<()> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::Shape {
                expected: format!("{0}x{0}", self.n),
                got: format!("{}x{}", x.nrows(), x.ncols()),
            });
        }
        Ok(())
    }

    /// `(X, Y) = κ·tr(XY)`.
    pub fn invariant_form(&self, x: &CMatrix, y: &CMatrix) -> Result<Complex64> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        Ok(self.form_unchecked(x, y))
    }

    pub(crate) fn form_unchecked(&self, x: &CMatrix, y: &CMatrix) -> Complex64 {
        trace_product(x, y) * self.kappa
    }

    /// Coordinates `x_a = (X, B_a^∨)` of `X = Σ x_a B_a`.
    pub fn coordinates(&self, x: &CMatrix) -> Result<DVector<Complex64>> {
        self.check_shape(x)?;
        Ok(DVector::from_iterator(
            self.dim_g(),
            (0..self.dim_g()).map(|a| self.form_unchecked(x, self.dual(a))),
        ))
    }

    pub fn from_coordinates(&self, coords: &DVector<Complex64>) -> Result<CMatrix> {
        if coords.len() != self.dim_g() {
            return Err(Error::Shape {
                expected: format!("{} coordinates", self.dim_g()),
                got: format!("{}", coords.len()),
            });
        }
        let mut m = CMatrix::zeros(self.n, self.n);
        for (a, x) in coords.iter().enumerate() {
            if *x != Complex64::new(0.0, 0.0) {
                m += &self.basis[a] * *x;
            }
        }
        Ok(m)
    }

    /// Element of `h` with coordinates `v` in the orthonormal Cartan basis.
    pub fn cartan_from_coordinates(&self, v: &DVector<Complex64>) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        for (h, x) in self.cartan.iter().zip(v.iter()) {
            m += h * *x;
        }
        m
    }

    /// Largest residual of `[B_a, B_b] - Σ c_ab^c B_c` over all basis pairs.
    pub fn bracket_closure_residual(&self) -> f64 {
        let d = self.dim_g();
        let mut expansion = vec![CMatrix::zeros(self.n, self.n); d * d];
        for sc in &self.structure {
            expansion[sc.a * d + sc.b] += &self.basis[sc.c] * sc.value;
        }
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                let br = commutator(&self.basis[a], &self.basis[b]);
                worst = worst.max(crate::linalg::max_abs(&(br - &expansion[a * d + b])));
            }
        }
        worst
    }

    /// Dense table `c[a][b][c]` of the structure constants.
    pub fn structure_tensor(&self) -> Vec<Complex64> {
        let d = self.dim_g();
        let mut t = vec![Complex64::new(0.0, 0.0); d * d * d];
        for sc in &self.structure {
            t[(sc.a * d + sc.b) * d + sc.c] = sc.value;
        }
        t
    }
}
