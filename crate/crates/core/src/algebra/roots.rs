use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::realization::Realization;
use crate::{Error, Result};

/// Classical Cartan type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieFamily {
    A,
    B,
    C,
    D,
}

/// A classical simple Lie algebra, `A2` for `sl(3)`, `B2` for `so(5)` and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AlgebraId {
    pub family: LieFamily,
    pub rank: usize,
}

impl AlgebraId {
    pub const fn new(family: LieFamily, rank: usize) -> Self {
        Self { family, rank }
    }

    pub fn validate(self) -> Result<Self> {
        let min = match self.family {
            LieFamily::D => 2,
            _ => 1,
        };
        if self.rank < min {
            return Err(Error::UnsupportedAlgebra(format!(
                "{self} (type {:?} needs rank >= {min})",
                self.family
            )));
        }
        if self.rank > 8 {
            return Err(Error::UnsupportedAlgebra(format!("{self} (rank above 8)")));
        }
        Ok(self)
    }

    /// Size of the defining representation.
    pub fn defining_dim(self) -> usize {
        match self.family {
            LieFamily::A => self.rank + 1,
            LieFamily::B => 2 * self.rank + 1,
            LieFamily::C | LieFamily::D => 2 * self.rank,
        }
    }

    /// Number of roots of the classical root system.
    pub fn root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            LieFamily::A => n * (n + 1),
            LieFamily::B | LieFamily::C => 2 * n * n,
            LieFamily::D => 2 * n * (n - 1),
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for AlgebraId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedAlgebra(format!("cannot parse algebra '{s}' (expected e.g. A2, B2, C3, D4)"));
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => LieFamily::A,
            Some('B') => LieFamily::B,
            Some('C') => LieFamily::C,
            Some('D') => LieFamily::D,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        AlgebraId::new(family, rank).validate()
    }
}

impl TryFrom<String> for AlgebraId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlgebraId> for String {
    fn from(id: AlgebraId) -> String {
        id.to_string()
    }
}

/// Root system of a classical simple Lie algebra.
///
/// Roots are stored as coordinate vectors `α(h_i)` in the orthonormal Cartan
/// basis of the defining realization. The first half of `roots` are the
/// positive roots; entry `k + P` is `-roots[k]`, so the index of `-α` is
/// always known without a search.
#[derive(Clone, Debug)]
pub struct RootSystem {
    id: AlgebraId,
    roots: Vec<DVector<f64>>,
    simple: Vec<usize>,
    /// Expansion of every root in the simple roots.
    simple_coefficients: Vec<Vec<i64>>,
}

const ROOT_MATCH_TOL: f64 = 1e-9;

impl RootSystem {
    pub(crate) fn from_realization(real: &Realization) -> Result<Self> {
        let p = real.positive_count();
        let roots = real.roots.clone();
        let simple: Vec<usize> = real.simple.clone();
        let rank = real.id.rank;
        let mut basis = DMatrix::<f64>::zeros(rank, simple.len());
        for (col, &s) in simple.iter().enumerate() {
            basis.set_column(col, &roots[s]);
        }
        let inv = basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::UnsupportedAlgebra(format!("{}: simple roots are not a basis", real.id)))?;
        let mut simple_coefficients = Vec::with_capacity(roots.len());
        for (k, root) in roots.iter().enumerate() {
            let coeffs = &inv * root;
            let rounded: Vec<i64> = coeffs.iter().map(|c| c.round() as i64).collect();
            let err = coeffs
                .iter()
                .zip(&rounded)
                .fold(0.0f64, |acc, (c, r)| acc.max((c - *r as f64).abs()));
            if err > 1e-8 {
                return Err(Error::UnsupportedAlgebra(format!(
                    "{}: root {k} is not an integer combination of simple roots",
                    real.id
                )));
            }
            let positive = k < p;
            if rounded.iter().any(|&c| if positive { c < 0 } else { c > 0 }) {
                return Err(Error::UnsupportedAlgebra(format!(
                    "{}: mixed-sign root expansion",
                    real.id
                )));
            }
            simple_coefficients.push(rounded);
        }
        Ok(Self {
            id: real.id,
            roots,
            simple,
            simple_coefficients,
        })
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.id.rank
    }

    /// Dimension of the Cartan subalgebra (equal to the rank for the
    /// realizations used here).
    pub fn ambient_dim(&self) -> usize {
        self.id.rank
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn roots(&self) -> &[DVector<f64>] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &DVector<f64> {
        &self.roots[k]
    }

    pub fn positive_roots(&self) -> std::ops::Range<usize> {
        0..self.positive_count()
    }

    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.positive_count()
    }

    /// Index of `-α`.
    pub fn negation(&self, k: usize) -> usize {
        let p = self.positive_count();
        if k < p {
            k + p
        } else {
            k - p
        }
    }

    pub fn simple_coefficients(&self, k: usize) -> &[i64] {
        &self.simple_coefficients[k]
    }

    pub fn height(&self, k: usize) -> i64 {
        self.simple_coefficients[k].iter().sum()
    }

    /// Gram matrix of the pairing on `h*` in root coordinates. The Cartan
    /// basis is orthonormal, so this is the identity.
    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::identity(self.rank(), self.rank())
    }

    pub fn pairing(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(b)
    }

    pub fn find(&self, v: &DVector<f64>) -> Option<usize> {
        self.roots.iter().position(|r| (r - v).amax() < ROOT_MATCH_TOL)
    }

    /// Index of `α_a + α_b` if it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        self.find(&(&self.roots[a] + &self.roots[b]))
    }

    /// Human-readable label in simple-root coordinates, e.g. `a1+a2` or `-a2`.
    pub fn label(&self, k: usize) -> String {
        let coeffs = &self.simple_coefficients[k];
        let negative = coeffs.iter().any(|&c| c < 0);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate() {
            let c = c.abs();
            if c == 1 {
                parts.push(format!("a{}", i + 1));
            } else if c > 1 {
                parts.push(format!("{c}a{}", i + 1));
            }
        }
        let body = parts.join("+");
        if negative {
            if parts.len() > 1 {
                format!("-({body})")
            } else {
                format!("-{body}")
            }
        } else {
            body
        }
    }

    /// Parses a label produced by [`RootSystem::label`] (whitespace ignored,
    /// `-(a1+a2)` and `-a1-a2` both accepted).
    pub fn parse_label(&self, text: &str) -> Result<usize> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::RootSubset(format!("'{text}' is not a root of {}", self.id));
        let (sign, body) = if let Some(rest) = cleaned.strip_prefix("-(") {
            (-1i64, rest.strip_suffix(')').ok_or_else(bad)?.to_string())
        } else {
            (1, cleaned.clone())
        };
        let mut coeffs = vec![0i64; self.rank()];
        let mut term_sign = sign;
        let mut rest = body.as_str();
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('+') {
                term_sign = sign;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                term_sign = -sign;
                rest = r;
            }
            let a_pos = rest.find(['a', 'A']).ok_or_else(bad)?;
            let mult: i64 = if a_pos == 0 {
                1
            } else {
                rest[..a_pos].parse().map_err(|_| bad())?
            };
            let after = &rest[a_pos + 1..];
            let digits = after.find(|c: char| !c.is_ascii_digit()).unwrap_or(after.len());
            let idx: usize = after[..digits].parse().map_err(|_| bad())?;
            if idx == 0 || idx > self.rank() {
                return Err(bad());
            }
            coeffs[idx - 1] += term_sign * mult;
            rest = &after[digits..];
        }
        self.simple_coefficients
            .iter()
            .position(|c| *c == coeffs)
            .ok_or_else(bad)
    }
}
