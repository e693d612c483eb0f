use std::collections::BTreeSet;

use crate::algebra::{roots_in_span, RootSubset, RootSystem};
use crate::{Error, Result};

/// Splitting `Δ = Δ₊ ∪ Δ₋` with `Δ₋ = -Δ₊` and `Δ₊` closed under addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    positive: Vec<bool>,
    simple: Vec<usize>,
}

impl Polarization {
    /// The polarization in which the root system's own positive roots are `Δ₊`.
    pub fn standard(rs: &RootSystem) -> Self {
        Self {
            positive: (0..rs.len()).map(|k| rs.is_positive(k)).collect(),
            simple: rs.simple_roots().to_vec(),
        }
    }

    /// Validates an arbitrary sign map (`true` for `Δ₊`).
    pub fn from_signs(rs: &RootSystem, positive: Vec<bool>) -> Result<Self> {
        if positive.len() != rs.len() {
            return Err(Error::Shape {
                expected: format!("{} root signs", rs.len()),
                got: positive.len().to_string(),
            });
        }
        for k in 0..rs.len() {
            if positive[k] == positive[rs.negation(k)] {
                return Err(Error::RootSubset(format!(
                    "polarization puts {} and its negative on the same side",
                    rs.label(k)
                )));
            }
        }
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                if !(positive[a] && positive[b]) {
                    continue;
                }
                if let Some(s) = rs.sum_index(a, b) {
                    if !positive[s] {
                        return Err(Error::RootSubset(format!(
                            "Δ₊ not closed: {} + {} is negative",
                            rs.label(a),
                            rs.label(b)
                        )));
                    }
                }
            }
        }
        // Simple roots of Δ₊ are the positive roots that are not sums of two positive roots.
        let pos: BTreeSet<usize> = (0..rs.len()).filter(|&k| positive[k]).collect();
        let simple = pos
            .iter()
            .copied()
            .filter(|&k| {
                !pos.iter()
                    .any(|&a| rs.find(&(rs.root(k) - rs.root(a))).is_some_and(|b| pos.contains(&b)))
            })
            .collect();
        Ok(Self { positive, simple })
    }

    pub fn is_positive(&self, k: usize) -> bool {
        self.positive[k]
    }

    pub fn signs(&self) -> &[bool] {
        &self.positive
    }

    /// Simple roots of `Δ₊`.
    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    /// `Δ(Π′)` after checking `Π′ ⊆` simple roots of `Δ₊`.
    pub fn span_of(&self, rs: &RootSystem, simple: &[usize]) -> Result<RootSubset> {
        if let Some(&bad) = simple.iter().find(|k| !self.simple.contains(k)) {
            let label = if bad < rs.len() {
                rs.label(bad)
            } else {
                format!("#{bad}")
            };
            return Err(Error::RootSubset(format!("{label} is not a simple root of Δ₊")));
        }
        if self.simple == rs.simple_roots() {
            return RootSubset::spanned_by(rs, simple);
        }
        RootSubset::unchecked(rs, &roots_in_span(rs, simple))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_root_system, AlgebraId, LieFamily};

    #[test]
    fn standard_polarization_matches_positive_roots() {
        let rs = build_root_system(AlgebraId::new(LieFamily::B, 2)).unwrap();
        let pol = Polarization::standard(&rs);
        let again = Polarization::from_signs(&rs, pol.signs().to_vec()).unwrap();
        assert_eq!(again.simple_roots(), rs.simple_roots());
    }

    #[test]
    fn opposite_polarization_is_valid() {
        let rs = build_root_system(AlgebraId::new(LieFamily::A, 2)).unwrap();
        let signs: Vec<bool> = (0..rs.len()).map(|k| !rs.is_positive(k)).collect();
        let pol = Polarization::from_signs(&rs, signs).unwrap();
        let mut simple = pol.simple_roots().to_vec();
        simple.sort();
        let mut expected: Vec<usize> = rs.simple_roots().iter().map(|&k| rs.negation(k)).collect();
        expected.sort();
        assert_eq!(simple, expected);
        let span = pol.span_of(&rs, &simple[..1]).unwrap();
        assert_eq!(span.len(), 2);
        assert!(pol.span_of(&rs, &[0]).is_err());
    }

    #[test]
    fn rejects_non_polarizations() {
        let rs = build_root_system(AlgebraId::new(LieFamily::A, 2)).unwrap();
        let mut signs: Vec<bool> = (0..rs.len()).map(|k| rs.is_positive(k)).collect();
        signs[0] = false;
        assert!(Polarization::from_signs(&rs, signs.clone()).is_err());
        // a1 and a2 positive but a1+a2 negative
        let top = rs.sum_index(rs.simple_roots()[0], rs.simple_roots()[1]).unwrap();
        let mut signs: Vec<bool> = (0..rs.len()).map(|k| rs.is_positive(k)).collect();
        signs[top] = false;
        signs[rs.negation(top)] = true;
        assert!(Polarization::from_signs(&rs, signs).is_err());
    }
}
