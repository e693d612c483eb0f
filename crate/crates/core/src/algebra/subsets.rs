use std::collections::BTreeSet;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::RootSystem;
use crate::{Error, Result};

/// Which combinatorial rule produced a [`RootSubset`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsetKind {
    /// `Δ′` closed under addition and negation (rational family).
    Closed,
    /// `Δ(Π′)`: every root in the span of the simple roots `Π′`.
    SimpleSpan { simple: Vec<usize> },
    /// Arbitrary index set that was not validated; used only for negative controls.
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSubset {
    kind: SubsetKind,
    members: BTreeSet<usize>,
}

impl RootSubset {
    pub fn empty() -> Self {
        Self {
            kind: SubsetKind::Closed,
            members: BTreeSet::new(),
        }
    }

    pub fn all(rs: &RootSystem) -> Self {
        Self {
            kind: SubsetKind::Closed,
            members: (0..rs.len()).collect(),
        }
    }

    /// Validated `Δ′`; fails unless closed under addition and negation.
    pub fn closed(rs: &RootSystem, indices: &[usize]) -> Result<Self> {
        check_indices(rs, indices)?;
        if !closed_subset_check(rs, indices) {
            let labels: Vec<String> = indices.iter().map(|&k| rs.label(k)).collect();
            return Err(Error::RootSubset(format!(
                "Δ′ not closed under addition and negation: {{{}}}",
                labels.join(", ")
            )));
        }
        Ok(Self {
            kind: SubsetKind::Closed,
            members: indices.iter().copied().collect(),
        })
    }

    /// `Δ(Π′)` for `Π′` a set of simple roots (indices into `rs.roots()`).
    pub fn spanned_by(rs: &RootSystem, simple: &[usize]) -> Result<Self> {
        let members = roots_spanned_by(rs, simple)?;
        let mut simple = simple.to_vec();
        simple.sort_unstable();
        simple.dedup();
        Ok(Self {
            kind: SubsetKind::SimpleSpan { simple },
            members: members.into_iter().collect(),
        })
    }

    pub fn unchecked(rs: &RootSystem, indices: &[usize]) -> Result<Self> {
        check_indices(rs, indices)?;
        Ok(Self {
            kind: SubsetKind::Unchecked,
            members: indices.iter().copied().collect(),
        })
    }

    pub fn kind(&self) -> &SubsetKind {
        &self.kind
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.contains(&k)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership mask over all roots.
    pub fn mask(&self, rs: &RootSystem) -> Vec<bool> {
        (0..rs.len()).map(|k| self.contains(k)).collect()
    }

    pub fn member_vec(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }
}

fn check_indices(rs: &RootSystem, indices: &[usize]) -> Result<()> {
    if let Some(&bad) = indices.iter().find(|&&k| k >= rs.len()) {
        return Err(Error::RootSubset(format!(
            "root index {bad} out of range for {} ({} roots)",
            rs.id(),
            rs.len()
        )));
    }
    Ok(())
}

/// True iff the set is closed under negation and under root addition
/// (`α, β ∈ Δ′` and `α+β ∈ Δ` imply `α+β ∈ Δ′`).
pub fn closed_subset_check(rs: &RootSystem, indices: &[usize]) -> bool {
    if indices.iter().any(|&k| k >= rs.len()) {
        return false;
    }
    let set: BTreeSet<usize> = indices.iter().copied().collect();
    for &a in &set {
        if !set.contains(&rs.negation(a)) {
            return false;
        }
        for &b in &set {
            if let Some(s) = rs.sum_index(a, b) {
                if !set.contains(&s) {
                    return false;
                }
            }
        }
    }
    true
}

/// All roots lying in the linear span of the given simple roots.
pub fn roots_spanned_by(rs: &RootSystem, simple: &[usize]) -> Result<Vec<usize>> {
    if let Some(&bad) = simple.iter().find(|k| !rs.simple_roots().contains(k)) {
        return Err(Error::RootSubset(format!(
            "root index {bad} is not a simple root of {}",
            rs.id()
        )));
    }
    Ok(roots_in_span(rs, simple))
}

/// Roots in the real span of `generators` (any root indices), found by
/// orthogonal projection.
pub fn roots_in_span(rs: &RootSystem, generators: &[usize]) -> Vec<usize> {
    let mut onb: Vec<DVector<f64>> = Vec::new();
    for &g in generators {
        let mut v = rs.root(g).clone();
        for u in &onb {
            v -= u * u.dot(&v);
        }
        let nv = v.norm();
        if nv > 1e-10 {
            onb.push(v / nv);
        }
    }
    (0..rs.len())
        .filter(|&k| {
            let mut v = rs.root(k).clone();
            for u in &onb {
                v -= u * u.dot(&v);
            }
            v.norm() < 1e-9
        })
        .collect()
}
