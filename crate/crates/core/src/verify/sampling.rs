use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::Suite;
use crate::algebra::{Representation, RootSystem};
use crate::dynamics::PhasePoint;
use crate::rmatrix::{FamilyKind, RMatrixSpec};
use crate::{Error, Result};

/// Smallest singular measure accepted for sampled root pairings and
/// spectral parameters.
pub const MIN_CLEARANCE: f64 = 0.2;
const MAX_ATTEMPTS: usize = 10_000;

pub(crate) fn stream(seed: u64, suite: Suite, case: usize, sample: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(suite as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(case as u64).to_le_bytes());
    key[24..].copy_from_slice(&(sample as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Real `q` with coordinates in `[0.3, 1.2]`, rejected until every
/// contributing root pairing clears the singular set by [`MIN_CLEARANCE`].
pub(crate) fn positions(rng: &mut ChaCha8Rng, spec: &RMatrixSpec) -> Result<DVector<Complex64>> {
    for _ in 0..MAX_ATTEMPTS {
        let q = DVector::from_fn(spec.rank(), |_, _| Complex64::new(rng.random_range(0.3..1.2), 0.0));
        match spec.closest_singular_root(&q)? {
            Some((_, m)) if m < MIN_CLEARANCE => continue,
            _ => return Ok(q),
        }
    }
    Err(Error::Invalid(format!(
        "no admissible q found for {}",
        spec.root_system().id()
    )))
}

/// `p` uniform in `[-1, 1]`; root components of `ξ` uniform in `[-1, 1]`,
/// Cartan components of magnitude in `[0.25, 1]` so that `J ≠ 0`.
pub(crate) fn momenta_and_spins(
    rng: &mut ChaCha8Rng,
    rep: &Representation,
) -> (DVector<Complex64>, DVector<Complex64>) {
    let rank = rep.rank();
    let p = DVector::from_fn(rank, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
    let xi = DVector::from_fn(rep.dim_g(), |a, _| {
        let v = if a < rank {
            let m: f64 = rng.random_range(0.25..1.0);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        } else {
            rng.random_range(-1.0..1.0)
        };
        Complex64::new(v, 0.0)
    });
    (p, xi)
}

/// `count` spectral parameters with `|z| ∈ [0.3, 0.9]` whose values and
/// pairwise differences all clear the poles of the family.
pub(crate) fn spectral(rng: &mut ChaCha8Rng, spec: &RMatrixSpec, count: usize) -> Result<Vec<Complex64>> {
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let zs: Vec<Complex64> = (0..count)
            .map(|_| Complex64::from_polar(rng.random_range(0.3..0.9), rng.random_range(0.0..2.0 * PI)))
            .collect();
        for (i, &a) in zs.iter().enumerate() {
            if spec.singular_measure(a) < MIN_CLEARANCE {
                continue 'attempt;
            }
            for &b in &zs[i + 1..] {
                if (a - b).norm() < 0.3 || spec.singular_measure(a - b) < MIN_CLEARANCE {
                    continue 'attempt;
                }
            }
        }
        return Ok(zs);
    }
    Err(Error::Invalid("no admissible spectral parameters found".into()))
}

/// A random admissible phase point drawn as in the suites, keyed by `seed` alone.
pub fn random_phase_point(spec: &RMatrixSpec, seed: u64) -> Result<PhasePoint> {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&u64::MAX.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    let q = positions(&mut rng, spec)?;
    let (p, xi) = momenta_and_spins(&mut rng, spec.representation());
    Ok(PhasePoint::new(q, p, xi))
}

/// Solves `(α_s, v) = target_s` over the simple roots.
fn from_simple_pairings(rs: &RootSystem, target: &[f64]) -> Result<Vec<f64>> {
    let simple = rs.simple_roots();
    let n = rs.rank();
    let m = DMatrix::from_fn(n, n, |i, j| rs.root(simple[i])[j]);
    let v = m
        .lu()
        .solve(&DVector::from_column_slice(target))
        .ok_or_else(|| Error::Invalid("simple roots are not a basis".into()))?;
    Ok(v.iter().copied().collect())
}

/// The documented initial states of the conservation suite.
///
/// * rational `sl(3)`: simple-root pairings `(α,q) = (1.0, 1.2)` and
///   `(α,p) = (0.7, 0.6)`, so all particles separate; root spins
///   `ξ_{a1} = 0.25, ξ_{a2} = -0.2, ξ_{a1+a2} = 0.15` and
///   `ξ_{-a1} = -0.2, ξ_{-a2} = 0.16, ξ_{-(a1+a2)} = -0.12`.
///   On `Σ` the Cartan part is `0`; off `Σ` it is `(0.3, -0.2)`.
/// * trigonometric and elliptic `sl(2)`: `(α,q) = 1.3`, `p = 0.4`,
///   `ξ_{a1} = 0.5, ξ_{-a1} = -0.6` (repulsive); Cartan part `0` on `Σ` and
///   `0.5` off `Σ`.
pub fn conservation_seed(spec: &RMatrixSpec, on_sigma: bool) -> Result<PhasePoint> {
    let rs = spec.root_system();
    let rank = rs.rank();
    let (q_pairs, p_pairs, spins, cartan): (Vec<f64>, Option<Vec<f64>>, Vec<(&str, f64)>, Vec<f64>) =
        match (spec.kind(), rank) {
            (FamilyKind::Rational, 2) => (
                vec![1.0, 1.2],
                Some(vec![0.7, 0.6]),
                vec![
                    ("a1", 0.25),
                    ("a2", -0.2),
                    ("a1+a2", 0.15),
                    ("-a1", -0.2),
                    ("-a2", 0.16),
                    ("-(a1+a2)", -0.12),
                ],
                vec![0.3, -0.2],
            ),
            (FamilyKind::Trigonometric | FamilyKind::Elliptic, 1) => {
                (vec![1.3], None, vec![("a1", 0.5), ("-a1", -0.6)], vec![0.5])
            }
            _ => {
                return Err(Error::Invalid(format!(
                    "no documented conservation seed for the {} family on {}",
                    spec.kind(),
                    rs.id()
                )))
            }
        };
    let q = from_simple_pairings(rs, &q_pairs)?;
    let p = match p_pairs {
        Some(pp) => from_simple_pairings(rs, &pp)?,
        None => vec![0.4],
    };
    let mut xi = vec![0.0; rank + rs.len()];
    for (label, v) in spins {
        xi[rank + rs.parse_label(label)?] = v;
    }
    if !on_sigma {
        xi[..rank].copy_from_slice(&cartan);
    }
    Ok(PhasePoint::from_real(&q, &p, &xi))
}
