use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::*;
use crate::algebra::{casimir_tensor, AlgebraId, LieFamily, Representation, RootSubset};
use crate::elliptic::Lattice;
use crate::linalg::{kron, max_abs};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rep(family: LieFamily, rank: usize) -> Arc<Representation> {
    Arc::new(Representation::new(AlgebraId::new(family, rank)).unwrap())
}

fn qv(values: &[f64]) -> DVector<Complex64> {
    DVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0)))
}

fn specs(rep: &Arc<Representation>) -> Vec<RMatrixSpec> {
    let rs = rep.root_system();
    let simple = rs.simple_roots().to_vec();
    vec![
        RMatrixSpec::rational(rep.clone(), RootSubset::all(rs)).unwrap(),
        RMatrixSpec::rational(rep.clone(), RootSubset::empty()).unwrap(),
        RMatrixSpec::trigonometric_standard(rep.clone(), &[]).unwrap(),
        RMatrixSpec::trigonometric_standard(rep.clone(), &simple[..1]).unwrap(),
        RMatrixSpec::trigonometric_standard(rep.clone(), &simple).unwrap(),
        RMatrixSpec::elliptic(rep.clone(), Lattice::square()),
    ]
}

fn generic_q(rank: usize) -> DVector<Complex64> {
    qv(&[0.71, 0.43, 0.29][..rank])
}

#[test]
fn sl2_rational_at_pairing_two() {
    let rep = rep(LieFamily::A, 1);
    let rs = rep.root_system();
    let spec = RMatrixSpec::rational(rep.clone(), RootSubset::all(rs)).unwrap();
    // (α,q) = 2 with α = √2 in the orthonormal Cartan coordinate
    let q = qv(&[2.0f64.sqrt()]);
    assert!((spec.root_pairings(&q).unwrap()[0] - 2.0).norm() < 1e-14);
    let z = c(0.4, 0.1);
    let r = eval_r(&spec, &q, z).unwrap();
    let (e, f) = (rep.root_vector(0), rep.root_vector(1));
    let expected = casimir_tensor(&rep).matrix() / z + (kron(e, f) - kron(f, e)) * c(0.5, 0.0);
    assert!(max_abs(&(r.matrix() - expected)) < 1e-14);
}

#[test]
fn no_cartan_root_blocks() {
    for rep in [rep(LieFamily::A, 2), rep(LieFamily::B, 2)] {
        let rank = rep.rank();
        for spec in specs(&rep) {
            let r = eval_r(&spec, &generic_q(rank), c(0.3, 0.2)).unwrap();
            let t = r.coefficients();
            for i in 0..rank {
                for a in rank..rep.dim_g() {
                    assert_eq!(t[(i, a)], c(0.0, 0.0));
                    assert_eq!(t[(a, i)], c(0.0, 0.0));
                }
            }
            assert!(r.round_trip_residual(&rep) < 1e-13);
        }
    }
}

#[test]
fn trigonometric_without_simple_roots_has_pure_exponential_root_part() {
    let rep = rep(LieFamily::A, 2);
    let spec = RMatrixSpec::trigonometric_standard(rep.clone(), &[]).unwrap();
    let q = generic_q(2);
    let z = c(0.35, -0.1);
    let coeffs = spec.coefficients(&q, z).unwrap();
    let x = spec.root_pairings(&q).unwrap();
    for (k, v) in coeffs.roots.iter().enumerate() {
        let phase = if rep.root_system().is_positive(k) { -1.0 } else { 1.0 };
        let expected = (c(0.0, phase) * z).exp() / z.sin() * (z * x[k] / 3.0).exp();
        assert!((v - expected).norm() < 1e-14);
    }
}

#[test]
fn rational_root_part_is_homogeneous() {
    let rep = rep(LieFamily::B, 2);
    let spec = RMatrixSpec::rational(rep.clone(), RootSubset::all(rep.root_system())).unwrap();
    let q = generic_q(2);
    let z = c(0.5, 0.0);
    let a = spec.coefficients(&q, z).unwrap();
    let b = spec.coefficients(&(&q * c(2.0, 0.0)), z).unwrap();
    for (x, y) in a.roots.iter().zip(&b.roots) {
        assert!(((x - z.inv()) - (y - z.inv()) * 2.0).norm() < 1e-14);
    }
}

#[test]
fn q_derivative_matches_central_differences() {
    let h = 1e-5;
    for rep in [rep(LieFamily::A, 1), rep(LieFamily::A, 2), rep(LieFamily::B, 2)] {
        let rank = rep.rank();
        let q = generic_q(rank);
        let dir = qv(&[0.3, -0.8, 0.5][..rank]);
        let z = c(0.37, 0.21);
        for spec in specs(&rep) {
            let an = dq_derivative(&spec, &q, z, &dir).unwrap();
            let step = &dir * c(h, 0.0);
            let fd = (eval_r(&spec, &(&q + &step), z).unwrap().into_matrix()
                - eval_r(&spec, &(&q - &step), z).unwrap().into_matrix())
                / c(2.0 * h, 0.0);
            let scale = max_abs(an.matrix()).max(1.0);
            assert!(max_abs(&(an.matrix() - fd)) < 1e-6 * scale, "{:?}", spec.kind());
            let zero = dq_derivative(&spec, &q, z, &DVector::zeros(rank)).unwrap();
            assert_eq!(max_abs(zero.matrix()), 0.0);
        }
    }
}

#[test]
fn rational_derivative_coefficient() {
    let rep = rep(LieFamily::A, 2);
    let spec = RMatrixSpec::rational(rep.clone(), RootSubset::all(rep.root_system())).unwrap();
    let q = generic_q(2);
    let d = qv(&[1.0, 0.5]);
    let x = spec.root_pairings(&q).unwrap();
    let ad = spec.root_pairings(&d).unwrap();
    let t = dq_derivative(&spec, &q, c(0.3, 0.0), &d).unwrap();
    for k in 0..rep.root_system().len() {
        let a = rep.root_basis_index(k);
        let expected = -ad[k] / (x[k] * x[k]);
        assert!((t.coefficients()[(a, rep.dual_index(a))] - expected).norm() < 1e-13);
    }
}

#[test]
fn conditions_hold_for_all_families() {
    for rep in [rep(LieFamily::A, 1), rep(LieFamily::A, 2), rep(LieFamily::B, 2)] {
        let q = generic_q(rep.rank());
        for spec in specs(&rep) {
            let z = c(0.41, 0.17);
            assert!(zero_weight_check(&spec, &q, z).unwrap() < 1e-11);
            assert!(unitarity_check(&spec, &q, z).unwrap() < 1e-9, "{:?}", spec.kind());
            assert!(residue_check(&spec, &q).unwrap() < 1e-8, "{:?}", spec.kind());
            let tol = if spec.kind() == FamilyKind::Elliptic {
                1e-7
            } else {
                1e-9
            };
            let res = cdybe_residual(&spec, &q, c(0.3, 0.1), c(-0.2, 0.25), c(0.05, -0.4)).unwrap();
            assert!(res < tol, "{:?} {} {res}", spec.kind(), rep.id());
        }
    }
}

#[test]
fn yang_r_matrix_satisfies_cybe() {
    let rep = rep(LieFamily::A, 1);
    let spec = RMatrixSpec::rational(rep, RootSubset::empty()).unwrap();
    let terms = cdybe_terms(&spec, &generic_q(1), c(0.3, 0.0), c(0.7, 0.2), c(-0.1, 0.5)).unwrap();
    assert_eq!(max_abs(&terms.alt), 0.0);
    assert!(terms.residual() < 1e-12);
}

#[test]
fn cdybe_detects_non_closed_subset_and_wrong_alt_sign() {
    let rep = rep(LieFamily::A, 1);
    let bad = RMatrixSpec::rational_unchecked(rep.clone(), &[0]).unwrap();
    let q = generic_q(1);
    let (z1, z2, z3) = (c(0.3, 0.1), c(-0.2, 0.25), c(0.05, -0.4));
    assert!(cdybe_residual(&bad, &q, z1, z2, z3).unwrap() > 1e-3);
    assert!(RMatrixSpec::rational(rep.clone(), RootSubset::unchecked(rep.root_system(), &[0]).unwrap()).is_err());

    let good = RMatrixSpec::rational(rep.clone(), RootSubset::all(rep.root_system())).unwrap();
    let terms = cdybe_terms(&good, &q, z1, z2, z3).unwrap();
    assert!(max_abs(&(&terms.quadratic - &terms.alt)) > 1e-3);
}

#[test]
fn zero_weight_negative_control() {
    let rep = rep(LieFamily::A, 1);
    let spec = RMatrixSpec::rational(rep.clone(), RootSubset::all(rep.root_system())).unwrap();
    let r = eval_r(&spec, &generic_q(1), c(0.4, 0.0)).unwrap();
    let eps = 1e-4;
    let e = rep.root_vector(0);
    let perturbed = r.matrix() + kron(e, e) * c(eps, 0.0);
    let alpha_h = rep.root_system().root(0)[0];
    let res = zero_weight_residual(&rep, &perturbed);
    assert!((res - 2.0 * eps * alpha_h.abs()).abs() < 1e-12);
    assert!(zero_weight_residual(&rep, &kron(e, rep.root_vector(1))) == 0.0);
}

#[test]
fn singular_points_name_the_root() {
    let rep = rep(LieFamily::A, 2);
    let rs = rep.root_system();
    let spec = RMatrixSpec::rational(rep.clone(), RootSubset::all(rs)).unwrap();
    // q orthogonal to the first simple root
    let a = rs.root(rs.simple_roots()[0]);
    let q = DVector::from_iterator(2, [c(-a[1], 0.0), c(a[0], 0.0)]);
    match eval_r(&spec, &q, c(0.3, 0.0)) {
        Err(Error::SingularConfiguration { root: Some(label), .. }) => assert_eq!(label, "a1"),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        eval_r(&spec, &generic_q(2), c(0.0, 0.0)),
        Err(Error::SingularConfiguration { root: None, .. })
    ));
    let trig = RMatrixSpec::trigonometric_standard(rep.clone(), &[]).unwrap();
    assert!(eval_r(&trig, &q, c(0.3, 0.0)).is_ok());
    assert!(eval_r(&trig, &q, c(std::f64::consts::PI, 0.0)).is_err());
    let ell = RMatrixSpec::elliptic(rep.clone(), Lattice::square());
    assert!(eval_r(&ell, &q, c(0.3, 0.0)).is_err());
    assert!(eval_r(&ell, &generic_q(2), c(2.0, 2.0)).is_err());
}

#[test]
fn tensor_value_round_trip() {
    let rep = rep(LieFamily::C, 2);
    let d = rep.dim_g();
    let table = DMatrix::from_fn(d, d, |a, b| c((a * d + b) as f64 * 0.01, (a as f64 - b as f64) * 0.1));
    let t = TensorValue::from_coefficients(&rep, table);
    assert!(t.round_trip_residual(&rep) < 1e-13);
}

#[test]
fn family_names_parse() {
    for k in FamilyKind::ALL {
        assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
    }
    assert!("hyperbolic".parse::<FamilyKind>().is_err());
}
