//! Root systems of the classical simple Lie algebras, their defining matrix
//! realizations, the invariant form, the Casimir tensor and the root-subset
//! combinatorics used by the r-matrix families.

mod casimir;
mod realization;
mod representation;
mod roots;
mod subsets;

pub use casimir::{casimir_tensor, CasimirTensor};
pub use representation::{build_representation, build_root_system, Representation, StructureConstant};
pub use roots::{AlgebraId, LieFamily, RootSystem};
pub use subsets::{closed_subset_check, roots_in_span, roots_spanned_by, RootSubset, SubsetKind};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, commutator, max_abs, swap_operator, CMatrix};

    fn rep(family: LieFamily, rank: usize) -> Representation {
        Representation::new(AlgebraId::new(family, rank)).unwrap()
    }

    const SMALL: [(LieFamily, usize); 9] = [
        (LieFamily::A, 1),
        (LieFamily::A, 2),
        (LieFamily::A, 3),
        (LieFamily::B, 2),
        (LieFamily::B, 3),
        (LieFamily::C, 2),
        (LieFamily::C, 3),
        (LieFamily::D, 3),
        (LieFamily::D, 4),
    ];

    #[test]
    fn root_counts_match_classical_formulas() {
        for (f, r) in SMALL {
            let id = AlgebraId::new(f, r);
            let rs = build_root_system(id).unwrap();
            assert_eq!(rs.len(), id.root_count(), "{id}");
            assert_eq!(rs.simple_roots().len(), r, "{id}");
            for k in 0..rs.len() {
                let neg = rs.negation(k);
                assert!((rs.root(k) + rs.root(neg)).amax() < 1e-12);
                assert_eq!(rs.find(&-rs.root(k)), Some(neg));
            }
        }
    }

    #[test]
    fn a1_has_one_pair_of_length_two() {
        let rs = build_root_system(AlgebraId::new(LieFamily::A, 1)).unwrap();
        assert_eq!(rs.len(), 2);
        assert!((rs.pairing(rs.root(0), rs.root(0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn b2_has_two_root_lengths_with_ratio_two() {
        let rs = build_root_system(AlgebraId::new(LieFamily::B, 2)).unwrap();
        assert_eq!(rs.len(), 8);
        let mut lengths: Vec<f64> = rs.roots().iter().map(|a| a.norm_squared()).collect();
        lengths.sort_by(f64::total_cmp);
        assert!((lengths[0] - 1.0).abs() < 1e-12);
        assert!((lengths[7] - 2.0).abs() < 1e-12);
        assert!((lengths[7] / lengths[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn positive_roots_are_nonnegative_simple_combinations() {
        for (f, r) in SMALL {
            let rs = build_root_system(AlgebraId::new(f, r)).unwrap();
            for k in rs.positive_roots() {
                assert!(rs.simple_coefficients(k).iter().all(|&c| c >= 0));
                assert!(rs.height(k) >= 1);
            }
            for &s in rs.simple_roots() {
                assert_eq!(rs.height(s), 1);
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        for (f, r) in SMALL {
            let rs = build_root_system(AlgebraId::new(f, r)).unwrap();
            for k in 0..rs.len() {
                assert_eq!(rs.parse_label(&rs.label(k)).unwrap(), k, "{}", rs.label(k));
            }
        }
        let rs = build_root_system(AlgebraId::new(LieFamily::A, 2)).unwrap();
        assert_eq!(rs.parse_label("-a1-a2").unwrap(), rs.parse_label("-(a1+a2)").unwrap());
        assert!(rs.parse_label("a3").is_err());
        assert!(rs.parse_label("2a1").is_err());
    }

    #[test]
    fn sl2_matches_textbook_matrices() {
        let rep = rep(LieFamily::A, 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = rep.cartan_element(0);
        let expected_h = CMatrix::from_row_slice(2, 2, &[c(s), c(0.0), c(0.0), c(-s)]);
        assert!(max_abs(&(h - expected_h)) < 1e-15);
        let e = rep.root_vector(0);
        let f = rep.root_vector(1);
        assert!(max_abs(&(e - CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]))) < 1e-15);
        assert!(max_abs(&(f - CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]))) < 1e-15);
        assert!((rep.invariant_form(h, h).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((rep.invariant_form(e, f).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn form_normalisation_and_grading() {
        for (f, r) in SMALL {
            let rep = rep(f, r);
            let rs = rep.root_system();
            for i in 0..rep.rank() {
                for j in 0..rep.rank() {
                    let v = rep
                        .invariant_form(rep.cartan_element(i), rep.cartan_element(j))
                        .unwrap();
                    assert!((v - c(if i == j { 1.0 } else { 0.0 })).norm() < 1e-13);
                }
            }
            for a in 0..rs.len() {
                for b in 0..rs.len() {
                    let v = rep.invariant_form(rep.root_vector(a), rep.root_vector(b)).unwrap();
                    let expected = if b == rs.negation(a) { 1.0 } else { 0.0 };
                    assert!((v - c(expected)).norm() < 1e-13, "{f:?}{r} {a} {b}");
                }
            }
            let longest = rs.roots().iter().map(|a| a.norm_squared()).fold(0.0, f64::max);
            assert!((longest - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cartan_acts_by_roots() {
        for (f, r) in SMALL {
            let rep = rep(f, r);
            let rs = rep.root_system();
            for k in 0..rs.len() {
                let e = rep.root_vector(k);
                for i in 0..rep.rank() {
                    let lhs = commutator(rep.cartan_element(i), e);
                    let rhs = e * c(rs.root(k)[i]);
                    assert!(max_abs(&(lhs - rhs)) < 1e-13);
                }
                // [e_α, e_{-α}] is Cartan
                let br = commutator(e, rep.root_vector(rs.negation(k)));
                let coords = rep.coordinates(&br).unwrap();
                assert!(coords.iter().skip(rep.rank()).all(|x| x.norm() < 1e-13));
            }
        }
    }

    #[test]
    fn sl3_root_vectors_bracket_to_sums() {
        let rep = rep(LieFamily::A, 2);
        let rs = rep.root_system();
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                if let Some(s) = rs.sum_index(a, b) {
                    let br = commutator(rep.root_vector(a), rep.root_vector(b));
                    let coeff = rep.invariant_form(&br, rep.root_vector(rs.negation(s))).unwrap();
                    assert!(coeff.norm() > 0.5);
                    assert!(max_abs(&(br - rep.root_vector(s) * coeff)) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn form_is_ad_invariant_and_closed() {
        for (f, r) in SMALL {
            let rep = rep(f, r);
            assert!(rep.bracket_closure_residual() < 1e-12);
            let d = rep.dim_g();
            let b = rep.basis();
            let mut worst = 0.0f64;
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        let lhs = rep.invariant_form(&b[x], &commutator(&b[y], &b[z])).unwrap();
                        let rhs = rep.invariant_form(&commutator(&b[x], &b[y]), &b[z]).unwrap();
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
            assert!(worst < 1e-12, "{f:?}{r}: {worst}");
        }
    }

    #[test]
    fn structure_constants_antisymmetric_and_jacobi() {
        for (f, r) in SMALL.iter().filter(|(_, r)| *r <= 3) {
            let rep = rep(*f, *r);
            let d = rep.dim_g();
            let t = rep.structure_tensor();
            let at = |a: usize, b: usize, c: usize| t[(a * d + b) * d + c];
            for a in 0..d {
                for b in 0..d {
                    for cc in 0..d {
                        assert!((at(a, b, cc) + at(b, a, cc)).norm() < 1e-12);
                    }
                }
            }
            let mut worst = 0.0f64;
            for a in 0..d {
                for b in 0..d {
                    for cc in 0..d {
                        for e in 0..d {
                            let mut s = c(0.0);
                            for m in 0..d {
                                s += at(a, b, m) * at(m, cc, e)
                                    + at(b, cc, m) * at(m, a, e)
                                    + at(cc, a, m) * at(m, b, e);
                            }
                            worst = worst.max(s.norm());
                        }
                    }
                }
            }
            assert!(worst < 1e-12, "{f:?}{r}: {worst}");
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let rep = rep(LieFamily::C, 2);
        let coords = nalgebra::DVector::from_iterator(
            rep.dim_g(),
            (0..rep.dim_g()).map(|a| num_complex::Complex64::new(a as f64 * 0.3 - 1.0, 0.1 * a as f64)),
        );
        let x = rep.from_coordinates(&coords).unwrap();
        let back = rep.coordinates(&x).unwrap();
        assert!(crate::linalg::max_norm((back - coords).iter()) < 1e-13);
    }

    #[test]
    fn invariant_form_rejects_wrong_shape() {
        let rep = rep(LieFamily::A, 1);
        let bad = CMatrix::zeros(3, 3);
        assert!(matches!(
            rep.invariant_form(&bad, rep.cartan_element(0)),
            Err(crate::Error::Shape { .. })
        ));
    }

    #[test]
    fn sl2_casimir_is_swap_minus_half() {
        let rep = rep(LieFamily::A, 1);
        let omega = casimir_tensor(&rep);
        // brute-force sum over the dual bases h/√2, E12, E21
        let expected = swap_operator(2) - CMatrix::identity(4, 4) * c(0.5);
        assert!(max_abs(&(omega.matrix() - expected)) < 1e-15);
        assert_eq!(omega.swap_residual(), 0.0);
    }

    #[test]
    fn casimir_is_invariant() {
        for (f, r) in SMALL {
            let rep = rep(f, r);
            let omega = casimir_tensor(&rep);
            assert!(omega.swap_residual() < 1e-14);
            assert!(omega.invariance_residual(&rep) < 1e-12, "{f:?}{r}");
        }
    }

    #[test]
    fn closed_subsets() {
        let a1 = build_root_system(AlgebraId::new(LieFamily::A, 1)).unwrap();
        assert!(closed_subset_check(&a1, &[]));
        assert!(!closed_subset_check(&a1, &[0]));
        assert!(closed_subset_check(&a1, &[0, 1]));
        let a2 = build_root_system(AlgebraId::new(LieFamily::A, 2)).unwrap();
        for k in a2.positive_roots() {
            assert!(closed_subset_check(&a2, &[k, a2.negation(k)]));
        }
        // two simple roots and their negatives miss α1+α2
        let s = a2.simple_roots();
        assert!(!closed_subset_check(
            &a2,
            &[s[0], s[1], a2.negation(s[0]), a2.negation(s[1])]
        ));
        assert!(RootSubset::closed(&a2, &[s[0]]).is_err());
    }

    #[test]
    fn spans_of_simple_roots() {
        let a2 = build_root_system(AlgebraId::new(LieFamily::A, 2)).unwrap();
        let s = a2.simple_roots().to_vec();
        assert_eq!(roots_spanned_by(&a2, &s).unwrap(), (0..6).collect::<Vec<_>>());
        assert!(roots_spanned_by(&a2, &[]).unwrap().is_empty());
        let mut one = roots_spanned_by(&a2, &[s[0]]).unwrap();
        one.sort();
        let mut expected = vec![s[0], a2.negation(s[0])];
        expected.sort();
        assert_eq!(one, expected);
        let not_simple = a2.positive_roots().find(|k| !s.contains(k)).unwrap();
        assert!(roots_spanned_by(&a2, &[not_simple]).is_err());
    }

    #[test]
    fn every_simple_span_is_closed() {
        for (f, r) in SMALL.iter().filter(|(_, r)| *r <= 3) {
            let rs = build_root_system(AlgebraId::new(*f, *r)).unwrap();
            let simple = rs.simple_roots().to_vec();
            for mask in 0..(1u32 << simple.len()) {
                let subset: Vec<usize> = simple
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &s)| s)
                    .collect();
                let span = roots_spanned_by(&rs, &subset).unwrap();
                assert!(closed_subset_check(&rs, &span), "{f:?}{r} {subset:?}");
            }
        }
    }

    #[test]
    fn unsupported_algebras_rejected() {
        assert!(AlgebraId::new(LieFamily::D, 1).validate().is_err());
        assert!(AlgebraId::new(LieFamily::A, 0).validate().is_err());
        assert!(build_root_system(AlgebraId::new(LieFamily::D, 1)).is_err());
        assert!("E6".parse::<AlgebraId>().is_err());
        assert_eq!("b2".parse::<AlgebraId>().unwrap(), AlgebraId::new(LieFamily::B, 2));
    }
}
