use orbivol::lie::{
    basis_matrix, bracket_matrix, build_basis, compact_dim, in_lorentz_algebra, matrix_coords, structure_table,
    AlgebraVector, BasisIndex, LorentzAlgebra, MetricSpec,
};
use proptest::prelude::*;

fn vec_strategy(n: usize) -> impl Strategy<Value = AlgebraVector> {
    prop::collection::vec(-1.0f64..1.0, n * (n + 1) / 2).prop_map(move |c| AlgebraVector::from_coeffs(n, c).unwrap())
}

#[test]
fn table_matches_matrix_commutators() {
    for n in 2..=12 {
        let basis = build_basis(n).unwrap();
        let table = structure_table(n).unwrap();
        for (a, (_, ma)) in basis.iter().enumerate() {
            for (b, (_, mb)) in basis.iter().enumerate() {
                let coords = matrix_coords(&bracket_matrix(ma, mb).unwrap()).unwrap();
                let mut expected = vec![0i64; basis.len()];
                if let Some((sign, c)) = table.entry(a, b) {
                    expected[c] = sign as i64;
                }
                assert_eq!(coords, expected, "n={n} a={a} b={b}");
            }
        }
    }
}

#[test]
fn basis_lies_in_algebra() {
    for n in 2..=8 {
        for (idx, m) in build_basis(n).unwrap() {
            assert!(in_lorentz_algebra(&m), "{}", idx.label());
        }
    }
    assert!(build_basis(1).is_err());
}

#[test]
fn golden_table_n3() {
    let golden: Vec<[String; 3]> = serde_json::from_str(include_str!("golden/structure_table_n3.json")).unwrap();
    let table = structure_table(3).unwrap();
    let got: Vec<[String; 3]> = serde_json::from_str(&table.dump_json()).unwrap();
    assert_eq!(got, golden);
    assert_eq!(table.triples(), golden);
}

#[test]
fn killing_gram_is_diagonal_with_cartan_signs() {
    for n in 2..=10 {
        let alg = LorentzAlgebra::new(n).unwrap();
        let d = alg.dim();
        let scale = 2.0 * n as f64 - 2.0;
        for a in 0..d {
            for b in 0..d {
                let (u, v) = (AlgebraVector::unit(n, a), AlgebraVector::unit(n, b));
                let exact = alg.killing(&u, &v).unwrap();
                let expected = if a != b {
                    0.0
                } else if a < compact_dim(n) {
                    -scale
                } else {
                    scale
                };
                assert_eq!(exact, expected);
                assert_eq!(alg.killing_by_trace(&u, &v).unwrap(), expected);
            }
        }
    }
}

#[test]
fn index_positions_and_matrices() {
    let n = 4;
    for (pos, idx) in LorentzAlgebra::new(n).unwrap().indices().iter().enumerate() {
        assert_eq!(idx.position(n), pos);
        assert_eq!(idx.is_compact(), pos < compact_dim(n));
    }
    let s2 = basis_matrix(n, BasisIndex::Sigma(2));
    assert_eq!(s2.get(1, n), 1);
    assert_eq!(s2.get(n, 1), 1);
}

#[test]
fn dimension_mismatch_is_rejected() {
    let alg = LorentzAlgebra::new(3).unwrap();
    assert!(alg.bracket(&AlgebraVector::zeros(3), &AlgebraVector::zeros(4)).is_err());
    assert!(AlgebraVector::from_coeffs(3, vec![0.0; 5]).is_err());
}

fn jacobi_residual(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector, z: &AlgebraVector) -> f64 {
    let b = |p: &AlgebraVector, q: &AlgebraVector| alg.bracket(p, q).unwrap();
    let s = &(&b(x, &b(y, z)) + &b(y, &b(z, x))) + &b(z, &b(x, y));
    s.max_abs()
}

fn triple(max_n: usize) -> impl Strategy<Value = (usize, AlgebraVector, AlgebraVector, AlgebraVector)> {
    (2usize..=max_n).prop_flat_map(|n| (Just(n), vec_strategy(n), vec_strategy(n), vec_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jacobi_identity((n, x, y, z) in triple(10)) {
        let alg = LorentzAlgebra::new(n).unwrap();
        prop_assert!(jacobi_residual(&alg, &x, &y, &z) <= 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear((n, x, y, z) in triple(8), c in -3.0f64..3.0) {
        let alg = LorentzAlgebra::new(n).unwrap();
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        prop_assert!((&xy + &yx).max_abs() <= 1e-14);
        let lhs = alg.bracket(&(&x + &(c * &z)), &y).unwrap();
        let rhs = &xy + &(c * &alg.bracket(&z, &y).unwrap());
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-12);
    }

    #[test]
    fn b_theta_is_skew_for_p((n, x, y, z) in triple(10)) {
        let alg = LorentzAlgebra::new(n).unwrap();
        let x = x.p_part();
        let lhs = alg.b_theta(&alg.bracket(&x, &y).unwrap(), &z).unwrap();
        let rhs = alg.b_theta(&y, &alg.bracket(&x, &z).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn canonical_metric_is_b_theta((n, x, y, _z) in triple(8)) {
        let alg = LorentzAlgebra::new(n).unwrap();
        let g = alg.inner(&x, &y, MetricSpec::Canonical).unwrap();
        prop_assert!((g - alg.b_theta(&x, &y).unwrap()).abs() <= 1e-12);
        let gs = alg.inner(&x, &y, MetricSpec::Scaled).unwrap();
        prop_assert!((gs * (2.0 * n as f64 - 2.0) - g).abs() <= 1e-12);
    }

    #[test]
    fn theta_is_an_automorphism((n, x, y, _z) in triple(8)) {
        let alg = LorentzAlgebra::new(n).unwrap();
        let lhs = alg.cartan_theta(&alg.bracket(&x, &y).unwrap()).unwrap();
        let rhs = alg.bracket(&alg.cartan_theta(&x).unwrap(), &alg.cartan_theta(&y).unwrap()).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-14);
    }
}
