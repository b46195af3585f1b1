use std::sync::Arc;

use proptest::prelude::*;
use twogroup::lie2::{BlockModel, MatrixLie2Group};
use twogroup::matrix_lie::{expm, Coords, Mat, MatrixLieGroup, Membership};
use twogroup::multvf::{FieldCategory, MultVectorField, Samples};

fn affine() -> Arc<MatrixLieGroup> {
    let b1 = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let b2 = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    Arc::new(MatrixLieGroup::new("aff", vec![b1, b2], Membership::Affine, 1e-9).unwrap())
}

fn inner_affine() -> MatrixLie2Group {
    let a = affine();
    MatrixLie2Group::new("aff2", a.clone(), a, BlockModel::Inner).unwrap()
}

fn matrix3() -> impl Strategy<Value = Mat> {
    prop::collection::vec(-1.0f64..1.0, 9).prop_map(|v| Mat::from_row_slice(3, 3, &v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponentials_of_opposites_are_inverse(a in matrix3()) {
        let prod = expm(&a).unwrap() * expm(&(-&a)).unwrap();
        prop_assert!((prod - Mat::identity(3, 3)).norm() <= 1e-12);
    }

    #[test]
    fn exponential_of_a_trace_free_matrix_has_unit_determinant(a in matrix3()) {
        let trace = a.trace();
        let shifted = &a - Mat::identity(3, 3) * (trace / 3.0);
        prop_assert!((expm(&shifted).unwrap().determinant() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn coordinates_invert_algebra_elements(c in prop::collection::vec(-3.0f64..3.0, 2)) {
        let g = affine();
        let c = Coords::from_vec(c);
        let (back, residual) = g.coordinates(&g.algebra_element(&c).unwrap());
        prop_assert!((back - c).norm() <= 1e-12 && residual <= 1e-12);
    }

    #[test]
    fn sampled_2_group_axioms_hold(seed: u64) {
        prop_assert!(inner_affine().check(16, seed).max_residual() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn p_is_linear(a in prop::collection::vec(-1.0f64..1.0, 2), b in prop::collection::vec(-1.0f64..1.0, 2), seed: u64) {
        let x = FieldCategory::new(inner_affine()).unwrap();
        let samples = Samples::draw(&x.g, 8, seed);
        let (a, b) = (Coords::from_vec(a), Coords::from_vec(b));
        let sum = x.p_object(&(&a + &b)).unwrap();
        let combo = MultVectorField::linear_combination(
            x.g.clone(),
            &[(1.0, x.p_object(&a).unwrap()), (1.0, x.p_object(&b).unwrap())],
        );
        prop_assert!(sum.distance(&combo, &samples).unwrap() <= 1e-9);
    }

    #[test]
    fn p_lands_in_invariant_multiplicative_fields(a in prop::collection::vec(-1.0f64..1.0, 2), seed: u64) {
        let x = FieldCategory::new(inner_affine()).unwrap();
        let samples = Samples::draw(&x.g, 8, seed);
        let v = x.p_object(&Coords::from_vec(a)).unwrap();
        prop_assert!(v.verify_multiplicative(&samples).unwrap().max_residual() <= 1e-6);
        let (obj, morph) = x.invariance_residual(&v, &samples).unwrap();
        prop_assert!(obj <= 1e-6 && morph <= 1e-6);
    }
}
