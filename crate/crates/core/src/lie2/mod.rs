//! Matrix Lie 2-groups in block form and their Lie 2-algebras.

mod algebra;
mod field;
mod group;

use thiserror::Error;

use crate::matrix_lie::LieError;

pub use algebra::{
    algebra_interchange_residual, circledast_identity_check, lie2algebra_of, DocumentTolerances, Lie2Algebra,
    StructureDocument,
};
pub use field::{bracket_oracle_residual, ell, vector_field_bracket, LeftInvariantField, Level};
pub use group::{BlockModel, Boundary, Lie2GroupReport, MatrixLie2Group};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Lie2Error {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("invalid block model: {0}")]
    Model(&'static str),
    #[error("Lie 2-algebra law `{law}` fails (residual {residual:e})")]
    Invariant { law: &'static str, residual: f64 },
    #[error("pair is not matched: ds(alpha) - dt(beta) has norm {residual:e}")]
    NotMatched { residual: f64 },
}


#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::tests_support::*;
    use super::*;
    use crate::matrix_lie::Coords;

    #[test]
    fn block_models_satisfy_axioms() {
        for g in [f3(), f4()] {
            let r = g.check(32, 0);
            assert!(r.max_residual() <= 1e-8, "{}: {r:?}", g.name());
        }
    }

    #[test]
    fn f3_structure_maps() {
        let l = lie2algebra_of(&f3()).unwrap();
        assert_eq!((l.g0_dim, l.g1_dim), (2, 4));
        let i2 = DMatrix::<f64>::identity(2, 2);
        let z2 = DMatrix::<f64>::zeros(2, 2);
        let ds = DMatrix::from_fn(2, 4, |r, c| if c < 2 { z2[(r, c)] } else { i2[(r, c - 2)] });
        let dt = DMatrix::from_fn(2, 4, |r, c| if c < 2 { i2[(r, c)] } else { z2[(r, c - 2)] });
        assert!((&l.ds - ds).norm() < 1e-8);
        assert!((&l.dt - dt).norm() < 1e-8);
        assert!((&l.ds * &l.d1 - &i2).norm() < 1e-8);
        assert!(circledast_identity_check(&l) <= 1e-6);
        assert!(l.structure_map_bracket_residual() <= 1e-5);
    }

    #[test]
    fn f4_is_abelian() {
        let l = lie2algebra_of(&f4()).unwrap();
        assert_eq!((l.g0_dim, l.g1_dim), (1, 2));
        assert!(l.bracket1.iter().all(|m| m.norm() == 0.0));
        assert!((&l.dt - DMatrix::from_row_slice(1, 2, &[1.0, 1.0])).norm() < 1e-8);
        assert!(circledast_identity_check(&l) <= 1e-10);
    }

    #[test]
    fn bracket_constants_match_finite_differences() {
        let g = f3();
        assert!(bracket_oracle_residual(g.g1()).unwrap() <= 1e-5);
        assert!(bracket_oracle_residual(g.g0()).unwrap() <= 1e-5);
    }

    #[test]
    fn ell_round_trip_and_dimension_check() {
        let g = f3();
        let l = lie2algebra_of(&g).unwrap();
        let a = Coords::from_vec(vec![1.0, 0.0]);
        let u = ell(&l, &g, &a, Level::Objects).unwrap();
        assert_eq!(u.at_identity(), &a);
        let x = g.g0().sample_element(4);
        assert!((u.eval(&x).dir - &x * &g.g0().basis()[0]).norm() < 1e-10);
        assert!(ell(&l, &g, &a, Level::Arrows).is_err());
    }

    #[test]
    fn algebra_interchange() {
        let g = f3();
        let l = lie2algebra_of(&g).unwrap();
        assert!(algebra_interchange_residual(&l, &g).unwrap() <= 1e-6);
    }
}
