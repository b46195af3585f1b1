//! Finite groupoids, functors, natural transformations, `Aut(K)` and strict
//! actions of finite 2-groups.

mod action;
mod aut;
mod functor;
mod groupoid;

use thiserror::Error;

use crate::finite_core::TwoGroupError;

pub use action::{action_to_hom, check_middle_four, left_regular, Action2, Action2Hom, HomLawReport};
pub use aut::{aut_2group, automorphisms, transformations_between, AutTwoGroup};
pub use functor::{horizontal_compose, vertical_compose, whisker_left, whisker_right, GpdFunctor, NatTransf};
pub use groupoid::FiniteGroupoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpdError {
    #[error("groupoid axiom violated: {law} (witness {witness:?})")]
    GroupoidAxiom { law: &'static str, witness: Vec<usize> },
    #[error("not a functor: {law} fails at {witness:?}")]
    NotFunctor { law: &'static str, witness: Vec<usize> },
    #[error("not a natural transformation: {law} fails at {witness}")]
    NotNatural { law: &'static str, witness: usize },
    #[error("not composable: {0}")]
    NotComposable(&'static str),
    #[error("more than {cap} automorphisms")]
    CapExceeded { cap: usize },
    #[error("action axiom violated: {law} (witness {witness:?})")]
    ActionAxiomViolation { law: &'static str, witness: Vec<usize> },
    #[error(transparent)]
    TwoGroup(#[from] TwoGroupError),
}
