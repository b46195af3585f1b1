//! Strict 2-groups, their Lie 2-algebras and multiplicative vector fields.
//!
//! The [`finite_core`] and [`gpd_cat`] modules work exactly on finite
//! multiplication tables. [`matrix_lie`], [`lie2`] and [`multvf`] work
//! numerically on matrix groups.

pub mod finite_core;
pub mod gpd_cat;
pub mod lie2;
pub mod matrix_lie;
pub mod multvf;
