//! Exact computations in type A Hecke algebras, their parabolic spherical
//! modules, and the Demazure-operator evaluation of intersection forms.

pub mod coxeter;
pub mod demazure;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod multipoly;
pub mod ring;
pub mod spherical;
pub mod subexpr;

pub use coxeter::{ParabolicSubset, Permutation, Step, Word};
pub use demazure::{DemazureExpr, IntersectionFormReport};
pub use hecke::HeckeElement;
pub use laurent::{IntLaurent, LaurentError, LaurentPoly};
pub use multipoly::MultiPoly;
pub use spherical::SphericalElement;
pub use subexpr::{DecoratedSubexpression, EnumConstraint};
