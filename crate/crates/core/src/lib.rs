//! Orthogonality types, bisectors and geometric constants of normed planes.
//!
//! A normed plane is described by its unit ball ([`norm::NormSpec`]). On top
//! of the gauge this crate provides the generalized sine function and the
//! Birkhoff, isosceles and Roberts predicates ([`ortho`]), bisector tracing
//! ([`bisector`]), estimators for the constants `c_B`, `c_S` and `D`
//! ([`constants`]) and brute-force oracles used to validate all of the above
//! ([`oracle`]).

pub mod bisector;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod minimize;
pub mod norm;
pub mod oracle;
pub mod ortho;
pub mod tolerances;

pub use error::{Error, Result};
pub use geometry::Point;
pub use norm::{CirclePoint, NormSpec};
pub use tolerances::Tolerances;
