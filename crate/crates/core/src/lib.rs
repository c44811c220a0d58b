//! Ordered copositive matrix classes, SPN decompositions, orbit search under
//! permutations and positive scalings, and standard quadratic programs.

pub mod classes;
pub mod cones;
pub mod eigen;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod orbit;
pub mod random;
pub mod selftest;
pub mod signgraph;
pub mod stqp;
pub mod tol;

pub use classes::ClassLabel;
pub use group::GroupElement;
pub use matrix::{MatrixError, SymMatrix};
pub use tol::Tolerances;
