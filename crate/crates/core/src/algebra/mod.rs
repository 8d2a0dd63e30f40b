//! Exact scalar, polynomial and linear-algebra substrate.

pub mod complex;
pub mod matrix;
pub mod multipoly;
pub mod rational;
pub mod roots;
pub mod scalar;
pub mod unipoly;

pub use complex::{numeric_eigen, CMatrix, CompiledMap, CompiledPoly, ComplexF};
pub use matrix::{LinearSolution, RatMatrix};
pub use multipoly::{Monomial, MultiPoly, PolyOp, Vars};
pub use rational::{int, rat, Rational};
pub use roots::{poly_roots, rational_roots};
pub use scalar::Scalar;
pub use unipoly::UniPoly;
