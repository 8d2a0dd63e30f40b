//! Exact polynomial algebra and integrability analysis for quasihomogeneous
//! Hamiltonian systems: regular weights, balances and Kovalevskaya exponents,
//! Laurent series with resonances, and weighted blow-up charts.

pub mod algebra;
pub mod analysis;
pub mod blowup;
pub mod error;
pub mod exprio;
pub mod kovalevskaya;
pub mod laurent;
pub mod newton;
pub mod systems;
pub mod weights;

pub use algebra::{
    int, rat, CMatrix, ComplexF, LinearSolution, Monomial, MultiPoly, RatMatrix, Rational, Scalar, UniPoly,
    Vars,
};
pub use error::{Error, Result};
