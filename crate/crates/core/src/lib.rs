//! Numerics for range spaces `M(ā) = T_ā H²` of co-analytic Toeplitz
//! operators whose symbols are monic polynomials with all zeros on the unit
//! circle.
//!
//! Everything is computed in preimage coordinates: an element `f = T_ā g`
//! is represented by `g`, where the range norm is the plain H² norm.

pub mod acceptance;
pub mod corpus;
pub mod decay;
pub mod error;
pub mod mate;
pub mod multipliers;
pub mod opnorm;
pub mod rangespace;
pub mod sections;
pub mod shiftop;
pub mod symbols;

pub use error::{Error, Result};
pub use symbols::{
    CircleFactor, CircleZero, CircleZeroPolynomial, CoefficientSeries, RationalSymbol,
    SingularFactorFunction,
};

pub type C64 = num_complex::Complex<f64>;

/// Library version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
