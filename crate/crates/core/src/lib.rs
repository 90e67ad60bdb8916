//! Exact toric amplitudes and universal adjoints of simplicial fans.
//!
//! A simplicial fan with ray matrix `U` (rows `u_rho`) has toric amplitude
//! `Amp = sum over full-dimensional cones s of |det U_s| / prod_{rho in s} x_rho`
//! and universal adjoint `Adj = (prod_rho x_rho) * Amp`. For a simple
//! polytope `{y : U y + z >= 0}` the adjoint specializes to Warren's adjoint
//! via `x = U y + z`.
//!
//! All combinatorial work is done over [`Rat`]. The matrix and polynomial
//! types are generic over [`Scalar`] and are also used with `f64`.

pub mod amplitude;
pub mod combinat;
pub mod deform;
pub mod error;
pub mod fan;
pub mod feasibility;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod polytope;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod singular;
pub mod univariate;
pub mod variety;
pub mod verify;

pub use error::{Error, Result};
pub use fan::SimplicialFan;
pub use linalg::Mat;
pub use poly::{Monomial, SparsePoly, VarSet};
pub use polytope::HPolytope;
pub use scalar::Scalar;

/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
/// Exact matrix.
pub type RatMat = Mat<Rat>;
/// Exact polynomial.
pub type Poly = SparsePoly<Rat>;
/// Floating-point matrix, used by the barrier solver.
pub type FloatMat = Mat<f64>;
