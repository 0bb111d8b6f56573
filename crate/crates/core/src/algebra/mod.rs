//! Exact coefficient arithmetic and the Laurent polynomial / matrix algebra
//! on the two charts of the blow-up.
//!
//! Chart `U` has coordinates `(z, u)`, chart `V` has `(xi, v)` with
//! `xi = z^-1` and `v = z·u`. The exceptional divisor is `u = 0` and `z` is
//! its affine coordinate. Everything is computed modulo `u^(N+1)`.

pub mod linear;
pub mod matrix;
pub mod poly;
pub mod projective;
pub mod scalar;

pub use linear::{AffineSolution, LinearSystem, SparseRow};
pub use matrix::{is_identity, LaurentMatrix2, Matrix2, TransitionMatrix2};
pub use poly::{BiLaurentPoly, LaurentPoly, VChartPoly};
pub use projective::ProjectiveVector;
pub use scalar::ExactScalar;
