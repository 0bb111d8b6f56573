//! Rank-2 holomorphic bundles with zero first Chern class on the blow-up of
//! `C^2`, handled through their transition matrices.
//!
//! The crate computes, in exact Gaussian-rational arithmetic:
//!
//! - the splitting type `j` of the restriction to the exceptional divisor
//!   and an explicit Birkhoff factorization ([`birkhoff`]);
//! - the canonical transition matrix `[[z^j, p], [0, z^-j]]` with `p`
//!   supported on a finite monomial window ([`canonical`]);
//! - holomorphic equivalence of two bundles on a formal neighbourhood of
//!   the exceptional divisor, with a checkable witness ([`equivalence`]);
//! - the stratification of the moduli spaces `M_j` and the topology of
//!   `M_2` ([`moduli`]).
//!
//! ```
//! use blowup_core::canonical::{canonical_window, canonicalize};
//! use blowup_core::algebra::TransitionMatrix2;
//!
//! assert_eq!(canonical_window(2), vec![(1, 0), (1, 1), (2, 1)]);
//! let (k, _gauge) = canonicalize(&TransitionMatrix2::split(2, 2)).unwrap();
//! assert_eq!(k.j(), 2);
//! assert!(k.is_split());
//! ```

pub mod algebra;
pub mod birkhoff;
pub mod canonical;
pub mod checks;
pub mod equivalence;
mod error;
pub mod moduli;
pub mod random;

pub use error::{Error, Result};
