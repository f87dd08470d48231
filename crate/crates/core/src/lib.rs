//! Exact symbolic machinery for deciding, space by space, that loop spaces of
//! irreducible Hermitian symmetric spaces and of flag manifolds fail to be
//! homotopy commutative.
//!
//! Two obstructions are implemented. The rational one builds a Sullivan model
//! of a homotopy fiber, minimizes it and looks for a differential with a
//! nonzero quadratic part. The mod `p` one exhibits a Steenrod operation whose
//! value contains a product of two spherical classes. Each run produces a
//! [`criteria::Certificate`] listing every computed check and every external
//! fact it relied on.

pub mod catalog;
pub mod criteria;
pub mod error;
pub mod graded;
mod linalg;
mod parse;
pub mod presented;
pub mod primes;
pub mod scalar;
pub mod steenrod;
pub mod sullivan;

pub use error::{Error, Result};
pub use graded::{Algebra, GenSymbol, GradedPoly, Monomial, Substitution};
pub use presented::Presentation;
pub use scalar::{Field, Scalar};
