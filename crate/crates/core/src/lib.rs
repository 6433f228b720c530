//! Exact computation of Betti numbers, torsion numbers and their growth
//! for the finite quotients `M / (t^r - 1) M` of finitely presented modules
//! over `Z[t, t^-1]`.
//!
//! The [`torsion`] module computes values both from closed formulas and
//! from a Smith normal form oracle; [`recurrence`] produces the linear
//! recurrences these sequences satisfy and [`growth`] measures how fast
//! they grow.

// Matrix kernels read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod cyclotomic;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod recurrence;
pub mod resultant;
pub mod torsion;

pub use error::{Error, Result};
pub use linalg::PresentationMatrix;
pub use poly::{LaurentPoly, RatPoly};
