//! Generalized van der Waerden triples `(x, ax + d, bx + 2d)`.
//!
//! Computes `n(a,b;r)` by complete backtracking search, verifies explicit block
//! colorings with exact arithmetic, and assembles bounds on the degree of regularity.

pub mod bounds;
pub mod coloring;
pub mod colorings;
pub mod error;
pub mod rado;
pub mod solver;
pub mod triple;

pub use coloring::{verify_coloring, Coloring, Verdict};
pub use error::{Error, Result};
pub use triple::{FamilyParams, Triple};
