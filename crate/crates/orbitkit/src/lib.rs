//! orbitkit: an exact symbolic and light numeric workbench for nilpotent Lie
//! groups — Lie algebras from structure constants, coadjoint orbits and their
//! polynomial cross-sections, induced representations as differential
//! operators, the Weyl-Pedersen quantization of polynomial symbols, invariant
//! differential operators on orbits, hypothesis checkers for the associated
//! boundedness statements, and a grid-level numeric cross-check against the
//! classical Weyl calculus on the Heisenberg group.
//!
//! Everything outside the `numeric` module is exact: coefficients live in the
//! fraction field of polynomials over the Gaussian rationals in declared
//! formal parameters, and every genericity choice made by elimination is
//! recorded as an explicit nonvanishing assumption.

pub mod builtins;
pub mod diffop;
pub mod dsl;
pub mod expr;
pub mod lie;
pub mod matrix;
pub mod ncword;
pub mod numeric;
pub mod orbit;
pub mod poly;
pub mod rep;
pub mod report;
pub mod scalar;
pub mod theorems;
pub mod weyl;

pub use lie::{LieAlgebra, LieError};
pub use matrix::{Assumptions, Mat};
pub use orbit::{CoadjointOrbit, OrbitError};
pub use scalar::{GaussRat, ScalarExpr};
