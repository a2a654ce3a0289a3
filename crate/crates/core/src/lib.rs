//! Exact symbolic construction of classical W-algebras.
//!
//! Starting from a simple Lie algebra, an sl2-triple `{e, h, f}`, a good
//! grading, an isotropic subspace and an element `a`, the crate builds the
//! bihamiltonian pencil `P_2 + λ P_1` on the loop algebra and reduces it to
//! the affine Slodowy slice `e + L(g_f)` in three independent ways: the
//! Poisson tensor procedure, Dirac reduction of matrix differential
//! operators, and Drinfeld–Sokolov gauge fixing. All arithmetic is exact
//! over the rationals.
//!
//! Module map:
//! - [`liealg`]: structure constants, sl2-triples, gradings, subspaces.
//! - [`diffalg`]: differential polynomials and matrix differential operators.
//! - [`lpb`]: local Poisson pencils, bracket evaluation and checks.
//! - [`reduction`]: the three reductions and the transversal structure.
//! - [`examples`]: built-in KdV and fractional KdV setups with golden data.

pub mod diffalg;
pub mod error;
pub mod examples;
pub mod liealg;
pub mod linalg;
pub mod lpb;
pub mod rational;
pub mod reduction;

pub use error::{Error, Result};
