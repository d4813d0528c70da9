//! Exact matroid and matching toolkit.
//!
//! Given a homogeneous linear system `A x = 0` over Q or GF(p), decide
//! whether only the trivial solution exists and, if so, build an injection
//! from variables (columns) to equations (rows) along nonzero coefficients.
//! The primary construction goes through base exchange in a vector matroid;
//! a Hall-matching route and a kernel computation serve as cross-checks.
//!
//! Modules:
//! - [`field`]: exact scalars.
//! - [`linalg`]: sparse matrices, rank, kernel witnesses.
//! - [`matroid`]: oracle matroids, minors, duals, axiom checking.
//! - [`exchange`]: base exchange bijections.
//! - [`solver`]: the end-to-end pipeline and instance generator.
//! - [`cli`]: file formats and the command-line front end.

pub mod cli;
pub mod exchange;
pub mod field;
pub mod linalg;
mod matching;
pub mod matroid;
pub mod par;
pub mod solver;

pub use exchange::{InjectionMap, SwapForm};
pub use field::{FieldSpec, FieldValue};
pub use linalg::{KernelWitness, SparseMatrix};
pub use matroid::{ElementSet, Matroid};
pub use solver::SolveOutcome;
