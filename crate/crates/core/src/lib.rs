//! Stable sets in graphs that are also independent in a matroid on the
//! vertices.
//!
//! The crate provides matroid oracles and views, the graph routines the
//! algorithms rely on, a brute-force reference solver, a bounded-search-tree
//! solver for degenerate graphs, a representative-family dynamic program for
//! chordal graphs with linear matroids, two kernelization procedures, and the
//! hidden-set oracle constructions used to stress oracle-based solvers.

pub mod field;
pub mod framework;
pub mod graph;
pub mod instances;
pub mod kernels;
pub mod matroid;
pub mod repsets;
pub mod solvers;

use num_rational::BigRational;

pub use field::{Exact, Field, FieldError, FieldMatrix, PrimeField, DEFAULT_PRIME};
pub use framework::{verify_solution, Framework, Instance};
pub use graph::Graph;
pub use matroid::{MatroidError, MatroidHandle};

/// Matrix over a prime field; the representation type of linear matroids.
pub type GfMatrix = FieldMatrix<PrimeField>;

/// Matrix over the rationals.
pub type RationalMatrix = FieldMatrix<Exact<BigRational>>;
