//! Exact homology of finite-dimensional Lie algebras over prime fields.
//!
//! The crate computes Betti numbers of the Chevalley-Eilenberg complex of a
//! Lie algebra given by structure constants, with three independent routes
//! for the Heisenberg algebra `h_n`:
//!
//! * exact rank computation over GF(p), with a bit-packed GF(2) kernel
//!   ([`field`]),
//! * an algebraic discrete Morse matching whose critical cells are counted
//!   directly ([`morse`], [`heisenberg`]),
//! * a closed-form generating function evaluated with big-integer
//!   polynomial arithmetic ([`poly`], [`heisenberg`]).
//!
//! All arithmetic is exact. With the default `parallel` feature the
//! per-degree ranks, boundary construction and bulk cell checks run on
//! rayon; disabling the feature yields a dependency-free sequential build
//! with identical results.

pub mod algebra;
pub mod cell;
pub mod field;
pub mod heisenberg;
pub mod morse;
mod par;
pub mod poly;

pub use algebra::{heisenberg_algebra, make_lie_algebra, AlgebraError, BoundaryMap, LieAlgebra};
pub use cell::{Cell, ChainVector};
pub use field::{
    betti_numbers, betti_numbers_with_cap, rank, rank_gf2, BitMatrix, DenseMatrixGFp, FieldChar,
    NotPrime,
};
pub use heisenberg::{
    betti_char_zero, betti_generating_function, classify_cell, critical_cell_counts,
    critical_projection, heisenberg_matching, stratified_census, stratified_critical_count,
    verify_projection_closed, CellClass, IjPair,
};
pub use morse::{
    build_digraph, build_digraph_with_cap, first_nonzero_morse_differential, ComplexDigraph,
    Matching, MorseError, ValidatedMatching,
};
pub use poly::{ExactDivisionFailed, IntPolynomial};

pub use num_bigint::BigInt;

/// Default hard cap on the algebra dimension for whole-complex operations
/// (`2^dim` cells in total; 29 corresponds to `h_14`).
pub const DEFAULT_DIM_CAP: usize = 29;

/// A whole-complex operation was asked to run above the configured
/// dimension cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("algebra dimension {dim} exceeds the resource cap {cap}")]
pub struct ResourceCap {
    pub dim: usize,
    pub cap: usize,
}
