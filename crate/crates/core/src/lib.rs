//! Wilson loop diagrams as matroids.
//!
//! A Wilson loop diagram places `k` propagators (chords joining boundary
//! edges) on a cyclically ordered set of `n` vertices. This crate turns such
//! a diagram into an explicit matroid, decides the combinatorial questions
//! that matter for it (definedness, connectivity, flacets, positroidness,
//! admissibility), and cross-validates every combinatorial verdict against
//! exact rational realization matrices built from generic twistor
//! configurations.
//!
//! Layering, bottom up:
//!
//! - [`diagram`]: diagrams, dependency sets, definedness, crossings,
//!   contraction, exact equivalence, untangling.
//! - [`matroid`]: a general finite-matroid kernel over explicit basis
//!   collections (rank, duality, minors, circuits, flats, connectivity,
//!   flacets, positroid tests).
//! - [`wilson`]: the bridge from diagrams to matroids and the
//!   diagram-level positroid/admissibility criteria.
//! - [`linalg`]: exact dense linear algebra, generic over the scalar.
//! - [`realization`]: twistor configurations, Cramer-rule propagator
//!   solutions, realization matrices, rank/matroid extraction,
//!   non-negativity probing, and the closed-form integrand.
//! - [`report`]: serializable report types shared with the CLI.
//!
//! All arithmetic in the realization layer is exact; there is no floating
//! point anywhere in this crate.

pub mod bits;
pub mod diagram;
pub mod linalg;
pub mod matroid;
pub mod realization;
pub mod report;
pub mod wilson;

/// Exact scalar used by the realization layer.
pub type Rat = num_rational::BigRational;

/// Dense matrix over the exact scalar.
pub type QMat = linalg::Mat<Rat>;
