//! Exact lattice, cone and semigroup invariants of local-model pairs.
//!
//! A local-model pair is reduced here to its lattice shadow: a cocharacter lattice
//! with Frobenius, a finite orbit of (possibly fractional) coweights, and the
//! ramification index. From that data the crate computes the orbit cone and its
//! dual semigroup, Hilbert bases and toric ideals, the Lang cover with its
//! ramification and flatness, admissible sets with the face map, and symbolic
//! chart presentations.
//!
//! The linear algebra layer is generic over the integer type ([`linalg::Scalar`]);
//! the combinatorial layers fix it to [`Int`] with overflow checks on in every
//! profile, and the cone code widens to `i128` for its intermediate products.

pub mod affine_weyl;
pub mod cones;
pub mod error;
pub mod lang_cover;
pub mod lattice_galois;
pub mod linalg;
pub mod lm_pairs;
pub mod presentation;
pub mod report;
pub mod root_data;
pub mod semigroups;

pub use error::{Error, Result};

/// Integer type of lattice coordinates.
pub type Int = i64;
/// Exact rational coordinates.
pub type Rat = num_rational::Ratio<Int>;
/// Integer vector.
pub type IVec = Vec<Int>;
/// Rational vector.
pub type QVec = Vec<Rat>;
/// Row-major integer matrix.
pub type IMat = linalg::Mat<Int>;
