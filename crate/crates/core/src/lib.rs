//! Higher pentagram maps and their integrable structure.
//!
//! The maps `T_k` act on twisted polygons through several coordinate
//! systems: the `(x, y)` weights, the cluster `(p, q)` coordinates and, for
//! `k = 3`, the classical corner invariants. This crate iterates the maps in
//! each chart, checks the Poisson and Lax structure pointwise (exactly on
//! rationals), and realizes the maps geometrically on corrugated polygons,
//! plane polygons and, for `k = 2`, on pairs of polygons in the projective
//! line.
//!
//! All public indices are 1-based in messages and documents; vectors are
//! stored 0-based and read cyclically.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod lax;
pub mod leapfrog;
pub mod poisson;
pub mod random;
pub mod render;
pub mod scalar;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Complex64, Dual, Rational, Ring, Scalar, ScalarIo};
pub use states::{CornerState, EdgeWeights, MapParams, PQState, XYState};
