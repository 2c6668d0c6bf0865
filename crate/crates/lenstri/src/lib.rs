//! Layered triangulations of lens spaces and the combinatorics around them.
//!
//! The crate represents 3-manifold triangulations as face-pairing tables and
//! builds the layered-solid-torus family on top: slope-triple bookkeeping,
//! folds to lens spaces, minimal layered triangulations, Z2 edge colourings
//! with their dual normal surfaces, layered-solid-torus detection inside
//! arbitrary triangulations, low-degree edge models, and exhaustive censuses
//! of small triangulations with canonical-form deduplication.
//!
//! Entry points:
//! - [`tri::Triangulation`] and [`skeleton::Skeleton`] for the ground objects;
//! - [`layered`] for constructions (`s1`, `s_k`, `layer_on`, `fold`, minimal
//!   layered lens spaces, the six solid-torus pairings);
//! - [`z2`] for colourings, tetrahedron types and the dual surface;
//! - [`lst`] for subcomplex detection and the low-degree edge model catalog;
//! - [`census`] for exhaustive enumeration;
//! - [`suites`] for the named verification suites the CLI exposes.
//!
//! Runnable examples live in `examples/`; `cargo run --example degree_tables`
//! is a good place to start.

pub mod census;
pub mod error;
pub mod homology;
pub mod json;
pub mod layered;
pub mod lst;
pub mod moves;
pub mod perm;
pub mod sig;
pub mod skeleton;
pub mod suites;
pub mod tri;
pub mod z2;

pub use error::{Error, Result};
pub use homology::AbelianGroup;
pub use sig::CensusSignature;
pub use tri::Triangulation;
