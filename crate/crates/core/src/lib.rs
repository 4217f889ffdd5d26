//! Stable matchings of bipartite preference graphs.
//!
//! The crate covers the full structural toolchain: deferred acceptance,
//! the distributive lattice of stable matchings, rotations and the
//! rotation poset, enumeration via poset ideals, minimum-weight stable
//! matchings through the closure/min-cut reduction, and checks against
//! the stable-matching polytope (including generalized medians).
//!
//! Numeric code (weights, flow capacities, fractional vectors) is generic
//! over [`scalar::Scalar`]; the crate-level aliases [`Weight`] and
//! [`IntWeight`] are the concrete types used by the CLI.

pub mod closure;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod instance;
pub mod lattice;
pub mod oracle;
pub mod polytope;
pub mod poset;
pub mod rotation;
pub mod scalar;
pub mod stability;
pub mod weight;

pub use error::Error;
pub use instance::{parse_matching_list, EdgeId, Matching, PreferenceInstance, Side, VertexId};
pub use rotation::Rotation;
pub use scalar::{format_weight, IntWeight, Scalar, Weight};

pub type Result<T> = std::result::Result<T, Error>;
