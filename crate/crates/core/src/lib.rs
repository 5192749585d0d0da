//! Spherical and geodesic growth of braid groups.
//!
//! Spheres of the Cayley graph of B_n (Artin or Birman–Ko–Lee generators) are
//! built level by level as sets of geodesic representative words, partitioned
//! by braid template and reduced under a small symmetry group, with each piece
//! persisted to disk. Braid equality is decided by Dynnikov coordinates.

pub mod dynnikov;
pub mod engine;
pub mod error;
pub mod golden;
pub mod oracle;
pub mod series;
pub mod symmetry;
pub mod store;
pub mod template;
pub mod words;

pub use error::{Error, Result};
