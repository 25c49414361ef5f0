//! Construction and exact certification toolkit for K4-free graphs near
//! the n^2/8 edge-density threshold.
//!
//! The pieces: bitset graphs ([`graph`]), sphere geometry and cap measures
//! ([`geometry`]), the two-family distance-rule construction
//! ([`construct`]), the complete-bipartite densifying splice
//! ([`densify`]), exact structure certifiers ([`certify`]), the
//! thresholded dependent-random-choice round and binomial-tail bounds
//! ([`drc`]), and closed-form bound reports ([`bounds`]).

pub mod bitset;
pub mod bounds;
pub mod certify;
pub mod construct;
pub mod densify;
pub mod drc;
pub mod gen;
pub mod geometry;
pub mod graph;
pub mod report;
pub mod rng;

pub use bitset::VertexSet;
pub use graph::{BitGraph, Bipartition};
