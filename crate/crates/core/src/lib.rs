//! Workbench for list decoding of classical block codes from probabilistic
//! corruption tables: exact finite-field and polynomial algebra, encoders
//! for Hadamard / generalized Reed-Solomon / concatenated codes, presence
//! metrics and Johnson-type list-size bounds, the Hadamard peel and lift
//! reductions between corruption tables, a sampling-based Guruswami-Sudan
//! list decoder, and the constrained / noisy interpolation and weighted
//! lattice constructions that connect to it.

pub mod codes;
pub mod decoder;
pub mod error;
pub mod field;
pub mod gs;
pub mod hadamard;
pub mod johnson;
pub mod lattice;
pub mod oracles;
pub mod poly;
pub mod rng;
pub mod selftest;
pub mod table;

pub use error::{Error, Result};
