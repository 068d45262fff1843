//! Waring decompositions of homogeneous forms, Terracini-style secant
//! dimension estimates and constructive samplers of varieties of sums of
//! powers.
//!
//! All computations run over `Complex64`. Every random choice is driven by an
//! explicit `u64` seed so that results are reproducible.

pub mod error;
pub mod linalg;
pub mod poly;
pub mod rng;
pub mod secant;
pub mod vsp;
pub mod waring;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
