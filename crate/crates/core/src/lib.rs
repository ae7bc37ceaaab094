//! Exact tools for t-saw set families on the hypercube `2^[n]`: subset
//! counting via zeta transforms, the extremal constructions, sunflower
//! detection, chain statistics and maximum-family search.

pub mod chains;
pub mod constructions;
pub mod document;
pub mod error;
pub mod family;
pub mod lattice;
pub mod mask;
pub mod oracles;
pub mod parallel;
pub mod perm;
pub mod rational;
pub mod report;
pub mod search;
pub mod sunflowers;
pub mod verify;

pub use error::{Error, Result};
pub use family::Family;
pub use mask::{GroundSize, SetMask};
pub use rational::Rational;
