//! Exact combinatorics for Schreier families, well-founded trees, combinatorial
//! sequence-space norms and S_ξ-strict-singularity witness search.
//!
//! Everything is computed in exact rational arithmetic. Ordinals live below ε₀ in
//! Cantor normal form and limit ordinals use the Wainer fundamental sequences, so
//! every Schreier family here is relative to that fixed choice.

pub mod error;
pub mod gallery;
pub mod linalg;
pub mod operators;
pub mod ordinal;
pub mod rational;
pub mod schreier;
pub mod spaces;
pub mod trees;

pub use error::{Error, Result};
pub use ordinal::{Classification, Ordinal};
pub use rational::Q;
pub use schreier::FiniteSet;
pub use spaces::{Magnitude, NormDescriptor, RationalVector};
pub use trees::FiniteTree;
