//! Fast binary embedding of finite point sets.
//!
//! Points on the unit sphere are mapped to sign codes in `{±1}^k` so that the
//! normalized Hamming distance between two codes tracks the angle between the
//! original points. Three operators are provided:
//!
//! * a dense Gaussian projection (`O(kn)` per point, the classical baseline),
//! * a subsampled circulant projection `R · C_h · diag(r)` (`O(n log n)`),
//! * the same circulant projection preceded by a randomized Hadamard rotation
//!   `H · diag(b)`, which removes any dependence on how spiky the input is.
//!
//! The [`validation`] module contains the Monte Carlo experiments used to check
//! the distortion, coherence and conditioning behaviour of these maps.
//!
//! The crate is `no_std` (it needs `alloc`). The default `std` feature enables
//! trial-level parallelism through rayon; results are identical either way.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod embedders;
mod error;
pub mod geometry;
pub mod linalg;
mod math;
mod par;
pub mod rng;
pub mod transforms;
pub mod validation;

pub use embedders::{CirculantOperator, GaussianOperator, Modulation, Operator, OperatorKind, RandomizedOperator};
pub use error::{Error, Result};
pub use geometry::{BinaryCode, CoherenceStats, PointSet};
pub use rng::Rng;
pub use transforms::IndexSet;
