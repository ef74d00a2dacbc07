//! Pure-state multipartite entanglement quantifiers.
//!
//! The crate computes the maximal squared overlap `Λ_k²` between a state and
//! the set of `k`-separable product states, and from it the geometric measure
//! of entanglement, lower bounds on the generalized robustness and on its
//! logarithmic version. For bipartite pure states the exact closed forms
//! (Schmidt-coefficient robustness, entropy of entanglement) are available
//! too, and the two witness constructions behind the robustness bounds can be
//! built, evaluated and certified against product states.
//!
//! Layout conventions shared by every module:
//!
//! - Subsystem 0 is the most significant factor of a basis index, i.e.
//!   `index = Σ_i a_i · Π_{j>i} d_j`.
//! - A [`PartitionSpec`] block is flattened into one composite subsystem whose
//!   local index is formed from its members in ascending order, using the same
//!   most-significant-first rule.
//! - All logarithms are base 2.

pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod overlap;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, EigenDecomposition, Svd};
pub use measures::{MeasureKind, MeasureReport, SchmidtDecomposition};
pub use overlap::{OptConfig, OverlapResult};
pub use states::{DensityMatrix, PartitionSpec, ProductState, StateVector};
pub use witness::{WitnessKind, WitnessOperator};

pub use num_complex::Complex64;
