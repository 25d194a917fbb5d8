//! Convex-geometry toolkit for the set of quantum states `D(C^m)` and the
//! set of separable states on `C^d ⊗ C^d`.
//!
//! Points live in the hyperplane of unit-trace Hermitian matrices with the
//! maximally mixed state `ρ_* = Id/m` as origin. Directions are trace-zero
//! Hermitian matrices, and every support function is measured from `ρ_*`.
//!
//! * [`hermitian`]: matrices, states, eigendecomposition, bipartite tools, sampling.
//! * [`bodies`]: support and membership oracles, polytopes, polarity, inclusion checks.
//! * [`nets`]: ε-nets on real and complex spheres.
//! * [`approx`]: polytope approximations of states and separable states, cap statistics, tail bounds.
//! * [`dims`]: verticial/facial dimension bounds, FLM reports, random sections.
//! * [`witness`]: positive maps, entanglement detection and ball checks at `d = 2`.

pub mod approx;
pub mod bodies;
pub mod dims;
pub mod error;
pub mod hermitian;
pub mod nets;
pub mod witness;

pub use error::{Error, Result};
