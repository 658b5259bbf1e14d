//! Bipartite cyclic cluster (BCC) quantum codes.
//!
//! Construction and exact verification of the codes, a symmetry-reduced
//! search over offset sets, Clifford circuits for preparing code states, and
//! a Pauli-frame Monte Carlo of fault-tolerant preparation experiments.

pub mod circuit;
pub mod code;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod report;
pub mod search;
pub mod stabsim;

pub use error::{BccError, Result};
