//! Abelian string-net isometric tensor networks and the stochastic automata they
//! define: tensor families and validators, a Pauli-string compiler, Monte Carlo
//! sampling, transfer-operator spectra and exact small-patch oracles.

pub mod automaton;
pub mod checks;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod network;
pub mod opcompile;
pub mod oracle;
pub mod parent;
pub mod spectral;
pub mod paths;
pub mod tensors;
pub mod zn;

pub use error::{Error, Result};
