//! Two-level PT-symmetric qubit: closed-form propagation, coherence near the
//! exceptional point, and Leggett-Garg tests under sequential σy measurement.

pub mod error;
pub mod lgi;
pub mod mat2;
pub mod observables;
pub mod propagator;
pub mod ptcore;

pub use error::{Error, Result};
pub use mat2::{Mat2C, Vec2C};
pub use propagator::DensityMatrix;
pub use ptcore::{Phase, PtHamiltonian};
pub mod sweep;
pub mod verify;
pub mod cli;
