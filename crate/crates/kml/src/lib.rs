//! Numerical laboratory for mass-constrained minimization of nonlocal
//! Kirchhoff energies on the L² sphere, with a closed-form prediction engine
//! and experiments cross-validating the two against each other.

pub mod energy;
pub mod error;
pub mod flow;
pub mod grid;
pub mod ground_state;
pub mod harness;
pub mod interp;
pub mod theory;
pub mod util;

pub use error::{Error, Result};
