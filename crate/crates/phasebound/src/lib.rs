//! Discrete spectra, level counts, and spinor wavefunctions of 2D massless
//! Dirac-Weyl particles confined by a 1D potential, computed by integrating
//! a first-order phase equation and counting the branch drops of its left
//! separatrix.

pub mod error;
pub mod numerics;
pub mod phase_ode;
pub mod potentials;

pub use error::{Error, Result};
pub use phase_ode::Tolerances;
pub use potentials::Potential;
