//! Control-landscape analysis for ultrafast single-qubit phase-shift gates.
//!
//! * [`dynamics`]: closed-form propagation, the gate objective and its gradients.
//! * [`spectral`]: the Hessian at the zero control and its eigenvalue branches.
//! * [`optimize`]: GRAPE, differential evolution and dual annealing.
//! * [`experiments`]: the 110-node grid sweep, tables and statistics.
//! * [`io`]: JSON/CSV emission and angle parsing.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod optimize;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
