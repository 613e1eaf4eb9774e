//! Unruh-DeWitt detector transition probabilities for Gaussian Fock wavepackets.
//!
//! Free-space closed forms for linear and quadratic couplings, Dirichlet-cavity
//! lattice sums and energy-deposit spectra, plus brute-force oracles that
//! evaluate the same quantities without special-function shortcuts.

pub mod cavity;
pub mod error;
pub mod free_linear;
pub mod free_quadratic;
pub mod oracle;
pub mod peaks;
pub mod quadrature;
pub mod specfun;
pub mod wavepacket;

pub use error::{Result, UdwError};
