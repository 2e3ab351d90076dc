//! Two-term competing exchange model for localized spins.
//!
//! The exchange coupling is split into a ferromagnetic part `a1 >= 0` and an
//! antiferromagnetic part `a2 <= 0`. [`model`] holds the closed-form state,
//! energy and phase expressions; the remaining modules provide independent
//! numerical checks of them:
//!
//! - [`lattice`]: finite interaction graphs (chain, ring, square).
//! - [`ed`]: exact diagonalization of spin-1/2 Heisenberg clusters.
//! - [`integrals`]: two-center overlap, nuclear attraction and exchange
//!   Coulomb integrals in atomic units.
//! - [`montecarlo`]: classical Ising / unit-vector Metropolis annealing.

pub mod ed;
pub mod error;
pub mod integrals;
pub mod lattice;
pub mod model;
pub mod montecarlo;
pub mod numeric;

pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeGraph, LatticeKind, LatticeSpec};
pub use model::{Couplings, PhaseLabel, SystemSize};
