//! Exact diagonalization of spin-1/2 Heisenberg clusters.
//!
//! Basis states are computational z-basis product states; bit `i` of the
//! state index is `1` when spin `i` points up. All energies here are in
//! quantum units (`s_i . s_j = +1/4` for an aligned pair); use
//! [`convention_rescale`] to compare with the closed-form model.

mod basis;
mod hamiltonian;
mod solver;
mod states;

pub use basis::SpinBasis;
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_in, build_hamiltonian_with, build_split_hamiltonians, commutator_max_abs,
    operator_identity_report, sz_commutator_max_abs, total_spin_squared, HamiltonianMatrix,
};
pub use solver::{
    ground_state, ground_state_with, sector_ground_energies, Method, SolverOptions, SpectrumResult,
    DEGENERACY_TOL, RESIDUAL_TOL,
};
pub use states::{
    bond_correlators, eigen_residual, expectation, ferro_state, neel_index, neel_state, overlap,
    paper_state, BondCorrelator, CorrelationReport, CORRELATOR_ZERO,
};

use serde::Serialize;

/// Hard limits on cluster size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdLimits {
    pub max_sites: usize,
    pub dense_max_dim: usize,
    pub iterative_max_dim: usize,
}

impl Default for EdLimits {
    fn default() -> Self {
        Self {
            max_sites: 20,
            dense_max_dim: 4096,
            iterative_max_dim: 1 << 20,
        }
    }
}

/// Spin-1/2 aligned pairs give `s.s = 1/4` while the closed-form model
/// assumes unit alignment, hence the factor 4.
pub const CONVENTION_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    ToPaper,
    ToQuantum,
}

pub fn convention_rescale(energy: f64, mode: Convention) -> f64 {
    match mode {
        Convention::ToPaper => energy * CONVENTION_FACTOR,
        Convention::ToQuantum => energy / CONVENTION_FACTOR,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescale_examples() {
        assert_eq!(convention_rescale(-2.0, Convention::ToPaper), -8.0);
        assert_eq!(convention_rescale(0.0, Convention::ToPaper), 0.0);
        for e in [-2.0, 0.3, 1e-7, -123.456] {
            let back = convention_rescale(convention_rescale(e, Convention::ToPaper), Convention::ToQuantum);
            assert!((back - e).abs() <= 1e-15 * e.abs().max(1.0));
        }
    }
}
