use serde::Serialize;

use super::hamiltonian::HamiltonianMatrix;
use crate::error::{Error, Result};
use crate::lattice::{neel_assignment, LatticeGraph, Orientation};
use crate::model::Couplings;
use crate::numeric::{axpy, dot, norm, pairwise_sum_by};

/// Correlators below this are treated as zero when counting parallel bonds.
pub const CORRELATOR_ZERO: f64 = 1e-12;

const UNIT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BondCorrelator {
    pub i: usize,
    pub j: usize,
    /// `<s_i . s_j>`, within `[-3/4, 1/4]`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub bonds: Vec<BondCorrelator>,
    /// Fraction of bonds with a positive correlator.
    pub parallel_fraction: f64,
    /// `<S_z>` of the whole cluster.
    pub total_sz: f64,
}

fn full_dimension(g: &LatticeGraph) -> Result<usize> {
    if g.n_sites > 30 {
        return Err(Error::SizeLimit {
            what: "spin count",
            size: g.n_sites,
            limit: 30,
        });
    }
    Ok(1usize << g.n_sites)
}

fn basis_vector(dim: usize, index: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[index] = 1.0;
    v
}

/// All spins up.
pub fn ferro_state(g: &LatticeGraph) -> Result<Vec<f64>> {
    let dim = full_dimension(g)?;
    Ok(basis_vector(dim, dim - 1))
}

pub fn neel_index(g: &LatticeGraph) -> Result<usize> {
    Ok(neel_assignment(g)?
        .iter()
        .enumerate()
        .filter(|(_, &o)| o == Orientation::Up)
        .fold(0usize, |acc, (i, _)| acc | (1 << i)))
}

/// Product state with class-0 sites up and class-1 sites down.
pub fn neel_state(g: &LatticeGraph) -> Result<Vec<f64>> {
    let dim = full_dimension(g)?;
    Ok(basis_vector(dim, neel_index(g)?))
}

/// `(a1 |ferro> + |a2| |neel>) / sqrt(a1^2 + a2^2)`.
pub fn paper_state(g: &LatticeGraph, c: &Couplings) -> Result<Vec<f64>> {
    if c.is_degenerate() {
        return Err(Error::DegenerateCouplings);
    }
    if g.n_sites < 2 {
        return Err(Error::InvalidInput(
            "ferro and Neel states coincide for a single spin".into(),
        ));
    }
    let dim = full_dimension(g)?;
    let neel = neel_index(g)?;
    let norm = c.a1().hypot(c.a2());
    let mut v = vec![0.0; dim];
    v[dim - 1] = c.a1() / norm;
    v[neel] = c.abs_a2() / norm;
    Ok(v)
}

fn check_dim(h: &HamiltonianMatrix, v: &[f64]) -> Result<()> {
    if v.len() != h.dimension() {
        return Err(Error::DimensionMismatch {
            expected: h.dimension(),
            found: v.len(),
        });
    }
    Ok(())
}

fn check_unit(v: &[f64]) -> Result<()> {
    let n = norm(v);
    if (n - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidInput(format!("state vector norm {n} is not 1")));
    }
    Ok(())
}

/// `<v|H|v>` for a unit vector.
pub fn expectation(h: &HamiltonianMatrix, v: &[f64]) -> Result<f64> {
    check_dim(h, v)?;
    check_unit(v)?;
    Ok(dot(v, &h.apply(v)))
}

/// `|<v|w>|^2`
pub fn overlap(v: &[f64], w: &[f64]) -> Result<f64> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: w.len(),
        });
    }
    check_unit(v)?;
    check_unit(w)?;
    let p = dot(v, w);
    Ok((p * p).min(1.0))
}

/// `||H v - <H> v||`; zero exactly when `v` is an eigenvector.
pub fn eigen_residual(h: &HamiltonianMatrix, v: &[f64]) -> Result<f64> {
    let e = expectation(h, v)?;
    let mut hv = h.apply(v);
    axpy(-e, v, &mut hv);
    Ok(norm(&hv))
}

pub fn bond_correlators(v: &[f64], g: &LatticeGraph) -> Result<CorrelationReport> {
    let dim = full_dimension(g)?;
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    check_unit(v)?;
    let bonds: Vec<BondCorrelator> = g
        .bonds
        .iter()
        .map(|&(i, j)| {
            let pair = (1usize << i) | (1usize << j);
            // s_i.s_j |b> = +-1/4 |b> + (1/2)|b with i,j swapped> when antiparallel
            let value = pairwise_sum_by(0, dim, &|b| {
                let bits = b & pair;
                if bits == 0 || bits == pair {
                    0.25 * v[b] * v[b]
                } else {
                    v[b] * (-0.25 * v[b] + 0.5 * v[b ^ pair])
                }
            });
            BondCorrelator { i, j, value }
        })
        .collect();
    let parallel = bonds.iter().filter(|b| b.value > CORRELATOR_ZERO).count();
    let parallel_fraction = if bonds.is_empty() {
        0.0
    } else {
        parallel as f64 / bonds.len() as f64
    };
    let n = g.n_sites as i64;
    let total_sz = pairwise_sum_by(0, dim, &|b| {
        let twice = 2 * (b.count_ones() as i64) - n;
        0.5 * twice as f64 * v[b] * v[b]
    });
    Ok(CorrelationReport {
        bonds,
        parallel_fraction,
        total_sz,
    })
}
