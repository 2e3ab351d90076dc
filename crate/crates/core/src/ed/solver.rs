use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::basis::SpinBasis;
use super::hamiltonian::{build_hamiltonian_in, HamiltonianMatrix};
use super::EdLimits;
use crate::error::{Error, Result};
use crate::lattice::LatticeGraph;
use crate::numeric::{axpy, dot, norm, scale};

/// Eigenvalues closer than this to the ground energy count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Required ground-state residual, relative to `||H||_inf`.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub limits: EdLimits,
    /// Krylov subspace size between restarts.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Seed of the ChaCha8 stream that fills the Lanczos start vector.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            limits: EdLimits::default(),
            krylov_dim: 60,
            max_restarts: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub method: Method,
    /// Ascending. The full spectrum for the dense method; the converged
    /// lowest Ritz value only for the iterative one.
    pub eigenvalues: Vec<f64>,
    pub ground_energy: f64,
    pub ground_vector: Vec<f64>,
    /// Multiplicity of the ground level; only the dense method resolves it.
    pub degeneracy: Option<usize>,
    /// `||H v - E0 v||`
    pub residual: f64,
    pub norm_inf: f64,
    /// Lanczos steps taken (0 for dense).
    pub iterations: usize,
    /// Orthonormal basis of the ground level: every degenerate vector for
    /// the dense method, the single Ritz vector for the iterative one.
    #[serde(skip)]
    pub ground_space: Vec<Vec<f64>>,
}

impl SpectrumResult {
    /// `sum_k <g_k|v>^2` over `ground_space`; basis independent when the
    /// whole degenerate level is resolved.
    pub fn ground_space_weight(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.ground_vector.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ground_vector.len(),
                found: v.len(),
            });
        }
        Ok(self.ground_space.iter().map(|g| dot(g, v).powi(2)).sum::<f64>().min(1.0))
    }
}

pub fn ground_state(h: &HamiltonianMatrix, method: Method) -> Result<SpectrumResult> {
    ground_state_with(h, method, &SolverOptions::default())
}

pub fn ground_state_with(
    h: &HamiltonianMatrix,
    method: Method,
    opts: &SolverOptions,
) -> Result<SpectrumResult> {
    let dim = h.dimension();
    match method {
        Method::Dense if dim > opts.limits.dense_max_dim => Err(Error::SizeLimit {
            what: "dense dimension",
            size: dim,
            limit: opts.limits.dense_max_dim,
        }),
        Method::Iterative if dim > opts.limits.iterative_max_dim => Err(Error::SizeLimit {
            what: "iterative dimension",
            size: dim,
            limit: opts.limits.iterative_max_dim,
        }),
        Method::Dense => Ok(dense(h)),
        Method::Iterative => lanczos(h, opts),
    }
}

fn fix_sign(v: &mut [f64]) {
    // largest-magnitude component positive, first index wins ties
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        scale(-1.0, v);
    }
}

fn residual_norm(h: &HamiltonianMatrix, v: &[f64], e: f64) -> f64 {
    let mut hv = h.apply(v);
    axpy(-e, v, &mut hv);
    norm(&hv)
}

fn dense(h: &HamiltonianMatrix) -> SpectrumResult {
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let e0 = eigenvalues[0];
    let mut v: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let nv = norm(&v);
    scale(1.0 / nv, &mut v);
    fix_sign(&mut v);
    let degeneracy = eigenvalues.iter().take_while(|&&x| x - e0 <= DEGENERACY_TOL).count();
    let ground_space = order[..degeneracy]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    SpectrumResult {
        method: Method::Dense,
        residual: residual_norm(h, &v, e0),
        norm_inf: h.norm_inf(),
        eigenvalues,
        ground_energy: e0,
        ground_vector: v,
        degeneracy: Some(degeneracy),
        iterations: 0,
        ground_space,
    }
}

/// Explicitly restarted Lanczos with full reorthogonalization.
fn lanczos(h: &HamiltonianMatrix, opts: &SolverOptions) -> Result<SpectrumResult> {
    let dim = h.dimension();
    let hnorm = h.norm_inf();
    let target = RESIDUAL_TOL * hnorm.max(f64::MIN_POSITIVE);
    let m = opts.krylov_dim.clamp(2, dim.max(2)).min(dim);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let n0 = norm(&start);
    scale(1.0 / n0, &mut start);

    let mut total_steps = 0;
    let mut last_residual = f64::INFINITY;
    let mut w = vec![0.0; dim];
    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            h.matvec(&basis[j], &mut w);
            total_steps += 1;
            let a = dot(&basis[j], &w);
            alpha.push(a);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let p = dot(q, &w);
                    axpy(-p, q, &mut w);
                }
            }
            let b = norm(&w);
            if j + 1 == m || b <= 1e-14 * hnorm.max(1.0) {
                break;
            }
            beta.push(b);
            let mut next = w.clone();
            scale(1.0 / b, &mut next);
            basis.push(next);
        }

        let k = alpha.len();
        let mut t = DMatrix::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let imin = (0..k)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .unwrap();
        let y = eig.eigenvectors.column(imin);
        let mut ritz = vec![0.0; dim];
        for (q, &c) in basis.iter().zip(y.iter()) {
            axpy(c, q, &mut ritz);
        }
        let nr = norm(&ritz);
        scale(1.0 / nr, &mut ritz);
        fix_sign(&mut ritz);
        let energy = dot(&ritz, &h.apply(&ritz));
        let residual = residual_norm(h, &ritz, energy);
        last_residual = residual;
        if residual <= target {
            return Ok(SpectrumResult {
                method: Method::Iterative,
                eigenvalues: vec![energy],
                ground_energy: energy,
                ground_space: vec![ritz.clone()],
                ground_vector: ritz,
                degeneracy: None,
                residual,
                norm_inf: hnorm,
                iterations: total_steps,
            });
        }
        start = ritz;
    }
    Err(Error::NonConvergence {
        iterations: total_steps,
        residual: last_residual,
    })
}

/// Lowest eigenvalue in every `n_up` sector, by dense diagonalization.
pub fn sector_ground_energies(g: &LatticeGraph, coupling: f64) -> Result<Vec<(usize, f64)>> {
    (0..=g.n_sites)
        .map(|n_up| {
            let basis = SpinBasis::sector(g.n_sites, n_up)?;
            let h = build_hamiltonian_in(&basis, g, coupling)?;
            Ok((n_up, ground_state(&h, Method::Dense)?.ground_energy))
        })
        .collect()
}
