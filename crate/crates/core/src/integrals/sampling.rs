//! Importance sampling shared by the Monte Carlo integrators.
//!
//! Points are drawn from an equal mixture of two 1s densities centred on
//! the two nuclei. Every draw consumes a fixed number of open-interval
//! uniforms; the antithetic partner reuses them as `1 - u`.

use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Estimate;
use crate::numeric::pairwise_sum;

pub(crate) const UNIFORMS_PER_POINT: usize = 6;

/// Antithetic pairs per RNG stream.
const CHUNK_PAIRS: u64 = 1 << 14;

pub(crate) type Point = [f64; 3];

/// Mixture `(g_a + g_b) / 2` with `g_c = zeta^3/pi exp(-2 zeta |r - c|)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Proposal {
    pub centre_a: Point,
    pub centre_b: Point,
    pub zeta: f64,
}

impl Proposal {
    pub fn new(separation: f64, zeta: f64) -> Self {
        Self {
            centre_a: [0.0, 0.0, -0.5 * separation],
            centre_b: [0.0, 0.0, 0.5 * separation],
            zeta,
        }
    }

    pub fn sample(&self, u: &[f64]) -> Point {
        let centre = if u[0] < 0.5 { self.centre_a } else { self.centre_b };
        // Gamma(3, 1/(2 zeta)) radius as a sum of three exponentials
        let r = -(u[1].ln() + u[2].ln() + u[3].ln()) / (2.0 * self.zeta);
        let cos_t = 2.0 * u[4] - 1.0;
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        let phi = 2.0 * PI * u[5];
        [
            centre[0] + r * sin_t * phi.cos(),
            centre[1] + r * sin_t * phi.sin(),
            centre[2] + r * cos_t,
        ]
    }

    pub fn density(&self, p: &Point) -> f64 {
        let norm = self.zeta.powi(3) / PI;
        let ga = norm * (-2.0 * self.zeta * distance(p, &self.centre_a)).exp();
        let gb = norm * (-2.0 * self.zeta * distance(p, &self.centre_b)).exp();
        0.5 * (ga + gb)
    }
}

pub(crate) fn distance(p: &Point, q: &Point) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    let dz = p[2] - q[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Mean of `f(u)` over `samples` evaluations taken as antithetic pairs
/// `(u, 1 - u)`, with the standard error of the mean.
///
/// Chunk `c` draws from ChaCha8 stream `c` of `seed`, so the result does not
/// depend on the number of worker threads.
pub(crate) fn antithetic_mean<F>(samples: u64, seed: u64, dims: usize, f: F) -> Estimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let pairs = samples.div_ceil(2).max(2);
    let chunks = pairs.div_ceil(CHUNK_PAIRS);
    let partial: Vec<(f64, f64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK_PAIRS.min(pairs - c * CHUNK_PAIRS);
            let mut u = vec![0.0; dims];
            let mut v = vec![0.0; dims];
            let mut vals = Vec::with_capacity(n as usize);
            for _ in 0..n {
                for (ui, vi) in u.iter_mut().zip(v.iter_mut()) {
                    *ui = open_uniform(&mut rng);
                    *vi = 1.0 - *ui;
                }
                vals.push(0.5 * (f(&u) + f(&v)));
            }
            let sum = pairwise_sum(&vals);
            let sq: Vec<f64> = vals.iter().map(|x| x * x).collect();
            (sum, pairwise_sum(&sq), n)
        })
        .collect();
    let sums: Vec<f64> = partial.iter().map(|p| p.0).collect();
    let sqs: Vec<f64> = partial.iter().map(|p| p.1).collect();
    let n = pairs as f64;
    let mean = pairwise_sum(&sums) / n;
    let var = ((pairwise_sum(&sqs) / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Estimate {
        value: mean,
        error: (var / n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proposal_density_is_normalized() {
        // radial quadrature of a single centred component
        let p = Proposal::new(0.0, 1.3);
        let gl = crate::numeric::GaussLegendre::new(64);
        let total = gl.integrate(0.0, 40.0, |r| 4.0 * PI * r * r * p.density(&[0.0, 0.0, r]));
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn antithetic_mean_of_linear_function_is_exact() {
        // f(u) + f(1 - u) is constant for linear f
        let e = antithetic_mean(10_000, 3, 2, |u| 3.0 * u[0] - u[1]);
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!(e.error < 1e-12);
    }

    #[test]
    fn antithetic_mean_is_seed_deterministic() {
        let f = |u: &[f64]| (u[0] * 7.0).sin();
        let a = antithetic_mean(100_000, 5, 1, f);
        let b = antithetic_mean(100_000, 5, 1, f);
        assert_eq!(a, b);
        let c = antithetic_mean(100_000, 6, 1, f);
        assert_ne!(a.value, c.value);
    }
}
