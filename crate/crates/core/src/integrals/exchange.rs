//! Exchange Coulomb integral
//! `K = int int rho(r1) rho(r2) / r12`, `rho(r) = phi_a(r_a) phi_b(r_b)`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::orbital::RadialOrbital;
use super::sampling::{antithetic_mean, distance, Proposal, UNIFORMS_PER_POINT};
use super::{check_error, Estimate, QuadratureConfig, Scheme, TwoCenterGeometry};
use crate::error::Result;
use crate::numeric::{legendre_table, pairwise_sum, GaussLegendre};

const PANEL_ORDER: usize = 16;

/// `<ab|1/r12|ba>` in hartree.
///
/// A negative result is returned as is; callers flag it.
pub fn direct_exchange(
    a: &RadialOrbital,
    b: &RadialOrbital,
    g: &TwoCenterGeometry,
    q: &QuadratureConfig,
) -> Result<Estimate> {
    q.validate()?;
    let e = match q.scheme {
        Scheme::ProductGrid => {
            let coarse = multipole(a, b, g.separation, q.resolution);
            let fine = multipole(a, b, g.separation, 2 * q.resolution);
            Estimate {
                value: fine,
                error: (fine - coarse).abs() + 64.0 * f64::EPSILON * fine.abs(),
            }
        }
        Scheme::MonteCarlo => monte_carlo(a, b, g.separation, q),
    };
    check_error("direct_exchange", e, q)
}

fn monte_carlo(a: &RadialOrbital, b: &RadialOrbital, sep: f64, q: &QuadratureConfig) -> Estimate {
    let proposal = Proposal::new(sep, a.effective_zeta().min(b.effective_zeta()));
    let rho = |p: &[f64; 3]| {
        a.value(distance(p, &proposal.centre_a)) * b.value(distance(p, &proposal.centre_b))
    };
    antithetic_mean(q.samples, q.seed, 2 * UNIFORMS_PER_POINT, |u| {
        let p1 = proposal.sample(&u[..UNIFORMS_PER_POINT]);
        let p2 = proposal.sample(&u[UNIFORMS_PER_POINT..]);
        let r12 = distance(&p1, &p2);
        rho(&p1) * rho(&p2) / (r12 * proposal.density(&p1) * proposal.density(&p2))
    })
}

/// Multipole expansion about the bond midpoint.
///
/// With `q_l(r) = int rho(r, mu) P_l(mu) dmu` the angular integrals collapse to
/// `K = sum_l 8 pi^2 int dr1 r1^2 q_l(r1) int_0^r1 dr2 r2 (r2/r1)^(l+1) q_l(r2)`.
/// `panels` sets the angular grid (`16 panels` nodes), the multipole cut-off
/// (`8 panels`) and the radial panel counts. The `r2 < r1` triangle inside a
/// radial panel gets its own Gauss rule along `r2`.
fn multipole(a: &RadialOrbital, b: &RadialOrbital, sep: f64, panels: usize) -> f64 {
    let gl = GaussLegendre::new(PANEL_ORDER);
    let half = 0.5 * sep;

    // radial panels, with a break at R/2 where rho has its cusps
    let mut bounds = Vec::new();
    if half > 0.0 {
        let h = half / panels as f64;
        bounds.extend((0..panels).map(|p| (p as f64 * h, (p + 1) as f64 * h)));
    }
    let n_outer = 4 * panels;
    let h = a.extent().min(b.extent()) / n_outer as f64;
    bounds.extend((0..n_outer).map(|p| (half + p as f64 * h, half + (p + 1) as f64 * h)));

    let angular = AngularGrid::new(&gl, panels, 8 * panels);
    let moments = |r: f64| angular.moments(a, b, sep, r);

    let base: Vec<(f64, f64)> = bounds.iter().flat_map(|&(l, u)| gl.mapped(l, u)).collect();
    let base_moments: Vec<Vec<f64>> = base.par_iter().map(|&(r, _)| moments(r)).collect();

    let panel_sums: Vec<f64> = bounds
        .par_iter()
        .enumerate()
        .map(|(p, &(lo, _))| {
            let start = p * PANEL_ORDER;
            let mut terms = Vec::with_capacity(PANEL_ORDER);
            for k in start..start + PANEL_ORDER {
                let (r1, w1) = base[k];
                let q1 = &base_moments[k];
                let mut inner: Vec<f64> = base[..start]
                    .iter()
                    .zip(&base_moments)
                    .map(|(&(r2, w2), q2)| w2 * r2 * radial_kernel(r2 / r1, q1, q2))
                    .collect();
                for (r2, w2) in gl.mapped(lo, r1) {
                    inner.push(w2 * r2 * radial_kernel(r2 / r1, q1, &moments(r2)));
                }
                terms.push(w1 * r1 * r1 * pairwise_sum(&inner));
            }
            pairwise_sum(&terms)
        })
        .collect();
    8.0 * PI * PI * pairwise_sum(&panel_sums)
}

/// `sum_l t^(l+1) q1_l q2_l` for `0 <= t <= 1`.
fn radial_kernel(t: f64, q1: &[f64], q2: &[f64]) -> f64 {
    let mut power = t;
    let mut acc = 0.0;
    for (x, y) in q1.iter().zip(q2) {
        acc += power * x * y;
        power *= t;
        if power == 0.0 {
            break;
        }
    }
    acc
}

/// Gauss-Legendre in `t` with `mu = sin(pi t / 2)`, which clusters nodes at
/// the poles where `rho` has its cusps.
struct AngularGrid {
    /// `(mu, weight)`
    nodes: Vec<(f64, f64)>,
    /// Row `k` holds `P_0 ..= P_lmax` at node `k`.
    legendre: Vec<f64>,
    width: usize,
}

impl AngularGrid {
    fn new(gl: &GaussLegendre, panels: usize, lmax: usize) -> Self {
        let mut nodes = Vec::new();
        let mut legendre = Vec::new();
        let mut row = Vec::new();
        let step = 2.0 / panels as f64;
        for p in 0..panels {
            let lo = -1.0 + p as f64 * step;
            for (t, w) in gl.mapped(lo, lo + step) {
                let mu = (FRAC_PI_2 * t).sin();
                nodes.push((mu, w * FRAC_PI_2 * (FRAC_PI_2 * t).cos()));
                legendre_table(lmax, mu, &mut row);
                legendre.extend_from_slice(&row);
            }
        }
        Self {
            nodes,
            legendre,
            width: lmax + 1,
        }
    }

    /// `q_l(r)` for `l = 0 ..= lmax`; centre `a` at `mu = -1`.
    fn moments(&self, a: &RadialOrbital, b: &RadialOrbital, sep: f64, r: f64) -> Vec<f64> {
        let mut q = vec![0.0; self.width];
        let base = r * r + 0.25 * sep * sep;
        for (k, &(mu, w)) in self.nodes.iter().enumerate() {
            let cross = r * sep * mu;
            let ra = (base + cross).max(0.0).sqrt();
            let rb = (base - cross).max(0.0).sqrt();
            let f = w * a.value(ra) * b.value(rb);
            if f == 0.0 {
                continue;
            }
            let row = &self.legendre[k * self.width..(k + 1) * self.width];
            for (ql, pl) in q.iter_mut().zip(row) {
                *ql += f * pl;
            }
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1s() -> RadialOrbital {
        RadialOrbital::hydrogenic_1s(1.0).unwrap()
    }

    /// One-centre oracle from the closed-form potential of the 1s density,
    /// `U(r) = 1/r - (1 + 1/r) exp(-2r)`, integrated with composite Simpson.
    fn one_centre_oracle(steps: usize) -> f64 {
        let r_max = 40.0;
        let h = r_max / steps as f64;
        let f = |r: f64| {
            if r == 0.0 {
                return 0.0;
            }
            let density = (-2.0 * r).exp() / PI;
            let u = 1.0 / r - (1.0 + 1.0 / r) * (-2.0 * r).exp();
            4.0 * PI * r * r * density * u
        };
        let mut acc = f(0.0) + f(r_max);
        for k in 1..steps {
            acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn oracle_converges_to_five_eighths() {
        let coarse = one_centre_oracle(16_000);
        let fine = one_centre_oracle(32_000);
        assert!((coarse - fine).abs() < 2e-11);
        assert!((fine - 0.625).abs() < 1e-11);
    }

    #[test]
    fn one_centre_product_grid_matches_oracle() {
        let g = TwoCenterGeometry::new(0.0, 1.0).unwrap();
        let k = direct_exchange(&h1s(), &h1s(), &g, &QuadratureConfig::product_grid(4)).unwrap();
        assert!((k.value - one_centre_oracle(32_000)).abs() < 1e-8, "{k:?}");
    }

    #[test]
    fn one_centre_monte_carlo_matches_oracle() {
        let g = TwoCenterGeometry::new(0.0, 1.0).unwrap();
        let k = direct_exchange(&h1s(), &h1s(), &g, &QuadratureConfig::monte_carlo(400_000, 1)).unwrap();
        assert!((k.value - one_centre_oracle(32_000)).abs() < 4.0 * k.error, "{k:?}");
        assert!(k.error < 2e-3);
    }

    #[test]
    fn seeds_agree_statistically() {
        let g = TwoCenterGeometry::new(1.4, 1.0).unwrap();
        let k1 = direct_exchange(&h1s(), &h1s(), &g, &QuadratureConfig::monte_carlo(200_000, 1)).unwrap();
        let k2 = direct_exchange(&h1s(), &h1s(), &g, &QuadratureConfig::monte_carlo(200_000, 2)).unwrap();
        let sigma = (k1.error.powi(2) + k2.error.powi(2)).sqrt();
        assert!((k1.value - k2.value).abs() < 3.0 * sigma);
        assert_ne!(k1.value, k2.value);
    }

    #[test]
    fn product_grid_and_monte_carlo_agree() {
        for r in [1.0, 2.0] {
            let g = TwoCenterGeometry::new(r, 1.0).unwrap();
            let grid = direct_exchange(&h1s(), &h1s(), &g, &QuadratureConfig::product_grid(4)).unwrap();
            let mc = direct_exchange(&h1s(), &h1s(), &g, &QuadratureConfig::monte_carlo(400_000, 9)).unwrap();
            assert!(grid.error < 1e-5, "R = {r}: {grid:?}");
            assert!((grid.value - mc.value).abs() < 4.0 * (mc.error + grid.error), "R = {r}: {grid:?} vs {mc:?}");
        }
    }

    #[test]
    fn decays_monotonically() {
        let q = QuadratureConfig::product_grid(3);
        let k: Vec<f64> = [4.0, 6.0, 8.0]
            .iter()
            .map(|&r| {
                let g = TwoCenterGeometry::new(r, 1.0).unwrap();
                direct_exchange(&h1s(), &h1s(), &g, &q).unwrap().value
            })
            .collect();
        assert!(k[0] > k[1] && k[1] > k[2] && k[2] > 0.0, "{k:?}");
    }

    #[test]
    fn symmetric_under_orbital_swap() {
        let a = RadialOrbital::hydrogenic_1s(1.0).unwrap();
        let b = RadialOrbital::hydrogenic_1s(1.3).unwrap();
        let g = TwoCenterGeometry::new(1.5, 1.0).unwrap();
        let q = QuadratureConfig::product_grid(3);
        let ab = direct_exchange(&a, &b, &g, &q).unwrap();
        let ba = direct_exchange(&b, &a, &g, &q).unwrap();
        assert!((ab.value - ba.value).abs() <= ab.error + ba.error + 1e-12);
    }
}
