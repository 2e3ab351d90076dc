use std::f64::consts::PI;

use super::orbital::RadialOrbital;
use super::sampling::{antithetic_mean, distance, Proposal, UNIFORMS_PER_POINT};
use super::{check_error, Estimate, PotentialSign, QuadratureConfig, Scheme, TwoCenterGeometry};
use crate::error::Result;
use crate::numeric::GaussLegendre;

/// Below this separation the one-centre radial formulas are used.
const ONE_CENTRE_SEPARATION: f64 = 1e-10;

const PANEL_ORDER: usize = 16;

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Overlap,
    /// `Z / r_b`
    Nuclear,
}

/// `S_ab = <phi_a | phi_b>`.
pub fn overlap(
    a: &RadialOrbital,
    b: &RadialOrbital,
    g: &TwoCenterGeometry,
    q: &QuadratureConfig,
) -> Result<Estimate> {
    q.validate()?;
    let e = integrate(a, b, g, q, Kernel::Overlap)?;
    check_error("overlap", e, q)
}

/// `<b|V|a> = int phi_b(r_b) (sign Z / r_b) phi_a(r_a) d^3r`.
///
/// `orb_b` sits on centre `b` (the one carrying the potential), `orb_a` on
/// centre `a`. For real orbitals this also equals `<a|V|b>`.
pub fn potential_element(
    orb_b: &RadialOrbital,
    orb_a: &RadialOrbital,
    g: &TwoCenterGeometry,
    q: &QuadratureConfig,
    sign: PotentialSign,
) -> Result<Estimate> {
    q.validate()?;
    let e = integrate(orb_a, orb_b, g, q, Kernel::Nuclear)?;
    let f = sign.factor() * g.nuclear_charge;
    check_error(
        "potential_element",
        Estimate {
            value: f * e.value,
            error: g.nuclear_charge * e.error,
        },
        q,
    )
}

fn integrate(
    a: &RadialOrbital,
    b: &RadialOrbital,
    g: &TwoCenterGeometry,
    q: &QuadratureConfig,
    kernel: Kernel,
) -> Result<Estimate> {
    Ok(match q.scheme {
        Scheme::ProductGrid => {
            let coarse = product_grid(a, b, g.separation, q.resolution, kernel);
            let fine = product_grid(a, b, g.separation, 2 * q.resolution, kernel);
            let floor = 64.0 * f64::EPSILON * fine.abs();
            Estimate {
                value: fine,
                error: (fine - coarse).abs() + floor,
            }
        }
        Scheme::MonteCarlo => monte_carlo(a, b, g.separation, q, kernel),
    })
}

/// Gauss-Legendre product rule with `panels` panels per coordinate.
fn product_grid(a: &RadialOrbital, b: &RadialOrbital, sep: f64, panels: usize, kernel: Kernel) -> f64 {
    let gl = GaussLegendre::new(PANEL_ORDER);
    if sep <= ONE_CENTRE_SEPARATION {
        // uniform panels, also cut at table nodes so every piece is smooth
        let r_max = a.extent().min(b.extent());
        let step = r_max / panels as f64;
        let mut cuts: Vec<f64> = (0..=panels).map(|p| p as f64 * step).collect();
        cuts.extend(
            a.breakpoints()
                .iter()
                .chain(b.breakpoints())
                .filter(|&&r| r > 0.0 && r < r_max),
        );
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            for (r, wt) in gl.mapped(w[0], w[1]) {
                let f = a.value(r) * b.value(r);
                total += wt * match kernel {
                    Kernel::Overlap => f * r * r,
                    Kernel::Nuclear => f * r,
                };
            }
        }
        return 4.0 * PI * total;
    }

    // prolate spheroidal: r_a = R (xi + eta) / 2, r_b = R (xi - eta) / 2,
    // d^3r = (R^3 / 8) (xi^2 - eta^2) dxi deta dphi
    let xi_max = 1.0 + (a.extent() + b.extent()) / sep;
    let xi_step = (xi_max - 1.0) / panels as f64;
    let eta_step = 2.0 / panels as f64;
    let mut total = 0.0;
    for pe in 0..panels {
        let eta_lo = -1.0 + pe as f64 * eta_step;
        for (eta, we) in gl.mapped(eta_lo, eta_lo + eta_step) {
            let mut row = 0.0;
            for px in 0..panels {
                let xi_lo = 1.0 + px as f64 * xi_step;
                for (xi, wx) in gl.mapped(xi_lo, xi_lo + xi_step) {
                    let ra = 0.5 * sep * (xi + eta);
                    let rb = 0.5 * sep * (xi - eta);
                    let f = a.value(ra) * b.value(rb);
                    row += wx * match kernel {
                        Kernel::Overlap => f * (xi * xi - eta * eta),
                        // (xi^2 - eta^2) / r_b = 2 (xi + eta) / R
                        Kernel::Nuclear => f * (xi + eta),
                    };
                }
            }
            total += we * row;
        }
    }
    match kernel {
        Kernel::Overlap => 0.25 * PI * sep.powi(3) * total,
        Kernel::Nuclear => 0.5 * PI * sep * sep * total,
    }
}

fn monte_carlo(
    a: &RadialOrbital,
    b: &RadialOrbital,
    sep: f64,
    q: &QuadratureConfig,
    kernel: Kernel,
) -> Estimate {
    let proposal = Proposal::new(sep, a.effective_zeta().min(b.effective_zeta()));
    antithetic_mean(q.samples, q.seed, UNIFORMS_PER_POINT, |u| {
        let p = proposal.sample(u);
        let ra = distance(&p, &proposal.centre_a);
        let rb = distance(&p, &proposal.centre_b);
        let f = a.value(ra) * b.value(rb) / proposal.density(&p);
        match kernel {
            Kernel::Overlap => f,
            Kernel::Nuclear => f / rb,
        }
    })
}
