//! Two-center integrals entering the Heitler-London exchange coupling,
//! in atomic units (`e = hbar = m = a0 = 1`).
//!
//! Centre `a` sits at `z = -R/2` and centre `b` at `z = +R/2`. Orbitals are
//! spherically symmetric about their own centre.
//!
//! One-electron integrals use a Gauss-Legendre product grid in prolate
//! spheroidal coordinates; the exchange Coulomb integral uses either a
//! multipole expansion about the bond midpoint (product grid) or
//! importance-sampled Monte Carlo with antithetic pairs.

mod exchange;
mod one_electron;
mod orbital;
mod sampling;

pub use exchange::direct_exchange;
pub use one_electron::{overlap, potential_element};
pub use orbital::RadialOrbital;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Couplings;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoCenterGeometry {
    /// Internuclear separation (bohr).
    pub separation: f64,
    /// Nuclear charge of centre `b` in `V = Z / r_b`.
    pub nuclear_charge: f64,
}

impl TwoCenterGeometry {
    pub fn new(separation: f64, nuclear_charge: f64) -> Result<Self> {
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "separation {separation} must be finite and >= 0"
            )));
        }
        if !(nuclear_charge > 0.0 && nuclear_charge.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "nuclear charge {nuclear_charge} must be positive"
            )));
        }
        Ok(Self {
            separation,
            nuclear_charge,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ProductGrid,
    MonteCarlo,
}

pub const MIN_RESOLUTION: usize = 2;
pub const MIN_SAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    /// Panels per coordinate (product grid). The error estimate compares
    /// `resolution` against `2 * resolution`.
    pub resolution: usize,
    /// Total integrand evaluations (Monte Carlo), taken in antithetic pairs.
    pub samples: u64,
    pub seed: u64,
    /// Results whose error estimate exceeds this are rejected.
    pub max_error: f64,
}

impl QuadratureConfig {
    pub fn product_grid(resolution: usize) -> Self {
        Self {
            scheme: Scheme::ProductGrid,
            resolution,
            samples: 0,
            seed: 0,
            max_error: 1e-6,
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self {
            scheme: Scheme::MonteCarlo,
            resolution: 0,
            samples,
            seed,
            max_error: 1e-2,
        }
    }

    /// Product grid, 8 panels, error limit `1e-6`.
    pub fn one_electron_default() -> Self {
        Self::product_grid(8)
    }

    /// Monte Carlo, `10^6` samples, seed 0, error limit `1e-2` hartree.
    pub fn exchange_default() -> Self {
        Self::monte_carlo(1_000_000, 0)
    }

    pub fn with_max_error(mut self, max_error: f64) -> Self {
        self.max_error = max_error;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.scheme {
            Scheme::ProductGrid if self.resolution < MIN_RESOLUTION => Err(Error::InvalidInput(
                format!("product-grid resolution must be >= {MIN_RESOLUTION}"),
            )),
            Scheme::MonteCarlo if self.samples < MIN_SAMPLES => Err(Error::InvalidInput(format!(
                "monte-carlo sample count must be >= {MIN_SAMPLES}"
            ))),
            _ if !(self.max_error > 0.0) => {
                Err(Error::InvalidInput("max_error must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Sign of the nuclear potential `V = sign * Z / r_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialSign {
    #[default]
    Attractive,
    Repulsive,
}

impl PotentialSign {
    pub fn factor(&self) -> f64 {
        match self {
            PotentialSign::Attractive => -1.0,
            PotentialSign::Repulsive => 1.0,
        }
    }
}

/// A numerical value with its error estimate (Richardson difference for
/// product grids, one standard error for Monte Carlo).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

pub(crate) fn check_error(quantity: &'static str, e: Estimate, q: &QuadratureConfig) -> Result<Estimate> {
    if !e.value.is_finite() || !(e.error <= q.max_error) {
        return Err(Error::QuadratureDivergence {
            quantity,
            estimate: e.error,
            limit: q.max_error,
        });
    }
    Ok(e)
}

/// `Gamma_ab = <a|V|b> / delta_e`.
pub fn gamma(
    a: &RadialOrbital,
    b: &RadialOrbital,
    g: &TwoCenterGeometry,
    q: &QuadratureConfig,
    delta_e: f64,
    sign: PotentialSign,
) -> Result<Estimate> {
    if delta_e == 0.0 {
        return Err(Error::ZeroDenominator("gamma (delta_e)"));
    }
    let v = potential_element(a, b, g, q, sign)?;
    Ok(gamma_from(v, delta_e))
}

fn gamma_from(v: Estimate, delta_e: f64) -> Estimate {
    Estimate {
        value: v.value / delta_e,
        error: v.error / delta_e.abs(),
    }
}

/// Ingredients of the two-term exchange coupling, computed at one geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ingredients {
    pub s_ab: Estimate,
    pub v_ba: Estimate,
    pub gamma_ab: Estimate,
    pub direct_exchange: Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct IntegralFlags {
    /// The exchange Coulomb integral came out negative (insufficient resolution).
    pub negative_exchange: bool,
    /// `a2 > 0`; such a set cannot be used as model couplings.
    pub positive_a2: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEstimates {
    pub s_ab: f64,
    pub v_ba: f64,
    pub gamma_ab: f64,
    pub direct_exchange: f64,
    pub a2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralSet {
    pub s_ab: f64,
    pub v_ba: f64,
    pub gamma_ab: f64,
    pub direct_exchange: f64,
    pub a1: f64,
    pub a2: f64,
    /// `a1 + a2`
    pub j_h: f64,
    pub error_estimates: ErrorEstimates,
    pub flags: IntegralFlags,
}

impl IntegralSet {
    /// Model couplings; rejected when the sign conventions are violated.
    pub fn couplings(&self) -> Result<Couplings> {
        Couplings::new(self.a1, self.a2)
    }
}

/// `a1 = K`, `a2 = -2 (S + Gamma) V`, `J_H = a1 + a2`.
pub fn assemble_couplings(x: &Ingredients) -> IntegralSet {
    let a1 = x.direct_exchange.value;
    let sg = x.s_ab.value + x.gamma_ab.value;
    let a2 = -2.0 * sg * x.v_ba.value;
    let a2_err = 2.0 * (x.v_ba.value.abs() * (x.s_ab.error + x.gamma_ab.error) + sg.abs() * x.v_ba.error);
    IntegralSet {
        s_ab: x.s_ab.value,
        v_ba: x.v_ba.value,
        gamma_ab: x.gamma_ab.value,
        direct_exchange: a1,
        a1,
        a2,
        j_h: a1 + a2,
        error_estimates: ErrorEstimates {
            s_ab: x.s_ab.error,
            v_ba: x.v_ba.error,
            gamma_ab: x.gamma_ab.error,
            direct_exchange: x.direct_exchange.error,
            a2: a2_err,
        },
        flags: IntegralFlags {
            negative_exchange: a1 < 0.0,
            positive_a2: a2 > 0.0,
        },
    }
}

/// Computes every ingredient at one geometry and assembles the set.
pub fn integral_set(
    a: &RadialOrbital,
    b: &RadialOrbital,
    g: &TwoCenterGeometry,
    one_electron: &QuadratureConfig,
    exchange: &QuadratureConfig,
    delta_e: f64,
    sign: PotentialSign,
) -> Result<IntegralSet> {
    if delta_e == 0.0 || !delta_e.is_finite() {
        return Err(Error::ZeroDenominator("gamma (delta_e)"));
    }
    let s_ab = overlap(a, b, g, one_electron)?;
    let v_ba = potential_element(b, a, g, one_electron, sign)?;
    let gamma_ab = gamma_from(v_ba, delta_e);
    let direct_exchange = direct_exchange(a, b, g, exchange)?;
    Ok(assemble_couplings(&Ingredients {
        s_ab,
        v_ba,
        gamma_ab,
        direct_exchange,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HdVariant {
    /// `J - 2|V| / U`
    Literal,
    /// `J - 2 V^2 / U`
    Squared,
}

/// Localized-spin exchange `J_lm - 2|V_lm|/U` or `J_lm - 2 V_lm^2 / U`.
pub fn hd_coupling(j_lm: f64, v_lm: f64, u: f64, variant: HdVariant) -> Result<f64> {
    if u == 0.0 {
        return Err(Error::ZeroDenominator("hd_coupling (U)"));
    }
    if u < 0.0 {
        return Err(Error::InvalidInput(format!("U = {u} must be positive")));
    }
    Ok(match variant {
        HdVariant::Literal => j_lm - 2.0 * v_lm.abs() / u,
        HdVariant::Squared => j_lm - 2.0 * v_lm * v_lm / u,
    })
}
