use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::GaussLegendre;

/// A spherically symmetric (s-type) one-electron orbital `phi(r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialOrbital {
    /// `sqrt(zeta^3 / pi) exp(-zeta r)`
    Hydrogenic1s { zeta: f64 },
    /// Linear interpolation on `grid`; zero beyond the last grid point.
    /// Values are rescaled at construction so the orbital is normalized.
    Tabulated {
        grid: Vec<f64>,
        values: Vec<f64>,
        /// Norm of the table before rescaling.
        raw_norm: f64,
    },
}

impl RadialOrbital {
    pub fn hydrogenic_1s(zeta: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(Error::InvalidInput(format!("orbital exponent {zeta} must be positive")));
        }
        Ok(Self::Hydrogenic1s { zeta })
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::InvalidInput(
                "tabulated orbital needs at least two (r, value) pairs".into(),
            ));
        }
        if grid[0] < 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "radial grid must be non-negative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("orbital values must be finite".into()));
        }
        let raw_norm = piecewise_moment(&grid, &values, 2).sqrt();
        if raw_norm == 0.0 {
            return Err(Error::InvalidInput("tabulated orbital is identically zero".into()));
        }
        let values = values.into_iter().map(|v| v / raw_norm).collect();
        Ok(Self::Tabulated {
            grid,
            values,
            raw_norm,
        })
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Self::Hydrogenic1s { zeta } => (zeta.powi(3) / PI).sqrt() * (-zeta * r).exp(),
            Self::Tabulated { grid, values, .. } => interpolate(grid, values, r),
        }
    }

    /// `4 pi int |phi|^2 r^2 dr`; exact for both kinds.
    pub fn norm_squared(&self) -> f64 {
        match self {
            Self::Hydrogenic1s { .. } => 1.0,
            Self::Tabulated { grid, values, .. } => piecewise_moment(grid, values, 2),
        }
    }

    /// Exponent of the 1s function with the same `<r>`; used to shape
    /// integration ranges and importance samplers.
    pub fn effective_zeta(&self) -> f64 {
        match self {
            Self::Hydrogenic1s { zeta } => *zeta,
            Self::Tabulated { grid, values, .. } => {
                let mean_r = piecewise_moment(grid, values, 3);
                1.5 / mean_r
            }
        }
    }

    /// Radius beyond which the orbital is negligible (or exactly zero).
    pub fn extent(&self) -> f64 {
        match self {
            // exp(-42) ~ 6e-19
            Self::Hydrogenic1s { zeta } => 42.0 / zeta,
            Self::Tabulated { grid, .. } => *grid.last().unwrap(),
        }
    }

    /// Radii where the orbital is not smooth (table nodes).
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Self::Hydrogenic1s { .. } => &[],
            Self::Tabulated { grid, .. } => grid,
        }
    }
}

fn interpolate(grid: &[f64], values: &[f64], r: f64) -> f64 {
    let last = grid.len() - 1;
    if r > grid[last] || r < grid[0] {
        return 0.0;
    }
    let k = grid.partition_point(|&g| g <= r).clamp(1, last);
    let (r0, r1) = (grid[k - 1], grid[k]);
    let t = (r - r0) / (r1 - r0);
    values[k - 1] + t * (values[k] - values[k - 1])
}

/// `4 pi int |phi|^2 r^power dr` over the piecewise-linear table.
/// Per segment the integrand is a polynomial of degree <= 5, which a
/// 3-point Gauss rule integrates exactly.
fn piecewise_moment(grid: &[f64], values: &[f64], power: i32) -> f64 {
    let gl = GaussLegendre::new(3);
    let mut total = 0.0;
    for k in 1..grid.len() {
        let (r0, r1) = (grid[k - 1], grid[k]);
        let (v0, v1) = (values[k - 1], values[k]);
        total += gl.integrate(r0, r1, |r| {
            let v = v0 + (r - r0) / (r1 - r0) * (v1 - v0);
            v * v * r.powi(power)
        });
    }
    4.0 * PI * total
}
