use std::path::Path;

use serde::Serialize;

use competing_exchange::integrals::{
    integral_set, ErrorEstimates, IntegralFlags, PotentialSign, QuadratureConfig, RadialOrbital, TwoCenterGeometry,
};

use crate::cli::{ExchangeScheme, Format, IntegralsArgs, Sign};
use crate::error::{CliError, CliResult, EXIT_MODEL_INPUT};
use crate::output::{csv_text, emit, num, resolve, to_json, SCHEMA_VERSION};

pub const CSV_HEADER: [&str; 16] = [
    "R",
    "Z",
    "s_ab",
    "v_ba",
    "gamma_ab",
    "direct_exchange",
    "a1",
    "a2",
    "j_h",
    "err_s_ab",
    "err_v_ba",
    "err_gamma_ab",
    "err_direct_exchange",
    "err_a2",
    "negative_exchange",
    "positive_a2",
];

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub s_ab: f64,
    pub v_ba: f64,
    pub gamma_ab: f64,
    pub direct_exchange: f64,
    pub a1: f64,
    pub a2: f64,
    pub j_h: f64,
    pub error_estimates: ErrorEstimates,
    pub flags: IntegralFlags,
}

#[derive(Debug, Serialize)]
struct Inputs {
    orbital: OrbitalEcho,
    delta_e: f64,
    potential_sign: PotentialSign,
    one_electron: QuadratureConfig,
    exchange: QuadratureConfig,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum OrbitalEcho {
    Hydrogenic1s { zeta: f64 },
    Tabulated { path: String, points: usize },
}

#[derive(Debug, Serialize)]
pub struct IntegralsReport {
    schema: &'static str,
    schema_version: u32,
    units: &'static str,
    inputs: Inputs,
    pub records: Vec<Record>,
}

/// Whitespace-separated `r value` pairs, `#` comments.
pub fn read_table(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read orbital table {}: {e}", path.display())))?;
    let (mut r, mut v) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: Vec<f64> = body
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::usage(format!("orbital table line {}: not a number", i + 1)))?;
        let [ri, vi] = nums[..] else {
            return Err(CliError::usage(format!("orbital table line {}: expected `r value`", i + 1)));
        };
        r.push(ri);
        v.push(vi);
    }
    Ok((r, v))
}

pub fn compute(args: &IntegralsArgs) -> CliResult<IntegralsReport> {
    let delta_e = args
        .delta_e
        .ok_or_else(|| CliError::new(EXIT_MODEL_INPUT, "model_input", "--delta-e is required (no default)"))?;
    let (orbital, echo) = match &args.orbital_table {
        Some(path) => {
            let (grid, values) = read_table(path)?;
            let points = grid.len();
            (
                RadialOrbital::tabulated(grid, values)?,
                OrbitalEcho::Tabulated {
                    path: path.display().to_string(),
                    points,
                },
            )
        }
        None => (RadialOrbital::hydrogenic_1s(args.zeta)?, OrbitalEcho::Hydrogenic1s { zeta: args.zeta }),
    };
    let one_electron = QuadratureConfig::product_grid(args.resolution).with_max_error(args.one_electron_tolerance);
    let exchange = match args.exchange_scheme {
        ExchangeScheme::MonteCarlo => QuadratureConfig::monte_carlo(args.samples, args.seed),
        ExchangeScheme::ProductGrid => QuadratureConfig::product_grid(args.exchange_resolution),
    }
    .with_max_error(args.tolerance);
    one_electron.validate()?;
    exchange.validate()?;
    let sign = match args.sign {
        Sign::Attractive => PotentialSign::Attractive,
        Sign::Repulsive => PotentialSign::Repulsive,
    };
    if args.r_grid.is_empty() {
        return Err(CliError::usage("--r-grid is empty"));
    }
    let mut records = Vec::with_capacity(args.r_grid.len());
    for &r in &args.r_grid {
        let at_r = |e: competing_exchange::Error| CliError::from(e).with("separation", r);
        let g = TwoCenterGeometry::new(r, args.charge).map_err(at_r)?;
        let set = integral_set(&orbital, &orbital, &g, &one_electron, &exchange, delta_e, sign).map_err(at_r)?;
        records.push(Record {
            r,
            z: args.charge,
            s_ab: set.s_ab,
            v_ba: set.v_ba,
            gamma_ab: set.gamma_ab,
            direct_exchange: set.direct_exchange,
            a1: set.a1,
            a2: set.a2,
            j_h: set.j_h,
            error_estimates: set.error_estimates,
            flags: set.flags,
        });
    }
    Ok(IntegralsReport {
        schema: "cxch/integrals",
        schema_version: SCHEMA_VERSION,
        units: "hartree atomic units",
        inputs: Inputs {
            orbital: echo,
            delta_e,
            potential_sign: sign,
            one_electron,
            exchange,
        },
        records,
    })
}

pub fn csv(records: &[Record]) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|x| {
            let e = &x.error_estimates;
            vec![
                num(Some(x.r)),
                num(Some(x.z)),
                num(Some(x.s_ab)),
                num(Some(x.v_ba)),
                num(Some(x.gamma_ab)),
                num(Some(x.direct_exchange)),
                num(Some(x.a1)),
                num(Some(x.a2)),
                num(Some(x.j_h)),
                num(Some(e.s_ab)),
                num(Some(e.v_ba)),
                num(Some(e.gamma_ab)),
                num(Some(e.direct_exchange)),
                num(Some(e.a2)),
                x.flags.negative_exchange.to_string(),
                x.flags.positive_a2.to_string(),
            ]
        })
        .collect();
    csv_text(&CSV_HEADER, &rows)
}

pub fn run(args: &IntegralsArgs) -> CliResult<()> {
    let report = compute(args)?;
    match args.format {
        Format::Json => emit(&resolve(&args.output.out, "integrals.json"), &to_json(&report)),
        Format::Csv => emit(&resolve(&args.output.out, "integrals.csv"), &csv(&report.records)),
    }
}
