use competing_exchange::model::{classify_phase, energy_competition, energy_conventional, k_factor};
use competing_exchange::{Couplings, PhaseLabel, SystemSize};

use crate::cli::SweepArgs;
use crate::error::{CliError, CliResult};
use crate::output::{csv_text, emit, num, resolve, write_file};
use crate::svg;

pub const HEADER: [&str; 6] = ["a1", "a2", "k", "e_competition", "e_conventional", "phase"];

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub a1: f64,
    pub a2: f64,
    pub k: Option<f64>,
    pub e_competition: Option<f64>,
    pub e_conventional: Option<f64>,
    pub phase: PhaseLabel,
}

/// `steps` points from `lo` to `hi`, both ends exact.
pub fn axis(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

fn validate(args: &SweepArgs) -> CliResult<()> {
    let all = [args.a1_min, args.a1_max, args.a2_min, args.a2_max, args.tolerance];
    if all.iter().any(|x| !x.is_finite()) {
        return Err(CliError::usage("sweep ranges and tolerance must be finite"));
    }
    if args.steps < 2 {
        return Err(CliError::usage(format!("--steps must be >= 2 (got {})", args.steps)));
    }
    if !(0.0 <= args.a1_min && args.a1_min <= args.a1_max) {
        return Err(CliError::usage(format!(
            "a1 range must satisfy 0 <= a1-min <= a1-max (got [{}, {}])",
            args.a1_min, args.a1_max
        )));
    }
    if !(args.a2_min <= args.a2_max && args.a2_max <= 0.0) {
        return Err(CliError::usage(format!(
            "a2 range must satisfy a2-min <= a2-max <= 0 (got [{}, {}])",
            args.a2_min, args.a2_max
        )));
    }
    if args.tolerance < 0.0 {
        return Err(CliError::usage("--tolerance must be >= 0"));
    }
    Ok(())
}

/// Grid points with `a2` in the outer loop and `a1` in the inner one.
pub fn grid(args: &SweepArgs) -> CliResult<Vec<GridPoint>> {
    validate(args)?;
    let size = SystemSize::new(args.n, args.z)?;
    let a1s = axis(args.a1_min, args.a1_max, args.steps);
    let a2s = axis(args.a2_min, args.a2_max, args.steps);
    let mut out = Vec::with_capacity(a1s.len() * a2s.len());
    for &a2 in &a2s {
        for &a1 in &a1s {
            let c = Couplings::new(a1, a2)?;
            let phase = classify_phase(&c, args.tolerance);
            out.push(if c.is_degenerate() {
                GridPoint {
                    a1,
                    a2,
                    k: None,
                    e_competition: None,
                    e_conventional: None,
                    phase,
                }
            } else {
                GridPoint {
                    a1,
                    a2,
                    k: Some(k_factor(&c)?),
                    e_competition: Some(energy_competition(&c, &size)?),
                    e_conventional: Some(energy_conventional(&c, &size)),
                    phase,
                }
            });
        }
    }
    Ok(out)
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let points = grid(args)?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                num(Some(p.a1)),
                num(Some(p.a2)),
                num(p.k),
                num(p.e_competition),
                num(p.e_conventional),
                p.phase.as_str().to_string(),
            ]
        })
        .collect();
    emit(&resolve(&args.output.out, "sweep.csv"), &csv_text(&HEADER, &rows))?;
    if let Some(path) = &args.svg {
        write_file(path, &svg::phase_map(&points, args.steps))?;
    }
    Ok(())
}
