use serde::Serialize;

use competing_exchange::lattice::build;
use competing_exchange::montecarlo::{anneal, AnnealOptions, AnnealResult, Decay, RunResult, Schedule, SpinModel};
use competing_exchange::Couplings;

use crate::cli::{DecayArg, Format, McArgs, ModelArg};
use crate::error::CliResult;
use crate::output::{csv_text, emit, num, resolve, to_json, SCHEMA_VERSION};

pub const CSV_HEADER: [&str; 14] = [
    "row",
    "replica",
    "seed",
    "model",
    "energy_per_site",
    "magnetization",
    "staggered_magnetization",
    "parallel_bond_fraction",
    "acceptance_rate",
    "t_start",
    "t_end",
    "n_steps",
    "decay",
    "sweeps_per_step",
];

#[derive(Debug, Serialize)]
struct Inputs {
    lattice: String,
    a1: f64,
    a2: f64,
    replicas: usize,
    cone_half_angle: f64,
}

#[derive(Debug, Serialize)]
struct McReport<'a> {
    schema: &'static str,
    schema_version: u32,
    inputs: Inputs,
    best: usize,
    replicas: &'a [RunResult],
}

pub fn simulate(args: &McArgs) -> CliResult<AnnealResult> {
    let c = Couplings::new(args.a1, args.a2)?;
    let g = build(&args.lattice.0)?;
    let decay = match args.decay {
        DecayArg::Geometric => Decay::Geometric,
        DecayArg::Linear => Decay::Linear,
    };
    let schedule = Schedule::new(args.t_start, args.t_end, args.n_steps, decay, args.sweeps_per_step)?;
    let opts = AnnealOptions {
        model: match args.model {
            ModelArg::Ising => SpinModel::Ising,
            ModelArg::Vector3 => SpinModel::Vector3,
        },
        replicas: args.replicas,
        seed: args.seed,
        cone_half_angle: args.cone_half_angle,
    };
    Ok(anneal(&g, &c, &schedule, &opts)?)
}

fn row(label: &str, r: &RunResult) -> Vec<String> {
    let s = &r.schedule;
    vec![
        label.to_string(),
        r.replica.to_string(),
        r.seed.to_string(),
        match r.model {
            SpinModel::Ising => "ising",
            SpinModel::Vector3 => "vector3",
        }
        .to_string(),
        num(Some(r.energy_per_site)),
        num(Some(r.magnetization)),
        num(r.staggered_magnetization),
        num(Some(r.parallel_bond_fraction)),
        num(Some(r.acceptance_rate)),
        num(Some(s.t_start)),
        num(Some(s.t_end)),
        s.n_steps.to_string(),
        match s.decay {
            Decay::Geometric => "geometric",
            Decay::Linear => "linear",
        }
        .to_string(),
        s.sweeps_per_step.to_string(),
    ]
}

/// One `replica` row per run, then a `best` row repeating the winner.
pub fn csv(result: &AnnealResult) -> String {
    let mut rows: Vec<Vec<String>> = result.replicas.iter().map(|r| row("replica", r)).collect();
    rows.push(row("best", result.best()));
    csv_text(&CSV_HEADER, &rows)
}

pub fn run(args: &McArgs) -> CliResult<()> {
    let result = simulate(args)?;
    match args.format {
        Format::Csv => emit(&resolve(&args.output.out, "mc.csv"), &csv(&result)),
        Format::Json => {
            let report = McReport {
                schema: "cxch/mc",
                schema_version: SCHEMA_VERSION,
                inputs: Inputs {
                    lattice: args.lattice.to_string(),
                    a1: args.a1,
                    a2: args.a2,
                    replicas: args.replicas,
                    cone_half_angle: args.cone_half_angle,
                },
                best: result.best,
                replicas: &result.replicas,
            };
            emit(&resolve(&args.output.out, "mc.json"), &to_json(&report))
        }
    }
}
