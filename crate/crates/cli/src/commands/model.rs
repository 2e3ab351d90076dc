use serde::Serialize;

use competing_exchange::model::{
    alpha_branches, classify_phase, decompose_state, energy_published_forms, k_factor, pair_probabilities,
    superposition_weights, AlphaBranch, EnergyReport, PairProbabilities, StateDecomposition, SuperpositionWeights,
};
use competing_exchange::{Couplings, Error, PhaseLabel, SystemSize};

use crate::cli::ModelEvalArgs;
use crate::error::CliResult;
use crate::output::{emit, resolve, to_json, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
struct Inputs {
    a1: f64,
    a2: f64,
    n: u64,
    z: u64,
    tolerance: f64,
}

#[derive(Debug, Serialize)]
pub struct ModelRecord {
    schema: &'static str,
    schema_version: u32,
    inputs: Inputs,
    weights: SuperpositionWeights,
    pair_probabilities: PairProbabilities,
    k: f64,
    alpha_branches: [AlphaBranch; 2],
    energies: EnergyReport,
    phase: PhaseLabel,
    /// Absent at the spin-glass point, where no pure component exists.
    decomposition: Option<StateDecomposition>,
}

pub fn evaluate(args: &ModelEvalArgs) -> CliResult<ModelRecord> {
    let c = Couplings::new(args.a1, args.a2)?;
    let size = SystemSize::new(args.n, args.z)?;
    if !(args.tolerance >= 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {} must be >= 0", args.tolerance)).into());
    }
    let weights = superposition_weights(&c)?;
    let k = k_factor(&c)?;
    let decomposition = match decompose_state(&c) {
        Ok(d) => Some(d),
        Err(Error::SpinGlassPoint) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(ModelRecord {
        schema: "cxch/model-eval",
        schema_version: SCHEMA_VERSION,
        inputs: Inputs {
            a1: args.a1,
            a2: args.a2,
            n: args.n,
            z: args.z,
            tolerance: args.tolerance,
        },
        pair_probabilities: pair_probabilities(&weights),
        weights,
        k,
        alpha_branches: alpha_branches(k)?,
        energies: energy_published_forms(&c, &size)?,
        phase: classify_phase(&c, args.tolerance),
        decomposition,
    })
}

pub fn run(args: &ModelEvalArgs) -> CliResult<()> {
    let record = evaluate(args)?;
    emit(&resolve(&args.output.out, "model-eval.json"), &to_json(&record))
}
