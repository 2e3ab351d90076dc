use serde::Serialize;

use competing_exchange::ed::{
    build_hamiltonian, build_split_hamiltonians, convention_rescale, eigen_residual, expectation, ferro_state,
    ground_state_with, neel_state, operator_identity_report, paper_state, Convention, EdLimits, Method,
    SolverOptions,
};
use competing_exchange::lattice::{build, uniform_coordination};
use competing_exchange::model::{energy_competition, energy_conventional};
use competing_exchange::{Couplings, Error, LatticeGraph, SystemSize};

use crate::cli::{EdCompareArgs, SolveMethod};
use crate::error::CliResult;
use crate::output::{emit, resolve, to_json, SCHEMA_VERSION};

pub const CONVENTION_NOTE: &str = "Cluster energies are in quantum units, where an aligned spin-1/2 pair has s.s = +1/4. \
The closed-form model assumes unit alignment, so paper units = 4 x quantum units.";

#[derive(Debug, Serialize)]
pub struct Prediction {
    pub e_competition: f64,
    pub e_conventional: f64,
}

#[derive(Debug, Serialize)]
pub struct PaperPrediction {
    /// `N` sites, `z` uniform coordination.
    pub n: usize,
    pub z: usize,
    pub paper_units: Prediction,
    pub quantum_units: Prediction,
}

#[derive(Debug, Serialize)]
pub struct Inputs {
    pub lattice: String,
    pub a1: f64,
    pub a2: f64,
    pub method: Method,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
pub struct EdRecord {
    pub schema: &'static str,
    pub schema_version: u32,
    pub units: &'static str,
    pub inputs: Inputs,
    pub n_sites: usize,
    pub n_bonds: usize,
    pub dimension: usize,
    pub E0_exact: f64,
    /// Multiplicity of the ground level (dense solver only).
    pub ground_degeneracy: Option<usize>,
    pub ground_residual: f64,
    pub expectation_X: f64,
    pub expectation_ferro: f64,
    pub expectation_neel: f64,
    /// Weight of the trial state in the ground level, summed over its
    /// degenerate vectors when the dense solver resolves them.
    pub overlap_ground_vs_X: f64,
    pub operator_identity_deviation: f64,
    pub ferro_residual: f64,
    pub neel_residual: f64,
    /// Absent when the coordination is not uniform.
    pub paper_energy_prediction: Option<PaperPrediction>,
    pub convention_note: &'static str,
}

pub fn choose_method(requested: SolveMethod, n_sites: usize, limits: &EdLimits) -> Method {
    match requested {
        SolveMethod::Dense => Method::Dense,
        SolveMethod::Iterative => Method::Iterative,
        SolveMethod::Auto if (1usize << n_sites.min(62)) <= limits.dense_max_dim => Method::Dense,
        SolveMethod::Auto => Method::Iterative,
    }
}

fn prediction(g: &LatticeGraph, c: &Couplings) -> CliResult<Option<PaperPrediction>> {
    let z = match uniform_coordination(g) {
        Ok(z) => z,
        Err(Error::NonUniformCoordination { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let size = SystemSize::new(g.n_sites as u64, z as u64)?;
    let paper = Prediction {
        e_competition: energy_competition(c, &size)?,
        e_conventional: energy_conventional(c, &size),
    };
    let quantum = Prediction {
        e_competition: convention_rescale(paper.e_competition, Convention::ToQuantum),
        e_conventional: convention_rescale(paper.e_conventional, Convention::ToQuantum),
    };
    Ok(Some(PaperPrediction {
        n: g.n_sites,
        z,
        paper_units: paper,
        quantum_units: quantum,
    }))
}

pub fn compare(args: &EdCompareArgs) -> CliResult<EdRecord> {
    let c = Couplings::new(args.a1, args.a2)?;
    let g = build(&args.lattice.0)?;
    let opts = SolverOptions {
        seed: args.seed,
        ..SolverOptions::default()
    };
    let h = build_hamiltonian(&g, c.combined())?;
    let x = {
        // size, graph and coupling checks in that order
        neel_state(&g)?;
        paper_state(&g, &c)?
    };
    let method = choose_method(args.method, g.n_sites, &opts.limits);
    let spectrum = ground_state_with(&h, method, &opts)?;
    let (h1, h2) = build_split_hamiltonians(&g, &c)?;
    let ferro = ferro_state(&g)?;
    let neel = neel_state(&g)?;
    Ok(EdRecord {
        schema: "cxch/ed-compare",
        schema_version: SCHEMA_VERSION,
        units: "quantum",
        inputs: Inputs {
            lattice: args.lattice.to_string(),
            a1: args.a1,
            a2: args.a2,
            method,
            seed: args.seed,
        },
        n_sites: g.n_sites,
        n_bonds: g.bonds.len(),
        dimension: h.dimension(),
        E0_exact: spectrum.ground_energy,
        ground_degeneracy: spectrum.degeneracy,
        ground_residual: spectrum.residual,
        expectation_X: expectation(&h, &x)?,
        expectation_ferro: expectation(&h, &ferro)?,
        expectation_neel: expectation(&h, &neel)?,
        overlap_ground_vs_X: spectrum.ground_space_weight(&x)?,
        operator_identity_deviation: operator_identity_report(&h1, &h2, &h)?,
        ferro_residual: eigen_residual(&h, &ferro)?,
        neel_residual: eigen_residual(&h, &neel)?,
        paper_energy_prediction: prediction(&g, &c)?,
        convention_note: CONVENTION_NOTE,
    })
}

pub fn run(args: &EdCompareArgs) -> CliResult<()> {
    let record = compare(args)?;
    emit(&resolve(&args.output.out, "ed-compare.json"), &to_json(&record))
}
