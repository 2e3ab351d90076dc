//! Classical Metropolis simulation at unit spin length (`sigma_i . sigma_j = +-1`
//! for aligned / opposed neighbours).
//!
//! Random numbers come from ChaCha8 (`rand_chacha`); replica `r` of seed `s`
//! uses stream `r` of `ChaCha8Rng::seed_from_u64(s)`. Uniforms are
//! `Rng::random::<f64>()` in `[0, 1)`. The draw sequence is fixed:
//!
//! - random start: Ising one uniform per site (`u < 0.5` is up); vector
//!   two per site (`cos theta = 2u - 1`, `phi = 2 pi v`);
//! - sweep: sites in index order; Ising draws one uniform for acceptance,
//!   vector draws two for the cone proposal then one for acceptance;
//! - a move is accepted when `dE <= 0` or `u < exp(-dE / T)`. The
//!   acceptance uniform is drawn even for downhill moves.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeGraph;
use crate::model::Couplings;

pub const DEFAULT_CONE_HALF_ANGLE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinModel {
    Ising,
    Vector3,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpinConfig {
    Ising(Vec<i8>),
    Vector3(Vec<[f64; 3]>),
}

impl SpinConfig {
    pub fn aligned(model: SpinModel, n: usize) -> Self {
        match model {
            SpinModel::Ising => Self::Ising(vec![1; n]),
            SpinModel::Vector3 => Self::Vector3(vec![[0.0, 0.0, 1.0]; n]),
        }
    }

    /// Up on bipartition class 0, down on class 1.
    pub fn neel(model: SpinModel, g: &LatticeGraph) -> Result<Self> {
        let classes = g.bipartition.as_ref().ok_or(Error::NotBipartite)?;
        Ok(match model {
            SpinModel::Ising => Self::Ising(classes.iter().map(|&c| if c == 0 { 1 } else { -1 }).collect()),
            SpinModel::Vector3 => Self::Vector3(
                classes
                    .iter()
                    .map(|&c| [0.0, 0.0, if c == 0 { 1.0 } else { -1.0 }])
                    .collect(),
            ),
        })
    }

    pub fn random(model: SpinModel, n: usize, rng: &mut ChaCha8Rng) -> Self {
        match model {
            SpinModel::Ising => Self::Ising(
                (0..n)
                    .map(|_| if rng.random::<f64>() < 0.5 { 1 } else { -1 })
                    .collect(),
            ),
            SpinModel::Vector3 => Self::Vector3(
                (0..n)
                    .map(|_| {
                        let cos_t = 2.0 * rng.random::<f64>() - 1.0;
                        let phi = 2.0 * PI * rng.random::<f64>();
                        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                        [sin_t * phi.cos(), sin_t * phi.sin(), cos_t]
                    })
                    .collect(),
            ),
        }
    }

    pub fn model(&self) -> SpinModel {
        match self {
            Self::Ising(_) => SpinModel::Ising,
            Self::Vector3(_) => SpinModel::Vector3,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Ising(s) => s.len(),
            Self::Vector3(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Spin `i` as a 3-vector (Ising spins point along `z`).
    pub fn vector(&self, i: usize) -> [f64; 3] {
        match self {
            Self::Ising(s) => [0.0, 0.0, s[i] as f64],
            Self::Vector3(s) => s[i],
        }
    }

    pub fn dot(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::Ising(s) => (s[i] * s[j]) as f64,
            Self::Vector3(s) => dot3(&s[i], &s[j]),
        }
    }

    fn check(&self, g: &LatticeGraph) -> Result<()> {
        if self.len() != g.n_sites {
            return Err(Error::DimensionMismatch {
                expected: g.n_sites,
                found: self.len(),
            });
        }
        Ok(())
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decay {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub t_start: f64,
    pub t_end: f64,
    pub n_steps: usize,
    pub decay: Decay,
    pub sweeps_per_step: usize,
}

impl Schedule {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize, decay: Decay, sweeps_per_step: usize) -> Result<Self> {
        let s = Self {
            t_start,
            t_end,
            n_steps,
            decay,
            sweeps_per_step,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_start >= self.t_end && self.t_start.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "schedule needs t_start >= t_end > 0 (got {} -> {})",
                self.t_start, self.t_end
            )));
        }
        if self.n_steps == 0 || self.sweeps_per_step == 0 {
            return Err(Error::InvalidInput("schedule counts must be >= 1".into()));
        }
        Ok(())
    }

    /// Temperature of step `s`; the last step sits at `t_end`.
    pub fn temperature(&self, s: usize) -> f64 {
        if self.n_steps == 1 {
            return self.t_end;
        }
        let x = s as f64 / (self.n_steps - 1) as f64;
        match self.decay {
            Decay::Geometric => self.t_start * (self.t_end / self.t_start).powf(x),
            Decay::Linear => self.t_start + (self.t_end - self.t_start) * x,
        }
    }
}

impl Default for Schedule {
    /// Geometric 5 -> 0.01 over 100 steps of 20 sweeps.
    fn default() -> Self {
        Self {
            t_start: 5.0,
            t_end: 0.01,
            n_steps: 100,
            decay: Decay::Geometric,
            sweeps_per_step: 20,
        }
    }
}

/// `E = -2 a1 S - 2 a2 S` with `S = sum_bonds sigma_i . sigma_j`.
pub fn energy(config: &SpinConfig, g: &LatticeGraph, c: &Couplings) -> Result<f64> {
    config.check(g)?;
    let s = bond_sum(config, g);
    Ok(-2.0 * c.a1() * s - 2.0 * c.a2() * s)
}

fn bond_sum(config: &SpinConfig, g: &LatticeGraph) -> f64 {
    g.bonds.iter().map(|&(i, j)| config.dot(i, j)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub magnetization: f64,
    /// Absent when the graph has no bipartition.
    pub staggered_magnetization: Option<f64>,
    pub parallel_bond_fraction: f64,
}

pub fn observables(config: &SpinConfig, g: &LatticeGraph) -> Result<Observables> {
    config.check(g)?;
    let n = config.len() as f64;
    let mut m = [0.0; 3];
    for i in 0..config.len() {
        let v = config.vector(i);
        for k in 0..3 {
            m[k] += v[k];
        }
    }
    let parallel = g.bonds.iter().filter(|&&(i, j)| config.dot(i, j) > 0.0).count();
    Ok(Observables {
        magnetization: dot3(&m, &m).sqrt() / n,
        staggered_magnetization: staggered_magnetization(config, g).ok(),
        parallel_bond_fraction: if g.bonds.is_empty() {
            0.0
        } else {
            parallel as f64 / g.bonds.len() as f64
        },
    })
}

/// `|sum_i eps_i sigma_i| / n` with `eps = +1` on class 0 and `-1` on class 1.
pub fn staggered_magnetization(config: &SpinConfig, g: &LatticeGraph) -> Result<f64> {
    config.check(g)?;
    let classes = g.bipartition.as_ref().ok_or(Error::NotBipartite)?;
    let mut m = [0.0; 3];
    for (i, &c) in classes.iter().enumerate() {
        let eps = if c == 0 { 1.0 } else { -1.0 };
        let v = config.vector(i);
        for k in 0..3 {
            m[k] += eps * v[k];
        }
    }
    Ok(dot3(&m, &m).sqrt() / config.len() as f64)
}

/// Per-run state shared by the sweeps: adjacency and proposal settings.
#[derive(Debug, Clone)]
pub struct Metropolis {
    neighbours: Vec<Vec<usize>>,
    /// `-2 (a1 + a2)`, evaluated as `-2 a1 - 2 a2`.
    bond_energy: f64,
    cone_cos: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepStats {
    pub accepted: usize,
    pub proposed: usize,
    /// Sum of accepted energy changes.
    pub delta_energy: f64,
}

impl Metropolis {
    pub fn new(g: &LatticeGraph, c: &Couplings) -> Self {
        Self::with_cone(g, c, DEFAULT_CONE_HALF_ANGLE).expect("default cone angle is valid")
    }

    /// Vector moves rotate a spin uniformly within a cone of `half_angle`
    /// radians around its current direction.
    pub fn with_cone(g: &LatticeGraph, c: &Couplings, half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle <= PI) {
            return Err(Error::Domain {
                what: "cone half-angle",
                value: half_angle,
            });
        }
        Ok(Self {
            neighbours: g.neighbours(),
            bond_energy: -2.0 * c.a1() - 2.0 * c.a2(),
            cone_cos: half_angle.cos(),
        })
    }

    /// One sequential sweep over all sites.
    pub fn sweep(&self, config: &mut SpinConfig, temperature: f64, rng: &mut ChaCha8Rng) -> SweepStats {
        let beta = 1.0 / temperature;
        let mut stats = SweepStats {
            proposed: config.len(),
            ..SweepStats::default()
        };
        match config {
            SpinConfig::Ising(s) => {
                for i in 0..s.len() {
                    let h: i32 = self.neighbours[i].iter().map(|&j| s[j] as i32).sum();
                    // flipping sigma_i changes the bond sum by -2 sigma_i h
                    let de = self.bond_energy * (-2 * s[i] as i32 * h) as f64;
                    let u: f64 = rng.random();
                    if de <= 0.0 || u < (-de * beta).exp() {
                        s[i] = -s[i];
                        stats.accepted += 1;
                        stats.delta_energy += de;
                    }
                }
            }
            SpinConfig::Vector3(s) => {
                for i in 0..s.len() {
                    let u1: f64 = rng.random();
                    let u2: f64 = rng.random();
                    let proposal = cone_rotation(&s[i], self.cone_cos, u1, u2);
                    let mut h = [0.0; 3];
                    for &j in &self.neighbours[i] {
                        for k in 0..3 {
                            h[k] += s[j][k];
                        }
                    }
                    let de = self.bond_energy * (dot3(&proposal, &h) - dot3(&s[i], &h));
                    let u: f64 = rng.random();
                    if de <= 0.0 || u < (-de * beta).exp() {
                        s[i] = proposal;
                        stats.accepted += 1;
                        stats.delta_energy += de;
                    }
                }
            }
        }
        stats
    }
}

/// Uniform point on the spherical cap `angle(v, s) <= acos(cone_cos)`.
fn cone_rotation(s: &[f64; 3], cone_cos: f64, u1: f64, u2: f64) -> [f64; 3] {
    let cos_t = 1.0 - u1 * (1.0 - cone_cos);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let phi = 2.0 * PI * u2;
    // orthonormal frame (e1, e2, s)
    let helper = if s[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let mut e1 = cross(&helper, s);
    let n1 = dot3(&e1, &e1).sqrt();
    for x in &mut e1 {
        *x /= n1;
    }
    let e2 = cross(s, &e1);
    let mut v = [0.0; 3];
    for k in 0..3 {
        v[k] = cos_t * s[k] + sin_t * (phi.cos() * e1[k] + phi.sin() * e2[k]);
    }
    let nv = dot3(&v, &v).sqrt();
    [v[0] / nv, v[1] / nv, v[2] / nv]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Free-function form of [`Metropolis::sweep`].
pub fn metropolis_sweep(
    config: &mut SpinConfig,
    g: &LatticeGraph,
    c: &Couplings,
    temperature: f64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepStats> {
    config.check(g)?;
    if !(temperature > 0.0) {
        return Err(Error::Domain {
            what: "temperature",
            value: temperature,
        });
    }
    Ok(Metropolis::new(g, c).sweep(config, temperature, rng))
}

/// Generator of replica `replica` for `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub replica: usize,
    pub seed: u64,
    pub model: SpinModel,
    /// Averages over the sweeps of the final schedule step.
    pub energy_per_site: f64,
    pub magnetization: f64,
    pub staggered_magnetization: Option<f64>,
    pub parallel_bond_fraction: f64,
    /// Accepted / proposed over the whole run.
    pub acceptance_rate: f64,
    pub schedule: Schedule,
    #[serde(skip)]
    pub final_config: SpinConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnealResult {
    /// Index into `replicas` of the lowest-energy run (first on ties).
    pub best: usize,
    pub replicas: Vec<RunResult>,
}

impl AnnealResult {
    pub fn best(&self) -> &RunResult {
        &self.replicas[self.best]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealOptions {
    pub model: SpinModel,
    pub replicas: usize,
    pub seed: u64,
    pub cone_half_angle: f64,
}

impl Default for AnnealOptions {
    fn default() -> Self {
        Self {
            model: SpinModel::Ising,
            replicas: 8,
            seed: 0,
            cone_half_angle: DEFAULT_CONE_HALF_ANGLE,
        }
    }
}

/// Independent annealing runs from random starts, one per replica.
pub fn anneal(g: &LatticeGraph, c: &Couplings, schedule: &Schedule, opts: &AnnealOptions) -> Result<AnnealResult> {
    schedule.validate()?;
    if opts.replicas == 0 {
        return Err(Error::InvalidInput("replica count must be >= 1".into()));
    }
    if g.n_sites == 0 {
        return Err(Error::InvalidInput("graph has no sites".into()));
    }
    let kernel = Metropolis::with_cone(g, c, opts.cone_half_angle)?;
    let replicas: Vec<RunResult> = (0..opts.replicas)
        .into_par_iter()
        .map(|r| run_replica(g, c, schedule, opts, &kernel, r))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in replicas.iter().enumerate() {
        if r.energy_per_site < replicas[best].energy_per_site {
            best = i;
        }
    }
    Ok(AnnealResult { best, replicas })
}

fn run_replica(
    g: &LatticeGraph,
    c: &Couplings,
    schedule: &Schedule,
    opts: &AnnealOptions,
    kernel: &Metropolis,
    replica: usize,
) -> Result<RunResult> {
    let mut rng = replica_rng(opts.seed, replica as u64);
    let mut config = SpinConfig::random(opts.model, g.n_sites, &mut rng);
    let (mut accepted, mut proposed) = (0usize, 0usize);
    let n = g.n_sites as f64;
    let (mut e_acc, mut m_acc, mut ms_acc, mut p_acc) = (0.0, 0.0, 0.0, 0.0);
    let bipartite = g.bipartition.is_some();
    for step in 0..schedule.n_steps {
        let t = schedule.temperature(step);
        let last = step + 1 == schedule.n_steps;
        for _ in 0..schedule.sweeps_per_step {
            let s = kernel.sweep(&mut config, t, &mut rng);
            accepted += s.accepted;
            proposed += s.proposed;
            if last {
                let o = observables(&config, g)?;
                e_acc += energy(&config, g, c)? / n;
                m_acc += o.magnetization;
                ms_acc += o.staggered_magnetization.unwrap_or(0.0);
                p_acc += o.parallel_bond_fraction;
            }
        }
    }
    let k = schedule.sweeps_per_step as f64;
    Ok(RunResult {
        replica,
        seed: opts.seed,
        model: opts.model,
        energy_per_site: e_acc / k,
        magnetization: m_acc / k,
        staggered_magnetization: bipartite.then_some(ms_acc / k),
        parallel_bond_fraction: p_acc / k,
        acceptance_rate: accepted as f64 / proposed as f64,
        schedule: *schedule,
        final_config: config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build, Boundary, LatticeSpec};

    fn square4() -> LatticeGraph {
        build(&LatticeSpec::square(4, 4, Boundary::Periodic)).unwrap()
    }

    fn cp(a1: f64, a2: f64) -> Couplings {
        Couplings::new(a1, a2).unwrap()
    }

    #[test]
    fn energy_examples() {
        let g = square4();
        let up = SpinConfig::aligned(SpinModel::Ising, 16);
        assert_eq!(energy(&up, &g, &cp(1.0, 0.0)).unwrap() / 16.0, -4.0);
        let ring = build(&LatticeSpec::ring(4)).unwrap();
        let neel = SpinConfig::neel(SpinModel::Ising, &ring).unwrap();
        assert_eq!(energy(&neel, &ring, &cp(0.0, -1.0)).unwrap() / 4.0, -2.0);
        let mut rng = replica_rng(3, 0);
        for model in [SpinModel::Ising, SpinModel::Vector3] {
            let x = SpinConfig::random(model, 16, &mut rng);
            assert_eq!(energy(&x, &g, &cp(1.0, -1.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn observables_examples() {
        let ring = build(&LatticeSpec::ring(4)).unwrap();
        let up = SpinConfig::aligned(SpinModel::Vector3, 4);
        let o = observables(&up, &ring).unwrap();
        assert_eq!((o.magnetization, o.parallel_bond_fraction), (1.0, 1.0));
        let neel = SpinConfig::neel(SpinModel::Ising, &ring).unwrap();
        let o = observables(&neel, &ring).unwrap();
        assert_eq!(o.magnetization, 0.0);
        assert_eq!(o.staggered_magnetization, Some(1.0));
        assert_eq!(o.parallel_bond_fraction, 0.0);

        let odd = build(&LatticeSpec::ring(5)).unwrap();
        let x = SpinConfig::aligned(SpinModel::Ising, 5);
        assert_eq!(staggered_magnetization(&x, &odd), Err(Error::NotBipartite));
        assert_eq!(observables(&x, &odd).unwrap().staggered_magnetization, None);
    }

    #[test]
    fn random_config_has_half_parallel_bonds() {
        let g = build(&LatticeSpec::square(10, 10, Boundary::Periodic)).unwrap();
        let mut rng = replica_rng(17, 0);
        for model in [SpinModel::Ising, SpinModel::Vector3] {
            let x = SpinConfig::random(model, g.n_sites, &mut rng);
            let f = observables(&x, &g).unwrap().parallel_bond_fraction;
            assert!((f - 0.5).abs() < 0.1, "{model:?}: {f}");
        }
    }

    #[test]
    fn cone_moves_stay_on_the_sphere_within_the_cone() {
        let mut rng = replica_rng(5, 0);
        let cone_cos = 0.5_f64.cos();
        for _ in 0..1000 {
            let s = match SpinConfig::random(SpinModel::Vector3, 1, &mut rng) {
                SpinConfig::Vector3(v) => v[0],
                _ => unreachable!(),
            };
            let v = cone_rotation(&s, cone_cos, rng.random(), rng.random());
            assert!((dot3(&v, &v) - 1.0).abs() < 1e-12);
            assert!(dot3(&v, &s) >= cone_cos - 1e-12);
        }
    }

    #[test]
    fn hot_sweeps_accept_almost_everything() {
        let g = square4();
        let c = cp(1.0, 0.0);
        for model in [SpinModel::Ising, SpinModel::Vector3] {
            let mut rng = replica_rng(1, 0);
            let mut x = SpinConfig::random(model, 16, &mut rng);
            let (mut acc, mut prop) = (0, 0);
            for _ in 0..100 {
                let s = metropolis_sweep(&mut x, &g, &c, 1e4, &mut rng).unwrap();
                acc += s.accepted;
                prop += s.proposed;
            }
            assert!(acc as f64 / prop as f64 > 0.95, "{model:?}");
        }
    }

    #[test]
    fn cold_ferro_sweeps_stay_aligned() {
        let g = square4();
        let c = cp(1.0, 0.0);
        let mut rng = replica_rng(2, 0);
        let mut x = SpinConfig::aligned(SpinModel::Ising, 16);
        let e0 = energy(&x, &g, &c).unwrap();
        let mut acc = 0;
        for _ in 0..100 {
            acc += metropolis_sweep(&mut x, &g, &c, 0.01, &mut rng).unwrap().accepted;
        }
        assert_eq!(acc, 0);
        assert_eq!(energy(&x, &g, &c).unwrap(), e0);
    }

    #[test]
    fn sweeps_are_reproducible() {
        let g = square4();
        let c = cp(1.0, -0.4);
        let kernel = Metropolis::new(&g, &c);
        let run = || {
            let mut rng = replica_rng(9, 2);
            let mut x = SpinConfig::random(SpinModel::Vector3, 16, &mut rng);
            for _ in 0..50 {
                kernel.sweep(&mut x, 0.7, &mut rng);
            }
            x
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Schedule::new(0.1, 1.0, 10, Decay::Linear, 1).is_err());
        assert!(Schedule::new(1.0, 0.0, 10, Decay::Linear, 1).is_err());
        assert!(Schedule::new(1.0, 0.5, 0, Decay::Linear, 1).is_err());
        let g = square4();
        let mut x = SpinConfig::aligned(SpinModel::Ising, 3);
        let mut rng = replica_rng(0, 0);
        assert!(metropolis_sweep(&mut x, &g, &cp(1.0, 0.0), 1.0, &mut rng).is_err());
        let mut y = SpinConfig::aligned(SpinModel::Ising, 16);
        assert!(metropolis_sweep(&mut y, &g, &cp(1.0, 0.0), 0.0, &mut rng).is_err());
    }

    #[test]
    fn schedule_endpoints() {
        for decay in [Decay::Geometric, Decay::Linear] {
            let s = Schedule::new(4.0, 0.5, 5, decay, 1).unwrap();
            assert!((s.temperature(0) - 4.0).abs() < 1e-15);
            assert!((s.temperature(4) - 0.5).abs() < 1e-15);
            assert!(s.temperature(2) < s.temperature(1));
        }
        assert!((Schedule::new(4.0, 0.5, 5, Decay::Geometric, 1).unwrap().temperature(2) - 2f64.sqrt()).abs() < 1e-12);
    }
}
