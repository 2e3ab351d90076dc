use competing_exchange::lattice::build;
use competing_exchange::montecarlo::*;
use competing_exchange::{Boundary, Couplings, LatticeGraph, LatticeSpec};

fn c(a1: f64, a2: f64) -> Couplings {
    Couplings::new(a1, a2).unwrap()
}

fn square4() -> LatticeGraph {
    build(&LatticeSpec::square(4, 4, Boundary::Periodic)).unwrap()
}

fn opts(model: SpinModel, seed: u64) -> AnnealOptions {
    AnnealOptions {
        model,
        seed,
        ..AnnealOptions::default()
    }
}

#[test]
fn ferro_square_orders() {
    let r = anneal(&square4(), &c(1.0, 0.0), &Schedule::default(), &opts(SpinModel::Ising, 1)).unwrap();
    let best = r.best();
    assert!(best.magnetization >= 0.99, "{best:?}");
    assert_eq!(best.parallel_bond_fraction, 1.0);
    assert_eq!(best.energy_per_site, -4.0);
    assert_eq!(r.replicas.len(), 8);
}

#[test]
fn ferro_vector_spins_order() {
    let r = anneal(&square4(), &c(1.0, 0.0), &Schedule::default(), &opts(SpinModel::Vector3, 1)).unwrap();
    assert!(r.best().magnetization >= 0.99, "{:?}", r.best());
}

#[test]
fn antiferro_ring_orders() {
    let g = build(&LatticeSpec::ring(6)).unwrap();
    let r = anneal(&g, &c(0.0, -1.0), &Schedule::default(), &opts(SpinModel::Ising, 2)).unwrap();
    let best = r.best();
    assert!(best.staggered_magnetization.unwrap() >= 0.99);
    assert_eq!(best.parallel_bond_fraction, 0.0);
}

#[test]
fn symmetric_point_has_equal_bond_probabilities() {
    for model in [SpinModel::Ising, SpinModel::Vector3] {
        let r = anneal(&square4(), &c(1.0, -1.0), &Schedule::default(), &opts(model, 3)).unwrap();
        let best = r.best();
        assert_eq!(best.energy_per_site, 0.0);
        assert!((best.parallel_bond_fraction - 0.5).abs() <= 0.1, "{model:?}: {best:?}");
        assert_eq!(best.acceptance_rate, 1.0);
    }
}

#[test]
fn anneal_is_deterministic() {
    let g = square4();
    let s = Schedule::new(3.0, 0.1, 20, Decay::Linear, 5).unwrap();
    for model in [SpinModel::Ising, SpinModel::Vector3] {
        let a = anneal(&g, &c(0.8, -0.3), &s, &opts(model, 42)).unwrap();
        let b = anneal(&g, &c(0.8, -0.3), &s, &opts(model, 42)).unwrap();
        assert_eq!(a, b);
        let other = anneal(&g, &c(0.8, -0.3), &s, &opts(model, 43)).unwrap();
        let rates = |r: &AnnealResult| r.replicas.iter().map(|x| x.acceptance_rate).collect::<Vec<_>>();
        assert_ne!(rates(&a), rates(&other));
    }
}

#[test]
fn tracked_energy_matches_recomputation() {
    let g = square4();
    let cp = c(0.9, -0.4);
    for model in [SpinModel::Ising, SpinModel::Vector3] {
        let kernel = Metropolis::new(&g, &cp);
        let mut rng = replica_rng(8, 0);
        let mut x = SpinConfig::random(model, g.n_sites, &mut rng);
        let mut tracked = energy(&x, &g, &cp).unwrap();
        for sweep in 0..10_000 {
            let t = if sweep % 2 == 0 { 0.5 } else { 2.0 };
            tracked += kernel.sweep(&mut x, t, &mut rng).delta_energy;
        }
        let fresh = energy(&x, &g, &cp).unwrap();
        assert!((tracked - fresh).abs() <= 1e-9, "{model:?}: {tracked} vs {fresh}");
        if let SpinConfig::Vector3(v) = &x {
            assert!(v.iter().all(|s| (s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 1.0).abs() <= 1e-12));
        }
    }
}

/// Frequencies of the four two-spin states against `exp(-E/T) / Z`, with
/// errors from batch means because successive sweeps are correlated.
#[test]
fn two_spin_boltzmann_distribution() {
    let g = LatticeGraph::from_bonds(2, vec![(0, 1)]).unwrap();
    let cp = c(0.3, 0.0);
    let t = 0.8;
    let kernel = Metropolis::new(&g, &cp);
    let mut rng = replica_rng(2024, 0);
    let mut x = SpinConfig::Ising(vec![1, 1]);
    let sweeps = 1_000_000;
    let batches = 1000;
    let per_batch = sweeps / batches;
    let mut batch_freq = vec![[0.0f64; 4]; batches];
    for freq in batch_freq.iter_mut() {
        for _ in 0..per_batch {
            kernel.sweep(&mut x, t, &mut rng);
            let SpinConfig::Ising(s) = &x else { unreachable!() };
            let idx = ((s[0] > 0) as usize) | (((s[1] > 0) as usize) << 1);
            freq[idx] += 1.0 / per_batch as f64;
        }
    }
    // aligned pairs: E = -2 a1; opposed: +2 a1
    let w_al = (2.0 * cp.a1() / t).exp();
    let w_op = (-2.0 * cp.a1() / t).exp();
    let z = 2.0 * w_al + 2.0 * w_op;
    let exact = [w_al / z, w_op / z, w_op / z, w_al / z];
    for k in 0..4 {
        let mean: f64 = batch_freq.iter().map(|f| f[k]).sum::<f64>() / batches as f64;
        let var: f64 = batch_freq.iter().map(|f| (f[k] - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
        let sigma = (var / batches as f64).sqrt();
        // independent draws would give the multinomial value; batch means cannot be smaller in practice
        let multinomial = (exact[k] * (1.0 - exact[k]) / sweeps as f64).sqrt();
        assert!(sigma >= 0.5 * multinomial);
        assert!((mean - exact[k]).abs() <= 3.0 * sigma, "state {k}: {mean} vs {} (sigma {sigma})", exact[k]);
    }
}
