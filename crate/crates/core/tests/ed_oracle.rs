use competing_exchange::ed::*;
use competing_exchange::lattice::build;
use competing_exchange::model::{energy_competition, SystemSize};
use competing_exchange::{Boundary, Couplings, Error, LatticeGraph, LatticeSpec};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring(n: usize) -> LatticeGraph {
    build(&LatticeSpec::ring(n)).unwrap()
}

fn pair() -> LatticeGraph {
    LatticeGraph::from_bonds(2, vec![(0, 1)]).unwrap()
}

fn c(a1: f64, a2: f64) -> Couplings {
    Couplings::new(a1, a2).unwrap()
}

fn graphs() -> Vec<LatticeGraph> {
    vec![
        pair(),
        ring(3),
        ring(4),
        ring(5),
        ring(6),
        build(&LatticeSpec::chain(5, Boundary::Open)).unwrap(),
        build(&LatticeSpec::square(2, 3, Boundary::Open)).unwrap(),
        build(&LatticeSpec::square(2, 4, Boundary::Periodic)).unwrap(),
    ]
}

/// Dense `-2 J sum s_i . s_j` assembled from spin matrices in the
/// (down, up) single-site basis. `s_y s_y` is real: `s_y = (i/2) A` with
/// `A = [[0, -1], [1, 0]]`, so `s_y^i s_y^j = -(1/4) A_i A_j`.
fn pauli_hamiltonian(g: &LatticeGraph, coupling: f64) -> DMatrix<f64> {
    let sx = [[0.0, 0.5], [0.5, 0.0]];
    let ay = [[0.0, -1.0], [1.0, 0.0]];
    let sz = [[-0.5, 0.0], [0.0, 0.5]];
    let n = g.n_sites;
    let dim = 1usize << n;
    let bit = |x: usize, k: usize| (x >> k) & 1;
    let mut h = DMatrix::zeros(dim, dim);
    for &(i, j) in &g.bonds {
        for x in 0..dim {
            for y in 0..dim {
                let spectators = (0..n).filter(|&k| k != i && k != j).all(|k| bit(x, k) == bit(y, k));
                if !spectators {
                    continue;
                }
                let (xi, yi, xj, yj) = (bit(x, i), bit(y, i), bit(x, j), bit(y, j));
                let ss = sx[xi][yi] * sx[xj][yj] - 0.25 * ay[xi][yi] * ay[xj][yj] + sz[xi][yi] * sz[xj][yj];
                h[(x, y)] += -2.0 * coupling * ss;
            }
        }
    }
    h
}

#[test]
fn sparse_build_matches_spin_matrix_construction() {
    for g in graphs() {
        for coupling in [1.0, -1.3, 0.7] {
            let h = build_hamiltonian(&g, coupling).unwrap();
            let diff = (h.to_dense() - pauli_hamiltonian(&g, coupling)).amax();
            assert!(diff < 1e-14, "n = {}, J = {coupling}: {diff}", g.n_sites);
        }
    }
}

#[test]
fn two_spin_spectrum_matches_total_spin_oracle() {
    // s1.s2 = (S(S+1) - 3/2) / 2: triplet 1/4, singlet -3/4
    for a in [1.0, -1.0, 0.37] {
        let r = ground_state(&build_hamiltonian(&pair(), a).unwrap(), Method::Dense).unwrap();
        let mut expected = vec![-2.0 * a * 0.25; 3];
        expected.push(-2.0 * a * -0.75);
        expected.sort_by(f64::total_cmp);
        for (x, y) in r.eigenvalues.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-10, "A = {a}: {:?}", r.eigenvalues);
        }
    }
    let r = ground_state(&build_hamiltonian(&pair(), -1.0).unwrap(), Method::Dense).unwrap();
    assert_eq!(r.degeneracy, Some(1));
}

#[test]
fn hamiltonians_are_hermitian_and_conserve_spin() {
    let mut graphs = graphs();
    graphs.extend([ring(7), ring(8), build(&LatticeSpec::square(2, 4, Boundary::Open)).unwrap()]);
    for g in graphs {
        let s2 = total_spin_squared(g.n_sites).unwrap();
        for coupling in [1.0, -0.83] {
            let h = build_hamiltonian(&g, coupling).unwrap();
            assert!(h.is_symmetric());
            assert!(sz_commutator_max_abs(&h) <= 1e-12);
            assert!(commutator_max_abs(&h, &s2).unwrap() <= 1e-12, "n = {}", g.n_sites);
        }
    }
}

#[test]
fn total_spin_squared_has_the_right_spectrum() {
    // n = 4: S = 2 (x5), S = 1 (x9), S = 0 (x2)
    let r = ground_state(&total_spin_squared(4).unwrap(), Method::Dense).unwrap();
    let count = |v: f64| r.eigenvalues.iter().filter(|&&x| (x - v).abs() < 1e-10).count();
    assert_eq!((count(6.0), count(2.0), count(0.0)), (5, 9, 2));
}

/// Couplings on a 2^-10 lattice, so every sum and product below is exact.
fn dyadic(rng: &mut ChaCha8Rng) -> Couplings {
    let a1 = rng.random_range(0..4096) as f64 / 1024.0;
    let a2 = -(rng.random_range(0..4096) as f64) / 1024.0;
    c(a1, a2)
}

#[test]
fn split_hamiltonians_sum_to_the_combined_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2, 4, 6, 8] {
        let g = ring(n);
        for _ in 0..20 {
            let cp = dyadic(&mut rng);
            let (h1, h2) = build_split_hamiltonians(&g, &cp).unwrap();
            let h = build_hamiltonian(&g, cp.combined()).unwrap();
            assert_eq!(operator_identity_report(&h1, &h2, &h).unwrap(), 0.0, "{cp:?}");
        }
    }
    let (h1, h2) = build_split_hamiltonians(&pair(), &c(1.0, -1.0)).unwrap();
    let zero = build_hamiltonian(&pair(), 0.0).unwrap();
    assert_eq!(operator_identity_report(&h1, &h2, &zero).unwrap(), 0.0);
    assert!(h1.add(&h2).unwrap().entries().all(|e| e.value == 0.0));
    let (h1, h2) = build_split_hamiltonians(&ring(4), &c(3.0, -1.0)).unwrap();
    let h = build_hamiltonian(&ring(4), 2.0).unwrap();
    assert_eq!(operator_identity_report(&h1, &h2, &h).unwrap(), 0.0);
}

#[test]
fn decimal_couplings_agree_to_rounding() {
    // 1.7 and 0.6 are not representable; the sum differs only by rounding
    let g = ring(6);
    let (h1, h2) = build_split_hamiltonians(&g, &c(1.7, -0.6)).unwrap();
    let h = build_hamiltonian(&g, 1.1).unwrap();
    let dev = operator_identity_report(&h1, &h2, &h).unwrap();
    assert!(dev <= 4.0 * f64::EPSILON * h.norm_inf(), "{dev}");
}

#[test]
fn split_scaling() {
    let g = ring(4);
    let (h1, _) = build_split_hamiltonians(&g, &c(2.0, -1.0)).unwrap();
    let e1 = ground_state(&h1, Method::Dense).unwrap().eigenvalues;
    let e = ground_state(&build_hamiltonian(&g, 1.0).unwrap(), Method::Dense).unwrap().eigenvalues;
    for (x, y) in e1.iter().zip(&e) {
        assert!((x - 2.0 * y).abs() < 1e-12);
    }
    let h3 = build_hamiltonian(&ring(3), 1.0).unwrap();
    assert!(matches!(
        operator_identity_report(&h1, &h1, &h3),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn ferro_state_is_an_exact_eigenstate() {
    for g in graphs() {
        let v = ferro_state(&g).unwrap();
        for coupling in [1.0, -1.0, 0.3, -2.7] {
            let h = build_hamiltonian(&g, coupling).unwrap();
            assert!(eigen_residual(&h, &v).unwrap() <= 1e-12);
            let e = expectation(&h, &v).unwrap();
            assert!((e + 0.5 * coupling * g.bonds.len() as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn neel_state_is_not_an_eigenstate() {
    for n in [4, 6, 8] {
        let g = ring(n);
        let h = build_hamiltonian(&g, -1.0).unwrap();
        let v = neel_state(&g).unwrap();
        let r = eigen_residual(&h, &v).unwrap();
        // each bond flips the pair with amplitude J, giving sqrt(n) |J|
        assert!((r - (n as f64).sqrt()).abs() < 1e-12, "n = {n}: {r}");
        assert!(r > 0.1 * h.norm_inf() / h.dimension() as f64);
        assert!((expectation(&h, &v).unwrap() + 0.5 * n as f64).abs() < 1e-12);
    }
}

#[test]
fn variational_bound_holds_for_the_superposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [4, 6, 8] {
        let g = ring(n);
        for _ in 0..5 {
            let cp = c(rng.random_range(0.0..3.0), -rng.random_range(0.0..3.0));
            let h = build_hamiltonian(&g, cp.combined()).unwrap();
            let e0 = ground_state(&h, Method::Dense).unwrap().ground_energy;
            let x = paper_state(&g, &cp).unwrap();
            assert!(e0 <= expectation(&h, &x).unwrap() + 1e-12);
        }
    }
}

#[test]
fn sectors_reproduce_the_full_ground_energy() {
    for g in [ring(4), ring(5), ring(6), ring(8), build(&LatticeSpec::square(2, 3, Boundary::Periodic)).unwrap()] {
        for coupling in [1.0, -1.0] {
            let full = ground_state(&build_hamiltonian(&g, coupling).unwrap(), Method::Dense).unwrap();
            let sectors = sector_ground_energies(&g, coupling).unwrap();
            let min = sectors.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            assert!((full.ground_energy - min).abs() < 1e-10);
            let dims: usize = (0..=g.n_sites).map(|k| SpinBasis::sector(g.n_sites, k).unwrap().dimension()).sum();
            assert_eq!(dims, 1 << g.n_sites);
        }
    }
}

#[test]
fn dense_and_iterative_agree_on_ring_ten() {
    let h = build_hamiltonian(&ring(10), -1.0).unwrap();
    let d = ground_state(&h, Method::Dense).unwrap();
    let l = ground_state(&h, Method::Iterative).unwrap();
    assert!((d.ground_energy - l.ground_energy).abs() < 1e-8);
    assert!(l.residual <= RESIDUAL_TOL * l.norm_inf);
    // Bethe-ansatz oracle for the n = 10 Heisenberg ring: E0 = -4.515446354 in J s.s units
    assert!((d.ground_energy / 2.0 + 4.515_446_354).abs() < 1e-8);
}

#[test]
fn spectrum_invariants() {
    let h = build_hamiltonian(&ring(6), -0.9).unwrap();
    let r = ground_state(&h, Method::Dense).unwrap();
    assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!((competing_exchange::numeric::norm(&r.ground_vector) - 1.0).abs() < 1e-12);
    assert!(r.residual <= RESIDUAL_TOL * r.norm_inf);
    assert!((expectation(&h, &r.ground_vector).unwrap() - r.ground_energy).abs() < 1e-10);
}

#[test]
fn dense_eigenvalues_match_an_independent_solver() {
    let g = build(&LatticeSpec::square(2, 3, Boundary::Open)).unwrap();
    let dense = pauli_hamiltonian(&g, 0.8);
    let mut oracle: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    oracle.sort_by(f64::total_cmp);
    let r = ground_state(&build_hamiltonian(&g, 0.8).unwrap(), Method::Dense).unwrap();
    for (x, y) in r.eigenvalues.iter().zip(&oracle) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn state_examples() {
    let g = ring(4);
    let x = paper_state(&g, &c(1.0, -1.0)).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // |up up up up> = index 15, |up down up down> = sites 0 and 2 up = index 5
    assert_eq!(neel_index(&g).unwrap(), 0b0101);
    assert!((x[15] - s).abs() < 1e-15 && (x[5] - s).abs() < 1e-15);
    assert_eq!(paper_state(&g, &c(1.0, 0.0)).unwrap(), ferro_state(&g).unwrap());

    let v = paper_state(&pair(), &c(3.0, -4.0)).unwrap();
    assert!((v[3] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);
    assert!(paper_state(&ring(5), &c(1.0, -1.0)).is_err());
    assert_eq!(paper_state(&g, &c(0.0, 0.0)), Err(Error::DegenerateCouplings));

    let f = ferro_state(&g).unwrap();
    let n = neel_state(&g).unwrap();
    assert_eq!(overlap(&f, &f).unwrap(), 1.0);
    assert_eq!(overlap(&f, &n).unwrap(), 0.0);
    assert!((overlap(&x, &f).unwrap() - 0.5).abs() < 1e-15);
    assert!(overlap(&f, &[1.0]).is_err());
    assert!(expectation(&build_hamiltonian(&g, 1.0).unwrap(), &[0.0; 16]).is_err());
}

#[test]
fn correlator_examples() {
    let g = ring(4);
    let f = bond_correlators(&ferro_state(&g).unwrap(), &g).unwrap();
    assert!(f.bonds.iter().all(|b| b.value == 0.25));
    assert_eq!(f.parallel_fraction, 1.0);
    assert_eq!(f.total_sz, 2.0);
    let n = bond_correlators(&neel_state(&g).unwrap(), &g).unwrap();
    assert!(n.bonds.iter().all(|b| b.value == -0.25));
    assert_eq!(n.parallel_fraction, 0.0);
    let x = bond_correlators(&paper_state(&g, &c(1.0, -1.0)).unwrap(), &g).unwrap();
    assert!(x.bonds.iter().all(|b| b.value.abs() < 1e-15));
    assert_eq!(x.parallel_fraction, 0.0);

    // correlators stay in [-3/4, 1/4] for ground states
    let r = ground_state(&build_hamiltonian(&ring(6), -1.0).unwrap(), Method::Dense).unwrap();
    let k = bond_correlators(&r.ground_vector, &ring(6)).unwrap();
    assert!(k.bonds.iter().all(|b| (-0.75 - 1e-12..=0.25 + 1e-12).contains(&b.value)));
    // singlet
    let s = ground_state(&build_hamiltonian(&pair(), -1.0).unwrap(), Method::Dense).unwrap();
    let p = bond_correlators(&s.ground_vector, &pair()).unwrap();
    assert!((p.bonds[0].value + 0.75).abs() < 1e-12);
}

#[test]
fn convention_reconciles_ferro_energies() {
    let g = ring(4);
    let h = build_hamiltonian(&g, 1.0).unwrap();
    let e = expectation(&h, &ferro_state(&g).unwrap()).unwrap();
    assert_eq!(e, -2.0);
    let paper = convention_rescale(e, Convention::ToPaper);
    assert_eq!(paper, -8.0);
    let model = energy_competition(&c(1.0, 0.0), &SystemSize::new(4, 2).unwrap()).unwrap();
    assert_eq!(paper, model);
    assert_eq!(convention_rescale(0.0, Convention::ToPaper), 0.0);
    let x = -1.234_567_89;
    let back = convention_rescale(convention_rescale(x, Convention::ToPaper), Convention::ToQuantum);
    assert!((back - x).abs() <= 1e-15);
}

#[test]
fn size_limits_are_enforced() {
    let limits = EdLimits {
        max_sites: 6,
        ..EdLimits::default()
    };
    assert!(matches!(
        build_hamiltonian_with(&ring(8), 1.0, &limits),
        Err(Error::SizeLimit { .. })
    ));
}

#[test]
fn coordinate_dump() {
    let text = build_hamiltonian(&pair(), 1.0).unwrap().to_coordinate_text();
    assert_eq!(text, "0 0 -0.5\n1 1 0.5\n1 2 -1.0\n2 1 -1.0\n2 2 0.5\n3 3 -0.5\n");
}
