use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::basis::SpinBasis;
use super::EdLimits;
use crate::error::{Error, Result};
use crate::lattice::LatticeGraph;
use crate::model::Couplings;

/// Real-symmetric Heisenberg operator in compressed-row form.
///
/// Each row stores its entries sorted by column. The diagonal is always
/// present (possibly zero).
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    /// Couplings whose bond-sum operators were added to produce this matrix.
    pub couplings: Vec<f64>,
    basis: SpinBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixEntry {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// `H = -2 J sum_bonds (s^z s^z + (s^+ s^- + s^- s^+)/2)` on the full basis.
pub fn build_hamiltonian(g: &LatticeGraph, coupling: f64) -> Result<HamiltonianMatrix> {
    build_hamiltonian_with(g, coupling, &EdLimits::default())
}

pub fn build_hamiltonian_with(
    g: &LatticeGraph,
    coupling: f64,
    limits: &EdLimits,
) -> Result<HamiltonianMatrix> {
    if g.n_sites > limits.max_sites {
        return Err(Error::SizeLimit {
            what: "spin count",
            size: g.n_sites,
            limit: limits.max_sites,
        });
    }
    build_hamiltonian_in(&SpinBasis::full(g.n_sites)?, g, coupling)
}

/// Same operator restricted to `basis` (which must be closed under it).
pub fn build_hamiltonian_in(
    basis: &SpinBasis,
    g: &LatticeGraph,
    coupling: f64,
) -> Result<HamiltonianMatrix> {
    if basis.n_sites() != g.n_sites {
        return Err(Error::DimensionMismatch {
            expected: g.n_sites,
            found: basis.n_sites(),
        });
    }
    if !coupling.is_finite() {
        return Err(Error::InvalidInput(format!("coupling {coupling} is not finite")));
    }
    let masks: Vec<u32> = g.bonds.iter().map(|&(i, j)| (1u32 << i) | (1u32 << j)).collect();
    // s^z s^z = +-1/4  ->  -2 J (+-1/4) = -+J/2 per bond
    // flip term (s^+ s^- + h.c.)/2 has matrix element 1/2  ->  -J
    let off = -coupling;
    let rows: Vec<Vec<(u32, f64)>> = (0..basis.dimension())
        .into_par_iter()
        .map(|row| {
            let state = basis.state(row);
            let mut aligned: i64 = 0;
            let mut entries = Vec::with_capacity(masks.len() + 1);
            for &pair in &masks {
                let bits = state & pair;
                if bits == 0 || bits == pair {
                    aligned += 1;
                } else {
                    aligned -= 1;
                    let flipped = state ^ pair;
                    let col = basis
                        .index_of(flipped)
                        .expect("basis closed under spin exchange");
                    entries.push((col as u32, off));
                }
            }
            entries.push((row as u32, -0.5 * coupling * aligned as f64));
            entries.sort_by_key(|e| e.0);
            merge_duplicates(&mut entries);
            entries
        })
        .collect();
    Ok(HamiltonianMatrix::from_rows(basis.clone(), rows, vec![coupling]))
}

fn merge_duplicates(entries: &mut Vec<(u32, f64)>) {
    entries.dedup_by(|later, earlier| {
        if later.0 == earlier.0 {
            earlier.1 += later.1;
            true
        } else {
            false
        }
    });
}

/// `(H1, H2)` built from `a1` and `a2` over the same bond set.
pub fn build_split_hamiltonians(
    g: &LatticeGraph,
    c: &Couplings,
) -> Result<(HamiltonianMatrix, HamiltonianMatrix)> {
    Ok((build_hamiltonian(g, c.a1())?, build_hamiltonian(g, c.a2())?))
}

/// Largest entrywise `|H1 + H2 - H_combined|`.
pub fn operator_identity_report(
    h1: &HamiltonianMatrix,
    h2: &HamiltonianMatrix,
    combined: &HamiltonianMatrix,
) -> Result<f64> {
    for h in [h2, combined] {
        if h.dim != h1.dim {
            return Err(Error::DimensionMismatch {
                expected: h1.dim,
                found: h.dim,
            });
        }
    }
    let mut worst = 0.0f64;
    let mut row_buf: Vec<(u32, f64, u8)> = Vec::new();
    for row in 0..h1.dim {
        row_buf.clear();
        for (src, h) in [h1, h2, combined].into_iter().enumerate() {
            row_buf.extend(h.row(row).map(|(c, v)| (c, v, src as u8)));
        }
        row_buf.sort_by_key(|e| e.0);
        for group in row_buf.chunk_by(|a, b| a.0 == b.0) {
            let mut sum = 0.0;
            let mut target = 0.0;
            for &(_, v, src) in group {
                if src == 2 {
                    target += v;
                } else {
                    sum += v;
                }
            }
            worst = worst.max((sum - target).abs());
        }
    }
    Ok(worst)
}

impl HamiltonianMatrix {
    fn from_rows(basis: SpinBasis, rows: Vec<Vec<(u32, f64)>>, couplings: Vec<f64>) -> Self {
        let dim = rows.len();
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for r in rows {
            for (c, v) in r {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
            couplings,
            basis,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &SpinBasis {
        &self.basis
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&(col as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = MatrixEntry> + '_ {
        (0..self.dim).flat_map(move |row| {
            self.row(row).map(move |(c, v)| MatrixEntry {
                row,
                col: c as usize,
                value: v,
            })
        })
    }

    /// Exact check `H[i][j] == H[j][i]` plus finiteness.
    pub fn is_symmetric(&self) -> bool {
        self.entries()
            .all(|e| e.value.is_finite() && self.get(e.col, e.row) == e.value)
    }

    /// Maximum absolute row sum; bounds the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `y = H x`; rows are independent, so the result is thread-count invariant.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let body = |(r, yr): (usize, &mut f64)| {
            let mut acc = 0.0;
            for (c, v) in self.row(r) {
                acc += v * x[c as usize];
            }
            *yr = acc;
        };
        if self.dim >= 4096 {
            y.par_iter_mut().enumerate().for_each(body);
        } else {
            y.iter_mut().enumerate().for_each(body);
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in self.entries() {
            m[(e.row, e.col)] += e.value;
        }
        m
    }

    /// Entrywise sum of two operators on the same basis.
    pub fn add(&self, other: &HamiltonianMatrix) -> Result<HamiltonianMatrix> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let rows = (0..self.dim)
            .map(|r| {
                let mut row: Vec<(u32, f64)> = self.row(r).chain(other.row(r)).collect();
                row.sort_by_key(|e| e.0);
                merge_duplicates(&mut row);
                row
            })
            .collect();
        let mut couplings = self.couplings.clone();
        couplings.extend(&other.couplings);
        Ok(Self::from_rows(self.basis.clone(), rows, couplings))
    }

    pub fn shifted(&self, shift: f64) -> HamiltonianMatrix {
        let mut out = self.clone();
        for r in 0..self.dim {
            let range = out.row_ptr[r]..out.row_ptr[r + 1];
            if let Ok(k) = out.cols[range.clone()].binary_search(&(r as u32)) {
                out.vals[range.start + k] += shift;
            }
        }
        out
    }

    /// Coordinate text dump: one `row col value` line per stored entry.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = String::new();
        for e in self.entries() {
            let _ = writeln!(s, "{} {} {:?}", e.row, e.col, e.value);
        }
        s
    }
}

/// `S^2 = 3n/4 + 2 sum_{i<j} s_i . s_j` on the full basis.
pub fn total_spin_squared(n: usize) -> Result<HamiltonianMatrix> {
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let complete = LatticeGraph::from_bonds(n, pairs)?;
    // -2 J s.s with J = -1 gives 2 s.s
    let h = build_hamiltonian_in(&SpinBasis::full(n)?, &complete, -1.0)?;
    Ok(h.shifted(0.75 * n as f64))
}

/// `max |[H, S_z]|`; `S_z` is diagonal in the product basis.
pub fn sz_commutator_max_abs(h: &HamiltonianMatrix) -> f64 {
    let b = h.basis();
    h.entries()
        .map(|e| {
            let dz = (b.twice_sz(b.state(e.col)) - b.twice_sz(b.state(e.row))) as f64 * 0.5;
            (e.value * dz).abs()
        })
        .fold(0.0, f64::max)
}

/// `max |AB - BA|` via dense products; intended for small clusters.
pub fn commutator_max_abs(a: &HamiltonianMatrix, b: &HamiltonianMatrix) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    let (da, db) = (a.to_dense(), b.to_dense());
    let c = &da * &db - &db * &da;
    Ok(c.amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build, LatticeSpec};

    fn pair() -> LatticeGraph {
        LatticeGraph::from_bonds(2, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn two_spin_matrix_elements() {
        let h = build_hamiltonian(&pair(), 1.0).unwrap();
        // |dd>, |du>, |ud>, |uu> with bit set = up
        assert_eq!(h.get(0, 0), -0.5);
        assert_eq!(h.get(3, 3), -0.5);
        assert_eq!(h.get(1, 1), 0.5);
        assert_eq!(h.get(1, 2), -1.0);
        assert_eq!(h.get(2, 1), -1.0);
        assert_eq!(h.get(0, 3), 0.0);
        assert!(h.is_symmetric());
    }

    #[test]
    fn ring4_structure() {
        let g = build(&LatticeSpec::ring(4)).unwrap();
        let h = build_hamiltonian(&g, 1.0).unwrap();
        assert_eq!(h.dimension(), 16);
        assert_eq!(g.bonds.len(), 4);
        assert!(h.is_symmetric());
    }

    #[test]
    fn split_examples() {
        let c = Couplings::new(1.0, -1.0).unwrap();
        let (h1, h2) = build_split_hamiltonians(&pair(), &c).unwrap();
        let sum = h1.add(&h2).unwrap();
        assert_eq!(sum.to_dense().amax(), 0.0);

        let g = build(&LatticeSpec::ring(4)).unwrap();
        let c = Couplings::new(2.0, -1.0).unwrap();
        let (h1, _) = build_split_hamiltonians(&g, &c).unwrap();
        let unit = build_hamiltonian(&g, 1.0).unwrap();
        assert!(h1.entries().all(|e| e.value == 2.0 * unit.get(e.row, e.col)));
    }

    #[test]
    fn identity_report_examples() {
        let g = build(&LatticeSpec::ring(6)).unwrap();
        let c = Couplings::new(3.0, -1.0).unwrap();
        let (h1, h2) = build_split_hamiltonians(&g, &c).unwrap();
        let h = build_hamiltonian(&g, 2.0).unwrap();
        assert_eq!(operator_identity_report(&h1, &h2, &h).unwrap(), 0.0);

        let zero = build_hamiltonian(&pair(), 0.0).unwrap();
        let (h1, h2) = build_split_hamiltonians(&pair(), &Couplings::new(1.0, -1.0).unwrap()).unwrap();
        assert_eq!(operator_identity_report(&h1, &h2, &zero).unwrap(), 0.0);

        assert!(matches!(
            operator_identity_report(&h1, &h2, &build_hamiltonian(&g, 1.0).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn size_limit_is_enforced() {
        let g = build(&LatticeSpec::ring(6)).unwrap();
        let limits = EdLimits {
            max_sites: 4,
            ..EdLimits::default()
        };
        assert!(matches!(
            build_hamiltonian_with(&g, 1.0, &limits),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn spin_squared_two_sites() {
        let s2 = total_spin_squared(2).unwrap().to_dense();
        // triplet states |dd>, |uu> have S(S+1) = 2
        assert!((s2[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((s2[(3, 3)] - 2.0).abs() < 1e-15);
        let eig = s2.symmetric_eigen();
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-14);
        assert!(ev[1..].iter().all(|v| (v - 2.0).abs() < 1e-14));
    }

    #[test]
    fn coordinate_dump_lists_every_entry() {
        let h = build_hamiltonian(&pair(), 1.0).unwrap();
        let text = h.to_coordinate_text();
        assert_eq!(text.lines().count(), h.nnz());
        assert!(text.contains("1 2 -1.0"));
    }
}
