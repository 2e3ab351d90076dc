//! Finite nearest-neighbour interaction graphs.
//!
//! Sites of chains and rings are numbered sequentially; square lattices are
//! row-major (`site = y * width + x`). Bonds are stored as `(i, j)` with
//! `i < j`, sorted and free of duplicates, so dumps are stable.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Chain,
    Ring,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    /// `[length]` for chains and rings, `[width, height]` for squares.
    pub extent: Vec<usize>,
    pub boundary: Boundary,
}

impl LatticeSpec {
    pub fn chain(length: usize, boundary: Boundary) -> Self {
        Self {
            kind: LatticeKind::Chain,
            extent: vec![length],
            boundary,
        }
    }

    pub fn ring(length: usize) -> Self {
        Self {
            kind: LatticeKind::Ring,
            extent: vec![length],
            boundary: Boundary::Periodic,
        }
    }

    pub fn square(width: usize, height: usize, boundary: Boundary) -> Self {
        Self {
            kind: LatticeKind::Square,
            extent: vec![width, height],
            boundary,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let expected = match self.kind {
            LatticeKind::Chain | LatticeKind::Ring => 1,
            LatticeKind::Square => 2,
        };
        if self.extent.len() != expected {
            return Err(Error::InvalidExtent(format!(
                "{:?} needs {expected} extent value(s), got {}",
                self.kind,
                self.extent.len()
            )));
        }
        if let Some(&e) = self.extent.iter().find(|&&e| e < 2) {
            return Err(Error::InvalidExtent(format!(
                "every extent component must be >= 2 (got {e})"
            )));
        }
        if self.kind == LatticeKind::Ring && self.boundary == Boundary::Open {
            return Err(Error::InvalidExtent(
                "a ring is periodic by construction; use an open chain instead".into(),
            ));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.extent.iter().product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeGraph {
    pub n_sites: usize,
    pub bonds: Vec<(usize, usize)>,
    pub z_per_site: Vec<usize>,
    /// Class (0 or 1) of every site when the graph is two-colourable.
    pub bipartition: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Up,
    Down,
}

pub fn build(spec: &LatticeSpec) -> Result<LatticeGraph> {
    spec.validate()?;
    let periodic = spec.boundary == Boundary::Periodic;
    let mut bonds = Vec::new();
    match spec.kind {
        LatticeKind::Chain | LatticeKind::Ring => {
            let n = spec.extent[0];
            for i in 0..n - 1 {
                bonds.push((i, i + 1));
            }
            if periodic {
                bonds.push((0, n - 1));
            }
        }
        LatticeKind::Square => {
            let (w, h) = (spec.extent[0], spec.extent[1]);
            let site = |x: usize, y: usize| y * w + x;
            for y in 0..h {
                for x in 0..w {
                    if x + 1 < w {
                        bonds.push((site(x, y), site(x + 1, y)));
                    } else if periodic {
                        bonds.push((site(x, y), site(0, y)));
                    }
                    if y + 1 < h {
                        bonds.push((site(x, y), site(x, y + 1)));
                    } else if periodic {
                        bonds.push((site(x, y), site(x, 0)));
                    }
                }
            }
        }
    }
    LatticeGraph::from_bonds(spec.n_sites(), bonds)
}

impl LatticeGraph {
    /// Normalizes, deduplicates and validates an arbitrary bond list.
    pub fn from_bonds(n_sites: usize, bonds: Vec<(usize, usize)>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidExtent("graph needs at least one site".into()));
        }
        let mut bonds: Vec<(usize, usize)> = bonds
            .into_iter()
            .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
            .collect();
        if let Some(&(i, j)) = bonds.iter().find(|&&(i, j)| i == j || j >= n_sites) {
            return Err(Error::InvalidInput(format!(
                "bond ({i}, {j}) is a self-loop or out of range for {n_sites} sites"
            )));
        }
        bonds.sort_unstable();
        bonds.dedup();
        let mut z_per_site = vec![0; n_sites];
        for &(i, j) in &bonds {
            z_per_site[i] += 1;
            z_per_site[j] += 1;
        }
        let bipartition = two_colour(n_sites, &bonds);
        Ok(Self {
            n_sites,
            bonds,
            z_per_site,
            bipartition,
        })
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_sites];
        for &(i, j) in &self.bonds {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

fn two_colour(n: usize, bonds: &[(usize, usize)]) -> Option<Vec<u8>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in bonds {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut colour: Vec<Option<u8>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(0);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(1 - cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    colour.into_iter().collect()
}

/// The common coordination number, if every site has the same one.
pub fn uniform_coordination(g: &LatticeGraph) -> Result<usize> {
    let min = g.z_per_site.iter().copied().min().unwrap_or(0);
    let max = g.z_per_site.iter().copied().max().unwrap_or(0);
    if min != max {
        return Err(Error::NonUniformCoordination { min, max });
    }
    Ok(min)
}

/// Up on class 0, down on class 1.
pub fn neel_assignment(g: &LatticeGraph) -> Result<Vec<Orientation>> {
    let classes = g.bipartition.as_ref().ok_or(Error::NotBipartite)?;
    Ok(classes
        .iter()
        .map(|&c| if c == 0 { Orientation::Up } else { Orientation::Down })
        .collect())
}
