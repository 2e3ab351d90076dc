use crate::error::{Error, Result};

/// Full `2^n` product basis or a fixed-`S_z` sector of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinBasis {
    n: usize,
    /// Strictly increasing state indices; `None` for the full space.
    states: Option<Vec<u32>>,
}

impl SpinBasis {
    pub fn full(n: usize) -> Result<Self> {
        check_sites(n)?;
        Ok(Self { n, states: None })
    }

    /// All states with exactly `n_up` up spins (`2 S_z = 2 n_up - n`).
    pub fn sector(n: usize, n_up: usize) -> Result<Self> {
        check_sites(n)?;
        if n_up > n {
            return Err(Error::InvalidInput(format!("n_up = {n_up} exceeds n = {n}")));
        }
        let states = (0..1u32 << n).filter(|s| s.count_ones() as usize == n_up).collect();
        Ok(Self {
            n,
            states: Some(states),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        match &self.states {
            None => 1 << self.n,
            Some(s) => s.len(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.states.is_none()
    }

    pub fn state(&self, index: usize) -> u32 {
        match &self.states {
            None => index as u32,
            Some(s) => s[index],
        }
    }

    pub fn index_of(&self, state: u32) -> Option<usize> {
        match &self.states {
            None => ((state as usize) < (1 << self.n)).then_some(state as usize),
            Some(s) => s.binary_search(&state).ok(),
        }
    }

    /// Twice the total `S_z` of a basis state.
    pub fn twice_sz(&self, state: u32) -> i64 {
        2 * state.count_ones() as i64 - self.n as i64
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidInput(format!("spin count {n} outside 1..=30")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_partition_the_full_space() {
        for n in 1..=10 {
            let full = SpinBasis::full(n).unwrap();
            let total: usize = (0..=n).map(|k| SpinBasis::sector(n, k).unwrap().dimension()).sum();
            assert_eq!(total, full.dimension());
            assert_eq!(full.dimension(), 1 << n);
        }
    }

    #[test]
    fn sector_indices_are_strictly_increasing() {
        let b = SpinBasis::sector(6, 3).unwrap();
        assert_eq!(b.dimension(), 20);
        for i in 1..b.dimension() {
            assert!(b.state(i) > b.state(i - 1));
            assert_eq!(b.index_of(b.state(i)), Some(i));
        }
        assert_eq!(b.index_of(0b111111), None);
        assert_eq!(b.twice_sz(b.state(0)), 0);
    }
}
