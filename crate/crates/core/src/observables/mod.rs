//! Spectral ensembles on a `(k, xi)` grid and the quantities measured on them.

mod initial;
mod norms;

use rayon::prelude::*;

use crate::dynamics::ModeState;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::params::Mode;

pub use initial::{make_initial_ensemble, InitialSpec};
pub use norms::{observables, sobolev_norm, Field, FieldSelector, Observables, Weighting};

/// Offset midpoint grid `xi_j = -Xi + (j + 1/2) h` on `[-Xi, Xi]`; never
/// contains `xi = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiGrid {
    xi_max: f64,
    h: f64,
    points: Vec<f64>,
}

impl XiGrid {
    pub fn new(xi_max: f64, h: f64) -> Result<Self> {
        if !(xi_max.is_finite() && xi_max > 0.0 && h.is_finite() && h > 0.0) {
            return Err(Error::Grid(format!("need Xi > 0 and h > 0, got Xi = {xi_max}, h = {h}")));
        }
        let cells = 2.0 * xi_max / h;
        let n = cells.round();
        if (cells - n).abs() > 1e-9 * cells.max(1.0) || n < 2.0 {
            return Err(Error::Grid(format!("2 Xi / h = {cells} must be an integer >= 2")));
        }
        let n = n as usize;
        if !n.is_multiple_of(2) {
            return Err(Error::Grid(format!(
                "2 Xi / h = {n} is odd, so the midpoint grid would contain xi = 0"
            )));
        }
        let points = (0..n).map(|j| -xi_max + (j as f64 + 0.5) * h).collect();
        Ok(XiGrid { xi_max, h, points })
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    /// Quadrature weight of every node.
    pub fn weight(&self) -> f64 {
        self.h
    }
    /// Index of the node at `-xi_j`.
    pub fn mirror(&self, j: usize) -> usize {
        self.points.len() - 1 - j
    }
}

/// A perturbation sampled on `k_set x xi_grid` at time `t`.
///
/// Modes are stored row by row in increasing `k`, each row in increasing
/// `xi`, which is the canonical `(k, xi)` order used by all reductions.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEnsemble {
    k_set: Vec<i64>,
    grid: XiGrid,
    states: Vec<ModeState>,
    pub t: f64,
}

impl SpectralEnsemble {
    pub fn new(k_set: Vec<i64>, grid: XiGrid, states: Vec<ModeState>, t: f64) -> Result<Self> {
        if k_set.is_empty() {
            return Err(Error::Grid("empty k set".into()));
        }
        if k_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Grid("k set must be strictly increasing".into()));
        }
        if states.len() != k_set.len() * grid.len() {
            return Err(Error::Grid(format!(
                "expected {} states, got {}",
                k_set.len() * grid.len(),
                states.len()
            )));
        }
        Ok(SpectralEnsemble { k_set, grid, states, t })
    }

    pub fn zeros(k_set: Vec<i64>, grid: XiGrid) -> Result<Self> {
        let n = k_set.len() * grid.len();
        Self::new(k_set, grid, vec![ModeState::ZERO; n], 0.0)
    }

    pub fn k_set(&self) -> &[i64] {
        &self.k_set
    }
    pub fn grid(&self) -> &XiGrid {
        &self.grid
    }
    pub fn states(&self) -> &[ModeState] {
        &self.states
    }
    pub fn states_mut(&mut self) -> &mut [ModeState] {
        &mut self.states
    }
    pub fn len(&self) -> usize {
        self.states.len()
    }
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn mode(&self, idx: usize) -> Mode {
        let n = self.grid.len();
        Mode::new(self.k_set[idx / n], self.grid.points[idx % n])
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.states.len()).map(move |i| self.mode(i))
    }

    pub fn index(&self, k: i64, j: usize) -> Option<usize> {
        let r = self.k_set.binary_search(&k).ok()?;
        (j < self.grid.len()).then(|| r * self.grid.len() + j)
    }

    /// Replaces all states, keeping grid and `k` set.
    pub fn with_states(&self, states: Vec<ModeState>, t: f64) -> Result<Self> {
        Self::new(self.k_set.clone(), self.grid.clone(), states, t)
    }

    /// Sub-ensemble restricted to the `k` values accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(i64) -> bool) -> Result<Self> {
        let n = self.grid.len();
        let mut ks = Vec::new();
        let mut states = Vec::new();
        for (r, &k) in self.k_set.iter().enumerate() {
            if keep(k) {
                ks.push(k);
                states.extend_from_slice(&self.states[r * n..(r + 1) * n]);
            }
        }
        Self::new(ks, self.grid.clone(), states, self.t)
    }

    /// Largest `|state(-k,-xi) - conj(state(k,xi))|` over pairs present on
    /// the grid, relative to the largest state component.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let n = self.grid.len();
        let scale = self.states.iter().map(|s| s.max_abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (r, &k) in self.k_set.iter().enumerate() {
            let Some(rm) = self.k_set.iter().position(|&q| q == -k) else {
                continue;
            };
            for j in 0..n {
                let a = self.states[r * n + j];
                let b = self.states[rm * n + self.grid.mirror(j)];
                worst = worst.max((b - a.conj()).max_abs());
            }
        }
        worst / scale
    }

    /// `sum_k int f(k, xi) dxi` by midpoint quadrature with a deterministic
    /// reduction in `(k, xi)` order. Rows are evaluated in parallel.
    pub fn quadrature<F>(&self, f: F) -> f64
    where
        F: Fn(Mode, &ModeState) -> f64 + Sync,
    {
        let n = self.grid.len();
        let w = self.grid.weight();
        let rows: Vec<f64> = self
            .k_set
            .par_iter()
            .enumerate()
            .map(|(r, &k)| {
                let vals: Vec<f64> = (0..n)
                    .map(|j| w * f(Mode::new(k, self.grid.points[j]), &self.states[r * n + j]))
                    .collect();
                pairwise_sum(&vals)
            })
            .collect();
        pairwise_sum(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_grid_excludes_zero() {
        let g = XiGrid::new(32.0, 1.0 / 16.0).unwrap();
        assert_eq!(g.len(), 1024);
        assert!(g.points().iter().all(|&x| x != 0.0));
        assert_eq!(g.points()[512], 1.0 / 32.0);
        let total: f64 = g.points().iter().map(|_| g.weight()).sum();
        assert!((total - 64.0).abs() < 1e-12);
        assert_eq!(g.points()[g.mirror(3)], -g.points()[3]);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(XiGrid::new(1.0, 0.3).is_err());
        assert!(XiGrid::new(1.5, 1.0).is_err());
        assert!(XiGrid::new(-1.0, 0.5).is_err());
    }

    #[test]
    fn ensemble_indexing() {
        let g = XiGrid::new(1.0, 0.5).unwrap();
        let e = SpectralEnsemble::zeros(vec![-1, 0, 1], g).unwrap();
        assert_eq!(e.len(), 12);
        assert_eq!(e.mode(5), Mode::new(0, -0.25));
        assert_eq!(e.index(1, 2), Some(10));
        assert_eq!(e.index(2, 0), None);
        let r = e.restrict(|k| k != 0).unwrap();
        assert_eq!(r.k_set(), &[-1, 1]);
        assert!(SpectralEnsemble::zeros(vec![1, 0], XiGrid::new(1.0, 0.5).unwrap()).is_err());
    }
}
