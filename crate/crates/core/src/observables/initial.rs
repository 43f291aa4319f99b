//! Initial-data generators.

use std::fmt;

use super::{SpectralEnsemble, XiGrid};
use crate::dynamics::{ModeState, C64};
use crate::error::{Error, Result};

/// Gaussian-spectrum initial data.
///
/// For `k > 0` (and `k = 0`, `xi > 0`) the state is
/// `|k|^{-k_power} exp(-(xi - xi_center)^2 / (2 sigma^2)) (a_eta e^{i phi_eta}, ...)`,
/// vanishing where `|xi| < xi_min`. The remaining modes follow from
/// `state(-k, -xi) = conj(state(k, xi))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSpec {
    pub sigma: f64,
    pub xi_center: f64,
    pub xi_min: f64,
    pub eta_amp: f64,
    pub psi_amp: f64,
    pub omega_amp: f64,
    pub eta_phase: f64,
    pub psi_phase: f64,
    pub omega_phase: f64,
    pub k_power: f64,
    /// Whether the `k = 0` line carries data.
    pub zero_line: bool,
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            sigma: 1.0,
            xi_center: 0.0,
            xi_min: 0.0,
            eta_amp: 1.0,
            psi_amp: 0.0,
            omega_amp: 0.0,
            eta_phase: 0.0,
            psi_phase: 0.0,
            omega_phase: 0.0,
            k_power: 0.0,
            zero_line: false,
        }
    }
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gaussian sigma={} xi_center={} xi_min={} eta={}@{} psi={}@{} omega={}@{} k_power={} zero_line={}",
            self.sigma,
            self.xi_center,
            self.xi_min,
            self.eta_amp,
            self.eta_phase,
            self.psi_amp,
            self.psi_phase,
            self.omega_amp,
            self.omega_phase,
            self.k_power,
            self.zero_line
        )
    }
}

impl InitialSpec {
    fn profile(&self, k: i64, xi: f64) -> ModeState {
        if xi.abs() < self.xi_min {
            return ModeState::ZERO;
        }
        let d = xi - self.xi_center;
        let mut g = (-d * d / (2.0 * self.sigma * self.sigma)).exp();
        if k != 0 && self.k_power != 0.0 {
            g *= (k.unsigned_abs() as f64).powf(-self.k_power);
        }
        ModeState::new(
            C64::from_polar(self.eta_amp * g, self.eta_phase),
            C64::from_polar(self.psi_amp * g, self.psi_phase),
            C64::from_polar(self.omega_amp * g, self.omega_phase),
        )
    }
}

/// Builds a Hermitian-symmetric ensemble at `t = 0`. The `k` set must be
/// symmetric under `k -> -k`.
pub fn make_initial_ensemble(spec: &InitialSpec, grid: XiGrid, k_set: &[i64]) -> Result<SpectralEnsemble> {
    if !(spec.sigma.is_finite() && spec.sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", spec.sigma)));
    }
    if !(spec.xi_min >= 0.0) {
        return Err(Error::InvalidParameter("xi_min must be >= 0".into()));
    }
    let mut ks = k_set.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.iter().any(|k| ks.binary_search(&-k).is_err()) {
        return Err(Error::Grid(format!("k set {ks:?} is not symmetric under k -> -k")));
    }
    if grid.points().contains(&0.0) {
        return Err(Error::Grid("xi grid contains xi = 0".into()));
    }
    let n = grid.len();
    let mut states = Vec::with_capacity(ks.len() * n);
    for &k in &ks {
        for j in 0..n {
            let xi = grid.points()[j];
            let s = if k == 0 && !spec.zero_line {
                ModeState::ZERO
            } else if k > 0 || (k == 0 && xi > 0.0) {
                spec.profile(k, xi)
            } else {
                spec.profile(-k, -xi).conj()
            };
            states.push(s);
        }
    }
    SpectralEnsemble::new(ks, grid, states, 0.0)
}
