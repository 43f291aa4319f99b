//! Weighted energies, zero-mode functionals and the initial-data constant.

mod weighted;
mod zero_mode;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::harness::fit::FitResult;
use crate::observables::{sobolev_norm, Field, SpectralEnsemble, Weighting};
use crate::params::{Mode, PhysParams};

pub use weighted::{
    coercivity_bounds, energy_e_delta, energy_e_delta_w, energy_with_gamma, mode_energy, weighted_vars, z1_weight,
    Variant, WeightedVars,
};
pub use zero_mode::{zero_mode_cal_e, zero_mode_cal_f, zero_mode_e_l, zero_mode_f_l, ZeroPoint};

/// Time series of one functional for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSeries {
    pub mode: Mode,
    pub values: Vec<f64>,
}

/// Functional values at the sample times, aggregated over modes, with an
/// optional fitted decay for each column.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    pub columns: Vec<String>,
    /// `aggregate[c][i]` is column `c` at `times[i]`.
    pub aggregate: Vec<Vec<f64>>,
    /// Per-mode series of the sheared-mode energies, keyed by column.
    pub per_mode: BTreeMap<String, Vec<ModeSeries>>,
    pub fits: Vec<Option<FitResult>>,
}

impl EnergyReport {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        let c = self.columns.iter().position(|c| c == name)?;
        Some(&self.aggregate[c])
    }

    pub fn fit(&self, name: &str) -> Option<&FitResult> {
        let c = self.columns.iter().position(|c| c == name)?;
        self.fits.get(c)?.as_ref()
    }
}

/// `C_in,s = (1/M) ||Pi||_{H^{s+1}} + ||Psi||_{H^s} + ||F - nu M^2 Psi||_{H^s}`.
pub fn initial_constant_c_in(ensemble: &SpectralEnsemble, s: f64, params: &PhysParams) -> Result<f64> {
    let a = sobolev_norm(ensemble, Field::Pi, Weighting::Isotropic(s + 1.0), params)?;
    let b = sobolev_norm(ensemble, Field::Psi, Weighting::Isotropic(s), params)?;
    let c = sobolev_norm(ensemble, Field::FMinusNuM2Psi, Weighting::Isotropic(s), params)?;
    Ok(a / params.mach() + b + c)
}

/// The `k = 0` line of an ensemble as quadrature points.
pub fn zero_line_points(ensemble: &SpectralEnsemble) -> Result<Vec<ZeroPoint>> {
    let r = ensemble
        .k_set()
        .iter()
        .position(|&k| k == 0)
        .ok_or(Error::NonzeroModeRejected { op: "zero_line_points", k: ensemble.k_set()[0] })?;
    let n = ensemble.grid().len();
    let w = ensemble.grid().weight();
    Ok(ensemble.grid()
        .points()
        .iter()
        .zip(&ensemble.states()[r * n..(r + 1) * n])
        .map(|(&xi, &state)| ZeroPoint { xi, weight: w, state })
        .collect())
}
