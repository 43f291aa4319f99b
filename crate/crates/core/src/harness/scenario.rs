//! Single-scenario orchestration: build the ensemble, integrate every mode,
//! evaluate the selected functionals and write CSV files.

use std::path::Path;

use rayon::prelude::*;

use crate::dynamics::{integrate_mode_with, IntegratorOptions, ModeState, Trajectory};
use crate::energy::{
    initial_constant_c_in, mode_energy, zero_line_points, zero_mode_cal_e, zero_mode_cal_f, zero_mode_e_l,
    zero_mode_f_l, EnergyReport, ModeSeries, Variant,
};
use crate::error::{Error, Result};
use crate::harness::config::{Output, ScenarioConfig};
use crate::harness::csv::write_table;
use crate::harness::fit::{fit_decay, fit_tail, FitModel, FitResult};
use crate::numeric::pairwise_sum;
use crate::observables::{make_initial_ensemble, observables, Observables, SpectralEnsemble, XiGrid};
use crate::params::PhysParams;

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub config: ScenarioConfig,
    pub params: PhysParams,
    pub initial: SpectralEnsemble,
    pub times: Vec<f64>,
    /// One trajectory per mode, in ensemble order.
    pub trajectories: Vec<Trajectory>,
    pub energy: EnergyReport,
    /// Nonzero-mode observables at each sample time; empty when the
    /// ensemble has no `k != 0` modes.
    pub observables: Vec<Observables>,
    /// `C_in,s` of the nonzero-mode initial data with `s` from the config.
    pub c_in: f64,
}

impl ScenarioOutput {
    pub fn ensemble_at(&self, i: usize) -> Result<SpectralEnsemble> {
        ensemble_at(&self.initial, &self.trajectories, i)
    }

    /// Series of one observable column.
    pub fn observable_series(&self, o: Output) -> Option<Vec<f64>> {
        if self.observables.is_empty() || o.is_energy() {
            return None;
        }
        Some(self.observables.iter().map(|ob| observable_value(ob, o)).collect())
    }
}

fn observable_value(ob: &Observables, o: Output) -> f64 {
    match o {
        Output::Q => ob.q_norm,
        Output::Px => ob.px_norm,
        Output::Py => ob.py_norm,
        Output::EtaOverM => ob.eta_norm_over_m,
        Output::GradEta => ob.grad_eta_norm,
        Output::Psi => ob.psi_norm,
        Output::GradEtaOverM => ob.grad_eta_over_m,
        Output::Omega => ob.omega_norm,
        Output::RawTriple => ob.raw_triple(),
        _ => f64::NAN,
    }
}

/// Validated parameters and the initial ensemble of a config.
pub fn prepare(config: &ScenarioConfig) -> Result<(PhysParams, SpectralEnsemble)> {
    config.validate()?;
    let params = config.params()?;
    let grid = XiGrid::new(config.grid.xi_max, config.grid.h)?;
    let ensemble = make_initial_ensemble(&config.initial, grid, &config.grid.k_set)?;
    Ok((params, ensemble))
}

/// Integrates all modes of `ensemble`; results come back in ensemble order
/// and the first failure in that order is reported.
pub fn integrate_ensemble(
    ensemble: &SpectralEnsemble,
    params: &PhysParams,
    t_end: f64,
    sample_times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<Trajectory>> {
    let results: Vec<Result<Trajectory>> = (0..ensemble.len())
        .into_par_iter()
        .map(|i| {
            integrate_mode_with(ensemble.states()[i], ensemble.mode(i), params, t_end, sample_times, opts)
        })
        .collect();
    results.into_iter().collect()
}

/// The ensemble at the `i`-th stored sample.
pub fn ensemble_at(initial: &SpectralEnsemble, trajs: &[Trajectory], i: usize) -> Result<SpectralEnsemble> {
    let t = trajs.first().map(|tr| tr.times[i]).unwrap_or(0.0);
    let states: Vec<ModeState> = trajs.iter().map(|tr| tr.states[i]).collect();
    initial.with_states(states, t)
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let (params, initial) = prepare(config)?;
    let times = config.sample_times();
    let t_end = config.effective_t_end();
    let opts = IntegratorOptions::tolerances(config.rtol, config.atol);
    let trajectories = integrate_ensemble(&initial, &params, t_end, &times, &opts)?;
    let has_sheared = initial.k_set().iter().any(|&k| k != 0);

    let c_in = if has_sheared {
        initial_constant_c_in(&initial.restrict(|k| k != 0)?, config.s, &params)?
    } else {
        0.0
    };

    let energy_cols: Vec<Output> = config.outputs.iter().copied().filter(|o| o.is_energy()).collect();
    let want_obs = has_sheared && config.outputs.iter().any(|o| !o.is_energy());

    let mut energy = EnergyReport {
        times: times.clone(),
        columns: energy_cols.iter().map(|o| o.name().to_string()).collect(),
        aggregate: vec![Vec::with_capacity(times.len()); energy_cols.len()],
        ..Default::default()
    };

    // per-mode sheared energies
    let weight = initial.grid().weight();
    for (c, &o) in energy_cols.iter().enumerate() {
        let variant = match o {
            Output::EDelta => Variant::Plain,
            Output::EDeltaW => Variant::Windowed,
            _ => continue,
        };
        let series: Vec<Result<ModeSeries>> = trajectories
            .par_iter()
            .filter(|tr| tr.mode.k != 0)
            .map(|tr| {
                let values = tr
                    .times
                    .iter()
                    .zip(&tr.states)
                    .map(|(&t, s)| mode_energy(s, t, tr.mode, &params, config.s, variant))
                    .collect::<Result<Vec<f64>>>()?;
                Ok(ModeSeries { mode: tr.mode, values })
            })
            .collect();
        let series: Vec<ModeSeries> = series.into_iter().collect::<Result<_>>()?;
        for i in 0..times.len() {
            let vals: Vec<f64> = series.iter().map(|s| weight * s.values[i]).collect();
            energy.aggregate[c].push(pairwise_sum(&vals));
        }
        energy.per_mode.insert(o.name().to_string(), series);
    }

    let mut obs = Vec::new();
    let zero_cols: Vec<(usize, Output)> =
        energy_cols.iter().copied().enumerate().filter(|(_, o)| o.is_zero_mode()).collect();
    if want_obs || !zero_cols.is_empty() {
        for i in 0..times.len() {
            let ens = ensemble_at(&initial, &trajectories, i)?;
            if want_obs {
                obs.push(observables(&ens.restrict(|k| k != 0)?, &params)?);
            }
            if !zero_cols.is_empty() {
                let pts = zero_line_points(&ens)?;
                for &(c, o) in &zero_cols {
                    let v = match o {
                        Output::CalE => zero_mode_cal_e(&pts, config.l, &params)?,
                        Output::EL => zero_mode_e_l(&pts, config.l, &params)?,
                        Output::CalF => zero_mode_cal_f(&pts, config.l, &params)?,
                        Output::FL => zero_mode_f_l(&pts, config.l, &params)?,
                        _ => unreachable!(),
                    };
                    energy.aggregate[c].push(v);
                }
            }
        }
    }

    energy.fits = energy_cols
        .iter()
        .enumerate()
        .map(|(c, &o)| fit_column(o, &times, &energy.aggregate[c], config, &params, t_end))
        .collect();

    Ok(ScenarioOutput {
        config: config.clone(),
        params,
        initial,
        times,
        trajectories,
        energy,
        observables: obs,
        c_in,
    })
}

fn fit_column(
    o: Output,
    times: &[f64],
    values: &[f64],
    config: &ScenarioConfig,
    params: &PhysParams,
    t_end: f64,
) -> Option<FitResult> {
    if values.len() != times.len() {
        return None;
    }
    if o.is_zero_mode() {
        if config.l == 0 {
            return None;
        }
        let model = FitModel::Algebraic { l: config.l as f64 };
        return fit_decay(times, values, (0.0, t_end), model).ok();
    }
    fit_tail(times, values, params.nu(), t_end, config.fit_model).ok()
}

fn fit_metadata(name: &str, f: &Option<FitResult>) -> String {
    match f {
        Some(f) => format!(
            "fit {name}: model={} rate={:e} prefactor={:e} window=[{}, {}] residual={:e} samples={}",
            f.model, f.rate, f.prefactor, f.window.0, f.window.1, f.residual, f.samples
        ),
        None => format!("fit {name}: none"),
    }
}

/// Writes `energy.csv` and `observables.csv` for the selected columns.
pub fn write_outputs(out: &ScenarioOutput, dir: &Path) -> Result<()> {
    let mut meta = out.config.metadata();
    meta.push(format!("c_in={:e}", out.c_in));
    let energy_cols: Vec<Output> = out.config.outputs.iter().copied().filter(|o| o.is_energy()).collect();
    if !energy_cols.is_empty() {
        let mut m = meta.clone();
        for (c, name) in out.energy.columns.iter().enumerate() {
            m.push(fit_metadata(name, &out.energy.fits[c]));
        }
        let mut header = vec!["t".to_string()];
        header.extend(out.energy.columns.iter().cloned());
        let rows: Vec<Vec<f64>> = (0..out.times.len())
            .map(|i| {
                let mut r = vec![out.times[i]];
                r.extend(out.energy.aggregate.iter().map(|col| col[i]));
                r
            })
            .collect();
        write_table(&dir.join("energy.csv"), &m, &header, &rows)?;
    }
    let obs_cols: Vec<Output> = out.config.outputs.iter().copied().filter(|o| !o.is_energy()).collect();
    if !obs_cols.is_empty() {
        let mut header = vec!["t".to_string()];
        header.extend(obs_cols.iter().map(|o| o.name().to_string()));
        let rows: Vec<Vec<f64>> = (0..out.times.len())
            .map(|i| {
                let mut r = vec![out.times[i]];
                for &o in &obs_cols {
                    r.push(out.observables.get(i).map(|ob| observable_value(ob, o)).unwrap_or(0.0));
                }
                r
            })
            .collect();
        write_table(&dir.join("observables.csv"), &meta, &header, &rows)?;
    }
    Ok(())
}

/// Classifies an error for the process exit status.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Integration { .. } | Error::NonFinite { .. } => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ScenarioConfig {
        let mut c = ScenarioConfig::default();
        c.grid.xi_max = 2.0;
        c.grid.h = 0.5;
        c.grid.k_set = vec![-1, 1];
        c.t_end = 5.0;
        c.samples = 11;
        c.outputs = vec![Output::EDelta, Output::EDeltaW, Output::Q, Output::EtaOverM];
        c
    }

    #[test]
    fn zero_data_gives_zero_columns() {
        let mut c = small();
        c.initial.eta_amp = 0.0;
        let out = run_scenario(&c).unwrap();
        assert!(out.energy.aggregate.iter().flatten().all(|&v| v == 0.0));
        assert!(out.observables.iter().all(|o| *o == Observables::default()));
    }

    #[test]
    fn columns_follow_selectors() {
        let out = run_scenario(&small()).unwrap();
        assert_eq!(out.energy.columns, vec!["e_delta", "e_delta_w"]);
        assert_eq!(out.times.len(), 11);
        assert_eq!(out.observables.len(), 11);
        assert_eq!(out.energy.per_mode["e_delta"].len(), 16);
        assert!(out.c_in > 0.0);
    }

    #[test]
    fn deterministic_csv() {
        let dir = tempfile::tempdir().unwrap();
        let c = small();
        let a = run_scenario(&c).unwrap();
        write_outputs(&a, &dir.path().join("a")).unwrap();
        let b = run_scenario(&c).unwrap();
        write_outputs(&b, &dir.path().join("b")).unwrap();
        for f in ["energy.csv", "observables.csv"] {
            let x = std::fs::read(dir.path().join("a").join(f)).unwrap();
            let y = std::fs::read(dir.path().join("b").join(f)).unwrap();
            assert_eq!(x, y);
        }
        let text = std::fs::read_to_string(dir.path().join("a/energy.csv")).unwrap();
        assert!(text.lines().any(|l| l.starts_with("# initial gaussian")));
        assert!(text.lines().any(|l| l == "t,e_delta,e_delta_w"));
    }
}
