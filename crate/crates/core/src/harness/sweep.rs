//! Viscosity sweeps: transient amplification and decay envelopes versus `nu`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::config::{Output, ScenarioConfig};
use crate::harness::csv::write_table;
use crate::harness::fit::{fit_tail, FitResult};
use crate::harness::scenario::run_scenario;
use crate::numeric::linear_fit;

/// Per-`nu` series consumed by [`analyze_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub nu: f64,
    pub times: Vec<f64>,
    /// `||Q[u]|| + ||eta|| / M`
    pub amplitude: Vec<f64>,
    /// `||(psi, grad eta / M, omega)||`
    pub raw: Vec<f64>,
    pub c_in: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub nu: f64,
    /// `G = max_t (||Q|| + ||eta||/M) / C_in`
    pub growth: f64,
    /// `G nu^{1/6}`
    pub growth_scaled: f64,
    /// `sup_t e^{nu^{1/3} t / 32} raw(t) / raw(0)`
    pub envelope: f64,
    /// envelope times `nu^{1/2}`
    pub envelope_scaled: f64,
    pub fit: Option<FitResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Slope of `log G` against `log nu`.
    pub growth_slope: Option<f64>,
    /// Slope of `log envelope` against `log nu`.
    pub envelope_slope: Option<f64>,
}

impl SweepTable {
    /// `max / min` of the scaled growth constants.
    pub fn growth_spread(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.growth_scaled))
    }

    pub fn envelope_spread(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.envelope_scaled))
    }
}

fn spread(it: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = it.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

fn log_slope(nu: &[f64], v: &[f64]) -> Option<f64> {
    if nu.len() < 2 || v.iter().any(|&x| !(x > 0.0)) {
        return None;
    }
    let x: Vec<f64> = nu.iter().map(|n| n.ln()).collect();
    let y: Vec<f64> = v.iter().map(|n| n.ln()).collect();
    linear_fit(&x, &y).map(|(_, b)| b)
}

/// Pure post-processing of per-`nu` series.
pub fn analyze_sweep(series: &[SweepSeries]) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(series.len());
    for s in series {
        if !(s.c_in > 0.0) {
            return Err(Error::InvalidParameter(format!("C_in must be positive at nu = {}", s.nu)));
        }
        let growth = s.amplitude.iter().cloned().fold(0.0, f64::max) / s.c_in;
        let raw0 = s.raw.first().copied().unwrap_or(0.0);
        let c = s.nu.cbrt() / 32.0;
        let envelope = if raw0 > 0.0 {
            s.times
                .iter()
                .zip(&s.raw)
                .map(|(t, r)| (c * t).exp() * r / raw0)
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        let fit = fit_tail(&s.times, &s.amplitude, s.nu, s.t_end, crate::harness::fit::FitModel::Exponential).ok();
        rows.push(SweepRow {
            nu: s.nu,
            growth,
            growth_scaled: growth * s.nu.powf(1.0 / 6.0),
            envelope,
            envelope_scaled: envelope * s.nu.sqrt(),
            fit,
        });
    }
    let nus: Vec<f64> = rows.iter().map(|r| r.nu).collect();
    let g: Vec<f64> = rows.iter().map(|r| r.growth).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.envelope).collect();
    Ok(SweepTable {
        growth_slope: log_slope(&nus, &g),
        envelope_slope: log_slope(&nus, &e),
        rows,
    })
}

/// Runs `base` once per `nu`, rescaling `lambda` when configured.
pub fn sweep_nu(base: &ScenarioConfig, nu_list: &[f64]) -> Result<SweepTable> {
    if nu_list.is_empty() {
        return Err(Error::InvalidParameter("empty nu list".into()));
    }
    // validate every entry before spending time on integration
    let configs: Vec<ScenarioConfig> = nu_list.iter().map(|&nu| base.with_nu(nu)).collect();
    for c in &configs {
        c.validate()?;
    }
    let mut series = Vec::with_capacity(configs.len());
    for mut c in configs {
        for o in [Output::Q, Output::EtaOverM, Output::RawTriple] {
            if !c.outputs.contains(&o) {
                c.outputs.push(o);
            }
        }
        let out = run_scenario(&c)?;
        let q = out.observable_series(Output::Q).unwrap_or_default();
        let eta = out.observable_series(Output::EtaOverM).unwrap_or_default();
        let raw = out.observable_series(Output::RawTriple).unwrap_or_default();
        series.push(SweepSeries {
            nu: c.nu,
            times: out.times.clone(),
            amplitude: q.iter().zip(&eta).map(|(a, b)| a + b).collect(),
            raw,
            c_in: out.c_in,
            t_end: c.effective_t_end(),
        });
    }
    analyze_sweep(&series)
}

pub fn write_sweep(table: &SweepTable, base: &ScenarioConfig, path: &Path) -> Result<()> {
    let mut meta = base.metadata();
    meta.push(format!(
        "growth_slope={} envelope_slope={}",
        table.growth_slope.map_or("none".into(), |s| format!("{s:e}")),
        table.envelope_slope.map_or("none".into(), |s| format!("{s:e}"))
    ));
    let header: Vec<String> = [
        "nu",
        "growth",
        "growth_scaled",
        "envelope",
        "envelope_scaled",
        "rate",
        "prefactor",
        "residual",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|r| {
            let (rate, pf, res) = r.fit.map_or((f64::NAN, f64::NAN, f64::NAN), |f| (f.rate, f.prefactor, f.residual));
            vec![r.nu, r.growth, r.growth_scaled, r.envelope, r.envelope_scaled, rate, pf, res]
        })
        .collect();
    write_table(path, &meta, &header, &rows)
}
