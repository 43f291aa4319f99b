//! Flat `key = value` scenario configuration.
//!
//! ```text
//! # electron run at moderate viscosity
//! species = electron
//! nu = 1e-3
//! grid.xi_max = 8
//! grid.k = -2..2
//! outputs = e_delta_w, q, eta_over_m
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::harness::fit::FitModel;
use crate::observables::InitialSpec;
use crate::params::{PhysParams, Regime, Species, DEFAULT_BETA, DEFAULT_DELTA_BETA};

/// A column that a scenario can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Output {
    EDelta,
    EDeltaW,
    CalE,
    EL,
    CalF,
    FL,
    Q,
    Px,
    Py,
    EtaOverM,
    GradEta,
    Psi,
    GradEtaOverM,
    Omega,
    RawTriple,
}

impl Output {
    pub const ALL: [Output; 15] = [
        Output::EDelta,
        Output::EDeltaW,
        Output::CalE,
        Output::EL,
        Output::CalF,
        Output::FL,
        Output::Q,
        Output::Px,
        Output::Py,
        Output::EtaOverM,
        Output::GradEta,
        Output::Psi,
        Output::GradEtaOverM,
        Output::Omega,
        Output::RawTriple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::EDelta => "e_delta",
            Output::EDeltaW => "e_delta_w",
            Output::CalE => "cal_e",
            Output::EL => "e_l",
            Output::CalF => "cal_f",
            Output::FL => "f_l",
            Output::Q => "q",
            Output::Px => "px",
            Output::Py => "py",
            Output::EtaOverM => "eta_over_m",
            Output::GradEta => "grad_eta",
            Output::Psi => "psi",
            Output::GradEtaOverM => "grad_eta_over_m",
            Output::Omega => "omega",
            Output::RawTriple => "raw_triple",
        }
    }

    /// Energies go to `energy.csv`, the rest to `observables.csv`.
    pub fn is_energy(self) -> bool {
        matches!(
            self,
            Output::EDelta | Output::EDeltaW | Output::CalE | Output::EL | Output::CalF | Output::FL
        )
    }

    pub fn is_zero_mode(self) -> bool {
        matches!(self, Output::CalE | Output::EL | Output::CalF | Output::FL)
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Output {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Output::ALL
            .into_iter()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| Error::ConfigValue(format!("unknown output `{}`", s.trim())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub xi_max: f64,
    pub h: f64,
    pub k_set: Vec<i64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            xi_max: 32.0,
            h: 1.0 / 16.0,
            k_set: (-4..=4).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub species: Species,
    pub nu: f64,
    pub lambda: f64,
    pub mach: f64,
    pub beta: f64,
    pub delta_beta: f64,
    pub regime_checks: Vec<Regime>,
    pub grid: GridConfig,
    pub initial: InitialSpec,
    pub t_end: f64,
    /// When set, `t_end = t_end_scale * nu^{-1/3}`.
    pub t_end_scale: Option<f64>,
    /// Number of uniformly spaced sample times, including `0` and `t_end`.
    pub samples: usize,
    pub rtol: f64,
    pub atol: f64,
    pub outputs: Vec<Output>,
    /// Sobolev index of the weighted energies.
    pub s: f64,
    /// Derivative order of the zero-mode functionals.
    pub l: u32,
    pub fit_model: FitModel,
    pub seed: u64,
    /// In sweeps, `lambda = lambda_over_nu * nu`.
    pub lambda_over_nu: Option<f64>,
    /// Random draws per property in the verification suites.
    pub verify_samples: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            species: Species::Ion,
            nu: 1e-3,
            lambda: 0.1,
            mach: 1.0,
            beta: DEFAULT_BETA,
            delta_beta: DEFAULT_DELTA_BETA,
            regime_checks: vec![Regime::FullDecay],
            grid: GridConfig::default(),
            initial: InitialSpec::default(),
            t_end: 100.0,
            t_end_scale: None,
            samples: 201,
            rtol: 1e-9,
            atol: 1e-12,
            outputs: vec![Output::EDeltaW, Output::Q, Output::EtaOverM],
            s: 0.0,
            l: 0,
            fit_model: FitModel::Exponential,
            seed: 0,
            lambda_over_nu: None,
            verify_samples: 100_000,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::ConfigValue(format!("`{key}`: expected a finite number, got `{v}`")))
}

fn parse_uint<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse::<T>()
        .map_err(|_| Error::ConfigValue(format!("`{key}`: expected a non-negative integer, got `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::ConfigValue(format!("`{key}`: expected true/false, got `{v}`"))),
    }
}

/// `a..b` (inclusive) or a comma-separated list.
pub fn parse_k_set(v: &str) -> Result<Vec<i64>> {
    let bad = || Error::ConfigValue(format!("`grid.k`: cannot parse `{v}`"));
    let mut ks: Vec<i64> = if let Some((a, b)) = v.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        v.split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

fn parse_list<T: FromStr<Err = Error>>(v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(T::from_str)
        .collect()
}

impl ScenarioConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigValue(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = ScenarioConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            c.set(key, value).map_err(|e| match e {
                Error::ConfigValue(msg) => Error::Config { line: line_no, msg },
                other => other,
            })?;
        }
        c.validate()?;
        Ok(c)
    }

    /// Sets one key. Unknown keys are errors.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let ini = &mut self.initial;
        match key {
            "species" => self.species = v.parse().map_err(|_| Error::ConfigValue(format!("unknown species `{v}`")))?,
            "nu" => self.nu = parse_f64(key, v)?,
            "lambda" => self.lambda = parse_f64(key, v)?,
            "mach" => self.mach = parse_f64(key, v)?,
            "beta" => self.beta = parse_f64(key, v)?,
            "delta_beta" => self.delta_beta = parse_f64(key, v)?,
            "regime_checks" => {
                self.regime_checks = if v == "none" {
                    Vec::new()
                } else {
                    parse_list::<Regime>(v).map_err(|e| Error::ConfigValue(e.to_string()))?
                }
            }
            "grid.xi_max" => self.grid.xi_max = parse_f64(key, v)?,
            "grid.h" => self.grid.h = parse_f64(key, v)?,
            "grid.k" => self.grid.k_set = parse_k_set(v)?,
            "initial.sigma" => ini.sigma = parse_f64(key, v)?,
            "initial.xi_center" => ini.xi_center = parse_f64(key, v)?,
            "initial.xi_min" => ini.xi_min = parse_f64(key, v)?,
            "initial.eta_amp" => ini.eta_amp = parse_f64(key, v)?,
            "initial.psi_amp" => ini.psi_amp = parse_f64(key, v)?,
            "initial.omega_amp" => ini.omega_amp = parse_f64(key, v)?,
            "initial.eta_phase" => ini.eta_phase = parse_f64(key, v)?,
            "initial.psi_phase" => ini.psi_phase = parse_f64(key, v)?,
            "initial.omega_phase" => ini.omega_phase = parse_f64(key, v)?,
            "initial.k_power" => ini.k_power = parse_f64(key, v)?,
            "initial.zero_line" => ini.zero_line = parse_bool(key, v)?,
            "time.t_end" => self.t_end = parse_f64(key, v)?,
            "time.t_end_scale" => self.t_end_scale = Some(parse_f64(key, v)?),
            "time.samples" => self.samples = parse_uint(key, v)?,
            "tol.rtol" => self.rtol = parse_f64(key, v)?,
            "tol.atol" => self.atol = parse_f64(key, v)?,
            "outputs" => self.outputs = parse_list::<Output>(v).map_err(|e| Error::ConfigValue(e.to_string()))?,
            "energy.s" => self.s = parse_f64(key, v)?,
            "energy.l" => self.l = parse_uint(key, v)?,
            "fit.model" => self.fit_model = v.parse().map_err(|e: Error| Error::ConfigValue(e.to_string()))?,
            "seed" => self.seed = parse_uint(key, v)?,
            "sweep.lambda_over_nu" => self.lambda_over_nu = Some(parse_f64(key, v)?),
            "verify.samples" => self.verify_samples = parse_uint(key, v)?,
            _ => return Err(Error::ConfigValue(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::with_multiplier(self.species, self.nu, self.lambda, self.mach, self.beta, self.delta_beta)
    }

    /// Copy with `nu` replaced, and `lambda` rescaled when
    /// `sweep.lambda_over_nu` is set.
    pub fn with_nu(&self, nu: f64) -> Self {
        let mut c = self.clone();
        c.nu = nu;
        if let Some(r) = self.lambda_over_nu {
            c.lambda = r * nu;
        }
        c
    }

    pub fn effective_t_end(&self) -> f64 {
        match self.t_end_scale {
            Some(s) if self.nu > 0.0 => s / self.nu.cbrt(),
            _ => self.t_end,
        }
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let t_end = self.effective_t_end();
        let n = self.samples;
        (0..n).map(|i| if i + 1 == n { t_end } else { t_end * i as f64 / (n - 1) as f64 }).collect()
    }

    /// Parameter, regime and output consistency checks.
    pub fn validate(&self) -> Result<()> {
        let p = self.params().map_err(|e| Error::ConfigValue(e.to_string()))?;
        for &r in &self.regime_checks {
            p.check(r).map_err(|e| Error::ConfigValue(e.to_string()))?;
        }
        if self.samples < 2 {
            return Err(Error::ConfigValue("time.samples must be at least 2".into()));
        }
        if !(self.effective_t_end() > 0.0) {
            return Err(Error::ConfigValue("t_end must be positive".into()));
        }
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::ConfigValue("tolerances must be positive".into()));
        }
        if self.outputs.is_empty() {
            return Err(Error::ConfigValue("no outputs selected".into()));
        }
        for o in &self.outputs {
            let ok = match o {
                Output::CalE | Output::EL => self.species == Species::Ion,
                Output::CalF | Output::FL => self.species == Species::Electron,
                _ => true,
            };
            if !ok {
                return Err(Error::ConfigValue(format!("output `{o}` does not apply to {}", self.species)));
            }
            if o.is_zero_mode() && !self.grid.k_set.contains(&0) {
                return Err(Error::ConfigValue(format!("output `{o}` needs k = 0 in grid.k")));
            }
        }
        Ok(())
    }

    /// Lines describing the scenario, written as CSV metadata.
    pub fn metadata(&self) -> Vec<String> {
        let ks: Vec<String> = self.grid.k_set.iter().map(|k| k.to_string()).collect();
        let regimes: Vec<String> = self.regime_checks.iter().map(|r| r.to_string()).collect();
        vec![
            format!("species={}", self.species),
            format!("nu={:e} lambda={:e} mach={} beta={} delta_beta={}", self.nu, self.lambda, self.mach, self.beta, self.delta_beta),
            format!("regime_checks={}", if regimes.is_empty() { "none".into() } else { regimes.join(",") }),
            format!("grid xi_max={} h={} k={}", self.grid.xi_max, self.grid.h, ks.join(",")),
            format!("initial {}", self.initial),
            format!("t_end={} samples={} rtol={:e} atol={:e}", self.effective_t_end(), self.samples, self.rtol, self.atol),
            format!("s={} l={} fit={} seed={}", self.s, self.l, self.fit_model, self.seed),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        ScenarioConfig::default().validate().unwrap();
    }

    #[test]
    fn parses_keys_and_comments() {
        let c = ScenarioConfig::parse(
            "# comment\nspecies = electron\nnu = 1e-4 # trailing\nlambda=0.01\ngrid.k = -2..2\ngrid.xi_max=8\ngrid.h=0.25\n\
             outputs = e_delta, q\ninitial.zero_line = true\ntime.t_end_scale = 12\nregime_checks = windowed_energy\n",
        )
        .unwrap();
        assert_eq!(c.species, Species::Electron);
        assert_eq!(c.nu, 1e-4);
        assert_eq!(c.grid.k_set, vec![-2, -1, 0, 1, 2]);
        assert_eq!(c.outputs, vec![Output::EDelta, Output::Q]);
        assert!(c.initial.zero_line);
        assert!((c.effective_t_end() - 12.0 / 1e-4f64.cbrt()).abs() < 1e-9);
        let t = c.sample_times();
        assert_eq!(t.len(), c.samples);
        assert_eq!(t[0], 0.0);
        assert_eq!(*t.last().unwrap(), c.effective_t_end());
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = ScenarioConfig::parse("nu = 1e-3\ngrid.bogus = 3\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn bad_values_rejected() {
        assert!(ScenarioConfig::parse("nu = abc").is_err());
        assert!(ScenarioConfig::parse("outputs = nope").is_err());
        assert!(ScenarioConfig::parse("nu = 1\nnu = 2").is_err());
        assert!(ScenarioConfig::parse("species = ion\noutputs = cal_f\ngrid.k=-1..1").is_err());
        assert!(ScenarioConfig::parse("outputs = cal_e\ngrid.k = -1,1").is_err());
        // regime enforcement
        assert!(ScenarioConfig::parse("lambda = 0\nregime_checks = full_decay").is_err());
        assert!(ScenarioConfig::parse("lambda = 0\nregime_checks = none").is_ok());
    }

    #[test]
    fn k_set_forms() {
        assert_eq!(parse_k_set("2, -1, 1, -2").unwrap(), vec![-2, -1, 1, 2]);
        assert!(parse_k_set("3..1").is_err());
    }

    #[test]
    fn sweep_rescales_lambda() {
        let c = ScenarioConfig {
            lambda_over_nu: Some(100.0),
            ..Default::default()
        };
        let d = c.with_nu(1e-5);
        assert_eq!(d.nu, 1e-5);
        assert!((d.lambda - 1e-3).abs() < 1e-18);
    }
}
