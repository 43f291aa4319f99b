//! Physical parameters, Fourier modes and the parameter regimes under which
//! the decay estimates are known to hold.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default half-width (in units of `nu^{-1/3}`) of the window multiplier.
pub const DEFAULT_BETA: f64 = 50.0;
/// Default weight of the dissipative part in the window-multiplier estimates.
pub const DEFAULT_DELTA_BETA: f64 = 1.0 / 12.0;

/// Which fluid is perturbed. Ions see a screened potential, electrons an
/// unscreened one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    Ion,
    Electron,
}

impl Species {
    /// Species flag: 1 for ions, 0 for electrons.
    pub fn delta(self) -> f64 {
        match self {
            Species::Ion => 1.0,
            Species::Electron => 0.0,
        }
    }

    pub fn from_delta(delta: u8) -> Result<Self> {
        match delta {
            1 => Ok(Species::Ion),
            0 => Ok(Species::Electron),
            d => Err(Error::InvalidParameter(format!(
                "species flag must be 0 or 1, got {d}"
            ))),
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::Ion => write!(f, "ion"),
            Species::Electron => write!(f, "electron"),
        }
    }
}

impl FromStr for Species {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ion" | "1" => Ok(Species::Ion),
            "electron" | "0" => Ok(Species::Electron),
            other => Err(Error::InvalidParameter(format!("unknown species `{other}`"))),
        }
    }
}

/// One Fourier mode `(k, xi)` in the sheared frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: i64,
    pub xi: f64,
}

impl Mode {
    pub fn new(k: i64, xi: f64) -> Self {
        Mode { k, xi }
    }

    pub fn is_zero_line(&self) -> bool {
        self.k == 0
    }

    /// Critical time `xi / k` at which the sheared wavenumber is smallest.
    pub fn critical_time(&self) -> Option<f64> {
        (self.k != 0).then(|| self.xi / self.k as f64)
    }

    pub(crate) fn require_nonzero(&self, op: &'static str) -> Result<()> {
        if self.k == 0 {
            return Err(Error::ZeroModeRejected { op });
        }
        if !self.xi.is_finite() {
            return Err(Error::NonFinite {
                what: format!("xi of mode in `{op}`"),
            });
        }
        Ok(())
    }
}

/// Physical and multiplier parameters.
///
/// `mu = nu + lambda` and `gamma = mach * nu^{1/3} / 4` are derived and
/// cannot be set independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    species: Species,
    nu: f64,
    lambda: f64,
    mach: f64,
    beta: f64,
    delta_beta: f64,
}

impl PhysParams {
    pub fn new(species: Species, nu: f64, lambda: f64, mach: f64) -> Result<Self> {
        Self::with_multiplier(species, nu, lambda, mach, DEFAULT_BETA, DEFAULT_DELTA_BETA)
    }

    pub fn with_multiplier(
        species: Species,
        nu: f64,
        lambda: f64,
        mach: f64,
        beta: f64,
        delta_beta: f64,
    ) -> Result<Self> {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::InvalidParameter(format!("nu must be finite and >= 0, got {nu}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        if !(mach.is_finite() && mach > 0.0) {
            return Err(Error::InvalidParameter(format!("mach must be finite and > 0, got {mach}")));
        }
        if !(beta.is_finite() && beta > 48.0) {
            return Err(Error::InvalidParameter(format!("beta must exceed 48, got {beta}")));
        }
        let lo = (2.0 / (beta * (beta * beta - 1.0))).max(4.0 / beta);
        if !(delta_beta > lo && delta_beta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta_beta must lie in ({lo}, 1), got {delta_beta}"
            )));
        }
        Ok(PhysParams {
            species,
            nu,
            lambda,
            mach,
            beta,
            delta_beta,
        })
    }

    pub fn species(&self) -> Species {
        self.species
    }
    pub fn delta(&self) -> f64 {
        self.species.delta()
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.nu + self.lambda
    }
    pub fn mach(&self) -> f64 {
        self.mach
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn delta_beta(&self) -> f64 {
        self.delta_beta
    }
    pub fn gamma(&self) -> f64 {
        self.mach * self.nu.cbrt() / 4.0
    }

    /// Copy with different viscosities, keeping everything else.
    pub fn with_viscosity(&self, nu: f64, lambda: f64) -> Result<Self> {
        Self::with_multiplier(self.species, nu, lambda, self.mach, self.beta, self.delta_beta)
    }

    pub fn with_species(&self, species: Species) -> Self {
        PhysParams { species, ..*self }
    }

    /// Checks the conditions of `regime` and lists every violated one.
    pub fn check(&self, regime: Regime) -> Result<()> {
        let v = regime.violations(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Regime {
                regime: regime.to_string(),
                violations: v,
            })
        }
    }

    pub fn satisfies(&self, regime: Regime) -> bool {
        regime.violations(self).is_empty()
    }
}

/// Parameter regimes in which the individual decay estimates are stated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Full linear stability: velocity and density decay for all nonzero modes.
    FullDecay,
    /// Coercivity and decay of the plain weighted energy.
    WeightedEnergy,
    /// Coercivity and decay of the window-weighted energy.
    WindowedEnergy,
    /// Algebraic decay of the ion zero mode.
    IonZeroMode,
    /// Algebraic decay of the electron zero mode.
    ElectronZeroMode,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::FullDecay,
        Regime::WeightedEnergy,
        Regime::WindowedEnergy,
        Regime::IonZeroMode,
        Regime::ElectronZeroMode,
    ];

    pub fn violations(self, p: &PhysParams) -> Vec<String> {
        let (nu, lambda, mu, m) = (p.nu, p.lambda, p.mu(), p.mach);
        let mut out = Vec::new();
        let mut need = |ok: bool, what: String| {
            if !ok {
                out.push(what);
            }
        };
        // x^{-p} with the convention 0^{-p} = +inf
        let inv_pow = |x: f64, pw: f64| if x == 0.0 { f64::INFINITY } else { x.powf(-pw) };
        match self {
            Regime::FullDecay => {
                need(mu <= 0.5, format!("nu+lambda = {mu} > 1/2"));
                let mmax = inv_pow(mu, 1.0).min(inv_pow(lambda, 0.5)).min(inv_pow(nu, 1.0 / 3.0));
                need(m <= mmax, format!("M = {m} > min{{(nu+lambda)^-1, lambda^-1/2, nu^-1/3}} = {mmax}"));
                let ratio = if nu == 0.0 { f64::INFINITY } else { mu / nu };
                let m2max = inv_pow(mu, 1.0)
                    .min(ratio / 16.0)
                    .min((ratio / (32.0 * PI)).sqrt());
                need(
                    m * m <= m2max,
                    format!("M^2 = {} > min{{1/(nu+lambda), (nu+lambda)/(16nu), ((nu+lambda)/(32 pi nu))^1/2}} = {m2max}", m * m),
                );
            }
            Regime::WeightedEnergy => {
                need(mu > 0.0 && mu <= 0.5, format!("need 0 < mu <= 1/2, mu = {mu}"));
                let mmax = inv_pow(mu, 1.0).min(inv_pow(lambda, 0.5)).min(inv_pow(nu, 1.0 / 3.0));
                need(m <= mmax, format!("M = {m} > min{{mu^-1, lambda^-1/2, nu^-1/3}} = {mmax}"));
            }
            Regime::WindowedEnergy => {
                need(mu <= 0.5, format!("mu = {mu} > 1/2"));
                let mmax = inv_pow(mu, 0.5).min(inv_pow(lambda, 0.5)).min(inv_pow(nu, 1.0 / 3.0));
                need(m <= mmax, format!("M = {m} > min{{mu^-1/2, lambda^-1/2, nu^-1/3}} = {mmax}"));
            }
            Regime::IonZeroMode | Regime::ElectronZeroMode => {
                need(mu > 0.0 && mu <= 1.0, format!("need 0 < nu+lambda <= 1, got {mu}"));
                need(m * m * mu <= 1.0, format!("M^2 (nu+lambda) = {} > 1", m * m * mu));
                if mu > 0.0 {
                    if self == Regime::IonZeroMode {
                        let q = 16.0 * nu * m * m / mu;
                        need(q <= 1.0, format!("16 nu M^2/(nu+lambda) = {q} > 1"));
                    } else {
                        let q = 32.0 * PI * nu * m.powi(4) / mu;
                        need(q <= 1.0, format!("32 pi nu M^4/(nu+lambda) = {q} > 1"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::FullDecay => "full_decay",
            Regime::WeightedEnergy => "weighted_energy",
            Regime::WindowedEnergy => "windowed_energy",
            Regime::IonZeroMode => "ion_zero_mode",
            Regime::ElectronZeroMode => "electron_zero_mode",
        };
        f.write_str(s)
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.to_string() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown regime `{s}`")))
    }
}
