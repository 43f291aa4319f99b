//! Per-mode linear dynamics.
//!
//! A [`ModeState`] stores `(Pi, Psi, Gamma)` for a sheared mode `k != 0`. On
//! the `k = 0` line the same slots hold `(eta, psi, omega)`.

mod duhamel;
mod integrator;
mod oracle;

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Mode, PhysParams, Species};
use crate::symbols::alpha_unchecked;

pub use duhamel::{duhamel_f, duhamel_f_with_tol, DEFAULT_DUHAMEL_RTOL};
pub use integrator::{integrate_mode, integrate_mode_with, IntegratorOptions, Trajectory};
pub use oracle::{oracle_frequency, oracle_zero_inviscid};

pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeState {
    pub pi: C64,
    pub psi: C64,
    pub gamma: C64,
}

impl ModeState {
    pub const ZERO: ModeState = ModeState {
        pi: C64::new(0.0, 0.0),
        psi: C64::new(0.0, 0.0),
        gamma: C64::new(0.0, 0.0),
    };

    pub fn new(pi: C64, psi: C64, gamma: C64) -> Self {
        ModeState { pi, psi, gamma }
    }

    pub fn real(pi: f64, psi: f64, gamma: f64) -> Self {
        ModeState::new(pi.into(), psi.into(), gamma.into())
    }

    /// `F = Pi + Gamma`.
    pub fn f(&self) -> C64 {
        self.pi + self.gamma
    }

    pub fn conj(&self) -> Self {
        ModeState::new(self.pi.conj(), self.psi.conj(), self.gamma.conj())
    }

    pub fn is_finite(&self) -> bool {
        [self.pi, self.psi, self.gamma].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        *self == ModeState::ZERO
    }

    pub fn max_abs(&self) -> f64 {
        self.pi.norm().max(self.psi.norm()).max(self.gamma.norm())
    }

    pub fn scale(&self, c: C64) -> Self {
        ModeState::new(self.pi * c, self.psi * c, self.gamma * c)
    }
}

impl Add for ModeState {
    type Output = ModeState;
    fn add(self, o: ModeState) -> ModeState {
        ModeState::new(self.pi + o.pi, self.psi + o.psi, self.gamma + o.gamma)
    }
}

impl Sub for ModeState {
    type Output = ModeState;
    fn sub(self, o: ModeState) -> ModeState {
        ModeState::new(self.pi - o.pi, self.psi - o.psi, self.gamma - o.gamma)
    }
}

impl Mul<f64> for ModeState {
    type Output = ModeState;
    fn mul(self, c: f64) -> ModeState {
        ModeState::new(self.pi * c, self.psi * c, self.gamma * c)
    }
}

/// Which of the three linear systems governs a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    Sheared,
    ZeroIon,
    ZeroElectron,
}

impl System {
    pub fn for_mode(mode: Mode, params: &PhysParams) -> Result<System> {
        if !mode.xi.is_finite() {
            return Err(Error::NonFinite { what: "mode xi".into() });
        }
        if mode.k != 0 {
            return Ok(System::Sheared);
        }
        if mode.xi == 0.0 {
            return Err(Error::ZeroXi { op: "integrate_mode" });
        }
        Ok(match params.species() {
            Species::Ion => System::ZeroIon,
            Species::Electron => System::ZeroElectron,
        })
    }
}

/// Precomputed coefficients of one mode's right-hand side.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rhs {
    k: f64,
    xi: f64,
    nu: f64,
    mu: f64,
    inv_m2: f64,
    four_pi_m2_delta: f64,
}

impl Rhs {
    pub(crate) fn new(mode: Mode, params: &PhysParams) -> Self {
        let m = params.mach();
        Rhs {
            k: mode.k as f64,
            xi: mode.xi,
            nu: params.nu(),
            mu: params.mu(),
            inv_m2: 1.0 / (m * m),
            four_pi_m2_delta: 4.0 * PI * m * m * params.delta(),
        }
    }

    /// The unified system. On `k = 0` it reduces to the ion or electron
    /// zero-mode system according to the species flag.
    #[inline]
    pub(crate) fn eval(&self, t: f64, y: &ModeState) -> ModeState {
        let (a, da) = alpha_unchecked(t, self.k, self.xi);
        let coupling = self.inv_m2 * a + 4.0 * PI * a / (a + self.four_pi_m2_delta);
        let d_pi = -y.psi;
        let d_psi = y.psi * (da / a - self.mu * a) + y.pi * coupling
            - y.gamma * (2.0 * self.k * self.k / a);
        let d_gamma = y.psi - y.gamma * (self.nu * a);
        ModeState::new(d_pi, d_psi, d_gamma)
    }
}

fn check_finite(state: &ModeState) -> Result<()> {
    if state.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { what: "mode state".into() })
    }
}

/// Right-hand side of the sheared system for `k != 0`.
pub fn rhs_nonzero(t: f64, state: &ModeState, mode: Mode, params: &PhysParams) -> Result<ModeState> {
    mode.require_nonzero("rhs_nonzero")?;
    check_finite(state)?;
    Ok(Rhs::new(mode, params).eval(t, state))
}

fn rhs_zero(
    op: &'static str,
    species: Species,
    state: &ModeState,
    xi: f64,
    params: &PhysParams,
) -> Result<ModeState> {
    if xi == 0.0 {
        return Err(Error::ZeroXi { op });
    }
    if !xi.is_finite() {
        return Err(Error::NonFinite { what: "xi".into() });
    }
    if params.species() != species {
        return Err(Error::SpeciesMismatch {
            op,
            detail: format!("expected {species}, params are {}", params.species()),
        });
    }
    check_finite(state)?;
    let xi2 = xi * xi;
    let m2 = params.mach() * params.mach();
    let potential = match species {
        Species::Ion => 4.0 * PI * xi2 / (xi2 + 4.0 * PI * m2),
        Species::Electron => 4.0 * PI,
    };
    Ok(ModeState::new(
        -state.psi,
        state.pi * (xi2 / m2 + potential) - state.psi * (params.mu() * xi2),
        state.psi - state.gamma * (params.nu() * xi2),
    ))
}

/// Ion zero mode: state slots hold `(eta, psi, omega)`.
pub fn rhs_zero_ion(state: &ModeState, xi: f64, params: &PhysParams) -> Result<ModeState> {
    rhs_zero("rhs_zero_ion", Species::Ion, state, xi, params)
}

/// Electron zero mode: state slots hold `(eta, psi, omega)`.
pub fn rhs_zero_electron(state: &ModeState, xi: f64, params: &PhysParams) -> Result<ModeState> {
    rhs_zero("rhs_zero_electron", Species::Electron, state, xi, params)
}
