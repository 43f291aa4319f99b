//! Weighted variables and the mode energies of the sheared system.

use std::f64::consts::PI;

use crate::dynamics::{ModeState, C64};
use crate::error::{Error, Result};
use crate::params::{Mode, PhysParams};
use crate::symbols::{alpha_unchecked, m_unchecked, sobolev_weight, w_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Multiplier `m` only.
    Plain,
    /// Multipliers `m` and the window weight `w`.
    Windowed,
}

impl Variant {
    fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Windowed => "windowed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedVars {
    pub z1: C64,
    pub z2: C64,
    pub z3: C64,
    pub variant: Variant,
    pub s: f64,
}

impl WeightedVars {
    pub fn new(z1: C64, z2: C64, z3: C64, variant: Variant, s: f64) -> Self {
        WeightedVars { z1, z2, z3, variant, s }
    }
}

/// Plain: `Z1 = <>^s m^{-1} alpha^{-1/4} Pi / M`, `Z2 = <>^s m^{-1} alpha^{-3/4} Psi`,
/// `Z3 = <>^s m^{-1} alpha^{-3/4} (F - nu M^2 Psi)`.
///
/// Windowed: `Z1 = <>^s m^{-1} w^{-3/4} alpha^{1/2} Pi / M`, `Z2 = <>^s m^{-1} w^{-3/4} Psi`,
/// `Z3 = <>^s m^{-1} w^{-3/4} (F - nu M^2 Psi)`.
pub fn weighted_vars(
    state: &ModeState,
    t: f64,
    mode: Mode,
    params: &PhysParams,
    s: f64,
    variant: Variant,
) -> Result<WeightedVars> {
    mode.require_nonzero("weighted_vars")?;
    let k = mode.k as f64;
    let (a, _) = alpha_unchecked(t, k, mode.xi);
    let (m, _) = m_unchecked(t, k, mode.xi, params.nu());
    let base = sobolev_weight(s, mode) / m;
    let f3 = state.f() - state.psi * (params.nu() * params.mach() * params.mach());
    let inv_m = 1.0 / params.mach();
    let (c1, c23) = match variant {
        Variant::Plain => (base * a.powf(-0.25), base * a.powf(-0.75)),
        Variant::Windowed => {
            let (w, _) = w_unchecked(t, k, mode.xi, params.nu(), params.beta());
            let ww = base * w.powf(-0.75);
            (ww * a.sqrt(), ww)
        }
    };
    Ok(WeightedVars::new(
        state.pi * (c1 * inv_m),
        state.psi * c23,
        f3 * c23,
        variant,
        s,
    ))
}

/// `W = 1 + M^2 (dt alpha)^2 / alpha^3 + 4 pi M^2 / (alpha + 4 pi M^2 delta)`.
pub fn z1_weight(t: f64, mode: Mode, params: &PhysParams) -> f64 {
    let (a, da) = alpha_unchecked(t, mode.k as f64, mode.xi);
    let m2 = params.mach() * params.mach();
    1.0 + m2 * da * da / (a * a * a) + 4.0 * PI * m2 / (a + 4.0 * PI * m2 * params.delta())
}

fn energy_shape(zv: &WeightedVars, t: f64, mode: Mode, params: &PhysParams, gamma: f64) -> f64 {
    let (a, da) = alpha_unchecked(t, mode.k as f64, mode.xi);
    let w = z1_weight(t, mode, params);
    let cross = (zv.z1.conj() * zv.z2).re;
    let coef = 0.5 * params.mach() * da / a.powf(1.5) - 2.0 * gamma / a.sqrt();
    0.5 * (w * zv.z1.norm_sqr() + zv.z2.norm_sqr() + zv.z3.norm_sqr() + coef * cross)
}

fn require_variant(zv: &WeightedVars, v: Variant) -> Result<()> {
    if zv.variant != v {
        return Err(Error::VariantMismatch { expected: v.name() });
    }
    Ok(())
}

/// `E_delta = 1/2 [W |Z1|^2 + |Z2|^2 + |Z3|^2 + (M/2)(dt alpha / alpha^{3/2}) Re(conj(Z1) Z2)
/// - 2 gamma alpha^{-1/2} Re(conj(Z1) Z2)]` with plain variables.
pub fn energy_e_delta(zv: &WeightedVars, t: f64, mode: Mode, params: &PhysParams) -> Result<f64> {
    mode.require_nonzero("energy_e_delta")?;
    require_variant(zv, Variant::Plain)?;
    Ok(energy_shape(zv, t, mode, params, params.gamma()))
}

/// Same quadratic form evaluated on the windowed variables.
pub fn energy_e_delta_w(zv: &WeightedVars, t: f64, mode: Mode, params: &PhysParams) -> Result<f64> {
    mode.require_nonzero("energy_e_delta_w")?;
    require_variant(zv, Variant::Windowed)?;
    Ok(energy_shape(zv, t, mode, params, params.gamma()))
}

/// The energy with an arbitrary cross-term constant in place of
/// `gamma = M nu^{1/3} / 4`. Used as a negative control.
pub fn energy_with_gamma(zv: &WeightedVars, t: f64, mode: Mode, params: &PhysParams, gamma: f64) -> Result<f64> {
    mode.require_nonzero("energy_with_gamma")?;
    Ok(energy_shape(zv, t, mode, params, gamma))
}

/// Lower and upper coercivity bounds
/// `1/4 (W|Z1|^2 + |Z2|^2 + 2|Z3|^2)` and `W|Z1|^2 + |Z2|^2 + |Z3|^2`.
pub fn coercivity_bounds(zv: &WeightedVars, t: f64, mode: Mode, params: &PhysParams) -> Result<(f64, f64)> {
    mode.require_nonzero("coercivity_bounds")?;
    let w = z1_weight(t, mode, params);
    let (a1, a2, a3) = (zv.z1.norm_sqr(), zv.z2.norm_sqr(), zv.z3.norm_sqr());
    Ok((0.25 * (w * a1 + a2 + 2.0 * a3), w * a1 + a2 + a3))
}

/// Energy of one mode state in the requested variant.
pub fn mode_energy(state: &ModeState, t: f64, mode: Mode, params: &PhysParams, s: f64, variant: Variant) -> Result<f64> {
    let zv = weighted_vars(state, t, mode, params, s, variant)?;
    match variant {
        Variant::Plain => energy_e_delta(&zv, t, mode, params),
        Variant::Windowed => energy_e_delta_w(&zv, t, mode, params),
    }
}
