//! Closed-form solution of the inviscid zero-mode systems.

use std::f64::consts::PI;

use super::ModeState;
use crate::error::{Error, Result};
use crate::params::Species;

/// Oscillation frequency of the inviscid zero mode.
pub fn oracle_frequency(species: Species, xi: f64, mach: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::ZeroXi { op: "oracle_zero_inviscid" });
    }
    if !(mach > 0.0 && mach.is_finite() && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad oracle inputs xi = {xi}, M = {mach}")));
    }
    let xi2 = xi * xi;
    let m2 = mach * mach;
    let om2 = match species {
        Species::Ion => xi2 / m2 + 4.0 * PI * xi2 / (xi2 + 4.0 * PI * m2),
        Species::Electron => xi2 / m2 + 4.0 * PI,
    };
    Ok(om2.sqrt())
}

/// Exact state at time `t` of the `k = 0` system with `nu = lambda = 0`.
/// Slots are `(eta, psi, omega)`.
pub fn oracle_zero_inviscid(
    species: Species,
    xi: f64,
    mach: f64,
    initial: ModeState,
    t: f64,
) -> Result<ModeState> {
    let om = oracle_frequency(species, xi, mach)?;
    let (s, c) = (om * t).sin_cos();
    let eta = initial.pi * c - initial.psi * (s / om);
    let psi = initial.pi * (om * s) + initial.psi * c;
    let omega = initial.gamma + initial.pi - eta;
    Ok(ModeState::new(eta, psi, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{rhs_zero_electron, rhs_zero_ion, C64};
    use crate::params::PhysParams;

    #[test]
    fn frequencies() {
        let e = oracle_frequency(Species::Electron, 1.0, 1.0).unwrap();
        assert!((e - 3.6832).abs() < 1e-4);
        let i = oracle_frequency(Species::Ion, 1.0, 1.0).unwrap();
        assert!((i * i - 1.9263).abs() < 1e-4);
        assert!(oracle_frequency(Species::Ion, 0.0, 1.0).is_err());
    }

    #[test]
    fn identity_at_time_zero() {
        let y = ModeState::real(1.0, 0.0, 0.0);
        assert_eq!(oracle_zero_inviscid(Species::Electron, 1.0, 1.0, y, 0.0).unwrap(), y);
    }

    #[test]
    fn satisfies_the_ode() {
        // central difference of the oracle against the right-hand side
        let y0 = ModeState::new(C64::new(0.4, 0.1), C64::new(-1.0, 0.3), C64::new(0.2, 0.0));
        for species in [Species::Ion, Species::Electron] {
            let p = PhysParams::new(species, 0.0, 0.0, 0.7).unwrap();
            let h = 1e-5;
            let t = 1.3;
            let a = oracle_zero_inviscid(species, 0.8, 0.7, y0, t + h).unwrap();
            let b = oracle_zero_inviscid(species, 0.8, 0.7, y0, t - h).unwrap();
            let fd = (a - b) * (0.5 / h);
            let y = oracle_zero_inviscid(species, 0.8, 0.7, y0, t).unwrap();
            let d = match species {
                Species::Ion => rhs_zero_ion(&y, 0.8, &p).unwrap(),
                Species::Electron => rhs_zero_electron(&y, 0.8, &p).unwrap(),
            };
            assert!((fd - d).max_abs() < 1e-7, "{species}");
        }
    }
}
