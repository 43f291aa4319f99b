//! Energy functionals of the `x`-averaged (`k = 0`) dynamics. States hold
//! `(eta, psi, omega)`.

use std::f64::consts::PI;

use crate::dynamics::ModeState;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::params::{PhysParams, Species};

/// One node of the `k = 0` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPoint {
    pub xi: f64,
    pub weight: f64,
    pub state: ModeState,
}

fn check(op: &'static str, points: &[ZeroPoint], params: &PhysParams, species: Species) -> Result<()> {
    if params.species() != species {
        return Err(Error::SpeciesMismatch {
            op,
            detail: format!("expected {species}, params are {}", params.species()),
        });
    }
    if points.iter().any(|p| p.xi == 0.0) {
        return Err(Error::ZeroXi { op });
    }
    Ok(())
}

fn sum_over(points: &[ZeroPoint], f: impl Fn(f64, &ModeState) -> f64) -> f64 {
    let v: Vec<f64> = points.iter().map(|p| p.weight * f(p.xi.abs(), &p.state)).collect();
    pairwise_sum(&v)
}

fn pw(a: f64, e: i32) -> f64 {
    a.powi(2 * e)
}

/// `Re <d^j eta, d^j psi>`
fn cross(points: &[ZeroPoint], j: i32) -> f64 {
    sum_over(points, |a, s| pw(a, j) * (s.pi * s.psi.conj()).re)
}

/// The ion functional `calE^l`.
pub fn zero_mode_cal_e(points: &[ZeroPoint], l: u32, params: &PhysParams) -> Result<f64> {
    check("zero_mode_cal_e", points, params, Species::Ion)?;
    let l = l as i32;
    let m2 = params.mach() * params.mach();
    let nu_m2 = params.nu() * m2;
    Ok(sum_over(points, |a, s| {
        let eta2 = s.pi.norm_sqr();
        let psi2 = s.psi.norm_sqr();
        let top = s.gamma + s.pi - s.psi * nu_m2;
        (pw(a, l) + pw(a, l - 1)) * psi2
            + (pw(a, l + 1) + pw(a, l)) * eta2 / m2
            + 4.0 * PI * (pw(a, l + 1) + pw(a, l)) / (a * a + 4.0 * PI * m2) * eta2
            + pw(a, l) * top.norm_sqr()
    }))
}

/// `E^l = 1/2 (calE^l - (mu/2) Re <d^l eta, d^l psi>)`.
pub fn zero_mode_e_l(points: &[ZeroPoint], l: u32, params: &PhysParams) -> Result<f64> {
    let big = zero_mode_cal_e(points, l, params)?;
    Ok(0.5 * (big - 0.5 * params.mu() * cross(points, l as i32)))
}

/// The electron functional `calF^l`.
pub fn zero_mode_cal_f(points: &[ZeroPoint], l: u32, params: &PhysParams) -> Result<f64> {
    check("zero_mode_cal_f", points, params, Species::Electron)?;
    let l = l as i32;
    let m2 = params.mach() * params.mach();
    let nu_m2 = params.nu() * m2;
    Ok(sum_over(points, |a, s| {
        let eta2 = s.pi.norm_sqr();
        let psi2 = s.psi.norm_sqr();
        let top = s.gamma + s.pi - s.psi * nu_m2;
        let low = pw(a, l) + pw(a, l - 1) + pw(a, l - 2);
        low * psi2
            + (pw(a, l + 1) + pw(a, l) + pw(a, l - 1)) * eta2 / m2
            + 4.0 * PI * low * eta2
            + pw(a, l) * top.norm_sqr()
    }))
}

/// `F^l = 1/2 (calF^l - (mu/2) Re <d^l eta, d^l psi> - (mu/2) Re <d^{l-1} eta, d^{l-1} psi>)`.
pub fn zero_mode_f_l(points: &[ZeroPoint], l: u32, params: &PhysParams) -> Result<f64> {
    let big = zero_mode_cal_f(points, l, params)?;
    let l = l as i32;
    Ok(0.5 * (big - 0.5 * params.mu() * (cross(points, l) + cross(points, l - 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::C64;

    fn pt(xi: f64, w: f64, s: ModeState) -> ZeroPoint {
        ZeroPoint { xi, weight: w, state: s }
    }

    #[test]
    fn zero_states_give_zero() {
        let pi = PhysParams::new(Species::Ion, 0.1, 0.1, 0.5).unwrap();
        let pe = pi.with_species(Species::Electron);
        let pts = [pt(0.5, 0.1, ModeState::ZERO), pt(-0.5, 0.1, ModeState::ZERO)];
        assert_eq!(zero_mode_cal_e(&pts, 0, &pi).unwrap(), 0.0);
        assert_eq!(zero_mode_e_l(&pts, 2, &pi).unwrap(), 0.0);
        assert_eq!(zero_mode_cal_f(&pts, 1, &pe).unwrap(), 0.0);
        assert_eq!(zero_mode_f_l(&pts, 0, &pe).unwrap(), 0.0);
    }

    #[test]
    fn one_point_ion_value() {
        let p = PhysParams::new(Species::Ion, 0.0, 0.0, 1.0).unwrap();
        let wq = 0.25;
        let pts = [pt(1.0, wq, ModeState::real(1.0, 0.0, 0.0))];
        let want = 2.0 * wq + 4.0 * PI / (1.0 + 4.0 * PI) * 2.0 * wq + wq;
        assert!((zero_mode_cal_e(&pts, 0, &p).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn one_point_electron_value() {
        let p = PhysParams::new(Species::Electron, 0.0, 0.0, 2.0).unwrap();
        let (xi, wq) = (0.5f64, 0.5);
        let s = ModeState::real(1.0, 2.0, 0.5);
        let a2 = xi * xi;
        // l = 1
        let want = wq
            * ((a2 + 1.0 + 1.0 / a2) * 4.0
                + (a2 * a2 + a2 + 1.0) / 4.0
                + 4.0 * PI * (a2 + 1.0 + 1.0 / a2)
                + a2 * 1.5f64.powi(2));
        let got = zero_mode_cal_f(&[pt(xi, wq, s)], 1, &p).unwrap();
        assert!((got - want).abs() < 1e-13 * want);
    }

    #[test]
    fn inviscid_cross_terms_vanish() {
        let p = PhysParams::new(Species::Ion, 0.0, 0.0, 1.0).unwrap();
        let pts = [pt(0.7, 0.1, ModeState::new(C64::new(1.0, 0.3), C64::new(-0.5, 2.0), C64::new(0.1, 0.0)))];
        let e = zero_mode_cal_e(&pts, 1, &p).unwrap();
        assert_eq!(zero_mode_e_l(&pts, 1, &p).unwrap(), 0.5 * e);
        let pe = p.with_species(Species::Electron);
        let f = zero_mode_cal_f(&pts, 1, &pe).unwrap();
        assert_eq!(zero_mode_f_l(&pts, 1, &pe).unwrap(), 0.5 * f);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = PhysParams::new(Species::Ion, 0.1, 0.1, 0.5).unwrap();
        let pts = [pt(0.0, 0.1, ModeState::ZERO)];
        assert!(matches!(zero_mode_cal_e(&pts, 0, &p), Err(Error::ZeroXi { .. })));
        let pts = [pt(1.0, 0.1, ModeState::ZERO)];
        assert!(matches!(zero_mode_cal_f(&pts, 0, &p), Err(Error::SpeciesMismatch { .. })));
    }
}
