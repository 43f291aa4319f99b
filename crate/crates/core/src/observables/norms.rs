//! Sobolev norms and the velocity/density observables of the sheared frame.

use super::SpectralEnsemble;
use crate::dynamics::{ModeState, C64};
use crate::error::{Error, Result};
use crate::params::{Mode, PhysParams};
use crate::symbols::alpha_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Pi,
    Psi,
    Gamma,
    /// `F = Pi + Gamma`
    F,
    /// `F - nu M^2 Psi`
    FMinusNuM2Psi,
}

impl Field {
    fn pick(self, s: &ModeState, nu_m2: f64) -> C64 {
        match self {
            Field::Pi => s.pi,
            Field::Psi => s.psi,
            Field::Gamma => s.gamma,
            Field::F => s.f(),
            Field::FMinusNuM2Psi => s.f() - s.psi * nu_m2,
        }
    }
}

/// A field optionally multiplied by `alpha(t)^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSelector {
    pub field: Field,
    pub alpha_power: f64,
}

impl FieldSelector {
    pub fn plain(field: Field) -> Self {
        FieldSelector { field, alpha_power: 0.0 }
    }
    pub fn alpha_weighted(field: Field, alpha_power: f64) -> Self {
        FieldSelector { field, alpha_power }
    }
}

impl From<Field> for FieldSelector {
    fn from(f: Field) -> Self {
        FieldSelector::plain(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weighting {
    /// `<k, xi>^{2s}`
    Isotropic(f64),
    /// `<k>^{2 s1} <xi>^{2 s2}`
    Anisotropic(f64, f64),
}

impl Weighting {
    fn weight_sq(self, mode: Mode) -> f64 {
        let k2 = (mode.k * mode.k) as f64;
        let x2 = mode.xi * mode.xi;
        match self {
            Weighting::Isotropic(0.0) => 1.0,
            Weighting::Isotropic(s) => (1.0 + k2 + x2).powf(s),
            Weighting::Anisotropic(s1, s2) => (1.0 + k2).powf(s1) * (1.0 + x2).powf(s2),
        }
    }
}

/// `|| <.>^s alpha^p field ||_{L^2}` by quadrature over the ensemble.
pub fn sobolev_norm(
    ensemble: &SpectralEnsemble,
    selector: impl Into<FieldSelector>,
    weighting: Weighting,
    params: &PhysParams,
) -> Result<f64> {
    let sel = selector.into();
    let nu_m2 = params.nu() * params.mach() * params.mach();
    let t = ensemble.t;
    let sq = ensemble.quadrature(|mode, s| {
        let z = sel.field.pick(s, nu_m2);
        let mut v = z.norm_sqr() * weighting.weight_sq(mode);
        if sel.alpha_power != 0.0 && v != 0.0 {
            let (a, _) = alpha_unchecked(t, mode.k as f64, mode.xi);
            v *= a.powf(2.0 * sel.alpha_power);
        }
        v
    });
    if !sq.is_finite() {
        return Err(Error::NonFinite { what: "Sobolev norm".into() });
    }
    Ok(sq.sqrt())
}

/// Norms measured on the nonzero-mode sector at the ensemble time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Observables {
    /// `||Q[u]||`, the irrotational velocity: `alpha^{-1/2} Psi`
    pub q_norm: f64,
    /// `||P[u]^x||`: `(xi - k t) alpha^{-1} Gamma`
    pub px_norm: f64,
    /// `||P[u]^y||`: `k alpha^{-1} Gamma`
    pub py_norm: f64,
    /// `||eta|| / M`
    pub eta_norm_over_m: f64,
    /// `||grad eta||`: `alpha^{1/2} Pi`
    pub grad_eta_norm: f64,
    /// `||psi||`
    pub psi_norm: f64,
    /// `||grad eta|| / M`
    pub grad_eta_over_m: f64,
    /// `||omega||`
    pub omega_norm: f64,
}

impl Observables {
    /// `||(psi, grad eta / M, omega)||`
    pub fn raw_triple(&self) -> f64 {
        (self.psi_norm.powi(2) + self.grad_eta_over_m.powi(2) + self.omega_norm.powi(2)).sqrt()
    }
}

pub fn observables(ensemble: &SpectralEnsemble, params: &PhysParams) -> Result<Observables> {
    if let Some(r) = ensemble.k_set().iter().position(|&k| k == 0) {
        let n = ensemble.grid().len();
        if ensemble.states()[r * n..(r + 1) * n].iter().any(|s| !s.is_zero()) {
            return Err(Error::ZeroModeRejected { op: "observables" });
        }
    }
    let t = ensemble.t;
    let m = params.mach();
    // one pass per scalar keeps every reduction in canonical order
    let q = |f: &(dyn Fn(f64, f64, f64, &ModeState) -> f64 + Sync)| {
        ensemble
            .quadrature(|mode, s| {
                if mode.k == 0 {
                    return 0.0;
                }
                let k = mode.k as f64;
                let (a, _) = alpha_unchecked(t, k, mode.xi);
                f(k, mode.xi - k * t, a, s)
            })
            .sqrt()
    };
    let q_norm = q(&|_, _, a, s| s.psi.norm_sqr() / a);
    let px_norm = q(&|_, sx, a, s| s.gamma.norm_sqr() * sx * sx / (a * a));
    let py_norm = q(&|k, _, a, s| s.gamma.norm_sqr() * k * k / (a * a));
    let eta = q(&|_, _, _, s| s.pi.norm_sqr());
    let grad_eta = q(&|_, _, a, s| s.pi.norm_sqr() * a);
    let psi = q(&|_, _, _, s| s.psi.norm_sqr());
    let omega = q(&|_, _, _, s| s.gamma.norm_sqr());
    Ok(Observables {
        q_norm,
        px_norm,
        py_norm,
        eta_norm_over_m: eta / m,
        grad_eta_norm: grad_eta,
        psi_norm: psi,
        grad_eta_over_m: grad_eta / m,
        omega_norm: omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::XiGrid;
    use crate::params::Species;

    fn params() -> PhysParams {
        PhysParams::new(Species::Ion, 1e-2, 0.0, 2.0).unwrap()
    }

    fn single(k: i64, state: ModeState, t: f64) -> SpectralEnsemble {
        // grid with nodes at +-1/2: use the node xi = 1/2 only
        let g = XiGrid::new(1.0, 1.0).unwrap();
        let mut e = SpectralEnsemble::zeros(vec![k], g).unwrap();
        e.states_mut()[1] = state;
        e.t = t;
        e
    }

    #[test]
    fn zero_ensemble_has_zero_norms() {
        let g = XiGrid::new(2.0, 0.5).unwrap();
        let e = SpectralEnsemble::zeros(vec![-1, 1], g).unwrap();
        let p = params();
        assert_eq!(sobolev_norm(&e, Field::Psi, Weighting::Isotropic(3.0), &p).unwrap(), 0.0);
        assert_eq!(observables(&e, &p).unwrap(), Observables::default());
    }

    #[test]
    fn py_weight_at_initial_time() {
        let e = single(1, ModeState::real(0.0, 0.0, 1.0), 0.5);
        let o = observables(&e, &params()).unwrap();
        // xi = 1/2, t = 1/2: xi - k t = 0, alpha = 1
        assert!((o.py_norm - 1.0).abs() < 1e-15);
        assert_eq!(o.px_norm, 0.0);
        assert_eq!(o.q_norm, 0.0);
    }

    #[test]
    fn density_only_state() {
        let e = single(2, ModeState::real(3.0, 0.0, 0.0), 0.0);
        let o = observables(&e, &params()).unwrap();
        assert_eq!(o.q_norm, 0.0);
        assert!((o.eta_norm_over_m - 1.5).abs() < 1e-15);
    }

    #[test]
    fn frozen_states_change_only_through_alpha() {
        let s = ModeState::real(0.0, 2.0, 0.0);
        let a = observables(&single(1, s, 0.0), &params()).unwrap();
        let b = observables(&single(1, s, 3.0), &params()).unwrap();
        let alpha = |t: f64| 1.0 + (0.5 - t) * (0.5 - t);
        assert!((a.q_norm - 2.0 / alpha(0.0).sqrt()).abs() < 1e-14);
        assert!((b.q_norm - 2.0 / alpha(3.0).sqrt()).abs() < 1e-14);
        assert_eq!(a.psi_norm, b.psi_norm);
    }

    #[test]
    fn nonzero_zero_line_rejected() {
        let e = single(0, ModeState::real(1.0, 0.0, 0.0), 0.0);
        assert!(matches!(observables(&e, &params()), Err(Error::ZeroModeRejected { .. })));
    }

    #[test]
    fn anisotropic_and_alpha_weights() {
        let e = single(1, ModeState::real(1.0, 0.0, 0.0), 0.0);
        let p = params();
        let n = sobolev_norm(&e, Field::Pi, Weighting::Anisotropic(1.0, 0.0), &p).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-15);
        let n = sobolev_norm(&e, FieldSelector::alpha_weighted(Field::Pi, 0.5), Weighting::Isotropic(0.0), &p).unwrap();
        assert!((n - 1.25f64.sqrt()).abs() < 1e-15);
        let n = sobolev_norm(&e, Field::Pi, Weighting::Isotropic(2.0), &p).unwrap();
        assert!((n - 2.25).abs() < 1e-15);
    }
}
