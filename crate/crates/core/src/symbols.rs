//! Time-dependent Fourier symbols of the moving frame.
//!
//! Every function here is pure in `(t, mode, params)`.

use crate::error::{Error, Result};
use crate::params::{Mode, PhysParams};

/// `alpha = k^2 + (xi - k t)^2` and its time derivative `-2k(xi - k t)`.
pub fn symbol_alpha(t: f64, mode: Mode) -> Result<(f64, f64)> {
    if mode.k == 0 && mode.xi == 0.0 {
        return Err(Error::ZeroSymbol { k: 0, xi: 0.0 });
    }
    Ok(alpha_unchecked(t, mode.k as f64, mode.xi))
}

#[inline]
pub(crate) fn alpha_unchecked(t: f64, k: f64, xi: f64) -> (f64, f64) {
    let s = xi - k * t;
    (k * k + s * s, -2.0 * k * s)
}

/// Enhanced-dissipation multiplier `m = exp(2 atan(nu^{1/3}(t - xi/k)))`
/// together with `dt m / m`.
///
/// At `nu = 0` this degenerates to `m = 1`, `dt m / m = 0`.
pub fn multiplier_m(t: f64, mode: Mode, params: &PhysParams) -> Result<(f64, f64)> {
    mode.require_nonzero("multiplier_m")?;
    Ok(m_unchecked(t, mode.k as f64, mode.xi, params.nu()))
}

#[inline]
pub(crate) fn m_unchecked(t: f64, k: f64, xi: f64, nu: f64) -> (f64, f64) {
    let c = nu.cbrt();
    let d = t - xi / k;
    let m = (2.0 * (c * d).atan()).exp();
    let dm = 2.0 * c / (c * c * d * d + 1.0);
    (m, dm)
}

/// Window multiplier `w` and `dt w / w`.
///
/// Defined by `dt w / w = (dt alpha / alpha) 1_{[t_enter, t_exit]}`, `w(0) = 1`,
/// with `t_enter = max(xi/k, 0)` and `t_exit = xi/k + beta nu^{-1/3}`.
pub fn multiplier_w(t: f64, mode: Mode, params: &PhysParams) -> Result<(f64, f64)> {
    mode.require_nonzero("multiplier_w")?;
    Ok(w_unchecked(t, mode.k as f64, mode.xi, params.nu(), params.beta()))
}

#[inline]
pub(crate) fn w_unchecked(t: f64, k: f64, xi: f64, nu: f64, beta: f64) -> (f64, f64) {
    let tc = xi / k;
    let t_exit = if nu > 0.0 {
        tc + beta / nu.cbrt()
    } else {
        f64::INFINITY
    };
    let t_enter = tc.max(0.0);
    if t_exit <= 0.0 || t < t_enter {
        return (1.0, 0.0);
    }
    let a_enter = alpha_unchecked(t_enter, k, xi).0;
    if t <= t_exit {
        let (a, da) = alpha_unchecked(t, k, xi);
        (a / a_enter, da / a)
    } else {
        (alpha_unchecked(t_exit, k, xi).0 / a_enter, 0.0)
    }
}

/// `L_nu(t) = -nu int_0^t alpha = -nu t (k^2 t^2 / 3 + k^2 + xi^2 - xi k t)`.
pub fn symbol_lnu(t: f64, mode: Mode, params: &PhysParams) -> f64 {
    lnu_unchecked(t, mode.k as f64, mode.xi, params.nu())
}

#[inline]
pub(crate) fn lnu_unchecked(t: f64, k: f64, xi: f64, nu: f64) -> f64 {
    -nu * t * (k * k * t * t / 3.0 + k * k + xi * xi - xi * k * t)
}

/// `<k, xi>^s = (1 + k^2 + xi^2)^{s/2}`.
pub fn sobolev_weight(s: f64, mode: Mode) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    let k = mode.k as f64;
    (1.0 + k * k + mode.xi * mode.xi).powf(0.5 * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Species;
    use approx::assert_relative_eq;

    fn params(nu: f64) -> PhysParams {
        PhysParams::new(Species::Ion, nu, 0.0, 1.0).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(symbol_alpha(0.0, Mode::new(1, 0.0)).unwrap(), (1.0, 0.0));
        assert_eq!(symbol_alpha(3.0, Mode::new(2, 6.0)).unwrap(), (4.0, 0.0));
        assert_eq!(symbol_alpha(1.0, Mode::new(1, 3.0)).unwrap(), (5.0, -4.0));
        assert!(matches!(
            symbol_alpha(1.0, Mode::new(0, 0.0)),
            Err(Error::ZeroSymbol { .. })
        ));
        assert_eq!(symbol_alpha(2.0, Mode::new(0, 3.0)).unwrap(), (9.0, 0.0));
    }

    #[test]
    fn m_examples() {
        let p = params(1e-3);
        let (m, dm) = multiplier_m(3.0, Mode::new(2, 6.0), &p).unwrap();
        assert_eq!(m, 1.0);
        assert_relative_eq!(dm, 2.0 * 1e-3f64.cbrt(), max_relative = 1e-15);
        assert_eq!(multiplier_m(0.0, Mode::new(1, 0.0), &p).unwrap().0, 1.0);
        let (m_inf, _) = multiplier_m(1e6, Mode::new(1, 0.0), &p).unwrap();
        assert!((m_inf - std::f64::consts::PI.exp()).abs() < 1e-3);
        assert!(multiplier_m(0.0, Mode::new(0, 1.0), &p).is_err());
    }

    #[test]
    fn m_log_derivative_matches_finite_difference() {
        let p = params(1e-2);
        let h = 1e-4;
        for &(k, xi, t) in &[(1, 3.0, 1.0), (-2, 5.0, 7.5), (3, -4.0, 20.0)] {
            let mode = Mode::new(k, xi);
            let lp = multiplier_m(t + h, mode, &p).unwrap().0.ln();
            let lm = multiplier_m(t - h, mode, &p).unwrap().0.ln();
            let fd = (lp - lm) / (2.0 * h);
            let dm = multiplier_m(t, mode, &p).unwrap().1;
            assert!((fd - dm).abs() < 1e-7, "{fd} vs {dm}");
        }
    }

    #[test]
    fn w_examples() {
        let p = params(1e-3);
        let mode = Mode::new(1, 10.0);
        assert_eq!(multiplier_w(5.0, mode, &p).unwrap(), (1.0, 0.0));
        let (w, dw) = multiplier_w(12.0, mode, &p).unwrap();
        assert_relative_eq!(w, 5.0, max_relative = 1e-14);
        assert_relative_eq!(dw, 4.0 / 5.0, max_relative = 1e-14);
        let t_exit = 10.0 + 50.0 / 1e-3f64.cbrt();
        let (w, dw) = multiplier_w(t_exit + 1.0, mode, &p).unwrap();
        assert_relative_eq!(w, 1.0 + 2500.0 * 1e-3f64.powf(-2.0 / 3.0), max_relative = 1e-12);
        assert_eq!(dw, 0.0);
    }

    #[test]
    fn w_before_critical_time_with_negative_product() {
        let p = params(1e-3);
        // xi k < 0 and window already open at t = 0
        let mode = Mode::new(1, -3.0);
        let (w, _) = multiplier_w(0.0, mode, &p).unwrap();
        assert_eq!(w, 1.0);
        let (w, _) = multiplier_w(2.0, mode, &p).unwrap();
        assert_relative_eq!(w, 26.0 / 10.0, max_relative = 1e-14);
        // window closed before t = 0
        let far = Mode::new(1, -1000.0);
        assert_eq!(multiplier_w(5.0, far, &p).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn w_is_continuous_at_window_edges() {
        let p = params(1e-3);
        for &(k, xi) in &[(1, 10.0), (2, -7.0), (-3, 4.0), (1, 0.5)] {
            let mode = Mode::new(k, xi);
            let tc = xi / k as f64;
            let t_exit = tc + 500.0;
            for edge in [tc.max(0.0), t_exit] {
                if edge <= 0.0 {
                    continue;
                }
                let eps = 1e-9 * edge.max(1.0);
                let a = multiplier_w(edge - eps, mode, &p).unwrap().0;
                let b = multiplier_w(edge + eps, mode, &p).unwrap().0;
                assert!((a - b).abs() <= 1e-6 * a, "jump {a} -> {b} at {edge}");
            }
        }
    }

    #[test]
    fn lnu_examples_match_quadrature() {
        let p = params(0.01);
        assert_eq!(symbol_lnu(0.0, Mode::new(3, 1.0), &p), 0.0);
        assert_relative_eq!(symbol_lnu(3.0, Mode::new(1, 0.0), &p), -0.12, max_relative = 1e-14);
        assert_relative_eq!(
            symbol_lnu(1.0, Mode::new(1, 2.0), &p),
            -0.01 * (1.0 / 3.0 + 1.0 + 4.0 - 2.0),
            max_relative = 1e-14
        );
        // Gauss-Legendre is exact for the quadratic alpha
        let mode = Mode::new(1, 2.0);
        let (a, b) = (0.0, 1.0);
        let nodes = [-(3.0f64 / 5.0).sqrt(), 0.0, (3.0f64 / 5.0).sqrt()];
        let wts = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let q: f64 = nodes
            .iter()
            .zip(wts)
            .map(|(x, w)| w * symbol_alpha(0.5 * (a + b) + 0.5 * (b - a) * x, mode).unwrap().0)
            .sum::<f64>()
            * 0.5
            * (b - a);
        assert!((symbol_lnu(1.0, mode, &p) + 0.01 * q).abs() < 1e-12);
    }

    #[test]
    fn sobolev_weight_examples() {
        assert_eq!(sobolev_weight(0.0, Mode::new(5, 3.0)), 1.0);
        assert_relative_eq!(sobolev_weight(2.0, Mode::new(1, 2.0)), 6.0, max_relative = 1e-15);
        assert_eq!(sobolev_weight(1.0, Mode::new(0, 0.0)), 1.0);
    }
}
