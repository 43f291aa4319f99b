//! Duhamel representation of `F = Pi + Gamma` for a sheared mode:
//! `F(t) = e^{L(t)} F(0) + nu int_0^t e^{L(t) - L(tau)} alpha(tau) Pi(tau) dtau`.

use super::{Trajectory, C64};
use crate::error::{Error, Result};
use crate::symbols::{alpha_unchecked, lnu_unchecked};

/// Relative accuracy requested by [`duhamel_f`].
pub const DEFAULT_DUHAMEL_RTOL: f64 = 1e-7;

/// Evaluates the Duhamel formula at every sample of `traj` using the stored
/// `Pi` samples and composite Simpson panels.
pub fn duhamel_f(traj: &Trajectory) -> Result<Vec<C64>> {
    duhamel_f_with_tol(traj, DEFAULT_DUHAMEL_RTOL)
}

/// As [`duhamel_f`], failing with [`Error::TooFewSamples`] when a Richardson
/// estimate of the quadrature error exceeds `rtol` relative to `max |F|`.
pub fn duhamel_f_with_tol(traj: &Trajectory, rtol: f64) -> Result<Vec<C64>> {
    traj.mode.require_nonzero("duhamel_f")?;
    let n = traj.times.len();
    if n < 5 {
        return Err(Error::TooFewSamples { have: n, need: 5 });
    }
    let dt = (traj.times[n - 1] - traj.times[0]) / (n - 1) as f64;
    for (j, &t) in traj.times.iter().enumerate() {
        if (t - (traj.times[0] + j as f64 * dt)).abs() > 1e-9 * traj.times[n - 1].max(1.0) {
            return Err(Error::Grid(format!(
                "Duhamel quadrature needs uniformly spaced samples; sample {j} at t = {t}"
            )));
        }
    }

    let fine = evaluate(traj, 1);
    if traj.params.nu() == 0.0 {
        return Ok(fine);
    }
    // Richardson: the half-resolution result differs from the fine one by
    // about 15x the fine error.
    let coarse = evaluate(traj, 2);
    let scale = fine.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let est = fine
        .iter()
        .step_by(2)
        .zip(&coarse)
        .map(|(a, b)| (a - b).norm() / 15.0)
        .fold(0.0, f64::max);
    if scale > 0.0 && est > rtol * scale {
        let factor = (est / (rtol * scale)).powf(0.25);
        let need = ((n - 1) as f64 * factor).ceil() as usize + 1;
        return Err(Error::TooFewSamples { have: n, need });
    }
    Ok(fine)
}

/// Duhamel sum on every `stride`-th sample.
fn evaluate(traj: &Trajectory, stride: usize) -> Vec<C64> {
    let k = traj.mode.k as f64;
    let xi = traj.mode.xi;
    let nu = traj.params.nu();
    let idx: Vec<usize> = (0..traj.times.len()).step_by(stride).collect();
    let ts: Vec<f64> = idx.iter().map(|&i| traj.times[i]).collect();
    let lv: Vec<f64> = ts.iter().map(|&t| lnu_unchecked(t, k, xi, nu)).collect();
    let src: Vec<C64> = idx
        .iter()
        .zip(&ts)
        .map(|(&i, &t)| traj.states[i].pi * alpha_unchecked(t, k, xi).0)
        .collect();
    let f_in = traj.states[0].f();
    let n = ts.len();
    let h = if n > 1 { ts[1] - ts[0] } else { 0.0 };

    // g_j relative to an anchor time: e^{L(anchor) - L(tau_j)} alpha Pi
    let g = |anchor: usize, j: usize| src[j] * (lv[anchor] - lv[j]).exp();

    let mut integral = vec![C64::new(0.0, 0.0); n];
    let mut j = 2;
    while j < n {
        let panel = (g(j, j - 2) + g(j, j - 1) * 4.0 + g(j, j)) * (h / 3.0);
        integral[j] = integral[j - 2] * (lv[j] - lv[j - 2]).exp() + panel;
        j += 2;
    }
    for j in (1..n).step_by(2) {
        let step = if j + 1 < n {
            (g(j, j - 1) * 5.0 + g(j, j) * 8.0 - g(j, j + 1)) * (h / 12.0)
        } else {
            // last sample: three-point rule closing at the right end
            (-g(j, j - 2) + g(j, j - 1) * 8.0 + g(j, j) * 5.0) * (h / 12.0)
        };
        integral[j] = integral[j - 1] * (lv[j] - lv[j - 1]).exp() + step;
    }
    (0..n)
        .map(|j| f_in * lv[j].exp() + integral[j] * nu)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate_mode, ModeState};
    use crate::params::{Mode, PhysParams, Species};

    fn grid(t_end: f64, n: usize) -> Vec<f64> {
        (1..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn inviscid_returns_initial_f() {
        let p = PhysParams::new(Species::Ion, 0.0, 0.1, 1.0).unwrap();
        let y = ModeState::new(C64::new(1.0, 0.2), C64::new(0.0, 0.0), C64::new(0.5, -1.0));
        let tr = integrate_mode(y, Mode::new(1, 2.0), &p, 5.0, 1e-9, 1e-12, &grid(5.0, 11)).unwrap();
        let f = duhamel_f(&tr).unwrap();
        assert!(f.iter().all(|z| (*z - y.f()).norm() < 1e-15));
    }

    #[test]
    fn homogeneous_solution_when_pi_vanishes() {
        // a synthetic trajectory with Pi forced to zero
        let p = PhysParams::new(Species::Ion, 0.05, 0.0, 1.0).unwrap();
        let mode = Mode::new(1, 1.0);
        let times: Vec<f64> = (0..21).map(|i| i as f64 * 0.5).collect();
        let g0 = C64::new(0.7, 0.1);
        let states: Vec<ModeState> = times
            .iter()
            .map(|&t| ModeState::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), g0 * lnu_unchecked(t, 1.0, 1.0, 0.05).exp()))
            .collect();
        let tr = Trajectory {
            mode,
            params: p,
            derivs: states.clone(),
            times: times.clone(),
            states,
            rtol: 1e-9,
            atol: 1e-12,
            accepted_steps: 0,
            rejected_steps: 0,
        };
        let f = duhamel_f(&tr).unwrap();
        for (t, z) in times.iter().zip(&f) {
            let want = g0 * lnu_unchecked(*t, 1.0, 1.0, 0.05).exp();
            assert!((z - want).norm() < 1e-15);
        }
    }

    #[test]
    fn matches_integrated_f() {
        let p = PhysParams::new(Species::Electron, 1e-2, 0.0, 1.0).unwrap();
        let y = ModeState::real(1.0, 0.0, 0.0);
        for n in [4001, 4002] {
            let tr = integrate_mode(y, Mode::new(1, 0.0), &p, 20.0, 1e-11, 1e-14, &grid(20.0, n)).unwrap();
            let f = duhamel_f(&tr).unwrap();
            let scale = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (z, s) in f.iter().zip(&tr.states) {
                assert!((z - s.f()).norm() <= 1e-6 * scale);
            }
        }
    }

    #[test]
    fn sparse_samples_are_rejected_with_required_count() {
        let p = PhysParams::new(Species::Electron, 1e-2, 0.0, 1.0).unwrap();
        let y = ModeState::real(1.0, 0.0, 0.0);
        let tr = integrate_mode(y, Mode::new(1, 0.0), &p, 20.0, 1e-10, 1e-13, &grid(20.0, 21)).unwrap();
        match duhamel_f(&tr) {
            Err(Error::TooFewSamples { have, need }) => {
                assert_eq!(have, 21);
                assert!(need > 21);
            }
            other => panic!("expected TooFewSamples, got {other:?}"),
        }
        let tr = integrate_mode(y, Mode::new(1, 0.0), &p, 1.0, 1e-10, 1e-13, &[0.5]).unwrap();
        assert!(matches!(duhamel_f(&tr), Err(Error::TooFewSamples { need: 5, .. })));
    }

    #[test]
    fn non_uniform_samples_are_rejected() {
        let p = PhysParams::new(Species::Electron, 1e-2, 0.0, 1.0).unwrap();
        let y = ModeState::real(1.0, 0.0, 0.0);
        let tr = integrate_mode(y, Mode::new(1, 0.0), &p, 4.0, 1e-10, 1e-13, &[0.5, 1.0, 1.2, 3.0]).unwrap();
        assert!(matches!(duhamel_f(&tr), Err(Error::Grid(_))));
    }
}
