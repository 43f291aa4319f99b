//! Dormand-Prince 5(4) with FSAL and PI step-size control.
//!
//! Steps are clipped so that every requested sample time is hit exactly;
//! between samples the trajectory is interpolated by cubic Hermite.

use super::{ModeState, Rhs, System, C64};
use crate::error::{Error, Result};
use crate::params::{Mode, PhysParams};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Hairer's PI-controller constants
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// States whose largest component falls below this are set to zero.
    pub flush_floor: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 20_000_000,
            flush_floor: 1e-290,
        }
    }
}

impl IntegratorOptions {
    pub fn tolerances(rtol: f64, atol: f64) -> Self {
        IntegratorOptions {
            rtol,
            atol,
            ..Default::default()
        }
    }
}

/// Samples of one integrated mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub mode: Mode,
    pub params: PhysParams,
    pub times: Vec<f64>,
    pub states: Vec<ModeState>,
    /// Right-hand side at each sample, used for Hermite interpolation.
    pub derivs: Vec<ModeState>,
    pub rtol: f64,
    pub atol: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> ModeState {
        *self.states.last().expect("trajectory has at least the initial sample")
    }

    /// Cubic Hermite interpolation between the stored samples.
    pub fn interpolate(&self, t: f64) -> Result<ModeState> {
        let (t0, t1) = (self.times[0], *self.times.last().unwrap());
        if !(t >= t0 && t <= t1) {
            return Err(Error::InvalidParameter(format!(
                "interpolation time {t} outside [{t0}, {t1}]"
            )));
        }
        let i = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.states[i]),
            Err(i) => i - 1,
        };
        let h = self.times[i + 1] - self.times[i];
        let s = (t - self.times[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        Ok(self.states[i] * h00
            + self.derivs[i] * (h10 * h)
            + self.states[i + 1] * h01
            + self.derivs[i + 1] * (h11 * h))
    }
}

/// Integrates one mode from `t = 0` to `t_end`, storing the state at `0`,
/// at every entry of `sample_times` and at `t_end`.
pub fn integrate_mode(
    initial: ModeState,
    mode: Mode,
    params: &PhysParams,
    t_end: f64,
    rtol: f64,
    atol: f64,
    sample_times: &[f64],
) -> Result<Trajectory> {
    integrate_mode_with(
        initial,
        mode,
        params,
        t_end,
        sample_times,
        &IntegratorOptions::tolerances(rtol, atol),
    )
}

#[inline]
fn axpy(y: &ModeState, terms: &[(f64, &ModeState)], h: f64) -> ModeState {
    let mut out = *y;
    for &(c, k) in terms {
        let ch = c * h;
        out.pi += k.pi * ch;
        out.psi += k.psi * ch;
        out.gamma += k.gamma * ch;
    }
    out
}

#[inline]
fn scaled_rms(d: [C64; 3], a: [C64; 3], b: [C64; 3], opts: &IntegratorOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let sc = opts.atol + opts.rtol * a[i].norm().max(b[i].norm());
        let r = d[i].norm() / sc;
        acc += r * r;
    }
    (acc / 3.0).sqrt()
}

fn arr(y: &ModeState) -> [C64; 3] {
    [y.pi, y.psi, y.gamma]
}

fn initial_step(rhs: &Rhs, y0: &ModeState, f0: &ModeState, opts: &IntegratorOptions, span: f64) -> f64 {
    // one common scale, so that components starting at zero do not force a
    // vanishing first step when atol is tiny
    let sc = opts.atol + opts.rtol * y0.max_abs();
    let d0 = y0.max_abs() / sc;
    let d1 = f0.max_abs() / sc;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1 = axpy(y0, &[(1.0, f0)], h0);
    let f1 = rhs.eval(h0, &y1);
    let d2 = (f1 - *f0).max_abs() / sc / h0;
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dmax).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span).max(1e-10 * span)
}

pub fn integrate_mode_with(
    initial: ModeState,
    mode: Mode,
    params: &PhysParams,
    t_end: f64,
    sample_times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    System::for_mode(mode, params)?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidParameter("rtol and atol must be positive".into()));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite { what: "initial state".into() });
    }
    let mut targets: Vec<f64> = Vec::with_capacity(sample_times.len() + 1);
    for &s in sample_times {
        // round-off past the end, e.g. from `i * t_end / n`
        let s = if s > t_end && s <= t_end * (1.0 + 1e-12) { t_end } else { s };
        if !(s.is_finite() && (0.0..=t_end).contains(&s)) {
            return Err(Error::InvalidParameter(format!("sample time {s} outside [0, {t_end}]")));
        }
        if s > 0.0 {
            targets.push(s);
        }
    }
    targets.push(t_end);
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    targets.dedup();

    let rhs = Rhs::new(mode, params);
    let fail = |t: f64, reason: String| Error::Integration {
        k: mode.k,
        xi: mode.xi,
        t,
        reason,
    };

    let mut t = 0.0;
    let mut y = initial;
    let mut f = rhs.eval(0.0, &y);
    let mut traj = Trajectory {
        mode,
        params: *params,
        times: vec![0.0],
        states: vec![y],
        derivs: vec![f],
        rtol: opts.rtol,
        atol: opts.atol,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    traj.times.reserve(targets.len());
    traj.states.reserve(targets.len());
    traj.derivs.reserve(targets.len());

    let push_zeros = |traj: &mut Trajectory, from: usize| {
        for &s in &targets[from..] {
            traj.times.push(s);
            traj.states.push(ModeState::ZERO);
            traj.derivs.push(ModeState::ZERO);
        }
    };

    if y.is_zero() {
        push_zeros(&mut traj, 0);
        return Ok(traj);
    }

    let mut h = initial_step(&rhs, &y, &f, opts, t_end);
    let mut err_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut steps = 0usize;

    for (idx, &target) in targets.iter().enumerate() {
        while t < target {
            if steps >= opts.max_steps {
                return Err(fail(t, format!("step budget of {} exhausted", opts.max_steps)));
            }
            steps += 1;
            let remaining = target - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            if h_try <= 16.0 * f64::EPSILON * t.abs().max(1.0) && !clipped {
                return Err(fail(t, format!("step size underflow (h = {h_try:e})")));
            }

            let k1 = f;
            let y2 = axpy(&y, &[(A21, &k1)], h_try);
            let k2 = rhs.eval(t + C2 * h_try, &y2);
            let y3 = axpy(&y, &[(A31, &k1), (A32, &k2)], h_try);
            let k3 = rhs.eval(t + C3 * h_try, &y3);
            let y4 = axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h_try);
            let k4 = rhs.eval(t + C4 * h_try, &y4);
            let y5 = axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h_try);
            let k5 = rhs.eval(t + C5 * h_try, &y5);
            let y6 = axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h_try);
            let t_new = if clipped { target } else { t + h_try };
            let k6 = rhs.eval(t_new, &y6);
            let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h_try);
            let k7 = rhs.eval(t_new, &y_new);
            let e = axpy(
                &ModeState::ZERO,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
                h_try,
            );
            let err = scaled_rms(arr(&e), arr(&y), arr(&y_new), opts);
            if !err.is_finite() || !y_new.is_finite() {
                if clipped && h_try <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                    return Err(fail(t, "non-finite state".into()));
                }
                h = h_try * FAC_MIN;
                last_rejected = true;
                traj.rejected_steps += 1;
                continue;
            }

            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                let fac = (fac11 / err_old.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h_try / fac;
                if last_rejected {
                    h_new = h_new.min(h_try);
                }
                if clipped {
                    h_new = h_new.max(h);
                }
                err_old = err.max(1e-4);
                last_rejected = false;
                traj.accepted_steps += 1;
                t = t_new;
                y = y_new;
                f = k7;
                h = h_new;
                if y.max_abs() < opts.flush_floor {
                    traj.times.push(target);
                    traj.states.push(if t == target { y } else { ModeState::ZERO });
                    traj.derivs.push(if t == target { f } else { ModeState::ZERO });
                    push_zeros(&mut traj, idx + 1);
                    return Ok(traj);
                }
            } else {
                h = h_try / (fac11 / SAFE).min(1.0 / FAC_MIN);
                last_rejected = true;
                traj.rejected_steps += 1;
            }
        }
        traj.times.push(target);
        traj.states.push(y);
        traj.derivs.push(f);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_just_past_end_is_clamped() {
        let p = PhysParams::new(Species::Electron, 0.0, 0.0, 1.0).unwrap();
        let t_end = 7.892297445533766;
        let tr = integrate_mode(ModeState::real(1.0, 0.0, 0.0), Mode::new(0, 1.0), &p, t_end, 1e-9, 1e-12, &[1.0, 7.892297445533767])
            .unwrap();
        assert_eq!(tr.times.last(), Some(&t_end));
        assert!(integrate_mode(ModeState::real(1.0, 0.0, 0.0), Mode::new(0, 1.0), &p, t_end, 1e-9, 1e-12, &[8.0]).is_err());
    }
    use crate::params::Species;
    use std::f64::consts::PI;

    #[test]
    fn zero_initial_data_stays_zero() {
        let p = PhysParams::new(Species::Ion, 1e-2, 0.0, 1.0).unwrap();
        let tr = integrate_mode(ModeState::ZERO, Mode::new(1, 2.0), &p, 10.0, 1e-9, 1e-12, &[1.0, 5.0]).unwrap();
        assert_eq!(tr.times, vec![0.0, 1.0, 5.0, 10.0]);
        assert!(tr.states.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn lands_exactly_on_samples() {
        let p = PhysParams::new(Species::Electron, 0.0, 0.0, 1.0).unwrap();
        let samples: Vec<f64> = (1..=30).map(|i| i as f64 * 0.37).collect();
        let tr = integrate_mode(ModeState::real(1.0, 0.0, 0.0), Mode::new(0, 1.0), &p, 12.0, 1e-10, 1e-13, &samples).unwrap();
        assert_eq!(tr.times[0], 0.0);
        assert_eq!(&tr.times[1..31], &samples[..]);
        assert_eq!(*tr.times.last().unwrap(), 12.0);
        let om = (1.0 + 4.0 * PI).sqrt();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            assert!((s.pi.re - (om * t).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn hermite_interpolation_is_accurate_between_samples() {
        let p = PhysParams::new(Species::Electron, 0.0, 0.0, 1.0).unwrap();
        let samples: Vec<f64> = (1..200).map(|i| i as f64 * 0.05).collect();
        let tr = integrate_mode(ModeState::real(1.0, 0.0, 0.0), Mode::new(0, 1.0), &p, 10.0, 1e-11, 1e-14, &samples).unwrap();
        let om = (1.0 + 4.0 * PI).sqrt();
        for i in 0..400 {
            let t = 0.013 + i as f64 * 0.0247;
            let s = tr.interpolate(t).unwrap();
            assert!((s.pi.re - (om * t).cos()).abs() < 1e-4);
        }
        assert!(tr.interpolate(10.5).is_err());
    }

    #[test]
    fn rejects_bad_requests() {
        let p = PhysParams::new(Species::Ion, 1e-2, 0.0, 1.0).unwrap();
        let y = ModeState::real(1.0, 0.0, 0.0);
        assert!(integrate_mode(y, Mode::new(1, 0.0), &p, -1.0, 1e-9, 1e-12, &[]).is_err());
        assert!(integrate_mode(y, Mode::new(1, 0.0), &p, 1.0, 0.0, 1e-12, &[]).is_err());
        assert!(integrate_mode(y, Mode::new(1, 0.0), &p, 1.0, 1e-9, 1e-12, &[2.0]).is_err());
        assert!(matches!(
            integrate_mode(y, Mode::new(0, 0.0), &p, 1.0, 1e-9, 1e-12, &[]),
            Err(Error::ZeroXi { .. })
        ));
    }

    #[test]
    fn step_budget_failure_names_the_mode() {
        let p = PhysParams::new(Species::Ion, 1e-2, 0.0, 1.0).unwrap();
        let opts = IntegratorOptions {
            max_steps: 10,
            ..IntegratorOptions::default()
        };
        let err = integrate_mode_with(ModeState::real(1.0, 0.0, 0.0), Mode::new(3, -2.0), &p, 50.0, &[], &opts).unwrap_err();
        match err {
            Error::Integration { k, xi, .. } => assert_eq!((k, xi), (3, -2.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let p = PhysParams::new(Species::Ion, 1e-2, 1e-2, 1.0).unwrap();
        let y = ModeState::new(C64::new(1.0, 0.5), C64::new(0.0, -0.3), C64::new(0.2, 0.0));
        let a = integrate_mode(y, Mode::new(2, 3.0), &p, 20.0, 1e-9, 1e-12, &[5.0, 10.0]).unwrap();
        let b = integrate_mode(y, Mode::new(2, 3.0), &p, 20.0, 1e-9, 1e-12, &[5.0, 10.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn strong_damping_flushes_to_zero() {
        let p = PhysParams::new(Species::Ion, 0.3, 0.0, 1.0).unwrap();
        let opts = IntegratorOptions::tolerances(1e-8, 1e-300);
        let tr = integrate_mode_with(ModeState::real(1.0, 0.0, 1.0), Mode::new(4, 0.0), &p, 200.0, &[100.0], &opts).unwrap();
        assert_eq!(tr.times, vec![0.0, 100.0, 200.0]);
        assert!(tr.final_state().is_zero());
    }
}
