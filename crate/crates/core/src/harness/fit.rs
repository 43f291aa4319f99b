//! Decay-rate fitting in log coordinates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::{japanese, linear_fit};

/// Minimum number of samples for a rate to be reported.
pub const MIN_RATE_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitModel {
    /// `P e^{-r t}`
    Exponential,
    /// `P <t>^{1/2} e^{-r t}`
    SqrtGrowthExponential,
    /// `P <t>^{-1/2} e^{-r t}`
    SqrtDecayExponential,
    /// `P (1 + c t)^{-l}`; the fitted `c` is reported as the rate.
    Algebraic { l: f64 },
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitModel::Exponential => write!(f, "exp"),
            FitModel::SqrtGrowthExponential => write!(f, "exp_sqrt_t"),
            FitModel::SqrtDecayExponential => write!(f, "exp_inv_sqrt_t"),
            FitModel::Algebraic { l } => write!(f, "algebraic:{l}"),
        }
    }
}

impl FromStr for FitModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "exp" => Ok(FitModel::Exponential),
            "exp_sqrt_t" => Ok(FitModel::SqrtGrowthExponential),
            "exp_inv_sqrt_t" => Ok(FitModel::SqrtDecayExponential),
            _ => {
                let l = s
                    .strip_prefix("algebraic:")
                    .and_then(|l| l.parse::<f64>().ok())
                    .ok_or_else(|| Error::ConfigValue(format!("unknown fit model `{s}`")))?;
                Ok(FitModel::Algebraic { l })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// Exponential rate `r`, or `c` for the algebraic model.
    pub rate: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
    /// RMS misfit in natural-log coordinates.
    pub residual: f64,
    pub samples: usize,
}

/// Least-squares fit of `model` to the samples with `t` inside `window`.
pub fn fit_decay(times: &[f64], values: &[f64], window: (f64, f64), model: FitModel) -> Result<FitResult> {
    if times.len() != values.len() {
        return Err(Error::Fit("times and values differ in length".into()));
    }
    let (t0, t1) = window;
    if !(t0 <= t1) {
        return Err(Error::Fit(format!("empty window [{t0}, {t1}]")));
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t < t0 || t > t1 {
            continue;
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Fit(format!("non-positive sample {v} at t = {t}")));
        }
        ts.push(t);
        ys.push(v.ln());
    }
    if ts.len() < 3 {
        return Err(Error::Fit(format!("only {} samples in window [{t0}, {t1}]", ts.len())));
    }
    let n = ts.len();
    let (rate, log_p, rss) = match model {
        FitModel::Exponential | FitModel::SqrtGrowthExponential | FitModel::SqrtDecayExponential => {
            let shift = match model {
                FitModel::Exponential => 0.0,
                FitModel::SqrtGrowthExponential => 0.5,
                _ => -0.5,
            };
            let y: Vec<f64> = ts.iter().zip(&ys).map(|(t, y)| y - shift * japanese(*t).ln()).collect();
            let (a, b) = linear_fit(&ts, &y).ok_or_else(|| Error::Fit("degenerate window".into()))?;
            let rss: f64 = ts.iter().zip(&y).map(|(t, y)| (y - a - b * t).powi(2)).sum();
            (-b, a, rss)
        }
        FitModel::Algebraic { l } => fit_algebraic(&ts, &ys, l),
    };
    Ok(FitResult {
        model,
        rate,
        prefactor: log_p.exp(),
        window,
        residual: (rss / n as f64).sqrt(),
        samples: n,
    })
}

/// Returns `(c, log P, rss)` minimising over `c >= 0` with `log P` in closed form.
fn fit_algebraic(ts: &[f64], ys: &[f64], l: f64) -> (f64, f64, f64) {
    let n = ts.len() as f64;
    let eval = |c: f64| {
        let r: Vec<f64> = ts.iter().zip(ys).map(|(t, y)| y + l * (c * t).ln_1p()).collect();
        let lp = r.iter().sum::<f64>() / n;
        let rss: f64 = r.iter().map(|v| (v - lp).powi(2)).sum();
        (lp, rss)
    };
    let t_scale = ts.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let (u_lo, u_hi) = ((1e-10 / t_scale).ln(), (1e8 / t_scale).ln());
    let grid = 400;
    let du = (u_hi - u_lo) / grid as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=grid {
        let rss = eval((u_lo + i as f64 * du).exp()).1;
        if rss < best.1 {
            best = (i, rss);
        }
    }
    // golden section on the bracketing cells
    let (mut a, mut b) = (
        u_lo + (best.0.max(1) - 1) as f64 * du,
        u_lo + (best.0 + 1).min(grid) as f64 * du,
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = eval(x1.exp()).1;
    let mut f2 = eval(x2.exp()).1;
    for _ in 0..200 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = eval(x1.exp()).1;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = eval(x2.exp()).1;
        }
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    let c = (0.5 * (a + b)).exp();
    let (lp, rss) = eval(c);
    let (lp0, rss0) = eval(0.0);
    if rss0 <= rss {
        (0.0, lp0, rss0)
    } else {
        (c, lp, rss)
    }
}

/// Tail window `[2 nu^{-1/3}, min(t_end, 12 nu^{-1/3})]` used for rate fits.
pub fn tail_window(nu: f64, t_end: f64) -> (f64, f64) {
    let s = nu.cbrt().recip();
    (2.0 * s, t_end.min(12.0 * s))
}

/// Rate fit on the tail window, requiring a window of at least
/// `5 nu^{-1/3}` and [`MIN_RATE_SAMPLES`] samples. The window ends early
/// at the first sample that has underflowed to zero.
pub fn fit_tail(times: &[f64], values: &[f64], nu: f64, t_end: f64, model: FitModel) -> Result<FitResult> {
    if !(nu > 0.0) {
        return Err(Error::Fit("tail fits need nu > 0".into()));
    }
    let mut w = tail_window(nu, t_end);
    if let Some(i) = times.iter().zip(values).position(|(&t, &v)| t >= w.0 && t <= w.1 && v == 0.0) {
        w.1 = times[i.saturating_sub(1)];
    }
    if w.1 - w.0 < 5.0 / nu.cbrt() {
        return Err(Error::Fit(format!(
            "tail window [{}, {}] shorter than 5 nu^(-1/3)",
            w.0, w.1
        )));
    }
    let r = fit_decay(times, values, w, model)?;
    if r.samples < MIN_RATE_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples in tail window, need {MIN_RATE_SAMPLES}",
            r.samples
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_window_stops_at_underflow() {
        let nu: f64 = 1e-3;
        let t: Vec<f64> = (0..=240).map(|i| i as f64 * 0.5).collect();
        let v: Vec<f64> = t.iter().map(|&t| if t < 100.0 { (-0.2 * t).exp() } else { 0.0 }).collect();
        let r = fit_tail(&t, &v, nu, 120.0, FitModel::Exponential).unwrap();
        assert!((r.rate - 0.2).abs() < 1e-9);
        assert!(r.window.1 < 100.0);
        let v: Vec<f64> = t.iter().map(|&t| if t < 50.0 { (-0.2 * t).exp() } else { 0.0 }).collect();
        assert!(fit_tail(&t, &v, nu, 120.0, FitModel::Exponential).is_err());
    }

    fn series(f: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
        let t: Vec<f64> = (0..200).map(|i| i as f64 * 0.5).collect();
        let v = t.iter().map(|&t| f(t)).collect();
        (t, v)
    }

    #[test]
    fn exponential_self_fit() {
        let (t, v) = series(|t| 3.0 * (-0.1 * t).exp());
        let r = fit_decay(&t, &v, (0.0, 100.0), FitModel::Exponential).unwrap();
        assert!((r.rate - 0.1).abs() < 1e-6);
        assert!((r.prefactor - 3.0).abs() < 1e-9);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn model_selection() {
        let (t, v) = series(|t| japanese(t).sqrt() * (-0.1 * t).exp());
        let pure = fit_decay(&t, &v, (0.0, 100.0), FitModel::Exponential).unwrap();
        let matched = fit_decay(&t, &v, (0.0, 100.0), FitModel::SqrtGrowthExponential).unwrap();
        assert!(pure.residual > matched.residual);
        assert!((matched.rate - 0.1).abs() < 1e-9);
        let (t, v) = series(|t| (-0.2 * t).exp() / japanese(t).sqrt());
        let m = fit_decay(&t, &v, (1.0, 90.0), FitModel::SqrtDecayExponential).unwrap();
        assert!((m.rate - 0.2).abs() < 1e-9);
    }

    #[test]
    fn algebraic_self_fit() {
        let (t, v) = series(|t| (1.0 + 0.05 * t).powi(-2));
        let r = fit_decay(&t, &v, (0.0, 100.0), FitModel::Algebraic { l: 2.0 }).unwrap();
        assert!((r.rate - 0.05).abs() < 1e-4, "{r:?}");
        assert!((r.prefactor - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_series_has_zero_algebraic_rate() {
        let (t, v) = series(|_| 2.0);
        let r = fit_decay(&t, &v, (0.0, 100.0), FitModel::Algebraic { l: 1.0 }).unwrap();
        assert!(r.rate < 1e-8);
    }

    #[test]
    fn rejects_non_positive_samples() {
        let (t, mut v) = series(|t| (-t).exp());
        v[10] = 0.0;
        assert!(fit_decay(&t, &v, (0.0, 100.0), FitModel::Exponential).is_err());
        assert!(fit_decay(&t, &v, (50.0, 100.0), FitModel::Exponential).is_ok());
    }

    #[test]
    fn tail_fit_requirements() {
        let nu: f64 = 1e-3;
        let t: Vec<f64> = (0..=120).map(|i| i as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| (-0.05 * t).exp()).collect();
        let r = fit_tail(&t, &v, nu, 120.0, FitModel::Exponential).unwrap();
        assert_eq!(r.window, (20.0, 120.0));
        assert!((r.rate - 0.05).abs() < 1e-9);
        assert!(fit_tail(&t, &v, nu, 60.0, FitModel::Exponential).is_err());
        let sparse: Vec<f64> = (0..=6).map(|i| i as f64 * 20.0).collect();
        let sv: Vec<f64> = sparse.iter().map(|t| (-0.05 * t).exp()).collect();
        assert!(fit_tail(&sparse, &sv, nu, 120.0, FitModel::Exponential).is_err());
    }

    #[test]
    fn model_names_round_trip() {
        for m in [
            FitModel::Exponential,
            FitModel::SqrtGrowthExponential,
            FitModel::SqrtDecayExponential,
            FitModel::Algebraic { l: 1.0 },
        ] {
            assert_eq!(m.to_string().parse::<FitModel>().unwrap(), m);
        }
    }
}
