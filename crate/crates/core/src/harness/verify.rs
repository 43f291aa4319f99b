//! Property suites: multiplier inequalities, coercivity, conservation laws,
//! Duhamel equivalence, Poincare/Parseval and Hermitian symmetry, and the
//! differential inequality behind the windowed-energy decay.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{duhamel_f, integrate_mode, integrate_mode_with, IntegratorOptions, ModeState, C64};
use crate::energy::{
    coercivity_bounds, energy_with_gamma, mode_energy, weighted_vars, zero_mode_cal_e, zero_mode_cal_f,
    zero_mode_e_l, zero_mode_f_l, Variant, ZeroPoint,
};
use crate::error::{Error, Result};
use crate::harness::config::{Output, ScenarioConfig};
use crate::harness::scenario::{ensemble_at, prepare, run_scenario};
use crate::observables::{sobolev_norm, Field, FieldSelector, Weighting};
use crate::params::{Mode, PhysParams, Regime, Species};
use crate::symbols::{alpha_unchecked, m_unchecked, w_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Multiplier,
    Coercivity,
    Conservation,
    Duhamel,
    Poincare,
    Symmetry,
    Gronwall,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "multiplier" => Suite::Multiplier,
            "coercivity" => Suite::Coercivity,
            "conservation" => Suite::Conservation,
            "duhamel" => Suite::Duhamel,
            "poincare" => Suite::Poincare,
            "symmetry" => Suite::Symmetry,
            "gronwall" => Suite::Gronwall,
            "all" => Suite::All,
            other => return Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
        })
    }
}

/// A failed assertion with its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub property: String,
    pub t: f64,
    pub k: i64,
    pub xi: f64,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at t={} k={} xi={}: {}", self.property, self.t, self.k, self.xi, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub violations: Vec<Violation>,
    /// Set when the suite could not run under the given parameters.
    pub skipped: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn skip(name: &str, why: String) -> Self {
        SuiteReport {
            name: name.to_string(),
            skipped: Some(why),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, v: impl FnOnce() -> Violation) {
        self.checks += 1;
        if !ok {
            self.violations.push(v());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn violation_count(&self) -> usize {
        self.suites.iter().map(|s| s.violations.len()).sum()
    }

    /// Human-readable summary, listing at most `max_witnesses` per suite.
    pub fn render(&self, max_witnesses: usize) -> String {
        let mut out = String::new();
        for s in &self.suites {
            match &s.skipped {
                Some(why) => out.push_str(&format!("{:<14} SKIP  {why}\n", s.name)),
                None => {
                    let tag = if s.passed() { "PASS" } else { "FAIL" };
                    out.push_str(&format!(
                        "{:<14} {tag}  {} checks, {} violations\n",
                        s.name,
                        s.checks,
                        s.violations.len()
                    ));
                    for v in s.violations.iter().take(max_witnesses) {
                        out.push_str(&format!("    {v}\n"));
                    }
                }
            }
        }
        out
    }
}

fn ge(lhs: f64, rhs: f64, scale: f64) -> bool {
    lhs >= rhs - 1e-12 * scale.abs().max(rhs.abs()).max(1e-300)
}

/// Multiplier inequalities on `n` random `(t, k, xi, nu)` draws with
/// `t in [0, 10 nu^{-1/3}]`, `k in [-8, 8] \ {0}`, `xi in [-50, 50]` and
/// `nu in {1e-2, 1e-3, 1e-4}`.
pub fn multiplier_suite(n: usize, seed: u64, beta: f64, delta_beta: f64) -> SuiteReport {
    let mut rep = SuiteReport::new("multiplier");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let nu: f64 = [1e-2, 1e-3, 1e-4][rng.gen_range(0..3)];
        let c = nu.cbrt();
        let t = rng.gen_range(0.0..=10.0 / c);
        let mut k = rng.gen_range(-8i64..=7);
        if k >= 0 {
            k += 1;
        }
        let xi = rng.gen_range(-50.0..=50.0);
        let kf = k as f64;
        let (a, da) = alpha_unchecked(t, kf, xi);
        let (_, dm) = m_unchecked(t, kf, xi, nu);
        let (w, dw) = w_unchecked(t, kf, xi, nu, beta);
        let db = delta_beta;
        let wit = |p: &str, d: String| Violation {
            property: p.to_string(),
            t,
            k,
            xi,
            detail: format!("nu={nu:e} {d}"),
        };
        let lhs = nu * a + dm;
        rep.check(ge(lhs, c, lhs), || wit("nu alpha + dtm/m >= nu^1/3", format!("{lhs} < {c}")));
        let wmax = 1.0 + beta * beta / (c * c);
        rep.check(w >= 1.0 - 1e-15 && w <= wmax * (1.0 + 1e-12), || {
            wit("1 <= w <= 1 + beta^2 nu^-2/3", format!("w = {w}, bound {wmax}"))
        });
        rep.check(w / a <= (1.0 + 1e-12) / (kf * kf), || wit("w / alpha <= 1/k^2", format!("{}", w / a)));
        let l3 = db * (dm + nu * a) + dw - da / a;
        rep.check(ge(l3, db * c, db * (dm + nu * a) + (da / a).abs()), || {
            wit("window inequality (viscous)", format!("{l3} < {}", db * c))
        });
        let l4 = db * (dm + c) + dw - da / a;
        rep.check(ge(l4, 0.5 * db * c, db * (dm + c) + (da / a).abs()), || {
            wit("window inequality (enhanced)", format!("{l4} < {}", 0.5 * db * c))
        });
    }
    rep
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    let mag = 10f64.powf(rng.gen_range(-3.0..3.0));
    C64::from_polar(mag, rng.gen_range(0.0..2.0 * PI))
}

fn random_state(rng: &mut ChaCha8Rng) -> ModeState {
    ModeState::new(random_c64(rng), random_c64(rng), random_c64(rng))
}

/// Sandwich check for one sheared-mode energy with the given cross-term
/// constant (the proper one is `M nu^{1/3} / 4`).
pub fn sheared_coercivity(params: &PhysParams, variant: Variant, n: usize, seed: u64, gamma: f64) -> SuiteReport {
    let name = match variant {
        Variant::Plain => "coercivity:E",
        Variant::Windowed => "coercivity:Ew",
    };
    let mut rep = SuiteReport::new(name);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_max = if params.nu() > 0.0 { 10.0 / params.nu().cbrt() } else { 100.0 };
    for _ in 0..n {
        let mut k = rng.gen_range(-8i64..=7);
        if k >= 0 {
            k += 1;
        }
        let mode = Mode::new(k, rng.gen_range(-50.0..=50.0));
        let t = rng.gen_range(0.0..=t_max);
        let s = rng.gen_range(0.0..=2.0);
        let zv = match weighted_vars(&random_state(&mut rng), t, mode, params, s, variant) {
            Ok(z) => z,
            Err(_) => continue,
        };
        let e = energy_with_gamma(&zv, t, mode, params, gamma).unwrap_or(f64::NAN);
        let (lo, hi) = coercivity_bounds(&zv, t, mode, params).unwrap_or((f64::NAN, f64::NAN));
        let tol = 1e-12 * hi;
        rep.check(e >= lo - tol && e <= hi + tol, || Violation {
            property: format!("{name} sandwich"),
            t,
            k,
            xi: mode.xi,
            detail: format!("lower {lo:e}, E {e:e}, upper {hi:e}"),
        });
    }
    rep
}

/// Sandwich `calE/4 <= E <= calE` (ion) or `calF/4 <= F <= calF` (electron)
/// on random `k = 0` data.
pub fn zero_mode_coercivity(params: &PhysParams, n: usize, seed: u64) -> SuiteReport {
    let name = match params.species() {
        Species::Ion => "coercivity:El",
        Species::Electron => "coercivity:Fl",
    };
    let mut rep = SuiteReport::new(name);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let l = rng.gen_range(0u32..=3);
        let pts: Vec<ZeroPoint> = (0..6)
            .map(|_| {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                ZeroPoint {
                    xi: sign * 10f64.powf(rng.gen_range(-1.3..1.3)),
                    weight: rng.gen_range(0.01..1.0),
                    state: random_state(&mut rng),
                }
            })
            .collect();
        let (big, e) = match params.species() {
            Species::Ion => (zero_mode_cal_e(&pts, l, params), zero_mode_e_l(&pts, l, params)),
            Species::Electron => (zero_mode_cal_f(&pts, l, params), zero_mode_f_l(&pts, l, params)),
        };
        let (big, e) = (big.unwrap_or(f64::NAN), e.unwrap_or(f64::NAN));
        let tol = 1e-12 * big;
        rep.check(e >= 0.25 * big - tol && e <= big + tol, || Violation {
            property: format!("{name} sandwich"),
            t: 0.0,
            k: 0,
            xi: pts[0].xi,
            detail: format!("l={l} functional {big:e}, energy {e:e}"),
        });
    }
    rep
}

/// All four coercivity sandwiches, each under its own parameter regime.
pub fn coercivity_suite(params: &PhysParams, n: usize, seed: u64) -> Vec<SuiteReport> {
    let mut out = Vec::new();
    for (variant, regime) in [(Variant::Plain, Regime::WeightedEnergy), (Variant::Windowed, Regime::WindowedEnergy)] {
        let name = if variant == Variant::Plain { "coercivity:E" } else { "coercivity:Ew" };
        match params.check(regime) {
            Ok(()) => out.push(sheared_coercivity(params, variant, n, seed, params.gamma())),
            Err(e) => out.push(SuiteReport::skip(name, e.to_string())),
        }
    }
    for (species, regime, name) in [
        (Species::Ion, Regime::IonZeroMode, "coercivity:El"),
        (Species::Electron, Regime::ElectronZeroMode, "coercivity:Fl"),
    ] {
        let p = params.with_species(species);
        match p.check(regime) {
            Ok(()) => out.push(zero_mode_coercivity(&p, n, seed.wrapping_add(7))),
            Err(e) => out.push(SuiteReport::skip(name, e.to_string())),
        }
    }
    out
}

/// Inviscid conservation laws: `F = Pi + Gamma` for sheared modes, `eta +
/// omega` and the oscillator energy on the `k = 0` line, each to `1e-8`.
/// Tolerances looser than `rtol = 1e-12` are tightened, since the quadratic
/// energy drifts at the level of the global error.
pub fn conservation_suite(mach: f64, lambda: f64, rtol: f64, atol: f64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("conservation");
    let tol = 1e-8;
    let (rtol, atol) = (rtol.min(1e-12), atol.min(1e-14));
    let t_end = 100.0;
    let samples: Vec<f64> = (1..=100).map(|i| i as f64).collect();
    let y0 = ModeState::new(C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, -0.2));
    for species in [Species::Ion, Species::Electron] {
        let p = PhysParams::new(species, 0.0, lambda, mach)?;
        for &(k, xi) in &[(1, 0.0), (1, 3.0), (-2, 5.0), (3, -4.0)] {
            let mode = Mode::new(k, xi);
            let tr = integrate_mode(y0, mode, &p, t_end, rtol, atol, &samples)?;
            let f0 = y0.f();
            for (t, s) in tr.times.iter().zip(&tr.states) {
                let d = (s.f() - f0).norm();
                rep.check(d <= tol * f0.norm().max(1.0), || Violation {
                    property: format!("F conservation ({species})"),
                    t: *t,
                    k,
                    xi,
                    detail: format!("|F(t) - F(0)| = {d:e}"),
                });
            }
        }
        let p0 = PhysParams::new(species, 0.0, 0.0, mach)?;
        for &xi in &[0.5, 1.0, 3.0] {
            let om2 = crate::dynamics::oracle_frequency(species, xi, mach)?.powi(2);
            let tr = integrate_mode(y0, Mode::new(0, xi), &p0, t_end, rtol, atol, &samples)?;
            let energy = |s: &ModeState| s.psi.norm_sqr() + om2 * s.pi.norm_sqr();
            let e0 = energy(&y0);
            let c0 = y0.pi + y0.gamma;
            for (t, s) in tr.times.iter().zip(&tr.states) {
                let de = (energy(s) - e0).abs() / e0;
                rep.check(de <= tol, || Violation {
                    property: format!("zero-mode energy ({species})"),
                    t: *t,
                    k: 0,
                    xi,
                    detail: format!("relative drift {de:e}"),
                });
                let dc = (s.pi + s.gamma - c0).norm();
                rep.check(dc <= tol * c0.norm().max(1.0), || Violation {
                    property: format!("eta + omega conservation ({species})"),
                    t: *t,
                    k: 0,
                    xi,
                    detail: format!("drift {dc:e}"),
                });
            }
        }
    }
    Ok(rep)
}

/// Duhamel representation against the integrated `Pi + Gamma` for `k = 1`,
/// `xi in {0, +-2}` and both species, over `t in [0, 20]`.
pub fn duhamel_suite(nu: f64, lambda: f64, mach: f64, rtol: f64, atol: f64) -> Result<SuiteReport> {
    if !(nu > 0.0) {
        return Ok(SuiteReport::skip("duhamel", "needs nu > 0".into()));
    }
    let mut rep = SuiteReport::new("duhamel");
    let tol = (100.0 * rtol).max(1e-6);
    let y0 = ModeState::real(1.0, 0.0, 0.0);
    for species in [Species::Electron, Species::Ion] {
        let p = PhysParams::new(species, nu, lambda, mach)?;
        for xi in [0.0, 2.0, -2.0] {
            let mode = Mode::new(1, xi);
            let mut n = 4001;
            let (tr, f) = loop {
                let samples: Vec<f64> = (1..n).map(|i| 20.0 * i as f64 / (n - 1) as f64).collect();
                let tr = integrate_mode(y0, mode, &p, 20.0, rtol, atol, &samples)?;
                match duhamel_f(&tr) {
                    Ok(f) => break (tr, f),
                    Err(Error::TooFewSamples { need, .. }) if need > n && n < 100_000 => n = need + need / 4,
                    Err(e) => return Err(e),
                }
            };
            let scale = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for ((t, s), z) in tr.times.iter().zip(&tr.states).zip(&f) {
                let d = (s.f() - z).norm() / scale;
                rep.check(d <= tol, || Violation {
                    property: format!("Duhamel equivalence ({species})"),
                    t: *t,
                    k: 1,
                    xi,
                    detail: format!("relative difference {d:e}"),
                });
            }
        }
    }
    Ok(rep)
}

/// Poincare and Parseval checks plus Hermitian symmetry along a scenario.
pub fn ensemble_suites(config: &ScenarioConfig) -> Result<(SuiteReport, SuiteReport)> {
    let mut c = config.clone();
    for o in [Output::EtaOverM, Output::GradEta, Output::Px, Output::Py] {
        if !c.outputs.contains(&o) {
            c.outputs.push(o);
        }
    }
    let out = run_scenario(&c)?;
    let mut poincare = SuiteReport::new("poincare");
    let mut symmetry = SuiteReport::new("symmetry");
    let m = out.params.mach();
    for i in 0..out.times.len() {
        let t = out.times[i];
        let ens = ensemble_at(&out.initial, &out.trajectories, i)?;
        let asym = ens.hermitian_asymmetry();
        symmetry.check(asym <= 10.0 * c.rtol, || Violation {
            property: "Hermitian symmetry".into(),
            t,
            k: 0,
            xi: 0.0,
            detail: format!("relative asymmetry {asym:e}"),
        });
        let Some(ob) = out.observables.get(i) else { continue };
        let eta = ob.eta_norm_over_m * m;
        poincare.check(eta <= ob.grad_eta_norm * (1.0 + 1e-14), || Violation {
            property: "||eta|| <= ||grad eta||".into(),
            t,
            k: 0,
            xi: 0.0,
            detail: format!("{eta:e} > {:e}", ob.grad_eta_norm),
        });
        let nz = ens.restrict(|k| k != 0)?;
        let g = sobolev_norm(&nz, FieldSelector::alpha_weighted(Field::Gamma, -0.5), Weighting::Isotropic(0.0), &out.params)?;
        let lhs = ob.px_norm.powi(2) + ob.py_norm.powi(2);
        let rhs = g * g;
        poincare.check((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300), || Violation {
            property: "Parseval for the solenoidal part".into(),
            t,
            k: 0,
            xi: 0.0,
            detail: format!("{lhs:e} vs {rhs:e}"),
        });
    }
    Ok((poincare, symmetry))
}

/// One finite-difference evaluation of the windowed-energy inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallPoint {
    pub t: f64,
    pub k: i64,
    pub xi: f64,
    /// Constant needed at this point for the inequality to hold.
    pub c_required: f64,
    /// `(dE/dt - bound) / E` with the fitted constant; positive means violated.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallReport {
    /// Constant fitted on the calibration modes.
    pub c_fit: f64,
    /// Constant the held-out modes would need.
    pub c_holdout: f64,
    pub points: usize,
    pub satisfied: usize,
    /// Points skipped because the state was below the absolute tolerance.
    pub skipped: usize,
    pub failures: Vec<GronwallPoint>,
    pub step: f64,
}

impl GronwallReport {
    pub fn fraction_satisfied(&self) -> f64 {
        if self.points == 0 {
            1.0
        } else {
            self.satisfied as f64 / self.points as f64
        }
    }

    /// Hold-out constant relative to the fitted one. Values at or below 1
    /// mean the fitted inequality covers the held-out modes.
    pub fn holdout_ratio(&self) -> f64 {
        if self.c_holdout <= 0.0 {
            0.0
        } else if self.c_fit <= 0.0 {
            f64::INFINITY
        } else {
            self.c_holdout / self.c_fit
        }
    }
}

/// Checks `dE^w/dt <= (-nu^{1/3}/16 + 4C(1+M^6) k^2/alpha + 2(M+1) dtm/m) E^w`
/// by central differences at every interior sample time. `C` is fitted on
/// the modes with even `xi` index and checked on the rest.
pub fn gronwall_premise(config: &ScenarioConfig) -> Result<GronwallReport> {
    let (params, initial) = prepare(config)?;
    let times = config.sample_times();
    let t_end = config.effective_t_end();
    let dt = times[1] - times[0];
    let h = (1e-3f64).min(dt / 10.0);
    let mut all = times.clone();
    for &t in &times[1..times.len() - 1] {
        all.push(t - h);
        all.push(t + h);
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.dedup();
    let opts = IntegratorOptions::tolerances(config.rtol, config.atol);
    let n = initial.grid().len();
    let chosen: Vec<(usize, bool)> = (0..initial.len())
        .filter(|&i| initial.mode(i).k > 0 && !initial.states()[i].is_zero())
        .map(|i| (i, (i % n) % 2 == 0))
        .collect();
    let nu3 = params.nu().cbrt();
    let m = params.mach();
    let s = config.s;
    let floor = 1e3 * config.atol;

    let per_mode: Vec<Result<Vec<(GronwallPoint, bool)>>> = chosen
        .par_iter()
        .map(|&(i, calib)| {
            let mode = initial.mode(i);
            let tr = integrate_mode_with(initial.states()[i], mode, &params, t_end, &all, &opts)?;
            let at = |t: f64| {
                let j = tr.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()).expect("sample time stored");
                tr.states[j]
            };
            let mut pts = Vec::new();
            for &t in &times[1..times.len() - 1] {
                let (sm, s0, sp) = (at(t - h), at(t), at(t + h));
                if sm.max_abs() < floor || s0.max_abs() < floor || sp.max_abs() < floor {
                    pts.push((
                        GronwallPoint { t, k: mode.k, xi: mode.xi, c_required: f64::NAN, excess: f64::NAN },
                        calib,
                    ));
                    continue;
                }
                let e = |st: &ModeState, tt: f64| mode_energy(st, tt, mode, &params, s, Variant::Windowed);
                let (em, e0, ep) = (e(&sm, t - h)?, e(&s0, t)?, e(&sp, t + h)?);
                let d = (ep - em) / (2.0 * h);
                let k = mode.k as f64;
                let (a, _) = alpha_unchecked(t, k, mode.xi);
                let (_, dm) = m_unchecked(t, k, mode.xi, params.nu());
                let growth = 4.0 * (1.0 + m.powi(6)) * k * k / a;
                let c_req = (d / e0 + nu3 / 16.0 - 2.0 * (m + 1.0) * dm) / growth;
                pts.push((GronwallPoint { t, k: mode.k, xi: mode.xi, c_required: c_req, excess: 0.0 }, calib));
            }
            Ok(pts)
        })
        .collect();
    let mut pts = Vec::new();
    for r in per_mode {
        pts.extend(r?);
    }
    let max_c = |want: bool| {
        pts.iter()
            .filter(|(p, c)| *c == want && p.c_required.is_finite())
            .map(|(p, _)| p.c_required)
            .fold(0.0f64, f64::max)
    };
    let c_fit = max_c(true);
    let c_holdout = max_c(false);
    let mut rep = GronwallReport {
        c_fit,
        c_holdout,
        points: 0,
        satisfied: 0,
        skipped: 0,
        failures: Vec::new(),
        step: h,
    };
    for (mut p, _) in pts {
        if !p.c_required.is_finite() {
            rep.skipped += 1;
            continue;
        }
        rep.points += 1;
        let (a, _) = alpha_unchecked(p.t, p.k as f64, p.xi);
        let growth = 4.0 * (1.0 + m.powi(6)) * (p.k * p.k) as f64 / a;
        p.excess = (p.c_required - c_fit) * growth;
        if p.c_required <= c_fit * (1.0 + 1e-12) {
            rep.satisfied += 1;
        } else {
            rep.failures.push(p);
        }
    }
    Ok(rep)
}

fn gronwall_suite(config: &ScenarioConfig) -> Result<SuiteReport> {
    if config.nu <= 0.0 {
        return Ok(SuiteReport::skip("gronwall", "needs nu > 0".into()));
    }
    let g = gronwall_premise(config)?;
    let mut rep = SuiteReport::new("gronwall");
    rep.checks = g.points + 1;
    if g.fraction_satisfied() < 0.99 {
        for p in &g.failures {
            rep.violations.push(Violation {
                property: "windowed energy differential inequality".into(),
                t: p.t,
                k: p.k,
                xi: p.xi,
                detail: format!("excess {:e} (C fitted {:e})", p.excess, g.c_fit),
            });
        }
    }
    if g.holdout_ratio() > 2.0 {
        rep.violations.push(Violation {
            property: "fitted constant stable across modes".into(),
            t: 0.0,
            k: 0,
            xi: 0.0,
            detail: format!("calibration {:e}, hold-out {:e}", g.c_fit, g.c_holdout),
        });
    }
    Ok(rep)
}

/// Runs one suite (or all of them) for a config.
pub fn verify_suite(config: &ScenarioConfig, suite: Suite) -> Result<VerifyReport> {
    let params = config.params()?;
    let mut rep = VerifyReport::default();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Multiplier) {
        rep.suites.push(multiplier_suite(config.verify_samples, config.seed, params.beta(), params.delta_beta()));
    }
    if want(Suite::Coercivity) {
        let n = (config.verify_samples / 10).max(1);
        rep.suites.extend(coercivity_suite(&params, n, config.seed));
    }
    if want(Suite::Conservation) {
        rep.suites.push(conservation_suite(config.mach, config.lambda, config.rtol, config.atol)?);
    }
    if want(Suite::Duhamel) {
        rep.suites.push(duhamel_suite(config.nu, config.lambda, config.mach, config.rtol, config.atol)?);
    }
    if want(Suite::Poincare) || want(Suite::Symmetry) {
        let (p, s) = ensemble_suites(config)?;
        if want(Suite::Poincare) {
            rep.suites.push(p);
        }
        if want(Suite::Symmetry) {
            rep.suites.push(s);
        }
    }
    if want(Suite::Gronwall) {
        rep.suites.push(gronwall_suite(config)?);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_suite_is_clean() {
        let r = multiplier_suite(20_000, 1, 50.0, 1.0 / 12.0);
        assert_eq!(r.checks, 100_000);
        assert!(r.passed(), "{:?}", &r.violations[..r.violations.len().min(3)]);
    }

    #[test]
    fn coercivity_holds_and_negative_control_fails() {
        let p = PhysParams::new(Species::Ion, 1e-3, 0.1, 1.0).unwrap();
        let reps = coercivity_suite(&p, 2000, 3);
        assert_eq!(reps.len(), 4);
        for r in &reps {
            assert!(r.skipped.is_none(), "{} skipped: {:?}", r.name, r.skipped);
            assert!(r.passed(), "{}: {:?}", r.name, r.violations.first());
        }
        let bad = sheared_coercivity(&p, Variant::Plain, 2000, 3, 10.0 * p.mach());
        assert!(!bad.passed());
    }

    #[test]
    fn coercivity_skips_outside_regime() {
        let p = PhysParams::new(Species::Ion, 0.4, 0.4, 3.0).unwrap();
        let reps = coercivity_suite(&p, 10, 0);
        assert!(reps.iter().all(|r| r.skipped.is_some()));
    }

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }
}
