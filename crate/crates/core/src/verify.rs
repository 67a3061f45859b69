//! Self-verification batteries: special-function identities, the closed-form
//! Wronskian, ODE residuals, and residue probes against the pole classifier.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crosssec::{circle_spectrum_exact, sphere_spectrum, Mode};
use crate::error::{Error, Result};
use crate::exact::rational_int;
use crate::exec::Execution;
use crate::quadrature::QuadratureControl;
use crate::resolvent::{self, residue_probe, ProbeSettings, ProbeVerdict, RadialProfile};
use crate::resonance::{self, classify_pole, hypergeom_params, SpectralParam, Verdict};
use crate::specfun::{self, gamma, hyp2f1, hyp2f1_regularized, recip_gamma, SeriesControl, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Wronskian,
    Residual,
    Residue,
    Symmetry,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Wronskian => "wronskian",
            Suite::Residual => "residual",
            Suite::Residue => "residue",
            Suite::Symmetry => "symmetry",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Specfun,
                Suite::Wronskian,
                Suite::Residual,
                Suite::Residue,
                Suite::Symmetry,
            ],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "specfun" => Suite::Specfun,
            "wronskian" => Suite::Wronskian,
            "residual" => Suite::Residual,
            "residue" => Suite::Residue,
            "symmetry" => Suite::Symmetry,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured error (or ratio), compared against `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(suite: Suite, seed: u64, exec: Execution) -> Result<Vec<SuiteReport>> {
    suite
        .members()
        .into_iter()
        .map(|s| {
            let checks = match s {
                Suite::Specfun => specfun_battery(seed),
                Suite::Wronskian => wronskian_battery(seed, exec),
                Suite::Residual => residual_battery(exec),
                Suite::Residue => residue_battery(seed, exec).map(|b| b.checks),
                Suite::Symmetry => symmetry_battery(seed, exec),
                Suite::All => unreachable!("expanded above"),
            }?;
            Ok(SuiteReport { suite: s, checks })
        })
        .collect()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn dist_to_nonpositive_integers(z: C64) -> f64 {
    (z - z.re.round().min(0.0)).norm()
}

fn rel(x: C64, y: C64) -> f64 {
    (x - y).norm() / y.norm().max(1e-300)
}

fn random_complex(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> C64 {
    c(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

/// Recurrence, reflection, 1/Γ·Γ, Gauss summation, Euler transform,
/// contiguity and continuity of F/Γ(c) in c.
pub fn specfun_battery(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctl = SeriesControl::default();
    let mut checks = Vec::new();

    let mut grid = Vec::new();
    while grid.len() < 200 {
        let z = random_complex(&mut rng, (-20.0, 20.0), (-20.0, 20.0));
        if z.norm() <= 20.0 && dist_to_nonpositive_integers(z) >= 0.1 {
            grid.push(z);
        }
    }
    let (mut recur, mut reflect, mut recip) = (0f64, 0f64, 0f64);
    for &z in &grid {
        let g1 = gamma(z + 1.0)?;
        recur = recur.max((g1 - z * gamma(z)?).norm() / g1.norm());
        reflect = reflect.max((gamma(z)? * gamma(1.0 - z)? * specfun::sin_pi(z) / std::f64::consts::PI - 1.0).norm());
        recip = recip.max((recip_gamma(z) * gamma(z)? - 1.0).norm());
    }
    checks.push(Check::at_most("gamma recurrence", recur, 1e-12));
    checks.push(Check::at_most("gamma reflection", reflect, 1e-10));
    checks.push(Check::at_most("recip_gamma * gamma", recip, 1e-12));

    // Gauss summation: F(1 - t) = G + A t^p + O(t), p = c - a - b; two
    // values of t eliminate A.
    let mut gauss = 0f64;
    let mut draws = 0;
    while draws < 30 {
        let a = random_complex(&mut rng, (-2.0, 2.0), (-1.0, 1.0));
        let b = random_complex(&mut rng, (-2.0, 2.0), (-1.0, 1.0));
        let p = random_complex(&mut rng, (0.6, 3.0), (-1.0, 1.0));
        let cc = a + b + p;
        if dist_to_nonpositive_integers(cc) < 0.1
            || dist_to_nonpositive_integers(cc - a) < 0.1
            || dist_to_nonpositive_integers(cc - b) < 0.1
        {
            continue;
        }
        draws += 1;
        let (z1, z2) = (1.0 - 1e-12, 1.0 - 2e-12);
        let (t1, t2) = (1.0 - z1, 1.0 - z2);
        let f1 = hyp2f1(a, b, cc, z1, &ctl)?;
        let f2 = hyp2f1(a, b, cc, z2, &ctl)?;
        let ratio = C64::new(t2 / t1, 0.0).powc(p);
        let limit = f1 - (f2 - f1) / (ratio - 1.0);
        let exact = gamma(cc)? * gamma(p)? * recip_gamma(cc - a) * recip_gamma(cc - b);
        gauss = gauss.max((limit - exact).norm() / exact.norm().max(1.0));
    }
    checks.push(Check::at_most("gauss summation at z -> 1", gauss, 1e-8));

    let mut euler = 0f64;
    let mut contiguity = 0f64;
    for _ in 0..10 {
        let a = random_complex(&mut rng, (-1.5, 1.5), (-1.0, 1.0));
        let b = random_complex(&mut rng, (-1.5, 1.5), (-1.0, 1.0));
        let cc = random_complex(&mut rng, (0.5, 3.0), (-1.0, 1.0));
        for i in 1..=9 {
            let z = i as f64 / 10.0;
            let lhs = hyp2f1(a, b, cc, z, &ctl)?;
            let rhs = C64::new(1.0 - z, 0.0).powc(cc - a - b) * hyp2f1(cc - a, cc - b, cc, z, &ctl)?;
            euler = euler.max(rel(rhs, lhs));
            // c(1-z)F(a,b;c) - cF(a-1,b;c) + (c-b)zF(a,b;c+1) = 0
            let t1 = cc * (1.0 - z) * lhs;
            let t2 = cc * hyp2f1(a - 1.0, b, cc, z, &ctl)?;
            let t3 = (cc - b) * z * hyp2f1(a, b, cc + 1.0, z, &ctl)?;
            let scale = t1.norm().max(t2.norm()).max(t3.norm()).max(1.0);
            contiguity = contiguity.max((t1 - t2 + t3).norm() / scale);
        }
    }
    checks.push(Check::at_most("euler transform", euler, 1e-10));
    checks.push(Check::at_most("contiguity relation", contiguity, 1e-9));

    let mut continuity = 0f64;
    for m in 0..4 {
        let a = random_complex(&mut rng, (-1.5, 1.5), (-1.0, 1.0));
        let b = random_complex(&mut rng, (-1.5, 1.5), (-1.0, 1.0));
        let cm = c(-(m as f64), 0.0);
        for i in 1..=9 {
            let z = i as f64 / 10.0;
            let at = hyp2f1_regularized(a, b, cm, z, &ctl)?;
            let scale = at.norm().max(1.0);
            // One-sided limits from c = -m ± 1e-6, with the linear term
            // removed by Richardson extrapolation against ±2e-6.
            for dc in [c(1e-6, 0.0), c(-1e-6, 0.0)] {
                let near = hyp2f1_regularized(a, b, cm + dc, z, &ctl)?;
                let far = hyp2f1_regularized(a, b, cm + 2.0 * dc, z, &ctl)?;
                continuity = continuity.max((2.0 * near - far - at).norm() / scale);
            }
        }
    }
    checks.push(Check::at_most("regularized continuity in c", continuity, 1e-5));
    Ok(checks)
}

/// Five-point central derivative.
fn derivative<F: Fn(f64) -> Result<C64>>(f: F, x: f64, h: f64) -> Result<C64> {
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

/// Random (n, μ², λ) off the pole set.
pub fn random_wronskian_draws(seed: u64, count: usize) -> Vec<(u32, Mode, SpectralParam)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=3u32);
        let mode = Mode::new(rng.gen_range(0.0..6.0), 1, 0).expect("valid mode");
        let lambda = SpectralParam::new(random_complex(&mut rng, (-1.5, 1.5), (-1.0, 3.0)));
        let p = hypergeom_params(n, &mode, &lambda);
        if [p.a, p.b, p.c].iter().all(|&z| dist_to_nonpositive_integers(z) > 0.05) {
            out.push((n, mode, lambda));
        }
    }
    out
}

pub const WRONSKIAN_TOL: f64 = 1e-8;
const WRONSKIAN_FD_STEP: f64 = 1e-4;

pub fn wronskian_battery(seed: u64, exec: Execution) -> Result<Vec<Check>> {
    let draws = random_wronskian_draws(seed, 20);
    exec.try_map(&draws, |(n, mode, lambda)| {
        let p = hypergeom_params(*n, mode, lambda);
        let mut worst = 0f64;
        for i in 1..=9 {
            let x = i as f64 / 10.0;
            let v1 = resolvent::u1(&p, x)?;
            let v2 = resolvent::u2(&p, x)?;
            let d1 = derivative(|y| resolvent::u1(&p, y), x, WRONSKIAN_FD_STEP)?;
            let d2 = derivative(|y| resolvent::u2(&p, y), x, WRONSKIAN_FD_STEP)?;
            let fd = v1 * d2 - d1 * v2;
            worst = worst.max(rel(fd, resolvent::wronskian_closed_form(&p, x)?));
        }
        Ok(Check::at_most(
            format!("wronskian n={} mu_sq={:.6} lambda={:.6}", n, mode.mu_sq, lambda.value),
            worst,
            WRONSKIAN_TOL,
        ))
    })
}

/// The σ grid used by the residual battery: 0.1..0.9 in steps of 0.025,
/// skipping points within 0.011 of the profile's endpoints.
pub fn residual_grid(f: &RadialProfile) -> Vec<f64> {
    let (lo, hi) = f.support();
    (0..=32)
        .map(|i| 0.1 + 0.025 * i as f64)
        .filter(|x| (x - lo).abs() > 0.011 && (x - hi).abs() > 0.011)
        .collect()
}

pub fn residual_battery(exec: Execution) -> Result<Vec<Check>> {
    let qc = QuadratureControl::new(1e-14, 1e-14, 200)?;
    let f = RadialProfile::bump(0.3, 0.6)?;
    let grid = residual_grid(&f);
    let mut cases = Vec::new();
    for (n, mu_sq) in [(1u32, 0i64), (1, 1), (2, 2), (3, 8)] {
        for lambda in [c(0.0, 3.0), c(1.0, -0.7), c(-0.3, -1.1)] {
            cases.push((n, mu_sq, lambda));
        }
    }
    exec.try_map(&cases, |&(n, mu_sq, lambda)| {
        let mode = Mode::exact(rational_int(mu_sq), 1, 0)?;
        let r = resolvent::residual_check_with(
            n,
            &mode,
            &SpectralParam::new(lambda),
            &f,
            &grid,
            &qc,
            Execution::Sequential,
        )?;
        let tol = if lambda == c(0.0, 3.0) { 1e-6 } else { 1e-5 };
        Ok(Check::at_most(
            format!("residual n={n} mu_sq={mu_sq} lambda={lambda}"),
            r,
            tol,
        ))
    })
}

#[derive(Debug, Clone)]
pub struct ProbeCase {
    pub label: String,
    pub n: u32,
    pub mode: Mode,
    pub lambda: SpectralParam,
    pub expected: Verdict,
}

/// Candidates -i(1/2 + k + s) for k <= 2 on circles ρ = 1, 2 and the round
/// S², S³ (modes j <= 2), plus ten random non-candidate points.
pub fn probe_battery_cases(seed: u64) -> Result<Vec<ProbeCase>> {
    let mut specs = Vec::new();
    for rho in [1, 2] {
        specs.push((
            format!("circle rho={rho}"),
            circle_spectrum_exact(&rational_int(rho), 2)?,
        ));
    }
    for n in [2, 3] {
        specs.push((format!("S^{n}"), sphere_spectrum(n, 2)?));
    }
    let mut cases = Vec::new();
    let mut all_modes = Vec::new();
    for (name, spec) in &specs {
        for mode in &spec.modes {
            all_modes.push((spec.dimension, mode.clone()));
            for (k, lambda) in resonance::candidates(spec.dimension, mode, 2).into_iter().enumerate() {
                let class = classify_pole(&hypergeom_params(spec.dimension, mode, &lambda))?;
                cases.push(ProbeCase {
                    label: format!("{name} j={} k={k}", mode.label),
                    n: spec.dimension,
                    mode: mode.clone(),
                    lambda,
                    expected: class.verdict,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut extra = 0;
    while extra < 10 {
        let (n, mode) = all_modes[rng.gen_range(0..all_modes.len())].clone();
        let lambda = c(rng.gen_range(-1.0..1.0), -rng.gen_range(0.2..4.0));
        let p = hypergeom_params(n, &mode, &SpectralParam::new(lambda));
        if [p.a, p.b].iter().any(|&z| dist_to_nonpositive_integers(z) < 0.1) {
            continue;
        }
        let class = classify_pole(&p)?;
        cases.push(ProbeCase {
            label: format!("random n={n} mu_sq={} lambda={lambda:.4}", mode.mu_sq),
            n,
            mode,
            lambda: SpectralParam::new(lambda),
            expected: class.verdict,
        });
        extra += 1;
    }
    Ok(cases)
}

#[derive(Debug, Clone)]
pub struct ResidueBattery {
    pub checks: Vec<Check>,
    /// Smallest probe ratio among genuine poles.
    pub min_pole_ratio: f64,
    /// Largest probe ratio among the rest.
    pub max_other_ratio: f64,
}

pub const PROBE_SIGMA: f64 = 0.45;

pub fn residue_battery(seed: u64, exec: Execution) -> Result<ResidueBattery> {
    let cases = probe_battery_cases(seed)?;
    let f = RadialProfile::bump(0.2, 0.7)?;
    let qc = QuadratureControl::default();
    let probes = exec.try_map(&cases, |case| {
        residue_probe(
            case.n,
            &case.mode,
            case.lambda.value,
            &f,
            PROBE_SIGMA,
            ProbeSettings::default(),
            &qc,
            Execution::Sequential,
        )
    })?;
    let mut checks = Vec::new();
    let mut min_pole = f64::INFINITY;
    let mut max_other = 0f64;
    for (case, probe) in cases.iter().zip(&probes) {
        let expect_pole = case.expected == Verdict::GenuinePole;
        let got_pole = probe.verdict == ProbeVerdict::Pole;
        if expect_pole {
            min_pole = min_pole.min(probe.ratio);
        } else {
            max_other = max_other.max(probe.ratio);
        }
        checks.push(Check {
            name: format!("residue {}", case.label),
            passed: expect_pole == got_pole,
            measured: probe.ratio,
            tolerance: resolvent::PROBE_THRESHOLD,
            detail: format!(
                "classifier {} probe {}",
                case.expected,
                if got_pole { "pole" } else { "no pole" }
            ),
        });
    }
    let separation = if max_other > 0.0 {
        min_pole / max_other
    } else {
        f64::INFINITY
    };
    checks.push(
        Check {
            name: "residue separation (orders of magnitude)".into(),
            passed: separation >= 1e4,
            measured: separation.log10(),
            tolerance: 4.0,
            detail: String::new(),
        }
        .with_detail(format!("min pole ratio {min_pole:e}, max other ratio {max_other:e}")),
    );
    Ok(ResidueBattery {
        checks,
        min_pole_ratio: min_pole,
        max_other_ratio: max_other,
    })
}

/// Random bump pairs inside [0.2, 0.8].
pub fn random_bump_pairs(seed: u64, count: usize) -> Result<Vec<(RadialProfile, RadialProfile)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bump = |rng: &mut ChaCha8Rng| {
        let lo = rng.gen_range(0.2..0.55);
        let hi = rng.gen_range(lo + 0.1..0.8);
        RadialProfile::bump(lo, hi)
    };
    (0..count).map(|_| Ok((bump(&mut rng)?, bump(&mut rng)?))).collect()
}

pub const SYMMETRY_TOL: f64 = 1e-7;

pub fn symmetry_battery(seed: u64, exec: Execution) -> Result<Vec<Check>> {
    let pairs = random_bump_pairs(seed, 5)?;
    let qc = QuadratureControl::new(1e-12, 1e-12, 200)?;
    let mode = Mode::exact(rational_int(2), 1, 0)?;
    let mut cases = Vec::new();
    for t in [2.0, 3.0] {
        for (i, pair) in pairs.iter().enumerate() {
            cases.push((t, i, pair));
        }
    }
    exec.try_map(&cases, |&(t, i, (f, g))| {
        let lambda = SpectralParam::new(c(0.0, t));
        let fg = resolvent::green_pairing(2, &mode, &lambda, f, g, &qc)?;
        let gf = resolvent::green_pairing(2, &mode, &lambda, g, f, &qc)?;
        let err = (fg - gf).norm() / fg.norm().max(gf.norm()).max(1e-300);
        Ok(Check::at_most(
            format!("green symmetry lambda={t}i pair {i}"),
            err,
            SYMMETRY_TOL,
        ))
    })
}
