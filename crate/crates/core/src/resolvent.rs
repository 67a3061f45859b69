//! The radial mode resolvent in the coordinate σ = 1/cosh²(r/2).
//!
//! In σ the radial operator -∂_r² - n coth r ∂_r + μ²/sinh²r - λ² - n²/4
//! becomes
//!
//!   L = -σ²(1-σ)∂² - [(1-n) - (3-n)σ/2]σ∂ + σ²μ²/(4(1-σ)) - λ² - n²/4,
//!
//! and its inverse acting on a compactly supported f is
//!
//!   u(σ) = K h(σ) [Freg(a,b,c;σ) ∫_σ^1 f u₂ ω dρ + u₂(σ) ∫_0^σ f Freg(a,b,c;·) ω dρ]
//!
//! with K = Γ(a)Γ(b)/Γ(1+s), h(σ) = σ^{n/2-iλ}(1-σ)^{-(n-1)/4+s/2},
//! ω(ρ) = ρ^{-1-n/2-iλ}(1-ρ)^{(n-1)/4+s/2}, u₂ = F(a,b;1+s;1-σ) and
//! Freg = F/Γ(c). Using Freg in place of F/Γ(c) keeps the kernel finite
//! where Γ(c) has poles.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::crosssec::Mode;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quadrature::{integrate, QuadratureControl};
use crate::resonance::{classify_pole, hypergeom_params, HypergeomParams, SpectralParam, Verdict};
use crate::specfun::{self, hyp2f1, hyp2f1_regularized, recip_gamma, SeriesControl, C64};

/// Finite-difference step of the residual check.
pub const FD_STEP: f64 = 1e-3;
/// Number of samples in the circle mean used at removable points.
pub const REMOVABLE_SAMPLES: usize = 16;
pub const PROBE_THRESHOLD: f64 = 1e-6;

/// σ = 1/cosh²(r/2), written as 4e^{-r}/(1+e^{-r})² so large r does not
/// overflow.
pub fn sigma_of_r(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::DomainError {
            value: r,
            domain: "[0, inf)",
        });
    }
    let e = (-r).exp();
    Ok(4.0 * e / ((1.0 + e) * (1.0 + e)))
}

pub fn r_of_sigma(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::DomainError {
            value: sigma,
            domain: "(0, 1]",
        });
    }
    Ok(2.0 * ((1.0 - sigma) / sigma).sqrt().asinh())
}

fn check_open_unit(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError {
            value: sigma,
            domain: "(0, 1)",
        })
    }
}

/// Density of sinhⁿr dr in σ: 2ⁿ(1-σ)^{(n-1)/2}σ^{-(n+1)}.
pub fn measure_density(n: u32, sigma: f64) -> Result<f64> {
    check_open_unit(sigma)?;
    let nf = n as f64;
    Ok(2f64.powi(n as i32) * (1.0 - sigma).powf((nf - 1.0) / 2.0) * sigma.powf(-(nf + 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicialData {
    /// Exponents at σ = 0: n/2 ± iλ.
    pub alpha_plus: C64,
    pub alpha_minus: C64,
    /// Exponents at σ = 1: -(n-1)/4 ± s/2.
    pub beta_plus: C64,
    pub beta_minus: C64,
    pub selected_alpha: C64,
    pub selected_beta: C64,
    /// The two exponents at σ = 0 coincide (λ = 0).
    pub alpha_degenerate: bool,
    /// The two exponents at σ = 1 coincide (s = 0).
    pub beta_degenerate: bool,
}

pub fn indicial_roots(n: u32, mode: &Mode, lambda: &SpectralParam) -> IndicialData {
    let nf = n as f64;
    let s = crate::resonance::s_param(n, mode).0;
    let il = C64::i() * lambda.value;
    let half_n = C64::new(nf / 2.0, 0.0);
    let beta0 = -(nf - 1.0) / 4.0;
    IndicialData {
        alpha_plus: half_n + il,
        alpha_minus: half_n - il,
        beta_plus: C64::new(beta0 + s / 2.0, 0.0),
        beta_minus: C64::new(beta0 - s / 2.0, 0.0),
        selected_alpha: half_n - il,
        selected_beta: C64::new(beta0 + s / 2.0, 0.0),
        alpha_degenerate: lambda.value == C64::new(0.0, 0.0),
        beta_degenerate: s == 0.0,
    }
}

/// Solution regular at σ = 0: F(a, b; c; σ).
pub fn u1(p: &HypergeomParams, sigma: f64) -> Result<C64> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(Error::DomainError {
            value: sigma,
            domain: "[0, 1)",
        });
    }
    hyp2f1(p.a, p.b, p.c, sigma, &SeriesControl::default())
}

/// Solution regular at σ = 1: F(a, b; 1 + s; 1 - σ).
pub fn u2(p: &HypergeomParams, sigma: f64) -> Result<C64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::DomainError {
            value: sigma,
            domain: "(0, 1]",
        });
    }
    hyp2f1(
        p.a,
        p.b,
        C64::new(1.0 + p.s, 0.0),
        1.0 - sigma,
        &SeriesControl::default(),
    )
}

fn real_power(base: f64, exponent: C64) -> C64 {
    debug_assert!(base > 0.0, "principal powers need a positive base");
    (exponent * base.ln()).exp()
}

/// W = u₁u₂' - u₁'u₂ = Γ(c-1)Γ(a+b-c+1)(1-c)/(Γ(a)Γ(b)) σ^{-c}(1-σ)^{c-a-b-1}.
///
/// Evaluated as -2^{c-1}Γ(a+1/2)Γ(1+s)/(√π Γ(b)) σ^{-c}(1-σ)^{-1-s}, using
/// Γ(c)/Γ(a) = 2^{c-1}Γ(a+1/2)/√π for c = 2a; this is the continuous
/// extension through c ∈ {0, -2, -4, ...}.
pub fn wronskian_closed_form(p: &HypergeomParams, sigma: f64) -> Result<C64> {
    check_open_unit(sigma)?;
    let a_half = p.a + 0.5;
    if specfun::nonpositive_integer(a_half).is_some() {
        return Err(Error::ParameterPole(format!(
            "Γ(c-1)(1-c) is infinite at c = {} while Γ(a) is finite",
            p.c.re
        )));
    }
    let pref = -C64::new(2.0, 0.0).powc(p.c - 1.0)
        * specfun::gamma(a_half)?
        * specfun::gamma(C64::new(1.0 + p.s, 0.0))?
        * recip_gamma(p.b)
        / PI.sqrt();
    Ok(pref * real_power(sigma, -p.c) * real_power(1.0 - sigma, C64::new(-1.0 - p.s, 0.0)))
}

/// A radial profile f with compact support [lo, hi] ⊂ (0, 1).
#[derive(Clone)]
pub struct RadialProfile {
    evaluate: Arc<dyn Fn(f64) -> C64 + Send + Sync>,
    lo: f64,
    hi: f64,
    smoothness: u32,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support", &(self.lo, self.hi))
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl RadialProfile {
    /// `evaluate` is only called inside the support.
    pub fn new<F>(evaluate: F, lo: f64, hi: f64, smoothness: u32) -> Result<Self>
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "profile support [{lo}, {hi}] must satisfy 0 < lo < hi < 1"
            )));
        }
        Ok(RadialProfile {
            evaluate: Arc::new(evaluate),
            lo,
            hi,
            smoothness,
        })
    }

    /// ((σ-lo)(hi-σ))³ scaled to peak value 1; C² across the endpoints.
    pub fn bump(lo: f64, hi: f64) -> Result<Self> {
        let peak = ((hi - lo) / 2.0).powi(6);
        Self::new(move |x| C64::new(((x - lo) * (hi - x)).powi(3) / peak, 0.0), lo, hi, 2)
    }

    pub fn zero() -> Self {
        Self::new(|_| C64::new(0.0, 0.0), 0.25, 0.75, u32::MAX).expect("valid support")
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn value(&self, sigma: f64) -> C64 {
        if sigma < self.lo || sigma > self.hi {
            C64::new(0.0, 0.0)
        } else {
            (self.evaluate)(sigma)
        }
    }

    /// self + alpha * other.
    pub fn combine(&self, alpha: C64, other: &RadialProfile) -> RadialProfile {
        let (f, g) = (self.clone(), other.clone());
        RadialProfile {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
            smoothness: self.smoothness.min(other.smoothness),
            evaluate: Arc::new(move |x| f.value(x) + alpha * g.value(x)),
        }
    }
}

/// The resolvent of one mode at a point λ where the kernel formula can be
/// evaluated directly (Γ(a) and Γ(b) finite).
#[derive(Debug, Clone)]
struct DirectKernel {
    p: HypergeomParams,
    prefactor: C64,
    alpha: C64,
    beta: f64,
    omega_rho: C64,
    omega_one: f64,
}

impl DirectKernel {
    fn new(n: u32, p: HypergeomParams) -> Result<Self> {
        let nf = n as f64;
        let prefactor = specfun::gamma(p.a)? * specfun::gamma(p.b)? * recip_gamma(C64::new(1.0 + p.s, 0.0));
        // n/2 - iλ = (n-1)/2 + a.
        let alpha = p.a + (nf - 1.0) / 2.0;
        let beta = -(nf - 1.0) / 4.0 + p.s / 2.0;
        Ok(DirectKernel {
            omega_rho: p.c - 2.0 - alpha,
            omega_one: (nf - 1.0) / 4.0 + p.s / 2.0,
            p,
            prefactor,
            alpha,
            beta,
        })
    }

    fn freg(&self, x: f64) -> Result<C64> {
        hyp2f1_regularized(self.p.a, self.p.b, self.p.c, x, &SeriesControl::default())
    }

    fn u2(&self, x: f64) -> Result<C64> {
        hyp2f1(
            self.p.a,
            self.p.b,
            C64::new(1.0 + self.p.s, 0.0),
            1.0 - x,
            &SeriesControl::default(),
        )
    }

    fn omega(&self, x: f64) -> C64 {
        real_power(x, self.omega_rho) * (1.0 - x).powf(self.omega_one)
    }

    fn apply(&self, f: &RadialProfile, sigma: f64, qc: &QuadratureControl) -> Result<C64> {
        let (lo, hi) = f.support();
        let zero = C64::new(0.0, 0.0);
        let upper = if sigma < hi {
            let outer = integrate(|x| Ok(f.value(x) * self.u2(x)? * self.omega(x)), sigma.max(lo), hi, qc)?;
            self.freg(sigma)? * outer
        } else {
            zero
        };
        let lower = if sigma > lo {
            let inner = integrate(
                |x| Ok(f.value(x) * self.freg(x)? * self.omega(x)),
                lo,
                sigma.min(hi),
                qc,
            )?;
            self.u2(sigma)? * inner
        } else {
            zero
        };
        let h = real_power(sigma, self.alpha) * (1.0 - sigma).powf(self.beta);
        Ok(self.prefactor * h * (upper + lower))
    }
}

#[derive(Debug, Clone)]
enum Kernel {
    Direct(Box<DirectKernel>),
    /// Mean over a small circle around a removable point.
    CircleMean(Vec<DirectKernel>),
}

/// R_j(λ) for one mode at one spectral parameter.
#[derive(Debug, Clone)]
pub struct ModeResolvent {
    pub n: u32,
    pub params: HypergeomParams,
    pub verdict: Verdict,
    kernel: Kernel,
}

/// Distance from λ to the nearest other point where Γ(a) or Γ(b) has a
/// pole, for a mode with parameter s.
fn distance_to_other_singular_points(lambda: C64, s: f64) -> f64 {
    // Poles sit at λ = -i d with d = 1/2 + m (Γ(a)) or 1/2 + k + s (Γ(b)).
    let d0 = -lambda.im;
    let mut best = f64::INFINITY;
    let mut consider = |d: f64| {
        let dist = (lambda - C64::new(0.0, -d)).norm();
        if dist > 1e-9 {
            best = best.min(dist);
        }
    };
    for offset in [0.0, s] {
        let m = (d0 - 0.5 - offset).round();
        for dm in [-1.0, 0.0, 1.0] {
            let mm = m + dm;
            if mm >= 0.0 {
                consider(0.5 + offset + mm);
            }
        }
        if m < 0.0 {
            consider(0.5 + offset);
        }
    }
    best
}

impl ModeResolvent {
    pub fn new(n: u32, mode: &Mode, lambda: &SpectralParam) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDimension(n as i64));
        }
        let params = hypergeom_params(n, mode, lambda);
        let class = classify_pole(&params)?;
        let kernel = match class.verdict {
            Verdict::GenuinePole => {
                return Err(Error::PoleEvaluation {
                    case: class.case.as_str().to_string(),
                })
            }
            Verdict::Regular => Kernel::Direct(Box::new(DirectKernel::new(n, params.clone())?)),
            Verdict::Removable => {
                let r = (distance_to_other_singular_points(lambda.value, params.s) / 4.0).min(1e-3);
                let ring = (0..REMOVABLE_SAMPLES)
                    .map(|k| {
                        let theta = 2.0 * PI * (k as f64 + 0.5) / REMOVABLE_SAMPLES as f64;
                        let lam = lambda.value + C64::from_polar(r, theta);
                        DirectKernel::new(n, hypergeom_params(n, mode, &SpectralParam::new(lam)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Kernel::CircleMean(ring)
            }
        };
        Ok(ModeResolvent {
            n,
            params,
            verdict: class.verdict,
            kernel,
        })
    }

    /// (R f)(σ).
    pub fn apply(&self, f: &RadialProfile, sigma: f64, qc: &QuadratureControl) -> Result<C64> {
        check_open_unit(sigma)?;
        match &self.kernel {
            Kernel::Direct(k) => k.apply(f, sigma, qc),
            Kernel::CircleMean(ring) => {
                let mut sum = C64::new(0.0, 0.0);
                for k in ring {
                    sum += k.apply(f, sigma, qc)?;
                }
                Ok(sum / ring.len() as f64)
            }
        }
    }
}

/// (R_j(λ) f)(σ_eval). Removable points are evaluated as the mean over a
/// small circle, which equals the analytic continuation there.
pub fn apply_resolvent(
    n: u32,
    mode: &Mode,
    lambda: &SpectralParam,
    f: &RadialProfile,
    sigma_eval: f64,
    qc: &QuadratureControl,
) -> Result<C64> {
    ModeResolvent::new(n, mode, lambda)?.apply(f, sigma_eval, qc)
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    let h = FD_STEP;
    for &x in grid {
        if !(x - 2.0 * h > 0.0 && x + 2.0 * h < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "grid point {x} leaves no room for the finite-difference stencil"
            )));
        }
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[1] - w[0] < 10.0 * h) {
        return Err(Error::InvalidArgument(
            "grid spacing must be at least 10 finite-difference steps".into(),
        ));
    }
    Ok(())
}

/// max over `grid` of |(L u)(σ) - f(σ)| / (1 + max|f|), derivatives by
/// five-point central differences with step [`FD_STEP`].
pub fn ode_residual<U>(
    n: u32,
    mode: &Mode,
    lambda: C64,
    f: &RadialProfile,
    grid: &[f64],
    u: U,
    exec: Execution,
) -> Result<f64>
where
    U: Fn(f64) -> Result<C64> + Sync + Send,
{
    validate_grid(grid)?;
    let nf = n as f64;
    let h = FD_STEP;
    let per_point = exec.try_map(grid, |&x| -> Result<(f64, f64)> {
        let v = [u(x - 2.0 * h)?, u(x - h)?, u(x)?, u(x + h)?, u(x + 2.0 * h)?];
        let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
        let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
        let potential = x * x * mode.mu_sq / (4.0 * (1.0 - x)) - lambda * lambda - nf * nf / 4.0;
        let lu = -x * x * (1.0 - x) * d2 - ((1.0 - nf) - (3.0 - nf) * x / 2.0) * x * d1 + potential * v[2];
        let fx = f.value(x);
        Ok(((lu - fx).norm(), fx.norm()))
    })?;
    let f_max = per_point.iter().map(|p| p.1).fold(0.0, f64::max);
    let worst = per_point.iter().map(|p| p.0).fold(0.0, f64::max);
    Ok(worst / (1.0 + f_max))
}

/// Residual of the computed resolvent against the σ-coordinate ODE.
pub fn residual_check(
    n: u32,
    mode: &Mode,
    lambda: &SpectralParam,
    f: &RadialProfile,
    grid: &[f64],
    qc: &QuadratureControl,
) -> Result<f64> {
    residual_check_with(n, mode, lambda, f, grid, qc, Execution::default())
}

pub fn residual_check_with(
    n: u32,
    mode: &Mode,
    lambda: &SpectralParam,
    f: &RadialProfile,
    grid: &[f64],
    qc: &QuadratureControl,
    exec: Execution,
) -> Result<f64> {
    let r = ModeResolvent::new(n, mode, lambda)?;
    ode_residual(n, mode, lambda.value, f, grid, |x| r.apply(f, x, qc), exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    Pole,
    NoPole,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueProbe {
    /// (2πi)^{-1} ∮ u dλ by the trapezoidal rule.
    pub residue: C64,
    pub max_sample: f64,
    /// |residue| / max_sample.
    pub ratio: f64,
    pub verdict: ProbeVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSettings {
    pub radius: f64,
    pub num_points: usize,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        ProbeSettings {
            radius: 1e-2,
            num_points: 16,
        }
    }
}

/// Contour-integral test for a pole of λ ↦ (R_j(λ) f)(σ_eval) at λ₀.
#[allow(clippy::too_many_arguments)]
pub fn residue_probe(
    n: u32,
    mode: &Mode,
    lambda0: C64,
    f: &RadialProfile,
    sigma_eval: f64,
    settings: ProbeSettings,
    qc: &QuadratureControl,
    exec: Execution,
) -> Result<ResidueProbe> {
    let ProbeSettings { radius, num_points } = settings;
    if !(radius > 0.0) || num_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "probe needs radius > 0 and at least 3 points (got {radius}, {num_points})"
        )));
    }
    let s = crate::resonance::s_param(n, mode).0;
    let nearest = distance_to_other_singular_points(lambda0, s);
    if nearest < 3.0 * radius {
        return Err(Error::InvalidArgument(format!(
            "another candidate pole lies {nearest} from the probe centre (radius {radius})"
        )));
    }
    let offsets: Vec<C64> = (0..num_points)
        .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / num_points as f64))
        .collect();
    let samples = exec.try_map(&offsets, |dz| {
        apply_resolvent(n, mode, &SpectralParam::new(lambda0 + dz), f, sigma_eval, qc)
    })?;
    // dλ = i dz, so (2πi)^{-1} ∮ u dλ = mean(u · dz).
    let residue = samples.iter().zip(&offsets).map(|(u, dz)| u * dz).sum::<C64>() / num_points as f64;
    let max_sample = samples.iter().map(|u| u.norm()).fold(0.0, f64::max);
    let ratio = if max_sample > 0.0 {
        residue.norm() / max_sample
    } else {
        0.0
    };
    if ratio > PROBE_THRESHOLD / 10.0 && ratio < PROBE_THRESHOLD * 10.0 {
        return Err(Error::ProbeInconclusive { ratio });
    }
    Ok(ResidueProbe {
        residue,
        max_sample,
        ratio,
        verdict: if ratio > PROBE_THRESHOLD {
            ProbeVerdict::Pole
        } else {
            ProbeVerdict::NoPole
        },
    })
}

/// ∫ (R f)(σ) g(σ) μ_n(σ) dσ over the support of g.
pub fn green_pairing(
    n: u32,
    mode: &Mode,
    lambda: &SpectralParam,
    f: &RadialProfile,
    g: &RadialProfile,
    qc: &QuadratureControl,
) -> Result<C64> {
    let r = ModeResolvent::new(n, mode, lambda)?;
    let (glo, ghi) = g.support();
    let (flo, fhi) = f.support();
    // Rf has kinks in its derivatives at f's endpoints; split there.
    let mut cuts = vec![glo, ghi];
    cuts.extend([flo, fhi].into_iter().filter(|&x| x > glo && x < ghi));
    cuts.sort_by(f64::total_cmp);
    let mut total = C64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        total += integrate(
            |x| Ok(r.apply(f, x, qc)? * g.value(x) * measure_density(n, x)?),
            w[0],
            w[1],
            qc,
        )?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_int;

    fn mode(mu_sq: i64) -> Mode {
        Mode::exact(rational_int(mu_sq), 1, 0).unwrap()
    }

    #[test]
    fn coordinate_examples() {
        assert_eq!(sigma_of_r(0.0).unwrap(), 1.0);
        let r = 2.0 * 2f64.sqrt().acosh();
        assert!((sigma_of_r(r).unwrap() - 0.5).abs() < 1e-15);
        assert!(sigma_of_r(50.0).unwrap() < 1e-20);
        assert!(sigma_of_r(50.0).unwrap() > sigma_of_r(51.0).unwrap());
        assert_eq!(r_of_sigma(1.0).unwrap(), 0.0);
        assert!((r_of_sigma(0.5).unwrap() - r).abs() < 1e-14);
        let x = 0.37;
        assert!((sigma_of_r(r_of_sigma(x).unwrap()).unwrap() - x).abs() < 1e-13 * x);
        assert!(r_of_sigma(0.0).is_err() && r_of_sigma(1.5).is_err());
    }

    #[test]
    fn density_examples() {
        assert!((measure_density(1, 0.5).unwrap() - 8.0).abs() < 1e-14);
        assert!((measure_density(1, 1.0 - 1e-12).unwrap() - 2.0).abs() < 1e-10);
        assert!(measure_density(2, 1.0).is_err());
    }

    #[test]
    fn indicial_examples() {
        let d = indicial_roots(1, &mode(1), &SpectralParam::new(C64::new(0.0, 2.0)));
        assert_eq!((d.alpha_plus, d.alpha_minus), (C64::new(-1.5, 0.0), C64::new(2.5, 0.0)));
        assert_eq!((d.beta_plus, d.beta_minus), (C64::new(0.5, 0.0), C64::new(-0.5, 0.0)));
        assert_eq!(
            (d.selected_alpha, d.selected_beta),
            (C64::new(2.5, 0.0), C64::new(0.5, 0.0))
        );
        let d = indicial_roots(2, &mode(0), &SpectralParam::new(C64::new(0.0, 1.0)));
        assert_eq!((d.alpha_plus, d.alpha_minus), (C64::new(0.0, 0.0), C64::new(2.0, 0.0)));
        assert_eq!((d.beta_plus, d.beta_minus), (C64::new(0.0, 0.0), C64::new(-0.5, 0.0)));
        let d = indicial_roots(3, &mode(2), &SpectralParam::new(C64::new(0.0, 0.0)));
        assert!(d.alpha_degenerate && d.alpha_plus == d.alpha_minus);
    }

    #[test]
    fn homogeneous_solution_limits() {
        let p = hypergeom_params(1, &mode(1), &SpectralParam::new(C64::new(1.0, 0.0)));
        assert_eq!(u1(&p, 0.0).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(u2(&p, 1.0).unwrap(), C64::new(1.0, 0.0));
        let (w1, w2) = (
            wronskian_closed_form(&p, 0.25).unwrap(),
            wronskian_closed_form(&p, 0.75).unwrap(),
        );
        let expect = C64::new(1.0 / 3.0, 0.0).powc(-p.c) * 3f64.powf(-1.0 - p.s);
        assert!((w1 / w2 - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn zero_profile_maps_to_zero() {
        let qc = QuadratureControl::default();
        let v = apply_resolvent(
            1,
            &mode(0),
            &SpectralParam::new(C64::new(0.0, 3.0)),
            &RadialProfile::zero(),
            0.4,
            &qc,
        )
        .unwrap();
        assert_eq!(v, C64::new(0.0, 0.0));
    }

    #[test]
    fn genuine_pole_is_refused() {
        let qc = QuadratureControl::default();
        let f = RadialProfile::bump(0.3, 0.6).unwrap();
        let lam = SpectralParam::imaginary_rational(crate::exact::rational(-1, 2));
        assert!(matches!(
            apply_resolvent(1, &mode(0), &lam, &f, 0.4, &qc),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn profile_support_is_validated() {
        assert!(RadialProfile::bump(0.0, 0.5).is_err());
        assert!(RadialProfile::bump(0.6, 0.5).is_err());
        let f = RadialProfile::bump(0.3, 0.6).unwrap();
        assert_eq!(f.value(0.2), C64::new(0.0, 0.0));
        assert!((f.value(0.45) - C64::new(1.0, 0.0)).norm() < 1e-14);
    }
}
