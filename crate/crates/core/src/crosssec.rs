//! Cross-section spectra {mu_j^2, m_j} and the genericity predicate.
//!
//! Built-in generators (round sphere, circle) carry exact rational
//! eigenvalues so that the half-odd-integer test on
//! s = sqrt(((n-1)/2)^2 + mu^2) is decided in exact arithmetic.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use num::bigint::BigInt;
use num::traits::{Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, format_rational, parse_rational, rational, rational_int, Rational};
use crate::report;
use crate::specfun::{self, C64};

/// Float-path threshold for "s is a half-odd integer".
pub const GENERICITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    /// Eigenvalue of -Δ_h.
    pub mu_sq: f64,
    pub mu_sq_exact: Option<Rational>,
    pub multiplicity: u64,
    pub label: usize,
}

impl Mode {
    pub fn new(mu_sq: f64, multiplicity: u64, label: usize) -> Result<Self> {
        if !(mu_sq >= 0.0) || !mu_sq.is_finite() {
            return Err(Error::ValidationError(format!(
                "mu_sq must be finite and >= 0 (got {mu_sq})"
            )));
        }
        if multiplicity == 0 {
            return Err(Error::ValidationError("multiplicity must be >= 1".into()));
        }
        Ok(Mode {
            mu_sq,
            mu_sq_exact: None,
            multiplicity,
            label,
        })
    }

    pub fn exact(mu_sq: Rational, multiplicity: u64, label: usize) -> Result<Self> {
        if mu_sq.is_negative() {
            return Err(Error::ValidationError(format!(
                "mu_sq must be >= 0 (got {})",
                format_rational(&mu_sq)
            )));
        }
        let mut m = Mode::new(exact::to_f64(&mu_sq), multiplicity, label)?;
        m.mu_sq_exact = Some(mu_sq);
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    Sphere,
    Circle,
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    /// dim Y.
    pub dimension: u32,
    /// Sorted by `mu_sq` ascending; labels are positions in this list.
    pub modes: Vec<Mode>,
    /// Vol(Y, h), when known.
    pub volume: Option<f64>,
    pub source: SpectrumSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenericityVerdict {
    Generic,
    NonGeneric,
    UnknownFloat,
}

/// s^2 = ((n-1)/2)^2 + mu^2, in floats and (when available) exactly.
pub fn s_squared(n: u32, mode: &Mode) -> (f64, Option<Rational>) {
    let half = (n as f64 - 1.0) / 2.0;
    let float = half * half + mode.mu_sq;
    let exact = mode.mu_sq_exact.as_ref().map(|mu| {
        let h = rational(n as i64 - 1, 2);
        &h * &h + mu
    });
    (float, exact)
}

/// Decides whether s = sqrt(((n-1)/2)^2 + mu^2) avoids 1/2 + Z.
pub fn is_generic(mode: &Mode, n: u32) -> GenericityVerdict {
    let (s_sq, exact) = s_squared(n, mode);
    if let Some(q) = exact {
        // s in 1/2 + Z  <=>  4 s^2 is the square of an odd integer.
        let four = &q * rational_int(4);
        let odd_square = four.is_integer() && {
            let v = four.to_integer();
            let r = num::integer::Roots::sqrt(&v);
            &r * &r == v && (&r % BigInt::from(2)) == BigInt::from(1)
        };
        return if odd_square {
            GenericityVerdict::NonGeneric
        } else {
            GenericityVerdict::Generic
        };
    }
    let s = s_sq.sqrt();
    let nearest = (s - 0.5).round().max(0.0) + 0.5;
    if (s - nearest).abs() <= GENERICITY_TOL {
        GenericityVerdict::UnknownFloat
    } else {
        GenericityVerdict::Generic
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Dimension of degree-j spherical harmonics on S^n.
pub fn sphere_multiplicity(n: u32, j: u64) -> u64 {
    let n = n as u64;
    if j == 0 {
        1
    } else {
        binomial(n + j, n) - binomial(n + j - 2, n)
    }
}

pub fn sphere_volume(n: u32) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    let g = specfun::gamma(C64::new(h, 0.0)).expect("positive argument").re;
    2.0 * PI.powf(h) / g
}

/// Round S^n: mu_j^2 = j(j + n - 1), j = 0..=j_max. For n = 1 this is the
/// unit circle.
pub fn sphere_spectrum(n: u32, j_max: usize) -> Result<SpectrumSpec> {
    if n < 1 {
        return Err(Error::InvalidDimension(n as i64));
    }
    if n == 1 {
        let mut spec = circle_spectrum_exact(&rational_int(1), j_max)?;
        spec.source = SpectrumSource::Sphere;
        return Ok(spec);
    }
    let modes = (0..=j_max)
        .map(|j| {
            let jj = j as i64;
            Mode::exact(
                rational_int(jj * (jj + n as i64 - 1)),
                sphere_multiplicity(n, j as u64),
                j,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSpec {
        dimension: n,
        modes,
        volume: Some(sphere_volume(n)),
        source: SpectrumSource::Sphere,
    })
}

fn circle_modes(j_max: usize, mu_sq: impl Fn(usize) -> Result<Mode>) -> Result<Vec<Mode>> {
    (0..=j_max).map(mu_sq).collect()
}

fn circle_multiplicity(j: usize) -> u64 {
    if j == 0 {
        1
    } else {
        2
    }
}

/// Circle of circumference 2πρ, float path: mu_j^2 = j^2/ρ^2 with no exact
/// form. Use [`circle_spectrum_exact`] when ρ is rational.
pub fn circle_spectrum(rho: f64, j_max: usize) -> Result<SpectrumSpec> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidRadius(rho));
    }
    let modes = circle_modes(j_max, |j| {
        let jf = j as f64;
        Mode::new(jf * jf / (rho * rho), circle_multiplicity(j), j)
    })?;
    Ok(SpectrumSpec {
        dimension: 1,
        modes,
        volume: Some(2.0 * PI * rho),
        source: SpectrumSource::Circle,
    })
}

pub fn circle_spectrum_exact(rho: &Rational, j_max: usize) -> Result<SpectrumSpec> {
    if !rho.is_positive() {
        return Err(Error::InvalidRadius(exact::to_f64(rho)));
    }
    let rho_sq = rho * rho;
    let modes = circle_modes(j_max, |j| {
        let jj = rational_int(j as i64);
        Mode::exact(&jj * &jj / &rho_sq, circle_multiplicity(j), j)
    })?;
    Ok(SpectrumSpec {
        dimension: 1,
        modes,
        volume: Some(2.0 * PI * exact::to_f64(rho)),
        source: SpectrumSource::Circle,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    mu_sq: Option<f64>,
    mu_sq_exact: Option<String>,
    m: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    n: Option<i64>,
    volume: Option<f64>,
    modes: Option<Vec<RawMode>>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn validate_mode(i: usize, raw: RawMode) -> Result<Mode> {
    let m = raw
        .m
        .ok_or_else(|| Error::ValidationError(format!("modes[{i}]: missing field m")))?;
    if m < 1 {
        return Err(Error::ValidationError(format!(
            "modes[{i}].m: multiplicity must be >= 1 (got {m})"
        )));
    }
    let exact = match raw.mu_sq_exact {
        Some(text) => Some(parse_rational(&text).ok_or_else(|| {
            Error::ValidationError(format!("modes[{i}].mu_sq_exact: not a rational \"p/q\": {text:?}"))
        })?),
        None => None,
    };
    let mode = match (raw.mu_sq, exact) {
        (None, None) => {
            return Err(Error::ValidationError(format!("modes[{i}]: need mu_sq or mu_sq_exact")));
        }
        (Some(v), None) => Mode::new(v, m as u64, i),
        (None, Some(q)) => Mode::exact(q, m as u64, i),
        (Some(v), Some(q)) => {
            let qf = exact::to_f64(&q);
            if (v - qf).abs() > 1e-15 * (1.0 + v.abs()) {
                return Err(Error::ValidationError(format!(
                    "modes[{i}]: mu_sq {v} disagrees with mu_sq_exact {}",
                    format_rational(&q)
                )));
            }
            Mode::exact(q, m as u64, i).map(|mut md| {
                md.mu_sq = v;
                md
            })
        }
    };
    mode.map_err(|e| match e {
        Error::ValidationError(msg) => Error::ValidationError(format!("modes[{i}]: {msg}")),
        other => other,
    })
}

fn same_eigenvalue(x: &Mode, y: &Mode) -> bool {
    match (&x.mu_sq_exact, &y.mu_sq_exact) {
        (Some(p), Some(q)) => p == q,
        _ => x.mu_sq == y.mu_sq,
    }
}

/// Reads the spectrum JSON format:
/// `{"n": int, "volume": number?, "modes": [{"mu_sq": number, "mu_sq_exact": "p/q"?, "m": int}]}`.
/// Modes are sorted and duplicate eigenvalues merged.
pub fn load_spectrum<R: Read>(reader: R) -> Result<SpectrumSpec> {
    let raw: RawSpectrum = serde_json::from_reader(reader).map_err(parse_error)?;
    let n = raw.n.ok_or_else(|| Error::ValidationError("missing field n".into()))?;
    if n < 1 || n > u32::MAX as i64 {
        return Err(Error::ValidationError(format!("n must be >= 1 (got {n})")));
    }
    if let Some(v) = raw.volume {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::ValidationError(format!("volume must be positive (got {v})")));
        }
    }
    let raw_modes = raw
        .modes
        .ok_or_else(|| Error::ValidationError("missing field modes".into()))?;
    let mut modes = raw_modes
        .into_iter()
        .enumerate()
        .map(|(i, m)| validate_mode(i, m))
        .collect::<Result<Vec<_>>>()?;
    modes.sort_by(|x, y| match (&x.mu_sq_exact, &y.mu_sq_exact) {
        (Some(p), Some(q)) => p.cmp(q),
        _ => x.mu_sq.total_cmp(&y.mu_sq),
    });
    let mut merged: Vec<Mode> = Vec::with_capacity(modes.len());
    for mode in modes {
        match merged.last_mut() {
            Some(last) if same_eigenvalue(last, &mode) => last.multiplicity += mode.multiplicity,
            _ => merged.push(mode),
        }
    }
    for (i, m) in merged.iter_mut().enumerate() {
        m.label = i;
    }
    Ok(SpectrumSpec {
        dimension: n as u32,
        modes: merged,
        volume: raw.volume,
        source: SpectrumSource::File,
    })
}

pub fn load_spectrum_file(path: impl AsRef<Path>) -> Result<SpectrumSpec> {
    let file = std::fs::File::open(path.as_ref())?;
    load_spectrum(std::io::BufReader::new(file))
}

impl SpectrumSpec {
    /// The spectrum in the file schema read by [`load_spectrum`].
    pub fn to_json_value(&self) -> Value {
        let modes: Vec<Value> = self
            .modes
            .iter()
            .map(|m| {
                let mut v = json!({ "mu_sq": m.mu_sq, "m": m.multiplicity });
                if let Some(q) = &m.mu_sq_exact {
                    v["mu_sq_exact"] = Value::String(format_rational(q));
                }
                v
            })
            .collect();
        let mut out = json!({ "n": self.dimension, "modes": modes });
        if let Some(vol) = self.volume {
            out["volume"] = json!(vol);
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        report::to_json_string(&self.to_json_value())
    }

    /// Largest label, i.e. the truncation index j_max.
    pub fn j_max(&self) -> Option<usize> {
        self.modes.iter().map(|m| m.label).max()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.modes.iter().map(|m| m.multiplicity).sum()
    }
}

pub fn is_zero_mode(mode: &Mode) -> bool {
    match &mode.mu_sq_exact {
        Some(q) => q.is_zero(),
        None => mode.mu_sq == 0.0,
    }
}
