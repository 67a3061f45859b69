//! Hypergeometric parameters, the six-case pole analysis, the resonance
//! lattice λ_{j,k} = -i(1/2 + k + s_j) and the Weyl count.

use std::collections::BTreeMap;
use std::fmt;

use crate::crosssec::{self, GenericityVerdict, Mode, SpectrumSpec};
use crate::error::{Error, Result};
use crate::exact::{rational, Rational, Surd};
use crate::exec::Execution;
use crate::specfun::{self, C64};

/// Distance to Z_- ∪ {0} below which a float parameter cannot be classified.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Float-path merge tolerance on -Im λ.
pub const MERGE_TOL: f64 = 1e-9;

/// A spectral parameter λ, optionally known exactly as λ = i·t with `t` a
/// rational or quadratic surd.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParam {
    pub value: C64,
    pub im_exact: Option<Surd>,
}

impl SpectralParam {
    pub fn new(value: C64) -> Self {
        SpectralParam { value, im_exact: None }
    }

    /// λ = i·t.
    pub fn imaginary(t: Surd) -> Self {
        SpectralParam {
            value: C64::new(0.0, t.to_f64()),
            im_exact: Some(t),
        }
    }

    pub fn imaginary_rational(t: Rational) -> Self {
        Self::imaginary(Surd::from_rational(t))
    }
}

impl From<C64> for SpectralParam {
    fn from(value: C64) -> Self {
        SpectralParam::new(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub s: f64,
    pub a_exact: Option<Surd>,
    pub b_exact: Option<Surd>,
    pub c_exact: Option<Surd>,
    pub s_exact: Option<Surd>,
}

/// s = sqrt(((n-1)/2)^2 + mu^2), with an exact rational-or-surd form when
/// the mode carries an exact eigenvalue.
pub fn s_param(n: u32, mode: &Mode) -> (f64, Option<Surd>) {
    let (s_sq, exact) = crosssec::s_squared(n, mode);
    match exact.and_then(|q| Surd::sqrt(&q)) {
        Some(s) => (s.to_f64(), Some(s)),
        None => (s_sq.sqrt(), None),
    }
}

/// a = 1/2 - iλ, b = a + s, c = 2a.
pub fn hypergeom_params(n: u32, mode: &Mode, lambda: &SpectralParam) -> HypergeomParams {
    let (s, s_exact) = s_param(n, mode);
    let a = C64::new(0.5, 0.0) - C64::i() * lambda.value;
    // -iλ = t exactly when λ = i t.
    let a_exact = lambda.im_exact.as_ref().map(|t| t.add_rational(&rational(1, 2)));
    let b_exact = match (&a_exact, &s_exact) {
        (Some(a), Some(s)) => a.checked_add(s),
        _ => None,
    };
    let c_exact = a_exact.as_ref().map(|a| a.scale(&Rational::from_integer(2.into())));
    HypergeomParams {
        a,
        b: a + s,
        c: 2.0 * a,
        s,
        a_exact,
        b_exact,
        c_exact,
        s_exact,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Regular,
    GenuinePole,
    Removable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Regular => "regular",
            Verdict::GenuinePole => "genuine_pole",
            Verdict::Removable => "removable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The six cases, named by membership of c, b, a in Z_- ∪ {0}
/// (Y = member, N = not).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoleCase {
    CnBnAn,
    CnBy,
    CyBnAn,
    CyBnAy,
    CyByAn,
    CyByAy,
}

impl PoleCase {
    pub fn as_str(self) -> &'static str {
        match self {
            PoleCase::CnBnAn => "cN_bN_aN",
            PoleCase::CnBy => "cN_bY",
            PoleCase::CyBnAn => "cY_bN_aN",
            PoleCase::CyBnAy => "cY_bN_aY",
            PoleCase::CyByAn => "cY_bY_aN",
            PoleCase::CyByAy => "cY_bY_aY",
        }
    }

    pub fn verdict(self) -> Verdict {
        match self {
            PoleCase::CnBnAn | PoleCase::CyBnAn => Verdict::Regular,
            PoleCase::CnBy | PoleCase::CyByAy => Verdict::GenuinePole,
            PoleCase::CyBnAy | PoleCase::CyByAn => Verdict::Removable,
        }
    }
}

impl fmt::Display for PoleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleClass {
    pub verdict: Verdict,
    pub case: PoleCase,
}

fn format_c64(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Membership in Z_- ∪ {0}: exact when an exact form is present, otherwise
/// by distance, refusing to guess inside [`MEMBERSHIP_TOL`].
fn member(what: &str, value: C64, exact: Option<&Surd>) -> Result<bool> {
    if let Some(e) = exact {
        return Ok(e.is_nonpositive_integer());
    }
    let nearest = value.re.round().min(0.0);
    if (value - nearest).norm() <= MEMBERSHIP_TOL {
        return Err(Error::UndecidableMembership {
            what: what.to_string(),
            value: format_c64(value),
        });
    }
    Ok(false)
}

pub fn classify_pole(p: &HypergeomParams) -> Result<PoleClass> {
    let consistent = match (&p.a_exact, &p.c_exact) {
        (Some(a), Some(c)) => a.scale(&Rational::from_integer(2.into())) == *c,
        _ => (p.c - 2.0 * p.a).norm() <= 1e-14 * (1.0 + p.a.norm()),
    };
    if !consistent {
        return Err(Error::InconsistentParams(format!(
            "c = {} is not 2a = {}",
            format_c64(p.c),
            format_c64(2.0 * p.a)
        )));
    }
    let c_in = member("c", p.c, p.c_exact.as_ref())?;
    let b_in = member("b", p.b, p.b_exact.as_ref())?;
    // a only matters when c is a member; c = 2a forces c in when a is.
    let a_in = if c_in {
        member("a", p.a, p.a_exact.as_ref())?
    } else {
        if let Some(a) = &p.a_exact {
            if a.is_nonpositive_integer() {
                return Err(Error::InconsistentParams(format!(
                    "a = {a} is a non-positive integer but c is not"
                )));
            }
        }
        false
    };
    let case = match (c_in, b_in, a_in) {
        (false, false, _) => PoleCase::CnBnAn,
        (false, true, _) => PoleCase::CnBy,
        (true, false, false) => PoleCase::CyBnAn,
        (true, false, true) => PoleCase::CyBnAy,
        (true, true, false) => PoleCase::CyByAn,
        (true, true, true) => PoleCase::CyByAy,
    };
    Ok(PoleClass {
        verdict: case.verdict(),
        case,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    /// λ = -i·decay.
    pub lambda: C64,
    /// -Im λ.
    pub decay: f64,
    pub decay_exact: Option<Surd>,
    pub multiplicity: u64,
    /// (mode label j, depth k), sorted.
    pub contributors: Vec<(usize, u64)>,
}

impl Resonance {
    pub fn is_exact(&self) -> bool {
        self.decay_exact.is_some()
    }
}

/// What an enumeration is complete for.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub j_max: Option<usize>,
    pub k_max: u64,
    pub radius: f64,
    /// Smallest s among modes that contribute.
    pub s_min: Option<f64>,
    /// s of the last mode in the truncated spectrum.
    pub s_last: Option<f64>,
}

impl Truncation {
    /// Supremum of bounds B with certified completeness; the s-based limits
    /// are strict (B must lie strictly below them).
    pub fn certified_bound(&self) -> f64 {
        let Some(s_last) = self.s_last else {
            return 0.0;
        };
        let mut b = self.radius.min(0.5 + s_last);
        if let Some(s_min) = self.s_min {
            b = b.min(0.5 + self.k_max as f64 + s_min);
        }
        b
    }

    pub fn is_complete_to(&self, bound: f64) -> bool {
        let Some(s_last) = self.s_last else {
            return bound < 0.0;
        };
        bound <= self.radius && bound < 0.5 + s_last && self.s_min.is_none_or(|s| bound < 0.5 + self.k_max as f64 + s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceSet {
    pub dimension: u32,
    /// Sorted by |λ| ascending.
    pub resonances: Vec<Resonance>,
    pub truncation: Truncation,
    /// Labels of modes with s in 1/2 + Z.
    pub excluded_modes: Vec<usize>,
}

impl ResonanceSet {
    pub fn total_multiplicity(&self) -> u64 {
        self.resonances.iter().map(|r| r.multiplicity).sum()
    }
}

#[derive(Debug, Clone)]
struct Entry {
    decay: f64,
    decay_exact: Option<Surd>,
    j: usize,
    k: u64,
    multiplicity: u64,
}

enum ModeOutcome {
    Excluded(usize),
    Entries(Vec<Entry>, f64),
}

fn mode_entries(n: u32, mode: &Mode, k_max: u64, radius: f64, radius_exact: &Option<Rational>) -> Result<ModeOutcome> {
    match crosssec::is_generic(mode, n) {
        GenericityVerdict::NonGeneric => return Ok(ModeOutcome::Excluded(mode.label)),
        GenericityVerdict::UnknownFloat => {
            return Err(Error::UndecidableMembership {
                what: format!("s of mode {} (mu_sq = {})", mode.label, mode.mu_sq),
                value: format!("{}", s_param(n, mode).0),
            })
        }
        GenericityVerdict::Generic => {}
    }
    let (s, s_exact) = s_param(n, mode);
    let mut out = Vec::new();
    for k in 0..=k_max {
        let decay = 0.5 + k as f64 + s;
        let decay_exact = s_exact
            .as_ref()
            .map(|se| se.add_rational(&(rational(1, 2) + Rational::from_integer(k.into()))));
        let inside = match (&decay_exact, radius_exact) {
            (Some(d), Some(r)) if d.is_rational() => d.as_rational().expect("rational") <= r,
            _ => decay <= radius,
        };
        if !inside {
            break;
        }
        out.push(Entry {
            decay,
            decay_exact,
            j: mode.label,
            k,
            multiplicity: mode.multiplicity,
        });
    }
    Ok(ModeOutcome::Entries(out, s))
}

fn finish(group: Vec<Entry>, decay_exact: Option<Surd>) -> Resonance {
    let decay = match &decay_exact {
        Some(d) => d.to_f64(),
        None => group[0].decay,
    };
    let mut contributors: Vec<(usize, u64)> = group.iter().map(|e| (e.j, e.k)).collect();
    contributors.sort_unstable();
    Resonance {
        lambda: C64::new(0.0, -decay),
        decay,
        decay_exact,
        multiplicity: group.iter().map(|e| e.multiplicity).sum(),
        contributors,
    }
}

fn merge(mut entries: Vec<Entry>) -> Vec<Resonance> {
    let mut out = Vec::new();
    if entries.iter().all(|e| e.decay_exact.is_some()) {
        let mut groups: BTreeMap<Surd, Vec<Entry>> = BTreeMap::new();
        for e in entries {
            groups.entry(e.decay_exact.clone().expect("exact")).or_default().push(e);
        }
        for (key, group) in groups {
            out.push(finish(group, Some(key)));
        }
    } else {
        entries.sort_by(|x, y| x.decay.total_cmp(&y.decay).then(x.j.cmp(&y.j)).then(x.k.cmp(&y.k)));
        let mut group: Vec<Entry> = Vec::new();
        for e in entries {
            if let Some(first) = group.first() {
                if e.decay - first.decay > MERGE_TOL {
                    out.push(finish(std::mem::take(&mut group), None));
                }
            }
            group.push(e);
        }
        if !group.is_empty() {
            out.push(finish(group, None));
        }
    }
    out.sort_by(|x, y| {
        x.decay
            .total_cmp(&y.decay)
            .then_with(|| x.contributors.cmp(&y.contributors))
    });
    out
}

pub fn enumerate_resonances(spec: &SpectrumSpec, k_max: u64, radius: f64) -> Result<ResonanceSet> {
    enumerate_resonances_with(spec, k_max, radius, Execution::default())
}

/// Enumerates λ_{j,k} with k <= k_max and |λ| <= radius, excluding modes
/// with s in 1/2 + Z, and merges coincident positions.
pub fn enumerate_resonances_with(
    spec: &SpectrumSpec,
    k_max: u64,
    radius: f64,
    exec: Execution,
) -> Result<ResonanceSet> {
    if !(radius >= 0.0) || radius.is_nan() {
        return Err(Error::InvalidArgument(format!("radius must be >= 0 (got {radius})")));
    }
    let n = spec.dimension;
    let radius_exact = Rational::from_float(radius);
    let outcomes = exec.try_map(&spec.modes, |m| mode_entries(n, m, k_max, radius, &radius_exact))?;
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    let mut s_min: Option<f64> = None;
    for o in outcomes {
        match o {
            ModeOutcome::Excluded(j) => excluded.push(j),
            ModeOutcome::Entries(es, s) => {
                s_min = Some(s_min.map_or(s, |m| m.min(s)));
                entries.extend(es);
            }
        }
    }
    excluded.sort_unstable();
    let s_last = spec
        .modes
        .iter()
        .map(|m| s_param(n, m).0)
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))));
    Ok(ResonanceSet {
        dimension: n,
        resonances: merge(entries),
        truncation: Truncation {
            j_max: spec.j_max(),
            k_max,
            radius,
            s_min,
            s_last,
        },
        excluded_modes: excluded,
    })
}

/// Multiplicity-weighted count of resonances with |λ| <= bound.
pub fn weyl_count(rs: &ResonanceSet, bound: f64) -> Result<u64> {
    if !rs.truncation.is_complete_to(bound) {
        return Err(Error::TruncationInsufficient {
            bound,
            certified: rs.truncation.certified_bound(),
        });
    }
    Ok(rs
        .resonances
        .iter()
        .take_while(|r| r.decay <= bound)
        .map(|r| r.multiplicity)
        .sum())
}

/// |B_n| Vol(Y) λ^{n+1} / ((2π)^n (n+1)), |B_n| = π^{n/2}/Γ(n/2 + 1).
pub fn weyl_leading_term(n: u32, vol_y: f64, lambda: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidDimension(n as i64));
    }
    if !(vol_y > 0.0) {
        return Err(Error::InvalidArgument(format!("volume must be positive (got {vol_y})")));
    }
    let nf = n as f64;
    let ball = std::f64::consts::PI.powf(nf / 2.0) / specfun::gamma(C64::new(nf / 2.0 + 1.0, 0.0))?.re;
    Ok(ball * vol_y * lambda.powi(n as i32 + 1) / ((2.0 * std::f64::consts::PI).powi(n as i32) * (nf + 1.0)))
}

/// Candidate positions -i(1/2 + k + s) for k <= k_max, as exact λ when s is
/// exact. These are where Γ(b) has poles; whether each is a resonance is
/// decided by [`classify_pole`].
pub fn candidates(n: u32, mode: &Mode, k_max: u64) -> Vec<SpectralParam> {
    let (s, s_exact) = s_param(n, mode);
    (0..=k_max)
        .map(|k| {
            let offset = rational(1, 2) + Rational::from_integer(k.into());
            match &s_exact {
                Some(se) => SpectralParam::imaginary(se.add_rational(&offset).neg()),
                None => SpectralParam::new(C64::new(0.0, -(0.5 + k as f64 + s))),
            }
        })
        .collect()
}

/// Poles of Γ(a) at λ = -i(1/2 + m), m = 0..=m_max.
pub fn a_poles(m_max: u64) -> Vec<SpectralParam> {
    (0..=m_max)
        .map(|m| SpectralParam::imaginary_rational(-(rational(1, 2) + Rational::from_integer(m.into()))))
        .collect()
}

/// -Im λ of an exact λ = i·t, as a rational, when rational.
pub fn exact_decay(lambda: &SpectralParam) -> Option<Rational> {
    lambda.im_exact.as_ref().and_then(|t| t.as_rational()).map(|t| -t)
}
