use std::io::Write;

use hypercone::crosssec::{
    circle_spectrum, circle_spectrum_exact, load_spectrum_file, sphere_spectrum, Mode, SpectrumSpec,
};
use hypercone::exact::{self, format_rational, parse_rational, Rational};
use hypercone::resonance::{
    classify_pole, enumerate_resonances, hypergeom_params, weyl_count, weyl_leading_term, ResonanceSet, SpectralParam,
};
use hypercone::verify::{self, Suite};
use hypercone::{Error, Execution, C64};
use serde_json::{json, Value};

use crate::output::{complex, float, opt, write_csv, write_json};
use crate::{ClassifyArgs, Failure, Format, ResonanceArgs, SourceArgs, SpectrumArgs, VerifyArgs, WeylArgs};

fn invalid(message: impl Into<String>) -> Failure {
    Failure::new(2, "invalid_argument", message)
}

enum Radius {
    Exact(Rational),
    Float(f64),
}

fn parse_radius(text: &str) -> Result<Radius, Failure> {
    if let Some(q) = parse_rational(text) {
        return Ok(Radius::Exact(q));
    }
    text.trim().parse::<f64>().map(Radius::Float).map_err(|_| {
        invalid(format!(
            "--circle expects a radius such as 2, 1/3 or 0.5 (got {text:?})"
        ))
    })
}

/// Smallest j_max with 1/2 + s_{j_max} > bound, given s_j = j·slope + offset.
fn auto_jmax(bound: f64, slope: f64, offset: f64) -> usize {
    let j = ((bound - 0.5 - offset) / slope).floor() + 1.0;
    if j > 0.0 {
        j as usize
    } else {
        0
    }
}

/// Smallest k_max with 1/2 + k_max > bound (s_min >= 0).
fn auto_kmax(bound: f64) -> u64 {
    let k = (bound - 0.5).floor() + 1.0;
    if k > 0.0 {
        k as u64
    } else {
        0
    }
}

/// Builds the spectrum named by the source flags. `bound` picks j_max when
/// --jmax is absent.
fn resolve_spectrum(src: &SourceArgs, bound: Option<f64>) -> Result<SpectrumSpec, Failure> {
    let need_jmax = |auto: Option<usize>| {
        src.jmax
            .or(auto)
            .ok_or_else(|| invalid("--jmax is required for built-in spectra"))
    };
    if let Some(n) = src.sphere {
        if n < 1 || n > u32::MAX as i64 {
            return Err(Error::InvalidDimension(n).into());
        }
        let j_max = need_jmax(bound.map(|b| auto_jmax(b, 1.0, (n as f64 - 1.0) / 2.0)))?;
        return Ok(sphere_spectrum(n as u32, j_max)?);
    }
    if let Some(text) = &src.circle {
        let radius = parse_radius(text)?;
        let rho_f = match &radius {
            Radius::Exact(q) => exact::to_f64(q),
            Radius::Float(x) => *x,
        };
        if !(rho_f > 0.0) || !rho_f.is_finite() {
            return Err(Error::InvalidRadius(rho_f).into());
        }
        let j_max = need_jmax(bound.map(|b| auto_jmax(b, 1.0 / rho_f, 0.0)))?;
        return Ok(match radius {
            Radius::Exact(rho) => circle_spectrum_exact(&rho, j_max)?,
            Radius::Float(rho) => circle_spectrum(rho, j_max)?,
        });
    }
    let path = src.file.as_ref().expect("clap enforces one source");
    if src.jmax.is_some() {
        return Err(invalid("--jmax applies to --sphere and --circle only"));
    }
    Ok(load_spectrum_file(path)?)
}

pub fn spectrum(args: &SpectrumArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = resolve_spectrum(&args.source, None)?;
    match args.format {
        Format::Json => write_json(out, &spec.to_json_value()),
        Format::Csv => {
            let rows: Vec<Vec<String>> = spec
                .modes
                .iter()
                .map(|m| {
                    vec![
                        m.label.to_string(),
                        float(m.mu_sq),
                        opt(m.mu_sq_exact.as_ref().map(format_rational)),
                        m.multiplicity.to_string(),
                    ]
                })
                .collect();
            write_csv(out, &["j", "mu_sq", "mu_sq_exact", "multiplicity"], &rows)
        }
    }
}

fn check_bound(name: &str, value: f64) -> Result<(), Failure> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(invalid(format!("{name} must be a finite number >= 0 (got {value})")));
    }
    Ok(())
}

fn exclusion_note(spec: &SpectrumSpec, rs: &ResonanceSet) -> Option<String> {
    if rs.excluded_modes.is_empty() {
        None
    } else if rs.excluded_modes.len() == spec.modes.len() {
        Some("non-generic: all modes excluded".into())
    } else {
        Some(format!(
            "non-generic: {} of {} modes excluded (s in 1/2 + Z)",
            rs.excluded_modes.len(),
            spec.modes.len()
        ))
    }
}

fn truncation_json(rs: &ResonanceSet, bound: f64) -> Value {
    let t = &rs.truncation;
    json!({
        "j_max": t.j_max,
        "k_max": t.k_max,
        "radius": t.radius,
        "certified_bound": t.certified_bound(),
        "complete": t.is_complete_to(bound),
    })
}

pub fn resonances(args: &ResonanceArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let bound = args.lambda_max;
    check_bound("--lambda-max", bound)?;
    let spec = resolve_spectrum(&args.source, Some(bound))?;
    let rs = enumerate_resonances(&spec, args.kmax.unwrap_or_else(|| auto_kmax(bound)), bound)?;
    let complete = rs.truncation.is_complete_to(bound);
    if !complete && !args.allow_partial {
        return Err(Error::TruncationInsufficient {
            bound,
            certified: rs.truncation.certified_bound(),
        }
        .into());
    }
    let mut notes: Vec<String> = exclusion_note(&spec, &rs).into_iter().collect();
    if !complete {
        notes.push(format!(
            "partial: complete only below {}",
            float(rs.truncation.certified_bound())
        ));
    }
    let exact_text = |r: &hypercone::resonance::Resonance| r.decay_exact.as_ref().map(|d| d.neg().to_string());
    match args.format {
        Format::Json => {
            let rows: Vec<Value> = rs
                .resonances
                .iter()
                .map(|r| {
                    json!({
                        "im_lambda": -r.decay,
                        "im_lambda_exact": exact_text(r),
                        "multiplicity": r.multiplicity,
                        "contributors": r.contributors.iter().map(|&(j, k)| json!([j, k])).collect::<Vec<_>>(),
                        "exact": r.is_exact(),
                    })
                })
                .collect();
            let value = json!({
                "dimension": rs.dimension,
                "truncation": truncation_json(&rs, bound),
                "excluded_modes": rs.excluded_modes,
                "notes": notes,
                "resonances": rows,
            });
            write_json(out, &value)
        }
        Format::Csv => {
            let t = &rs.truncation;
            let mut rows = vec![vec![
                "truncation".to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                opt(t.j_max),
                t.k_max.to_string(),
                float(t.radius),
                float(t.certified_bound()),
                notes.join("; "),
            ]];
            for r in &rs.resonances {
                let contributors: Vec<String> = r.contributors.iter().map(|(j, k)| format!("({j},{k})")).collect();
                rows.push(vec![
                    "resonance".into(),
                    float(-r.decay),
                    opt(exact_text(r)),
                    r.multiplicity.to_string(),
                    contributors.join(";"),
                    r.is_exact().to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
            write_csv(
                out,
                &[
                    "record",
                    "im_lambda",
                    "im_lambda_exact",
                    "multiplicity",
                    "contributors",
                    "exact",
                    "j_max",
                    "k_max",
                    "radius",
                    "certified_bound",
                    "note",
                ],
                &rows,
            )
        }
    }
}

pub fn classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if args.n < 1 {
        return Err(Error::InvalidDimension(args.n as i64).into());
    }
    let mode = match (&args.mu_sq_exact, args.mu_sq) {
        (Some(text), _) => {
            let q = parse_rational(text).ok_or_else(|| invalid(format!("--mu-sq-exact expects p/q (got {text:?})")))?;
            Mode::exact(q, 1, 0)?
        }
        (None, Some(v)) => Mode::new(v, 1, 0)?,
        (None, None) => unreachable!("clap requires one of --mu-sq, --mu-sq-exact"),
    };
    if !args.lambda_re.is_finite() {
        return Err(invalid("--lambda-re must be finite"));
    }
    let lambda = match parse_rational(&args.lambda_im) {
        Some(t) if args.lambda_re == 0.0 => SpectralParam::imaginary_rational(t),
        _ => {
            let t: f64 = args
                .lambda_im
                .trim()
                .parse()
                .ok()
                .filter(|t: &f64| t.is_finite())
                .ok_or_else(|| {
                    invalid(format!(
                        "--lambda-im expects a number or p/q (got {:?})",
                        args.lambda_im
                    ))
                })?;
            SpectralParam::new(C64::new(args.lambda_re, t))
        }
    };
    let p = hypergeom_params(args.n, &mode, &lambda);
    let class = classify_pole(&p)?;
    let text = |s: &Option<hypercone::exact::Surd>| s.as_ref().map(|v| v.to_string());
    match args.format {
        Format::Json => write_json(
            out,
            &json!({
                "n": args.n,
                "mu_sq": mode.mu_sq,
                "mu_sq_exact": mode.mu_sq_exact.as_ref().map(format_rational),
                "lambda": complex(lambda.value),
                "lambda_im_exact": text(&lambda.im_exact),
                "a": complex(p.a),
                "b": complex(p.b),
                "c": complex(p.c),
                "s": p.s,
                "a_exact": text(&p.a_exact),
                "b_exact": text(&p.b_exact),
                "c_exact": text(&p.c_exact),
                "s_exact": text(&p.s_exact),
                "case": class.case.as_str(),
                "verdict": class.verdict.as_str(),
            }),
        ),
        Format::Csv => {
            let mut row = vec![
                args.n.to_string(),
                float(mode.mu_sq),
                float(lambda.value.re),
                float(lambda.value.im),
            ];
            for (z, e) in [(p.a, &p.a_exact), (p.b, &p.b_exact), (p.c, &p.c_exact)] {
                row.extend([float(z.re), float(z.im), opt(text(e))]);
            }
            row.extend([
                float(p.s),
                opt(text(&p.s_exact)),
                class.case.as_str().into(),
                class.verdict.as_str().into(),
            ]);
            write_csv(
                out,
                &[
                    "n",
                    "mu_sq",
                    "lambda_re",
                    "lambda_im",
                    "a_re",
                    "a_im",
                    "a_exact",
                    "b_re",
                    "b_im",
                    "b_exact",
                    "c_re",
                    "c_im",
                    "c_exact",
                    "s",
                    "s_exact",
                    "case",
                    "verdict",
                ],
                &[row],
            )
        }
    }
}

pub fn weyl(args: &WeylArgs, out: &mut dyn Write) -> Result<(), Failure> {
    for &l in &args.lambda_grid {
        if !(l > 0.0) || !l.is_finite() {
            return Err(invalid(format!(
                "--lambda-grid values must be finite and > 0 (got {l})"
            )));
        }
    }
    let bound = args.lambda_grid.iter().cloned().fold(0.0, f64::max);
    let spec = resolve_spectrum(&args.source, Some(bound))?;
    let vol = spec
        .volume
        .ok_or_else(|| Failure::new(2, "validation_error", "the Weyl term needs the cross-section volume"))?;
    let rs = enumerate_resonances(&spec, args.kmax.unwrap_or_else(|| auto_kmax(bound)), bound)?;
    if !rs.excluded_modes.is_empty() && !args.allow_partial {
        let shown: Vec<String> = rs.excluded_modes.iter().take(8).map(|j| j.to_string()).collect();
        let more = if rs.excluded_modes.len() > 8 { ",..." } else { "" };
        return Err(Failure::new(
            5,
            "non_generic",
            format!(
                "non-generic spectrum: modes [{}{more}] have s in 1/2 + Z",
                shown.join(",")
            ),
        ));
    }
    let series = args
        .lambda_grid
        .iter()
        .map(|&l| {
            let count = weyl_count(&rs, l)?;
            let lead = weyl_leading_term(spec.dimension, vol, l)?;
            Ok((l, count, lead, count as f64 / lead))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    match args.format {
        Format::Json => {
            let rows: Vec<Value> = series
                .iter()
                .map(|&(l, count, lead, ratio)| json!({ "lambda": l, "count": count, "leading_term": lead, "ratio": ratio }))
                .collect();
            let mut notes: Vec<String> = exclusion_note(&spec, &rs).into_iter().collect();
            notes.retain(|_| args.allow_partial);
            write_json(
                out,
                &json!({
                    "dimension": spec.dimension,
                    "volume": vol,
                    "truncation": truncation_json(&rs, bound),
                    "excluded_modes": rs.excluded_modes,
                    "notes": notes,
                    "series": rows,
                }),
            )
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = series
                .iter()
                .map(|&(l, count, lead, ratio)| vec![float(l), count.to_string(), float(lead), float(ratio)])
                .collect();
            write_csv(out, &["lambda", "count", "leading_term", "ratio"], &rows)
        }
    }
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse().map_err(Failure::from)?;
    let reports = verify::run(suite, args.seed, Execution::default())?;
    let io = crate::output::io_failure;
    match args.format {
        None => {
            for report in &reports {
                for c in &report.checks {
                    let detail = if c.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", c.detail)
                    };
                    writeln!(
                        out,
                        "{} {}: {} measured={} tol={}{detail}",
                        if c.passed { "PASS" } else { "FAIL" },
                        report.suite,
                        c.name,
                        float(c.measured),
                        float(c.tolerance)
                    )
                    .map_err(io)?;
                }
                let worst = report.checks.iter().map(|c| c.measured).fold(0.0, f64::max);
                writeln!(
                    out,
                    "{}: {}/{} passed, max measured {}",
                    report.suite,
                    report.passed(),
                    report.checks.len(),
                    float(worst)
                )
                .map_err(io)?;
            }
        }
        Some(Format::Json) => {
            let suites: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite.as_str(),
                        "passed": r.passed(),
                        "total": r.checks.len(),
                        "checks": r.checks.iter().map(|c| json!({
                            "name": c.name,
                            "passed": c.passed,
                            "measured": c.measured,
                            "tolerance": c.tolerance,
                            "detail": c.detail,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            write_json(
                out,
                &json!({ "seed": args.seed, "all_passed": reports.iter().all(|r| r.all_passed()), "suites": suites }),
            )?;
        }
        Some(Format::Csv) => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .flat_map(|r| {
                    r.checks.iter().map(move |c| {
                        vec![
                            r.suite.as_str().to_string(),
                            c.name.clone(),
                            c.passed.to_string(),
                            float(c.measured),
                            float(c.tolerance),
                            c.detail.clone(),
                        ]
                    })
                })
                .collect();
            write_csv(
                out,
                &["suite", "check", "passed", "measured", "tolerance", "detail"],
                &rows,
            )?;
        }
    }
    let failed: usize = reports.iter().map(|r| r.checks.len() - r.passed()).sum();
    if failed > 0 {
        return Err(Failure::new(
            1,
            "verification_failed",
            format!("{failed} check(s) failed"),
        ));
    }
    Ok(())
}
