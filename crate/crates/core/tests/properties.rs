use hypercone::crosssec::{
    circle_spectrum, circle_spectrum_exact, load_spectrum, sphere_spectrum, Mode, SpectrumSource, SpectrumSpec,
};
use hypercone::exact::{rational, rational_int, Rational, Surd};
use hypercone::quadrature::QuadratureControl;
use hypercone::resolvent::{apply_resolvent, indicial_roots, r_of_sigma, sigma_of_r, RadialProfile};
use hypercone::resonance::{
    candidates, classify_pole, enumerate_resonances, enumerate_resonances_with, hypergeom_params, s_param,
    SpectralParam, Verdict,
};
use hypercone::specfun::{gamma, hyp2f1, recip_gamma, SeriesControl};
use hypercone::{Execution, C64};
use proptest::prelude::*;

fn pole_free() -> impl Strategy<Value = C64> {
    (-20.0..20.0f64, -20.0..20.0f64)
        .prop_filter("near a pole", |&(x, y)| {
            let z = C64::new(x, y);
            z.norm() <= 20.0 && !(x <= 0.1 && y.abs() < 0.1 && (x - x.round()).abs() < 0.1)
        })
        .prop_map(|(x, y)| C64::new(x, y))
}

fn hyp_params() -> impl Strategy<Value = (C64, C64, C64)> {
    (
        0.1..2.0f64,
        -1.0..1.0f64,
        0.1..2.0f64,
        -1.0..1.0f64,
        0.5..3.0f64,
        -1.0..1.0f64,
    )
        .prop_map(|(ar, ai, br, bi, cr, ci)| (C64::new(ar, ai), C64::new(br, bi), C64::new(ar + br + cr, ci)))
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recurrence(z in pole_free()) {
        let g1 = gamma(z + 1.0).unwrap();
        prop_assert!((g1 - z * gamma(z).unwrap()).norm() <= 1e-12 * g1.norm());
    }

    #[test]
    fn gamma_reflection(z in pole_free()) {
        prop_assume!((1.0 - z).re > 0.1 || (1.0 - z).im.abs() >= 0.1 || ((1.0 - z).re - (1.0 - z).re.round()).abs() >= 0.1);
        let prod = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * hypercone::specfun::sin_pi(z) / std::f64::consts::PI;
        prop_assert!((prod - 1.0).norm() <= 1e-10, "z={} prod={}", z, prod);
    }

    #[test]
    fn recip_gamma_inverts_gamma(z in pole_free()) {
        prop_assert!((recip_gamma(z) * gamma(z).unwrap() - 1.0).norm() <= 1e-12);
    }

    #[test]
    fn euler_transform((a, b, c) in hyp_params(), zi in 1..10u32) {
        let z = zi as f64 / 10.0;
        let ctl = SeriesControl::default();
        let lhs = hyp2f1(a, b, c, z, &ctl).unwrap();
        let rhs = hyp2f1(c - a, c - b, c, z, &ctl).unwrap() * C64::new(1.0 - z, 0.0).powc(c - a - b);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gauss_contiguity((a, b, c) in hyp_params(), zi in 1..10u32) {
        let z = zi as f64 / 10.0;
        let ctl = SeriesControl::default();
        let f = hyp2f1(a, b, c, z, &ctl).unwrap();
        let lhs = c * (1.0 - z) * f - c * hyp2f1(a - 1.0, b, c, z, &ctl).unwrap()
            + (c - b) * z * hyp2f1(a, b, c + 1.0, z, &ctl).unwrap();
        prop_assert!(lhs.norm() <= 1e-9 * (c * f).norm().max(1.0));
    }

    #[test]
    fn sigma_coordinate_round_trip(r in 0.0..30.0f64) {
        let x = sigma_of_r(r).unwrap();
        prop_assert!(x > 0.0 && x <= 1.0);
        prop_assert!((r_of_sigma(x).unwrap() - r).abs() <= 1e-9 * (1.0 + r));
    }

    #[test]
    fn sphere_multiplicity_partial_sums(n in 2..=4u32, big_j in 0..=10u64) {
        let spec = sphere_spectrum(n, big_j as usize).unwrap();
        let total: u64 = spec.modes.iter().map(|m| m.multiplicity).sum();
        let want = binom(n as u64 + big_j, n as u64) + if big_j >= 1 { binom(n as u64 + big_j - 1, n as u64) } else { 0 };
        prop_assert_eq!(total, want);
    }

    #[test]
    fn circle_eigenvalue_count(rho in 0.1..5.0f64, big_m in 0.0..20.0f64) {
        let j_max = (rho * big_m).ceil() as usize + 2;
        let spec = circle_spectrum(rho, j_max).unwrap();
        let count: u64 = spec.modes.iter().filter(|m| m.mu_sq.sqrt() <= big_m).map(|m| m.multiplicity).sum();
        let expect = 2.0 * rho * big_m;
        prop_assert!((count as f64) >= expect - 2.0 && (count as f64) <= expect + 2.0);
    }

    #[test]
    fn spectrum_json_round_trip(
        n in 1..5u32,
        modes in prop::collection::btree_map(0i64..200, 1..10u64, 1..12),
        denom in 1i64..7,
        vol in prop::option::of(0.1..50.0f64),
    ) {
        let spec = SpectrumSpec {
            dimension: n,
            modes: modes
                .iter()
                .enumerate()
                .map(|(i, (&p, &m))| Mode::exact(rational(p, denom), m, i).unwrap())
                .collect(),
            volume: vol,
            source: SpectrumSource::File,
        };
        // Equal rationals after reduction merge on load; start from the loaded form.
        let once = load_spectrum(spec.to_json_string().as_bytes()).unwrap();
        let twice = load_spectrum(once.to_json_string().as_bytes()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.total_multiplicity(), spec.total_multiplicity());
    }

    #[test]
    fn float_spectrum_round_trip(values in prop::collection::vec((0.0..1e3f64, 1..5u64), 1..10)) {
        let mut sorted = values.clone();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        sorted.dedup_by(|x, y| x.0 == y.0);
        let spec = SpectrumSpec {
            dimension: 2,
            modes: sorted.iter().enumerate().map(|(i, &(v, m))| Mode::new(v, m, i).unwrap()).collect(),
            volume: None,
            source: SpectrumSource::File,
        };
        prop_assert_eq!(load_spectrum(spec.to_json_string().as_bytes()).unwrap(), spec);
    }

    #[test]
    fn merging_ignores_mode_order(
        p in 1i64..5,
        q in 1i64..5,
        seed in any::<u64>(),
    ) {
        let spec = circle_spectrum_exact(&rational(p, q), 12).unwrap();
        let mut shuffled = spec.clone();
        // Fisher-Yates with a splitmix-style stream.
        let mut state = seed;
        for i in (1..shuffled.modes.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.modes.swap(i, j);
        }
        let a = enumerate_resonances(&spec, 12, 6.0).unwrap();
        let b = enumerate_resonances(&shuffled, 12, 6.0).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn round_sphere_s_values_are_exact() {
    for n in 1..=6u32 {
        let spec = sphere_spectrum(n, 20).unwrap();
        for m in &spec.modes {
            let want = rational_int(m.label as i64) + rational(n as i64 - 1, 2);
            assert_eq!(s_param(n, m).1, Some(Surd::from_rational(want)), "n={n} j={}", m.label);
        }
    }
}

fn test_spectra() -> Vec<SpectrumSpec> {
    let mut out: Vec<SpectrumSpec> = [rational_int(1), rational_int(2), rational(1, 3)]
        .iter()
        .map(|rho| circle_spectrum_exact(rho, 8).unwrap())
        .collect();
    out.extend((2..=5).map(|n| sphere_spectrum(n, 8).unwrap()));
    out
}

#[test]
fn emitted_resonances_satisfy_the_lower_half_plane_bound() {
    for spec in test_spectra() {
        let rs = enumerate_resonances(&spec, 8, 40.0).unwrap();
        let quarter_n_sq = rational(spec.dimension as i64 * spec.dimension as i64, 4);
        for r in &rs.resonances {
            let d = r
                .decay_exact
                .as_ref()
                .and_then(Surd::as_rational)
                .expect("rational path");
            // λ = -i d, so λ² + n²/4 = n²/4 - d².
            assert!(&quarter_n_sq - d * d <= Rational::from_integer(0.into()));
            assert_eq!(r.lambda.re, 0.0);
        }
    }
}

#[test]
fn classification_agrees_with_enumeration() {
    for spec in test_spectra() {
        let n = spec.dimension;
        let rs = enumerate_resonances(&spec, 8, 1e3).unwrap();
        for mode in &spec.modes {
            let excluded = rs.excluded_modes.contains(&mode.label);
            for (k, lambda) in candidates(n, mode, 8).into_iter().enumerate() {
                let class = classify_pole(&hypergeom_params(n, mode, &lambda)).unwrap();
                if excluded {
                    assert!(
                        matches!(class.verdict, Verdict::Removable | Verdict::Regular),
                        "n={n} j={} k={k}: {:?}",
                        mode.label,
                        class
                    );
                } else {
                    assert_eq!(class.verdict, Verdict::GenuinePole, "n={n} j={} k={k}", mode.label);
                    let owner = rs
                        .resonances
                        .iter()
                        .find(|r| r.contributors.contains(&(mode.label, k as u64)))
                        .expect("emitted");
                    assert!((owner.decay + lambda.value.im).abs() < 1e-12);
                }
            }
        }
        // Every entry is the sum of its contributors.
        for r in &rs.resonances {
            let total: u64 = r.contributors.iter().map(|&(j, _)| spec.modes[j].multiplicity).sum();
            assert_eq!(total, r.multiplicity);
            for &(j, k) in &r.contributors {
                let s = s_param(n, &spec.modes[j]).0;
                assert!((0.5 + k as f64 + s - r.decay).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn circle_resonances_scale_with_radius() {
    // For ρ = p/q every contributor (j, k) of the ρ-circle sits at ½ + k + j/ρ,
    // and the ρ = 1 lattice maps onto it under j ↦ j/ρ.
    let unit = enumerate_resonances(&circle_spectrum_exact(&rational_int(1), 30).unwrap(), 30, 40.0).unwrap();
    for (p, q) in [(1, 3), (3, 1), (2, 5), (5, 2)] {
        let rho = rational(p, q);
        let rs = enumerate_resonances(&circle_spectrum_exact(&rho, 30).unwrap(), 30, 12.0).unwrap();
        let mut seen = 0u64;
        for r in &rs.resonances {
            let d = r.decay_exact.as_ref().and_then(Surd::as_rational).unwrap().clone();
            for &(j, k) in &r.contributors {
                assert_eq!(
                    rational(1, 2) + rational_int(k as i64) + rational_int(j as i64) / &rho,
                    d
                );
                seen += if j == 0 { 1 } else { 2 };
            }
        }
        assert_eq!(seen, rs.total_multiplicity());
        // Mapping the unit lattice: (j, k) of the unit circle with ½ + k + j/ρ <= 12.
        let mut mapped = 0u64;
        for r in &unit.resonances {
            for &(j, k) in &r.contributors {
                let excluded = {
                    let twice = rational_int(2 * j as i64) / &rho;
                    twice.is_integer() && twice.to_integer() % 2 == num::BigInt::from(1)
                };
                if !excluded
                    && rational(1, 2) + rational_int(k as i64) + rational_int(j as i64) / &rho <= rational_int(12)
                {
                    mapped += if j == 0 { 1 } else { 2 };
                }
            }
        }
        assert_eq!(mapped, rs.total_multiplicity(), "rho={p}/{q}");
    }
}

#[test]
fn sequential_and_parallel_enumeration_agree() {
    for spec in test_spectra() {
        let a = enumerate_resonances_with(&spec, 8, 30.0, Execution::Sequential).unwrap();
        let b = enumerate_resonances_with(&spec, 8, 30.0, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
    let spec = circle_spectrum(std::f64::consts::E, 40).unwrap();
    assert_eq!(
        enumerate_resonances_with(&spec, 20, 15.0, Execution::Sequential).unwrap(),
        enumerate_resonances_with(&spec, 20, 15.0, Execution::Parallel).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn resolvent_is_linear(
        n in 1..=3u32,
        mu_sq in 0.0..6.0f64,
        re in -1.5..1.5f64,
        im in 0.2..3.0f64,
        alpha_re in -2.0..2.0f64,
        alpha_im in -2.0..2.0f64,
        sigma in 0.1..0.9f64,
    ) {
        let mode = Mode::new(mu_sq, 1, 0).unwrap();
        let lambda = SpectralParam::new(C64::new(re, im));
        let f = RadialProfile::bump(0.3, 0.6).unwrap();
        let g = RadialProfile::bump(0.45, 0.8).unwrap();
        let alpha = C64::new(alpha_re, alpha_im);
        let qc = QuadratureControl::new(1e-13, 1e-13, 400).unwrap();
        let rf = apply_resolvent(n, &mode, &lambda, &f, sigma, &qc).unwrap();
        let rg = apply_resolvent(n, &mode, &lambda, &g, sigma, &qc).unwrap();
        let combined = apply_resolvent(n, &mode, &lambda, &f.combine(alpha, &g), sigma, &qc).unwrap();
        let want = rf + alpha * rg;
        prop_assert!((combined - want).norm() <= 1e-9 * (rf.norm() + (alpha * rg).norm()).max(1e-300));
    }
}

#[test]
fn boundary_behavior_matches_indicial_exponents() {
    let f = RadialProfile::bump(0.3, 0.6).unwrap();
    let qc = QuadratureControl::new(1e-14, 1e-14, 400).unwrap();
    let lambda = SpectralParam::imaginary_rational(rational_int(3));
    for (n, mu_sq) in [(1u32, 0i64), (1, 1), (2, 2), (3, 8)] {
        let mode = Mode::exact(rational_int(mu_sq), 1, 0).unwrap();
        let ind = indicial_roots(n, &mode, &lambda);
        let alpha = ind.selected_alpha.re;
        let beta = ind.selected_beta.re;
        // Near σ = 0: u / σ^α stays bounded (and in fact tends to a constant).
        let near_zero: Vec<f64> = [0.05, 0.02, 0.01, 0.005, 0.001]
            .iter()
            .map(|&x| apply_resolvent(n, &mode, &lambda, &f, x, &qc).unwrap().norm() / x.powf(alpha))
            .collect();
        let c0 = near_zero[0];
        assert!(
            near_zero.iter().all(|&r| r.is_finite() && r <= 2.0 * c0),
            "n={n} mu²={mu_sq}: {near_zero:?}"
        );
        // Near σ = 1: u / ((1-σ)^β (1 + |log(1-σ)|)) stays bounded.
        let near_one: Vec<f64> = [0.95, 0.98, 0.99, 0.995, 0.999]
            .iter()
            .map(|&x| {
                let t: f64 = 1.0 - x;
                apply_resolvent(n, &mode, &lambda, &f, x, &qc).unwrap().norm() / (t.powf(beta) * (1.0 + t.ln().abs()))
            })
            .collect();
        let c1 = near_one[0];
        assert!(
            near_one.iter().all(|&r| r.is_finite() && r <= 2.0 * c1),
            "n={n} mu²={mu_sq}: {near_one:?}"
        );
    }
}
