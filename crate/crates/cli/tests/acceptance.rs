//! Acceptance suite: ten executable criteria covering the error
//! representation, the certificates, the optimiser, composite grids, the
//! comparison rules, the expression pipeline and output determinism.
//!
//! Each criterion runs at its stated tolerance and prints one PASS line
//! (run with `--nocapture` to see them).

use std::f64::consts::{E, FRAC_PI_2, PI};
use std::process::Command;
use std::time::Instant;

use ostrocube::{
    barnett_dragomir_value, cubature_value, error_bound, identity_residual, integrate_1d,
    integrate_composite, optimal_params, ostrowski_1d, reference_integral, BivariateFn, KernelSpec,
    ParamMode, ParamSet, QuadConfig, Rectangle,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// corpus: smooth functions with analytic mixed partials and per-rectangle
// certified sup-norms (upper bounds of sup |d²f/dtds|, exact or safely
// over-estimated on the rectangles used here)
// ---------------------------------------------------------------------------

fn tmax(r: &Rectangle) -> f64 {
    r.a().abs().max(r.b().abs())
}

fn smax(r: &Rectangle) -> f64 {
    r.c().abs().max(r.d().abs())
}

/// Largest |sin| over `[lo, hi]`.
fn max_abs_sin(lo: f64, hi: f64) -> f64 {
    let k = ((lo - FRAC_PI_2) / PI).ceil();
    if FRAC_PI_2 + k * PI <= hi {
        1.0
    } else {
        lo.sin().abs().max(hi.sin().abs())
    }
}

type SupRule = fn(&Rectangle) -> f64;

fn corpus() -> Vec<(BivariateFn, SupRule)> {
    vec![
        (
            BivariateFn::new("t*s", |t, s| t * s).with_mixed_partial(|_, _| 1.0),
            |_| 1.0,
        ),
        (
            BivariateFn::new("t^2*s^2", |t, s| t * t * s * s)
                .with_mixed_partial(|t, s| 4.0 * t * s),
            |r| 4.0 * tmax(r) * smax(r),
        ),
        (
            BivariateFn::new("sin(pi t) sin(pi s)", |t, s| {
                (PI * t).sin() * (PI * s).sin()
            })
            .with_mixed_partial(|t, s| PI * PI * (PI * t).cos() * (PI * s).cos()),
            |_| PI * PI,
        ),
        (
            BivariateFn::new("e^{t+s}", |t, s| (t + s).exp())
                .with_mixed_partial(|t, s| (t + s).exp()),
            |r| (r.b() + r.d()).exp(),
        ),
        (
            BivariateFn::new("sin(pi t) e^s", |t, s| (PI * t).sin() * s.exp())
                .with_mixed_partial(|t, s| PI * (PI * t).cos() * s.exp()),
            |r| PI * r.d().exp(),
        ),
        (
            BivariateFn::new("t^3*s^3", |t, s| t.powi(3) * s.powi(3))
                .with_mixed_partial(|t, s| 9.0 * t * t * s * s),
            |r| 9.0 * tmax(r).powi(2) * smax(r).powi(2),
        ),
        (
            BivariateFn::new("cos t cos s", |t, s| t.cos() * s.cos())
                .with_mixed_partial(|t, s| t.sin() * s.sin()),
            |r| max_abs_sin(r.a(), r.b()) * max_abs_sin(r.c(), r.d()),
        ),
        (
            BivariateFn::new("t^2*s", |t, s| t * t * s).with_mixed_partial(|t, _| 2.0 * t),
            |r| 2.0 * tmax(r),
        ),
        (
            BivariateFn::new("1/(4+t+s)", |t, s| 1.0 / (4.0 + t + s))
                .with_mixed_partial(|t, s| 2.0 / (4.0 + t + s).powi(3)),
            |r| 2.0 / (4.0 + r.a() + r.c()).powi(3),
        ),
        (
            BivariateFn::new("e^{ts}", |t, s| (t * s).exp())
                .with_mixed_partial(|t, s| (1.0 + t * s) * (t * s).exp()),
            |r| {
                let u = tmax(r) * smax(r);
                (1.0 + u) * u.exp()
            },
        ),
    ]
}

fn rects() -> [Rectangle; 3] {
    [
        Rectangle::unit(),
        Rectangle::new(0.0, 2.0, 0.0, 1.0).unwrap(),
        Rectangle::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
    ]
}

// ---------------------------------------------------------------------------
// 1. identity suite
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_identity_suite() {
    let start = Instant::now();
    let cfg = QuadConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut max_residual = 0.0f64;
    let mut cases = 0usize;
    for rect in rects() {
        for (f, _) in corpus() {
            for _ in 0..20 {
                let theta = ParamSet::sample_valid(&rect, &mut rng);
                let r = identity_residual(&f, &rect, &theta, &cfg).unwrap();
                assert!(
                    r < 1e-8,
                    "{} on {rect} with {theta:?}: residual {r:e}",
                    f.name()
                );
                max_residual = max_residual.max(r);
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(cases, 600);
    assert!(elapsed < 30.0, "identity suite took {elapsed:.1} s");
    println!(
        "ACCEPTANCE  1 identity suite: PASS (600 cases, max residual {max_residual:.3e}, {elapsed:.2} s)"
    );
}

// ---------------------------------------------------------------------------
// 2. bound validity
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_bound_validity() {
    let cfg = QuadConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut cases = 0usize;
    let mut max_ratio = 0.0f64;
    for rect in rects() {
        for (f, m_of) in corpus() {
            let m = m_of(&rect);
            let exact = reference_integral(&f, &rect, 1e-12).unwrap().value;
            for _ in 0..20 {
                let theta = ParamSet::sample_valid(&rect, &mut rng);
                let value = cubature_value(&f, &rect, &theta, &cfg).unwrap().value;
                let bound = error_bound(&rect, &theta, m).unwrap().total;
                let err = (value - exact).abs();
                assert!(
                    err <= bound * (1.0 + 1e-10) + 1e-12,
                    "{} on {rect} with {theta:?}: err {err:e} > bound {bound:e}",
                    f.name()
                );
                if bound > 0.0 {
                    max_ratio = max_ratio.max(err / bound);
                }
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 600);
    println!(
        "ACCEPTANCE  2 bound validity: PASS (600/600 within certificate, max err/bound {max_ratio:.3})"
    );
}

// ---------------------------------------------------------------------------
// 3. classical parameter-choice constants
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_classical_constants() {
    for rect in rects() {
        for m in [1.0, 2.5] {
            let expected = rect.width().powi(2) * rect.height().powi(2) / 16.0 * m;
            let corner = error_bound(&rect, &ParamSet::for_midpoint_rule(&rect), m)
                .unwrap()
                .total;
            let midline = error_bound(&rect, &ParamSet::for_trapezoid_rule(&rect), m)
                .unwrap()
                .total;
            assert!(
                (corner - expected).abs() < 1e-12,
                "{rect}, M={m}: corner choice {corner} vs {expected}"
            );
            assert!(
                (midline - expected).abs() < 1e-12,
                "{rect}, M={m}: midline choice {midline} vs {expected}"
            );
        }
    }
    println!(
        "ACCEPTANCE  3 classical constants: PASS (both classical choices give (1/16) w^2 h^2 M on 3 rectangles)"
    );
}

// ---------------------------------------------------------------------------
// 4. sharpness witness
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_sharpness_witness() {
    let f = BivariateFn::new("|t-1/2||s-1/2|", |t, s| (t - 0.5).abs() * (s - 0.5).abs())
        .with_certified_supnorm(1.0)
        .unwrap();
    let rect = Rectangle::unit();
    let cfg = QuadConfig::default();
    let cv = integrate_composite(&f, &rect, 1, 1, &ParamMode::Midpoint, &cfg).unwrap();
    let oracle = reference_integral(&f, &rect, 1e-12).unwrap().value;
    assert!((oracle - 1.0 / 16.0).abs() < 1e-12, "oracle {oracle}");
    assert!(cv.value.abs() < 1e-15, "rule value {}", cv.value);
    let true_error = (oracle - cv.value).abs();
    assert!(
        (true_error - cv.bound).abs() < 1e-10,
        "true error {true_error} vs bound {}",
        cv.bound
    );
    println!(
        "ACCEPTANCE  4 sharpness witness: PASS (true error {true_error} attains bound {})",
        cv.bound
    );
}

// ---------------------------------------------------------------------------
// 5. optimal parameters by grid search
// ---------------------------------------------------------------------------

/// Brute-force minimiser of the per-axis L1 factor over the admissible grid
/// with step (hi-lo)/200.
fn axis_grid_min(lo: f64, hi: f64) -> (f64, f64, f64) {
    let step = (hi - lo) / 200.0;
    let mid = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=100u32 {
        let alpha = if i == 100 { mid } else { lo + step * i as f64 };
        for j in 0..=100u32 {
            let beta = if j == 100 { hi } else { mid + step * j as f64 };
            let v = KernelSpec::new(lo, hi, alpha, beta).unwrap().l1_norm();
            if v < best.0 {
                best = (v, alpha, beta);
            }
        }
    }
    best
}

#[test]
fn criterion_05_optimal_parameters() {
    let cases = [
        Rectangle::unit(),
        Rectangle::new(0.0, 2.0, 0.0, 2.0).unwrap(),
        Rectangle::new(-1.0, 1.0, 0.0, 1.0).unwrap(),
    ];
    for rect in cases {
        let (min_t, alpha1, beta1) = axis_grid_min(rect.a(), rect.b());
        let (min_s, alpha2, beta2) = axis_grid_min(rect.c(), rect.d());
        let closed = optimal_params(&rect);
        let step_t = rect.width() / 200.0;
        let step_s = rect.height() / 200.0;
        assert!((alpha1 - closed.alpha1).abs() <= step_t + 1e-12);
        assert!((beta1 - closed.beta1).abs() <= step_t + 1e-12);
        assert!((alpha2 - closed.alpha2).abs() <= step_s + 1e-12);
        assert!((beta2 - closed.beta2).abs() <= step_s + 1e-12);

        let expected = rect.width().powi(2) * rect.height().powi(2) / 64.0;
        assert!(
            (min_t * min_s - expected).abs() < 1e-12,
            "{rect}: grid min {} vs {expected}",
            min_t * min_s
        );
        let closed_total = error_bound(&rect, &closed, 1.0).unwrap().total;
        assert!((closed_total - expected).abs() < 1e-12);

        // four times tighter than the classical 1/16 constant
        let classical = error_bound(&rect, &ParamSet::for_midpoint_rule(&rect), 1.0)
            .unwrap()
            .total;
        assert!((classical / closed_total - 4.0).abs() < 1e-12);
    }
    println!(
        "ACCEPTANCE  5 optimal parameters: PASS (grid search confirms quarter points and w^2 h^2 / 64 on 3 rectangles)"
    );
}

// ---------------------------------------------------------------------------
// 6. composite scaling
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_composite_scaling() {
    let f = BivariateFn::new("e^{t+s}", |t, s| (t + s).exp())
        .with_mixed_partial(|t, s| (t + s).exp())
        .with_certified_supnorm(E * E)
        .unwrap();
    let rect = Rectangle::unit();
    let cfg = QuadConfig::default();
    let exact = (E - 1.0) * (E - 1.0);
    let grids = [(1u32, 1u32), (2, 2), (4, 4), (8, 8), (16, 16)];

    for mode in [
        ParamMode::Midpoint,
        ParamMode::Trapezoid,
        ParamMode::Optimal,
    ] {
        let results: Vec<_> = grids
            .iter()
            .map(|&(m, n)| integrate_composite(&f, &rect, m, n, &mode, &cfg).unwrap())
            .collect();
        for w in results.windows(2) {
            let ratio = w[0].bound / w[1].bound;
            assert!(
                (ratio - 4.0).abs() < 1e-9,
                "{mode:?}: bound ratio {ratio} != 4"
            );
        }
        if mode == ParamMode::Midpoint {
            let errors: Vec<f64> = results.iter().map(|cv| (cv.value - exact).abs()).collect();
            for w in errors.windows(2) {
                if w[0] > 1e-12 && w[1] > 1e-12 {
                    let ratio = w[0] / w[1];
                    assert!(ratio >= 3.5, "true error ratio {ratio} < 3.5 ({errors:?})");
                }
            }
        }
    }
    println!(
        "ACCEPTANCE  6 composite scaling: PASS (bound ratio 4.0 per doubling in all modes, true-error ratio >= 3.5)"
    );
}

// ---------------------------------------------------------------------------
// 7. exactness on additively separable functions
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_separable_exactness() {
    let separable: Vec<BivariateFn> = vec![
        BivariateFn::new("t+s", |t, s| t + s),
        BivariateFn::new("t^2+s^2", |t, s| t * t + s * s),
        BivariateFn::new("sin t + cos s", |t, s| t.sin() + s.cos()),
        BivariateFn::new("e^t + e^s", |t, s| t.exp() + s.exp()),
        BivariateFn::new("t^3 - s", |t, s| t.powi(3) - s),
        BivariateFn::new("ln(2+t) + s^2", |t, s| (2.0 + t).ln() + s * s),
        BivariateFn::new("sqrt(2+t) + s", |t, s| (2.0 + t).sqrt() + s),
        BivariateFn::new("t + sin(pi s)", |t, s| t + (PI * s).sin()),
        BivariateFn::new("cos(pi t) + s^3", |t, s| (PI * t).cos() + s.powi(3)),
        BivariateFn::new("t^4 + s^4", |t, s| t.powi(4) + s.powi(4)),
    ];
    let cfg = QuadConfig::default();
    let grids = [(1u32, 1u32), (2, 3), (4, 4)];
    let rect_list = [
        Rectangle::unit(),
        Rectangle::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
    ];
    let mut cases = 0usize;
    for rect in rect_list {
        for f in &separable {
            let f = f
                .clone()
                .with_mixed_partial(|_, _| 0.0)
                .with_certified_supnorm(0.0)
                .unwrap();
            let exact = reference_integral(&f, &rect, 1e-12).unwrap().value;
            for mode in [
                ParamMode::Midpoint,
                ParamMode::Trapezoid,
                ParamMode::Optimal,
            ] {
                for (m, n) in grids {
                    let cv = integrate_composite(&f, &rect, m, n, &mode, &cfg).unwrap();
                    assert!(
                        (cv.value - exact).abs() < 1e-10,
                        "{} on {rect} {mode:?} {m}x{n}: {} vs {exact}",
                        f.name(),
                        cv.value
                    );
                    assert_eq!(cv.bound, 0.0);
                    cases += 1;
                }
            }
        }
    }
    println!(
        "ACCEPTANCE  7 separable exactness: PASS ({cases} mode x grid x function cases within 1e-10)"
    );
}

// ---------------------------------------------------------------------------
// 8. comparison rules
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_comparison_rules() {
    let cfg = QuadConfig::default();
    let ones = BivariateFn::new("1", |_, _| 1.0);

    // the corrected point-anchored rule is exact for constants
    for rect in [
        Rectangle::unit(),
        Rectangle::new(0.0, 2.0, 0.0, 1.0).unwrap(),
    ] {
        for (x, y) in [
            (rect.mid_t(), rect.mid_s()),
            (rect.a(), rect.c()),
            (
                0.3 * rect.a() + 0.7 * rect.b(),
                0.9 * rect.c() + 0.1 * rect.d(),
            ),
        ] {
            let v = barnett_dragomir_value(&ones, &rect, x, y, &cfg).unwrap();
            assert!((v - rect.area()).abs() < 1e-12, "{rect} at ({x}, {y}): {v}");
        }
    }

    // the uncorrected sign arrangement fails the same test: subtracting the
    // bracketed line-integral terms from the already-subtracted point term
    // leaves a residual of twice the area for f = 1
    let rect = Rectangle::unit();
    let (x, y) = (0.4, 0.6);
    let vertical = integrate_1d(|t| ones.eval(x, t), rect.c(), rect.d(), &cfg).unwrap();
    let horizontal = integrate_1d(|s| ones.eval(s, y), rect.a(), rect.b(), &cfg).unwrap();
    let whole = reference_integral(&ones, &rect, 1e-12).unwrap().value;
    let printed_residual = (whole
        - rect.area() * ones.eval(x, y).unwrap()
        - (rect.width() * vertical + rect.height() * horizontal))
        .abs();
    assert!(
        (printed_residual - 2.0 * rect.area()).abs() < 1e-10,
        "uncorrected arrangement residual {printed_residual}"
    );

    // length-scaled 1-D bound is minimised at the midpoint with value
    // (b-a)^2 M / 4
    let (a, b, m1) = (0.0f64, 2.0f64, E * E);
    let g = |t: f64| Ok(t.exp());
    let exact = E * E - 1.0;
    let (_, bound_mid) = ostrowski_1d(g, a, b, 0.5 * (a + b), m1).unwrap();
    assert!((bound_mid - (b - a).powi(2) * m1 / 4.0).abs() < 1e-12);
    for k in 0..=20 {
        let x = a + (b - a) * (k as f64) / 20.0;
        let (value, bound) = ostrowski_1d(g, a, b, x, m1).unwrap();
        assert!(bound >= bound_mid - 1e-15);
        if (x - 1.0).abs() > 1e-12 {
            assert!(bound > bound_mid);
        }
        assert!((exact - value).abs() <= bound, "x={x}");
    }

    println!(
        "ACCEPTANCE  8 comparison rules: PASS (constant test passes corrected-sign rule, fails uncorrected arrangement; 1-D bound minimal at midpoint)"
    );
}

// ---------------------------------------------------------------------------
// 9. parser and differentiator
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_expression_pipeline() {
    type Closure = fn(f64, f64) -> f64;
    let corpus: Vec<(&str, Closure)> = vec![
        ("x*y", |x, y| x * y),
        ("x^2*y^2", |x, y| x.powi(2) * y.powi(2)),
        ("sin(pi*x)*exp(y)", |x, y| (PI * x).sin() * y.exp()),
        ("exp(x*y)", |x, y| (x * y).exp()),
        ("sin(x)+cos(y)", |x, y| x.sin() + y.cos()),
        ("1/(4+x+y)", |x, y| 1.0 / (4.0 + x + y)),
        ("sqrt(1+x*y)", |x, y| (1.0 + x * y).sqrt()),
        ("log(1+x+y)", |x, y| (1.0 + x + y).ln()),
        ("x^3*y-y^2/(1+x)", |x, y| {
            x.powi(3) * y - y.powi(2) / (1.0 + x)
        }),
        ("cos(pi*x)*sin(pi*y)", |x, y| {
            (PI * x).cos() * (PI * y).sin()
        }),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    for (text, reference) in &corpus {
        let node = ostrocube::parse(text).unwrap();

        // round trip against the hand-written closure
        for _ in 0..100 {
            let x = rng.gen_range(0.05..0.95);
            let y = rng.gen_range(0.05..0.95);
            let parsed = node.eval(x, y).unwrap();
            let direct = reference(x, y);
            assert!(
                (parsed - direct).abs() <= 1e-15 * direct.abs().max(1.0),
                "{text} at ({x}, {y}): parsed {parsed} vs direct {direct}"
            );
        }

        // symbolic mixed partial against the centred cross difference
        let mp = node.mixed_partial().unwrap();
        let h = 1e-4;
        for _ in 0..100 {
            let x = rng.gen_range(0.1..0.9);
            let y = rng.gen_range(0.1..0.9);
            let fd = (node.eval(x + h, y + h).unwrap()
                - node.eval(x + h, y - h).unwrap()
                - node.eval(x - h, y + h).unwrap()
                + node.eval(x - h, y - h).unwrap())
                / (4.0 * h * h);
            let sym = mp.eval(x, y).unwrap();
            assert!(
                (sym - fd).abs() <= 1e-6 * sym.abs().max(1.0),
                "{text} at ({x}, {y}): symbolic {sym} vs fd {fd}"
            );
        }
    }

    // right associativity spot check
    assert_eq!(
        ostrocube::parse("2^3^2").unwrap().eval(0.0, 0.0).unwrap(),
        512.0
    );

    println!(
        "ACCEPTANCE  9 expression pipeline: PASS ({} expressions, 100 round-trip and 100 derivative points each)",
        corpus.len()
    );
}

// ---------------------------------------------------------------------------
// 10. output determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_output_determinism() {
    let base = [
        "integrate",
        "x^2*y^2",
        "--rect",
        "0",
        "1",
        "0",
        "1",
        "--mode",
        "optimal",
        "--grid",
        "8",
        "8",
        "--supnorm",
        "4",
        "--format",
        "json",
    ];
    let run = |extra: &[&str]| -> Vec<u8> {
        let out = Command::new(env!("CARGO_BIN_EXE_ostrocube"))
            .args(base.iter().chain(extra.iter()))
            .output()
            .expect("failed to spawn ostrocube");
        assert!(out.status.success());
        out.stdout
    };

    let serial: Vec<Vec<u8>> = (0..5).map(|_| run(&[])).collect();
    let parallel: Vec<Vec<u8>> = (0..5).map(|_| run(&["--parallel"])).collect();
    for s in &serial[1..] {
        assert_eq!(s, &serial[0], "serial runs differ");
    }
    for p in &parallel[1..] {
        assert_eq!(p, &parallel[0], "parallel runs differ");
    }

    // the result payload is also identical between serial and parallel
    let result_of = |bytes: &[u8]| -> String {
        let text = String::from_utf8(bytes.to_vec()).unwrap();
        text.split(r#""result":"#).nth(1).unwrap().to_string()
    };
    assert_eq!(result_of(&serial[0]), result_of(&parallel[0]));

    println!(
        "ACCEPTANCE 10 determinism: PASS (5 serial and 5 parallel runs byte-identical, serial == parallel results)"
    );
}
