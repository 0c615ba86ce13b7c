//! Acceptance criteria 1–7. Each test prints one line,
//! `criterion N: PASS|FAIL <details> (<elapsed> s, budget <b> s)`,
//! and fails if the criterion or its runtime budget is missed.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gencalc::baseline::{gaussian_pair_check, ridge, stft, uncertainty_product};
use gencalc::derivators::param_quotient;
use gencalc::expr::Expr;
use gencalc::gcalc::{monomial_antiderivative, monomial_derivative, GcalcError};
use gencalc::instafreq::{
    chirp_derivatives, chirp_policy, fourier_derivative, instantaneous_frequency, wavefunction_reconstruct, SignMode,
};
use gencalc::sigio::generate;
use gencalc::{
    derivative_trace, generalized_derivative, real, reconstruct, Family, GeneralizedDerivativeRequest, LimitPolicy,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn run(n: u32, budget_s: u64, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_budget = elapsed <= Duration::from_secs(budget_s);
    let (ok, detail) = match outcome {
        Ok(d) => (in_budget, d),
        Err(d) => (false, d),
    };
    println!(
        "criterion {n}: {} {detail} ({:.2} s, budget {budget_s} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

fn grid(x0: f64, x1: f64, step: f64) -> Vec<f64> {
    let n = ((x1 - x0) / step).round() as usize;
    (0..=n).map(|k| x0 + k as f64 * step).collect()
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn criterion_1_linear_golden() {
    run(1, 1, || {
        let f = real(|x| x * x + 2.0 * x + 3.0);
        let g = grid(-5.0, 5.0, 0.1);
        let trace = |p: &str| {
            let req = GeneralizedDerivativeRequest::named(&f, Family::LINEAR, p, LimitPolicy::default())
                .map_err(|e| e.to_string())?;
            derivative_trace(&req, &g).map_err(|e| e.to_string())
        };
        let (a1, a0) = (trace("a1")?, trace("a0")?);
        require(a1.holes().is_empty() && a0.holes().is_empty(), || "holes in trace".into())?;
        let mut e1: f64 = 0.0;
        let mut e0: f64 = 0.0;
        let mut er: f64 = 0.0;
        let mut closed: f64 = 0.0;
        for (i, &x) in g.iter().enumerate() {
            e1 = e1.max((a1.values()[i] - c(2.0 * x + 2.0)).norm());
            e0 = e0.max((a0.values()[i] - c(-x * x + 3.0)).norm());
            let back = reconstruct(&Family::LINEAR, &[a1.clone(), a0.clone()], x).map_err(|e| e.to_string())?;
            er = er.max((back - c(x * x + 2.0 * x + 3.0)).norm());
            closed = closed.max(((2.0 * x + 2.0) * x + (-x * x + 3.0) - (x * x + 2.0 * x + 3.0)).abs());
        }
        let detail = format!("a1_err={e1:.1e} a0_err={e0:.1e} recon_err={er:.1e} closed_form_err={closed:.1e}");
        require(e1 < 1e-8 && e0 < 1e-8 && er < 1e-10 && closed < 1e-10, || detail.clone())?;
        Ok(detail)
    });
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn criterion_2_monomial_closed_forms() {
    run(2, 5, || {
        let d = monomial_derivative(rational(1, 1), rational(5, 1), 2).map_err(|e| e.to_string())?;
        require(d.coeff == rational(10, 1) && d.exponent == rational(3, 1), || format!("D(1,5,2) = {d}"))?;
        let a = monomial_antiderivative(rational(2, 1), rational(1, 1), 1).map_err(|e| e.to_string())?;
        require(a.coeff == rational(1, 1) && a.exponent == rational(2, 1), || format!("A(2,1,1) = {a}"))?;

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut defined = 0;
        for _ in 0..200 {
            let cc = rational(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            let m = rational(rng.gen_range(-30..=30), rng.gen_range(1..=4));
            let n = rng.gen_range(1..=4);
            match monomial_antiderivative(cc.clone(), m.clone(), n) {
                Ok(anti) => {
                    defined += 1;
                    let back = monomial_derivative(anti.coeff, anti.exponent, n).map_err(|e| e.to_string())?;
                    require(back.coeff == cc && back.exponent == m, || {
                        format!("D∘A({cc},{m},{n}) = {back}")
                    })?;
                }
                Err(GcalcError::NotIntegrable(_)) => {}
                Err(e) => return Err(e.to_string()),
            }
        }

        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let n: u32 = rng.gen_range(1..=3);
            let cc: f64 = rng.gen_range(-3.0..3.0);
            let m: f64 = if rng.gen_bool(0.5) {
                rng.gen_range(n..=n + 3) as f64
            } else {
                rng.gen_range(-2.0..5.0)
            };
            let x: f64 = rng.gen_range(0.5..2.0);
            let f = real(move |t: f64| cc * t.powf(m));
            let family = Family::polynomial(n).map_err(|e| e.to_string())?;
            let policy = common::poly_policy(n);
            let req = GeneralizedDerivativeRequest::named(&f, family, &format!("a{n}"), policy)
                .map_err(|e| e.to_string())?;
            let got = generalized_derivative(&req, x).map_err(|e| format!("c={cc} m={m} n={n} x={x}: {e}"))?;
            let closed = monomial_derivative(cc, m, n).map_err(|e| e.to_string())?;
            let want = closed.coeff * x.powf(closed.exponent);
            let rel = (got.value - c(want)).norm() / want.abs().max(1e-300);
            let rel = if want == 0.0 { got.value.norm() } else { rel };
            worst = worst.max(rel);
        }
        let detail = format!("rational_sweep_defined={defined}/200 numeric_worst_rel={worst:.1e}");
        require(worst < 1e-6, || detail.clone())?;
        Ok(detail)
    });
}

#[test]
fn criterion_3_family_fixed_points() {
    run(3, 5, || {
        let i = Complex64::i();
        let cases: Vec<(Family, Vec<Complex64>, Vec<f64>)> = vec![
            (Family::LINEAR, vec![c(1.7), c(-0.6)], vec![-2.0, 0.0, 1.5]),
            (Family::polynomial(2).unwrap(), vec![c(0.5), c(-1.5), c(2.0)], vec![-1.0, 0.0, 0.7]),
            (Family::polynomial(3).unwrap(), vec![c(0.25), c(0.5), c(-1.0), c(3.0)], vec![-1.0, 0.2, 0.9]),
            (Family::EXPONENTIAL, vec![c(0.7), c(-0.4)], vec![-1.0, 0.0, 1.0]),
            (Family::SINE, vec![c(1.3), c(0.2)], vec![-0.5, 0.0, 0.3]),
            (Family::COSINE, vec![c(1.3), c(1.0)], vec![-0.5, 0.0, 0.3]),
            (Family::TANGENT, vec![c(0.9), c(-0.3)], vec![-0.5, 0.0, 0.8]),
            (Family::LINEAR_CHIRP, vec![c(0.1), c(0.05), c(0.2)], vec![-0.5, 0.0, 0.5]),
            (Family::FOURIER_KERNEL, vec![c(2.5), 0.3 + 0.2 * i], vec![-0.5, 0.0, 0.4]),
        ];
        let deltas = [0.1, 0.05, 0.02];
        let mut worst: f64 = 0.0;
        for (family, params, probes) in &cases {
            let f = {
                let params = params.clone();
                move |x: f64| family.eval(&params, c(x)).unwrap()
            };
            for &x in probes {
                for (k, &want) in params.iter().enumerate() {
                    for &d in &deltas {
                        let q = param_quotient(family, k, &f, x, d).map_err(|e| format!("{family} Δ={d}: {e}"))?;
                        worst = worst.max((q - want).norm());
                        require((q - want).norm() < 1e-10, || {
                            format!("{family} p{k} at x={x}, Δ={d}: {q} vs {want}")
                        })?;
                    }
                    let req = GeneralizedDerivativeRequest::new(&f, *family, k, LimitPolicy::with_fixed_step(0.1))
                        .map_err(|e| e.to_string())?;
                    let lim = generalized_derivative(&req, x).map_err(|e| format!("{family} p{k}: {e}"))?;
                    worst = worst.max((lim.value - want).norm());
                    require((lim.value - want).norm() < 1e-10, || {
                        format!("{family} p{k} limit at x={x}: {} vs {want}", lim.value)
                    })?;
                }
            }
        }
        Ok(format!("families={} worst_err={worst:.1e}", cases.len()))
    });
}

struct ChirpRun {
    good: usize,
    total: usize,
    holes: usize,
    max_err_off_holes: f64,
    holes_off_fold: usize,
}

fn quadratic_chirp_run() -> Result<ChirpRun, String> {
    let f = real(|x: f64| (2.0 * PI * (x * x * x / 3.0 + x * x + x)).sin());
    let g = grid(0.0, 3.0, 0.01);
    let cd = chirp_derivatives(&f, &g, &chirp_policy()).map_err(|e| e.to_string())?;
    let ft = instantaneous_frequency(&cd, SignMode::Continuity).map_err(|e| e.to_string())?;
    let mut good = 0;
    let mut max_err: f64 = 0.0;
    for (i, &x) in g.iter().enumerate() {
        if ft.is_hole(i) {
            continue;
        }
        let err = (ft.omega()[i] - (x * x + 2.0 * x + 1.0)).abs();
        max_err = max_err.max(err);
        if err < 1e-3 {
            good += 1;
        }
    }
    let holes = ft.holes();
    let holes_off_fold = holes.iter().filter(|&&i| f.value_at(g[i]).abs() < 0.95).count();
    Ok(ChirpRun {
        good,
        total: g.len(),
        holes: holes.len(),
        max_err_off_holes: max_err,
        holes_off_fold,
    })
}

trait ValueAt {
    fn value_at(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> ValueAt for gencalc::derivand::RealFn<F> {
    fn value_at(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

#[test]
fn criterion_4_quadratic_chirp() {
    run(4, 10, || {
        let r = quadratic_chirp_run()?;
        let frac = r.good as f64 / r.total as f64;
        let detail = format!(
            "within_1e-3={}/{} ({:.1}%) holes={} holes_away_from_|f|=1={} max_err_off_holes={:.1e}",
            r.good,
            r.total,
            100.0 * frac,
            r.holes,
            r.holes_off_fold,
            r.max_err_off_holes
        );
        require(frac >= 0.95 && r.holes_off_fold == 0, || detail.clone())?;
        Ok(detail)
    });
}

#[test]
fn criterion_5_wave_function() {
    run(5, 10, || {
        let psi = |x: f64| 2.0 * Complex64::from_polar(1.0, -(x.powi(4) / 4.0 + x * x));
        let g = grid(-2.0, 2.0, 0.01);
        let (omega, b) = fourier_derivative(&psi, &g, &LimitPolicy::default()).map_err(|e| e.to_string())?;
        require(omega.holes().is_empty(), || format!("{} holes", omega.holes().len()))?;
        let (mut ew, mut eb, mut er): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for (i, &x) in g.iter().enumerate() {
            ew = ew.max((omega.values()[i] - c(x.powi(3) + 2.0 * x)).norm());
            let want_b = Complex64::new(2f64.ln(), 0.75 * x.powi(4) + x * x);
            eb = eb.max((b.values()[i] - want_b).norm());
            let back = wavefunction_reconstruct(&omega, &b, x).map_err(|e| e.to_string())?;
            er = er.max((back - psi(x)).norm());
        }
        let detail = format!("omega_err={ew:.1e} b_err={eb:.1e} roundtrip_err={er:.1e}");
        require(ew < 1e-5 && eb < 1e-5 && er < 1e-8, || detail.clone())?;
        Ok(detail)
    });
}

#[test]
fn criterion_6_baseline_contrast() {
    run(6, 20, || {
        // A σ = 1 frame spans ±4 units, wider than [0, 3], so the chirp is
        // synthesized on [−3.5, 6] (ω stays below the 50 Hz Nyquist limit).
        let chirp = Expr::parse_str("sin(2*pi*(x^3/3+x^2+x))").map_err(|e| e.to_string())?;
        let signal = generate(&chirp, -3.5, 0.01, 951).map_err(|e| e.to_string())?;
        let sg = stft(&signal, 1.0, 5).map_err(|e| e.to_string())?;
        let bin = sg.bin_width();
        let r = ridge(&sg);
        let (mut inside, mut within, mut worst) = (0, 0, 0.0_f64);
        for (&x, &w) in r.trace.grid().iter().zip(r.trace.omega()) {
            if (0.5 - 1e-9..=2.5 + 1e-9).contains(&x) {
                inside += 1;
                let err = (w - (x * x + 2.0 * x + 1.0)).abs();
                worst = worst.max(err);
                if err <= bin {
                    within += 1;
                }
            }
        }
        let ridge_ok = inside > 0 && within == inside;
        let min_spread = sg.spreads().into_iter().fold(f64::INFINITY, f64::min);
        let spread_ok = min_spread > 0.05;
        let pointwise = quadratic_chirp_run()?.max_err_off_holes;
        let pointwise_ok = pointwise < 1e-3;
        let pair = gaussian_pair_check(1.0, 4096, 40.0).map_err(|e| e.to_string())?;
        let pair_ok = pair < 1e-8;
        let u = uncertainty_product(0.5, 4096, 20.0).map_err(|e| e.to_string())?;
        let floor = 1.0 / (4.0 * PI);
        let u_ok = (u.product / floor - 1.0).abs() < 1e-2;
        let mark = |b: bool| if b { "ok" } else { "MISS" };
        let detail = format!(
            "ridge_within_bin={within}/{inside} [{}] (bin={bin:.4} Hz, worst={worst:.2} Hz); \
             min_spread={min_spread:.3} Hz [{}]; pointwise_err={pointwise:.1e} [{}]; \
             gaussian_pair_err={pair:.1e} [{}]; uncertainty={:.5}·1/(4π) [{}]",
            mark(ridge_ok),
            mark(spread_ok),
            mark(pointwise_ok),
            mark(pair_ok),
            u.product / floor,
            mark(u_ok),
        );
        require(ridge_ok && spread_ok && pointwise_ok && pair_ok && u_ok, || detail.clone())?;
        Ok(detail)
    });
}

#[test]
fn criterion_7_property_suites() {
    run(7, 60, || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = Vec::new();

        let (mut n, mut holes) = (0, 0);
        for _ in 0..100 {
            let s = common::Smooth::random(&mut rng);
            let deg = rng.gen_range(1..=3);
            let lower: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            if !common::annihilation(s, deg, &lower, rng.gen_range(-2.0..2.0))? {
                holes += 1;
            }
            n += 1;
        }
        if holes * 20 > n {
            return Err(format!("annihilation: {holes}/{n} cases did not converge"));
        }
        counts.push(format!("annihilation={n} (unconverged {holes})"));

        let (mut n, mut holes) = (0, 0);
        for family in common::reconstruction_families() {
            for _ in 0..12 {
                let s = common::Smooth::random(&mut rng);
                if !common::reconstruction(family, s, rng.gen_range(-1.5..1.5))? {
                    holes += 1;
                }
                n += 1;
            }
        }
        if holes * 20 > n {
            return Err(format!("reconstruction: {holes}/{n} cases did not converge"));
        }
        counts.push(format!("reconstruction={n} (unconverged {holes})"));

        let mut n = 0;
        for _ in 0..100 {
            common::parabolic_oracle(common::Smooth::random(&mut rng), rng.gen_range(-2.0..2.0))?;
            n += 1;
        }
        counts.push(format!("parabolic_fd={n}"));

        let mut n = 0;
        for _ in 0..100 {
            let len = rng.gen_range(1..=300);
            let samples: Vec<Complex64> = (0..len)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            common::parseval(&samples)?;
            n += 1;
        }
        counts.push(format!("parseval={n}"));

        let mut n = 0;
        for _ in 0..100 {
            common::parser_round_trip(&common::random_expr(&mut rng, 5))?;
            n += 1;
        }
        counts.push(format!("parser_round_trip={n}"));

        Ok(counts.join(" "))
    });
}
