//! Property checks shared by the proptest suite and the acceptance runner.
//! Each returns `Err(description)` on the first violated case.

#![allow(dead_code)]

use std::f64::consts::PI;

use gencalc::baseline::fft;
use gencalc::expr::{BinaryOp, Constant, Expr, Function};
use gencalc::instafreq::chirp_policy;
use gencalc::{
    derivative_trace, generalized_derivative, reconstruct, Derivand, Family, GeneralizedDerivativeRequest,
    LimitPolicy,
};
use num_complex::Complex64;
use rand::Rng;

pub type Check = Result<(), String>;

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `amp·sin(freq·x + phase) + c2·x² + c1·x + c0` with closed-form derivatives.
#[derive(Debug, Clone, Copy)]
pub struct Smooth {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl Smooth {
    pub fn random<R: Rng>(rng: &mut R) -> Smooth {
        Smooth {
            amp: rng.gen_range(-2.0..2.0),
            freq: rng.gen_range(0.2..3.0),
            phase: rng.gen_range(-PI..PI),
            c2: rng.gen_range(-1.0..1.0),
            c1: rng.gen_range(-2.0..2.0),
            c0: rng.gen_range(-2.0..2.0),
        }
    }

    pub fn f(&self, x: f64) -> f64 {
        self.amp * (self.freq * x + self.phase).sin() + self.c2 * x * x + self.c1 * x + self.c0
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.amp * self.freq * (self.freq * x + self.phase).cos() + 2.0 * self.c2 * x + self.c1
    }

    pub fn d2(&self, x: f64) -> f64 {
        -self.amp * self.freq * self.freq * (self.freq * x + self.phase).sin() + 2.0 * self.c2
    }
}

fn close(got: Complex64, want: Complex64, tol: f64) -> bool {
    (got - want).norm() <= tol * want.norm().max(1.0)
}

/// Polynomial-derivator policy: rounding in an order-`n` difference grows
/// like `Δ^{-n}`, so the start step grows and the tolerance loosens by a
/// digit per degree.
pub fn poly_policy(n: u32) -> LimitPolicy {
    let rtol = 3.0 * 10f64.powi(n as i32 - 10);
    let delta0 = 0.01 * 3f64.powi(n as i32 - 1);
    LimitPolicy { delta0, rtol, atol: rtol, ..LimitPolicy::default() }
}

fn limit<D: Derivand + ?Sized>(f: &D, family: Family, param: &str, policy: LimitPolicy, x: f64) -> Result<Complex64, String> {
    let req = GeneralizedDerivativeRequest::named(f, family, param, policy).map_err(|e| e.to_string())?;
    generalized_derivative(&req, x)
        .map(|e| e.value)
        .map_err(|e| format!("{family} {param} at {x}: {e}"))
}

/// Like [`limit`], but a reported non-convergence gives `Ok(None)`.
fn converged_limit<D: Derivand + ?Sized>(
    f: &D,
    family: Family,
    param: &str,
    policy: LimitPolicy,
    x: f64,
) -> Result<Option<Complex64>, String> {
    let req = GeneralizedDerivativeRequest::named(f, family, param, policy).map_err(|e| e.to_string())?;
    match generalized_derivative(&req, x) {
        Ok(e) => Ok(Some(e.value)),
        Err(gencalc::GcalcError::NotConverged { .. }) => Ok(None),
        Err(e) => Err(format!("{family} {param} at {x}: {e}")),
    }
}

/// Polynomial terms of degree below `n` do not change the top coefficient
/// of the degree-`n` derivator. `Ok(false)` when either limit did not
/// converge.
pub fn annihilation(s: Smooth, n: u32, lower: &[f64], x: f64) -> Result<bool, String> {
    let family = Family::polynomial(n).unwrap();
    let top = format!("a{n}");
    let base = |t: f64| c(s.f(t));
    let shifted = |t: f64| {
        let extra = lower.iter().take(n as usize).fold(0.0, |acc, &k| acc * t + k);
        c(s.f(t) + extra)
    };
    // Rounding scales with the size of the samples, not of the coefficient.
    let scale = 1.0 + shifted(x).norm().max(base(x).norm());
    let policy = LimitPolicy { atol: poly_policy(n).atol * scale, ..poly_policy(n) };
    let (Some(a), Some(b)) = (
        converged_limit(&base, family, &top, policy, x)?,
        converged_limit(&shifted, family, &top, policy, x)?,
    ) else {
        return Ok(false);
    };
    if (a - b).norm() <= 20.0 * policy.atol {
        Ok(true)
    } else {
        Err(format!("{top}: {a} vs {b} at x={x}, n={n}, lower={lower:?}, {s:?}"))
    }
}

/// Parabolic derivator against closed-form derivatives:
/// `a2 = f″/2`, `a1 = f′ − f″x`, `a0 = f − f′x + f″x²/2`.
pub fn parabolic_oracle(s: Smooth, x: f64) -> Check {
    let f = |t: f64| c(s.f(t));
    let family = Family::polynomial(2).unwrap();
    let policy = poly_policy(2);
    let (f0, f1, f2) = (s.f(x), s.d1(x), s.d2(x));
    let expected = [
        ("a2", f2 / 2.0),
        ("a1", f1 - f2 * x),
        ("a0", f0 - f1 * x + f2 * x * x / 2.0),
    ];
    for (name, want) in expected {
        let got = limit(&f, family, name, policy, x)?;
        if !close(got, c(want), 1e-6) {
            return Err(format!("{name} = {got}, expected {want} at x={x}, {s:?}"));
        }
    }
    let got = limit(&f, Family::LINEAR, "a1", poly_policy(1), x)?;
    if !close(got, c(f1), 1e-7) {
        return Err(format!("linear a1 = {got}, expected {f1} at x={x}"));
    }
    Ok(())
}

/// Evaluating a family with all of its instantaneous parameters gives the
/// derivand back. The derivand is shaped to each family's domain.
///
/// A parameter whose limit did not converge is a reported failure rather
/// than a wrong answer; such cases give `Ok(false)` and callers bound how
/// often they occur.
pub fn reconstruction(family: Family, s: Smooth, x: f64) -> Result<bool, String> {
    let squash = move |t: f64| 0.8 * (0.5 * s.f(t)).tanh();
    let f: Box<dyn Fn(f64) -> Complex64 + Sync> = match family.id() {
        gencalc::FamilyId::Exponential => Box::new(move |t| c((0.3 * s.f(t)).exp())),
        gencalc::FamilyId::Sine | gencalc::FamilyId::Cosine | gencalc::FamilyId::LinearChirp => {
            Box::new(move |t| c(squash(t)))
        }
        gencalc::FamilyId::FourierKernel => Box::new(move |t| {
            Complex64::from_polar((0.3 * s.f(t)).exp(), s.amp * t - s.c2 * t * t)
        }),
        _ => Box::new(move |t| c(s.f(t))),
    };
    let policy = match (family.id(), family.degree()) {
        (gencalc::FamilyId::LinearChirp, _) => chirp_policy(),
        (_, Some(n)) => {
            let p = poly_policy(n);
            LimitPolicy { atol: p.atol * (1.0 + f(x).norm()), ..p }
        }
        _ => LimitPolicy::default(),
    };
    let traces = (0..family.arity())
        .map(|k| {
            let req = GeneralizedDerivativeRequest::new(&f, family, k, policy).map_err(|e| e.to_string())?;
            derivative_trace(&req, &[x]).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, String>>()?;
    if traces.iter().any(|t| !t.holes().is_empty()) {
        return Ok(false);
    }
    let got = reconstruct(&family, &traces, x).map_err(|e| format!("{family} at {x}: {e} ({s:?})"))?;
    let want = f(x);
    // Coefficients in powers of x (not x − x₀) inherit rounding amplified
    // by |x|^k when summed back up.
    let tol = match family.degree() {
        Some(n) => (10.0 * policy.atol * (1.0 + x.abs()).powi(n as i32)).max(1e-6),
        None => 1e-6,
    };
    if close(got, want, tol) {
        Ok(true)
    } else {
        Err(format!("{family}: reconstructed {got}, expected {want} at x={x}, {s:?}"))
    }
}

pub fn reconstruction_families() -> Vec<Family> {
    vec![
        Family::LINEAR,
        Family::polynomial(2).unwrap(),
        Family::polynomial(3).unwrap(),
        Family::EXPONENTIAL,
        Family::SINE,
        Family::COSINE,
        Family::TANGENT,
        Family::LINEAR_CHIRP,
        Family::FOURIER_KERNEL,
    ]
}

/// `Σ|X_k|²/N = Σ|x_j|²`.
pub fn parseval(samples: &[Complex64]) -> Check {
    let time: f64 = samples.iter().map(|z| z.norm_sqr()).sum();
    let freq: f64 = fft(samples).iter().map(|z| z.norm_sqr()).sum::<f64>() / samples.len() as f64;
    if (time - freq).abs() <= 1e-9 * time.max(f64::MIN_POSITIVE) {
        Ok(())
    } else {
        Err(format!("n={}: {time} vs {freq}", samples.len()))
    }
}

/// Printing then parsing gives back the same tree.
pub fn parser_round_trip(e: &Expr) -> Check {
    let text = e.to_text();
    match Expr::parse_str(&text) {
        Ok(back) if &back == e => Ok(()),
        Ok(back) => Err(format!("{text} reparsed as {back:?}")),
        Err(err) => Err(format!("{text}: {err}")),
    }
}

pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => Expr::Const(Constant::Pi),
            1 => Expr::Const(Constant::E),
            2 => Expr::Const(Constant::I),
            3 => Expr::Var,
            _ => Expr::Literal(rng.gen_range(0.0..100.0)),
        };
    }
    match rng.gen_range(0..3) {
        0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
        1 => {
            let ops = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow];
            let op = ops[rng.gen_range(0..ops.len())];
            Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
        }
        _ => {
            let f = Function::ALL[rng.gen_range(0..Function::ALL.len())];
            Expr::Call(f, Box::new(random_expr(rng, depth - 1)))
        }
    }
}
