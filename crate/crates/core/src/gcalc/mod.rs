//! The generalized derivative `𝔇{p_k} df/dx`, its traces over a grid, and
//! reconstruction of a derivand from its instantaneous parameters.

mod monomial;
mod trace;

use num_complex::Complex64;
use thiserror::Error;

use crate::derivand::{Derivand, DerivandError, Sampling};
use crate::derivators::{param_quotient, Family, FamilyError, QuotientError};
use crate::numerics::{estimate_limit, extrapolate_nodes, LimitError, LimitPolicy, PolicyError};
use crate::par::Execution;

pub use monomial::{monomial_antiderivative, monomial_derivative, Monomial};
pub use trace::InstParamTrace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcalcError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Derivand(#[from] DerivandError),
    #[error("limit did not converge at x = {x}: best value {value}, estimated error {est_error:e}")]
    NotConverged {
        x: f64,
        value: Complex64,
        est_error: f64,
    },
    #[error("at x = {x}: {source}")]
    Stencil { x: f64, source: FamilyError },
    #[error("x = {x} is not a point of the grid")]
    OffGrid { x: f64 },
    #[error("sampled signal too short for a {points}-point stencil at x = {x}")]
    InsufficientSamples { x: f64, points: usize },
    #[error("trace of parameter '{param}' has a hole at x = {x}")]
    Hole { param: String, x: f64 },
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid is not strictly increasing at index {index}")]
    GridNotIncreasing { index: usize },
    #[error("traces do not share a grid")]
    GridMismatch,
    #[error("no trace or constant for parameter '{0}'")]
    MissingParameter(String),
    #[error("parameter '{0}' given both as a trace and as a constant")]
    DuplicateParameter(String),
    #[error("order n must be at least 1")]
    InvalidOrder,
    #[error("not integrable in this family: {0}")]
    NotIntegrable(String),
}

/// What to differentiate, with respect to which family parameter, and how to take the limit.
#[derive(Debug, Clone, Copy)]
pub struct GeneralizedDerivativeRequest<'a, D: ?Sized> {
    derivand: &'a D,
    family: Family,
    param_index: usize,
    policy: LimitPolicy,
}

impl<'a, D: Derivand + ?Sized> GeneralizedDerivativeRequest<'a, D> {
    pub fn new(
        derivand: &'a D,
        family: Family,
        param_index: usize,
        policy: LimitPolicy,
    ) -> Result<Self, GcalcError> {
        if param_index >= family.arity() {
            return Err(FamilyError::ArityMismatch {
                expected: family.arity(),
                got: param_index + 1,
            }
            .into());
        }
        policy.validate()?;
        Ok(GeneralizedDerivativeRequest {
            derivand,
            family,
            param_index,
            policy,
        })
    }

    /// Like [`new`](Self::new) with the parameter given by name.
    pub fn named(
        derivand: &'a D,
        family: Family,
        param: &str,
        policy: LimitPolicy,
    ) -> Result<Self, GcalcError> {
        let k = family.param_index(param)?;
        Self::new(derivand, family, k, policy)
    }

    pub fn derivand(&self) -> &'a D {
        self.derivand
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param_index(&self) -> usize {
        self.param_index
    }

    pub fn param_name(&self) -> String {
        self.family.param_names().swap_remove(self.param_index)
    }

    pub fn policy(&self) -> &LimitPolicy {
        &self.policy
    }
}

/// An instantaneous parameter value and its extrapolation error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub est_error: f64,
}

/// `𝔇{p_k} df/dx` at `x`: the Δ → 0 limit of the k-th parameter of the
/// family fitted through `x, x+Δ, …`.
///
/// Sampled derivands only admit steps `Δ = j·dx` with `j` a power of two
/// no larger than the policy's initial step allows (but at least 2, so
/// there is something to extrapolate); the stencil runs backward near the
/// end of the signal. Their node set is fixed by the grid, so the best
/// extrapolated value is returned with its error estimate even when it
/// misses the policy tolerance.
pub fn generalized_derivative<D: Derivand + ?Sized>(
    req: &GeneralizedDerivativeRequest<'_, D>,
    x: f64,
) -> Result<Estimate, GcalcError> {
    let quotient =
        |delta: f64| param_quotient(&req.family, req.param_index, req.derivand, x, delta);
    let (result, sampled) = match req.derivand.sampling() {
        None => (estimate_limit(quotient, &req.policy, x), false),
        Some(s) => {
            let nodes = sampled_nodes(&s, x, req.family.arity(), &req.policy)?;
            (extrapolate_nodes(quotient, &nodes, &req.policy), true)
        }
    };
    let result = result.map_err(|e| match e {
        LimitError::Policy(p) => GcalcError::Policy(p),
        LimitError::NoNodes => GcalcError::InsufficientSamples {
            x,
            points: req.family.arity(),
        },
        LimitError::Evaluation { source, .. } => match source {
            QuotientError::Family(f) => GcalcError::Stencil { x, source: f },
            QuotientError::Derivand(d) => GcalcError::Derivand(d),
            QuotientError::ParamIndex { .. } => unreachable!("index checked by the request"),
        },
    })?;
    let finite = result.value.re.is_finite() && result.value.im.is_finite();
    if !finite || (!result.converged && !sampled) {
        return Err(GcalcError::NotConverged {
            x,
            value: result.value,
            est_error: result.est_error,
        });
    }
    Ok(Estimate {
        value: result.value,
        est_error: result.est_error,
    })
}

fn sampled_nodes(
    s: &Sampling,
    x: f64,
    points: usize,
    policy: &LimitPolicy,
) -> Result<Vec<f64>, GcalcError> {
    let idx = s.index_of(x).ok_or(GcalcError::OffGrid { x })? as i64;
    let span = points as i64 - 1;
    let len = s.len as i64;
    let budget = (policy.initial_step(x) / s.dx).max(2.0);
    let multipliers = |fits: &dyn Fn(i64) -> bool| {
        let mut js = Vec::new();
        let mut j = 1_i64;
        while js.len() < policy.max_stages && (j as f64) <= budget && fits(j) {
            js.push(j);
            j *= 2;
        }
        js
    };
    let forward = multipliers(&|j| idx + span * j < len);
    let backward = multipliers(&|j| idx - span * j >= 0);
    let (js, direction) = if forward.len() >= backward.len() {
        (forward, 1.0)
    } else {
        (backward, -1.0)
    };
    if js.len() < 2 {
        return Err(GcalcError::InsufficientSamples { x, points });
    }
    Ok(js.iter().rev().map(|&j| direction * j as f64 * s.dx).collect())
}

/// Checks that `grid` is nonempty and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<(), GcalcError> {
    if grid.is_empty() {
        return Err(GcalcError::EmptyGrid);
    }
    match grid.windows(2).position(|w| !(w[1] > w[0])) {
        Some(i) => Err(GcalcError::GridNotIncreasing { index: i + 1 }),
        None => Ok(()),
    }
}

/// [`generalized_derivative`] at every grid point, in parallel. Points that
/// fail become holes.
pub fn derivative_trace<D: Derivand + ?Sized>(
    req: &GeneralizedDerivativeRequest<'_, D>,
    grid: &[f64],
) -> Result<InstParamTrace, GcalcError> {
    derivative_trace_with(req, grid, Execution::default())
}

pub fn derivative_trace_with<D: Derivand + ?Sized>(
    req: &GeneralizedDerivativeRequest<'_, D>,
    grid: &[f64],
    exec: Execution,
) -> Result<InstParamTrace, GcalcError> {
    validate_grid(grid)?;
    let results = exec.map_indices(grid.len(), |i| generalized_derivative(req, grid[i]));
    Ok(InstParamTrace::from_results(grid.to_vec(), results))
}

/// Evaluates the family with every parameter taken from its trace at `x`:
/// the integral without antiderivatives. `x` must be a grid point.
pub fn reconstruct(
    family: &Family,
    param_traces: &[InstParamTrace],
    x: f64,
) -> Result<Complex64, GcalcError> {
    if param_traces.len() != family.arity() {
        return Err(FamilyError::ArityMismatch {
            expected: family.arity(),
            got: param_traces.len(),
        }
        .into());
    }
    let names = family.param_names();
    let params = param_traces
        .iter()
        .zip(&names)
        .map(|(t, name)| t.value_at(x, name))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(family.eval(&params, Complex64::new(x, 0.0))?)
}

/// Reconstruction with user constants standing in for parameters whose
/// terms vanished under differentiation.
pub fn reconstruct_partial(
    family: &Family,
    known: &[(&str, &InstParamTrace)],
    user_constants: &[(&str, Complex64)],
    x: f64,
) -> Result<Complex64, GcalcError> {
    let names = family.param_names();
    let mut params: Vec<Option<Complex64>> = vec![None; names.len()];
    for &(name, trace) in known {
        let k = family.param_index(name)?;
        if params[k].is_some() {
            return Err(GcalcError::DuplicateParameter(names[k].clone()));
        }
        params[k] = Some(trace.value_at(x, &names[k])?);
    }
    for &(name, value) in user_constants {
        let k = family.param_index(name)?;
        if params[k].is_some() {
            return Err(GcalcError::DuplicateParameter(names[k].clone()));
        }
        params[k] = Some(value);
    }
    let params = params
        .into_iter()
        .zip(&names)
        .map(|(p, name)| p.ok_or_else(|| GcalcError::MissingParameter(name.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(family.eval(&params, Complex64::new(x, 0.0))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivand::real;
    use crate::sigio::SampledSignal;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn at<D: Derivand + ?Sized>(f: &D, family: Family, param: &str, x: f64) -> Complex64 {
        let req = GeneralizedDerivativeRequest::named(f, family, param, LimitPolicy::default()).unwrap();
        generalized_derivative(&req, x).unwrap().value
    }

    fn grid(x0: f64, x1: f64, step: f64) -> Vec<f64> {
        let n = ((x1 - x0) / step).round() as usize;
        (0..=n).map(|k| x0 + k as f64 * step).collect()
    }

    #[test]
    fn linear_derivatives_of_quadratic() {
        let f = real(|x| x * x + 2.0 * x + 3.0);
        assert!((at(&f, Family::LINEAR, "a1", 1.0) - c(4.0)).norm() < 1e-9);
        assert!((at(&f, Family::LINEAR, "a0", 2.0) - c(-1.0)).norm() < 1e-9);
        let quad = Family::polynomial(2).unwrap();
        for x in [-3.0, 0.0, 0.4, 7.0] {
            assert!((at(&f, quad, "a2", x) - c(1.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn exponential_derivatives_of_gaussian_bump() {
        let f = real(|x: f64| (x * x).exp());
        assert!((at(&f, Family::EXPONENTIAL, "a", 1.5) - c(3.0)).norm() < 1e-8);
        assert!((at(&f, Family::EXPONENTIAL, "b", 1.5) - c(-2.25)).norm() < 1e-8);
    }

    #[test]
    fn sine_fixed_point() {
        let f = real(|x: f64| (3.0 * x + 1.0).sin());
        for x in [-0.8, -0.3, 0.0, 0.1] {
            assert!((at(&f, Family::SINE, "omega", x) - c(3.0)).norm() < 1e-9);
            assert!((at(&f, Family::SINE, "phi", x) - c(1.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn request_rejects_bad_index() {
        let f = real(|x| x);
        assert!(GeneralizedDerivativeRequest::new(&f, Family::LINEAR, 2, LimitPolicy::default()).is_err());
        assert!(matches!(
            GeneralizedDerivativeRequest::named(&f, Family::LINEAR, "a9", LimitPolicy::default()),
            Err(GcalcError::Family(FamilyError::UnknownParameter { .. }))
        ));
    }

    #[test]
    fn golden_linear_trace() {
        let f = real(|x| x * x + 2.0 * x + 3.0);
        let g = grid(-5.0, 5.0, 0.1);
        let req = GeneralizedDerivativeRequest::named(&f, Family::LINEAR, "a1", LimitPolicy::default()).unwrap();
        let t = derivative_trace(&req, &g).unwrap();
        assert!(t.holes().is_empty());
        for (x, v) in t.grid().iter().zip(t.values()) {
            assert!((v - c(2.0 * x + 2.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn constant_has_constant_intercept() {
        let f = real(|_| 4.5);
        let req = GeneralizedDerivativeRequest::named(&f, Family::LINEAR, "a0", LimitPolicy::default()).unwrap();
        let t = derivative_trace(&req, &grid(-1.0, 1.0, 0.25)).unwrap();
        assert!(t.values().iter().all(|v| (v - c(4.5)).norm() < 1e-12));
    }

    #[test]
    fn sine_trace_has_holes_at_crests() {
        let f = real(|x: f64| (2.0 * std::f64::consts::PI * 2.0 * x).sin());
        // crests of sin(4πx) at x = 1/8 + k/4
        let g: Vec<f64> = (0..40).map(|k| k as f64 / 32.0).collect();
        let req = GeneralizedDerivativeRequest::named(&f, Family::SINE, "omega", LimitPolicy::default()).unwrap();
        let t = derivative_trace(&req, &g).unwrap();
        let expected: Vec<usize> = (0..40)
            .filter(|&k| {
                let x = k as f64 / 32.0;
                (2.0 * std::f64::consts::PI * 2.0 * x).cos().abs() < 1e-6
            })
            .collect();
        assert_eq!(t.holes(), expected);
        assert!(!expected.is_empty());
        for i in 0..g.len() {
            if !t.is_hole(i) {
                assert!((t.values()[i].norm() - 4.0 * std::f64::consts::PI).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn empty_and_unsorted_grids() {
        let f = real(|x| x);
        let req = GeneralizedDerivativeRequest::new(&f, Family::LINEAR, 0, LimitPolicy::default()).unwrap();
        assert_eq!(derivative_trace(&req, &[]).unwrap_err(), GcalcError::EmptyGrid);
        assert_eq!(
            derivative_trace(&req, &[0.0, 1.0, 1.0]).unwrap_err(),
            GcalcError::GridNotIncreasing { index: 2 }
        );
    }

    #[test]
    fn sampled_quadratic_is_exact_under_parabola() {
        let xs: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        let s = SampledSignal::from_real(0.0, 0.1, &ys).unwrap();
        let quad = Family::polynomial(2).unwrap();
        let req = GeneralizedDerivativeRequest::named(&s, quad, "a2", LimitPolicy::default()).unwrap();
        let t = derivative_trace(&req, &xs).unwrap();
        assert!(t.holes().is_empty(), "{:?}", t.hole_reason(t.holes()[0]));
        assert!(t.values().iter().all(|v| (v - c(3.0)).norm() < 1e-9));
    }

    #[test]
    fn sampled_derivative_extrapolates_grid_steps() {
        let dx = 0.01;
        let ys: Vec<f64> = (0..400).map(|k| (k as f64 * dx).sin()).collect();
        let s = SampledSignal::from_real(0.0, dx, &ys).unwrap();
        let policy = LimitPolicy::with_fixed_step(0.08);
        let req = GeneralizedDerivativeRequest::named(&s, Family::LINEAR, "a1", policy).unwrap();
        for k in [0, 100, 250, 399] {
            let x = k as f64 * dx;
            let v = generalized_derivative(&req, x).unwrap().value;
            assert!((v.re - x.cos()).abs() < 1e-7, "x={x} v={v}");
        }
        assert!(matches!(
            generalized_derivative(&req, 0.005),
            Err(GcalcError::OffGrid { .. })
        ));
    }

    #[test]
    fn one_sample_is_not_enough() {
        let s = SampledSignal::from_real(0.0, 1.0, &[1.0]).unwrap();
        let req = GeneralizedDerivativeRequest::new(&s, Family::LINEAR, 0, LimitPolicy::default()).unwrap();
        assert!(matches!(
            generalized_derivative(&req, 0.0),
            Err(GcalcError::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn reconstruction_of_linear_example() {
        let g = grid(-5.0, 5.0, 0.5);
        let slope = InstParamTrace::from_fn(g.clone(), |x| c(2.0 * x + 2.0));
        let icept = InstParamTrace::from_fn(g.clone(), |x| c(-x * x + 3.0));
        let v = reconstruct(&Family::LINEAR, &[slope.clone(), icept.clone()], 3.0).unwrap();
        assert!((v - c(18.0)).norm() < 1e-12);
        assert!(matches!(
            reconstruct(&Family::LINEAR, &[slope.clone(), icept.clone()], 3.2),
            Err(GcalcError::OffGrid { .. })
        ));

        let v = reconstruct_partial(&Family::LINEAR, &[("a1", &slope)], &[("a0", c(0.0))], 3.0).unwrap();
        assert!((v - c(24.0)).norm() < 1e-12);
        let v = reconstruct_partial(&Family::LINEAR, &[("a0", &icept)], &[("a1", c(0.0))], 3.0).unwrap();
        assert!((v - c(-6.0)).norm() < 1e-12);
        assert_eq!(
            reconstruct_partial(&Family::LINEAR, &[("a0", &icept)], &[], 3.0),
            Err(GcalcError::MissingParameter("a1".into()))
        );
        let full = reconstruct_partial(&Family::LINEAR, &[("a1", &slope), ("a0", &icept)], &[], 1.0).unwrap();
        assert_eq!(full, reconstruct(&Family::LINEAR, &[slope, icept], 1.0).unwrap());
    }

    #[test]
    fn exponential_reconstruction() {
        let g = grid(0.0, 2.0, 0.5);
        let a = InstParamTrace::from_fn(g.clone(), |x| c(2.0 * x));
        let b = InstParamTrace::from_fn(g, |x| c(-x * x));
        let v = reconstruct(&Family::EXPONENTIAL, &[a, b], 1.0).unwrap();
        assert!((v - c(std::f64::consts::E)).norm() < 1e-14);
    }
}
