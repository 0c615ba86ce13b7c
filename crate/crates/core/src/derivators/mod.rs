//! Derivator families and exact solution of their local N-point systems.
//!
//! A family is a parametric model `h(x; p_0..p_{N-1})`. Fitting it through
//! N points of a derivand and letting the points coalesce yields the
//! instantaneous parameters. Parameter vectors are ordered as in
//! [`Family::param_names`]: polynomials from the highest degree down.

mod solve;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::derivand::{Derivand, DerivandError};
use crate::numerics::stencil;

pub use solve::{polynomial_coefficients, solve_stencil, StencilSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("polynomial degree must be at least 1")]
    InvalidDegree,
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("unknown parameter '{name}' for family {family}")]
    UnknownParameter { family: String, name: String },
    #[error("expected {expected} parameters, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("stencil abscissae must be strictly monotone")]
    NonMonotone,
    #[error("singular stencil: duplicate abscissae")]
    SingularStencil,
    #[error("logarithm undefined: sample is zero at x = {x}")]
    LogUndefined { x: f64 },
    #[error("linearization singular at x = {x} (|f| = 1)")]
    LinearizationSingular { x: f64 },
    #[error("tangent pole at x = {x}")]
    TangentPole { x: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Linear,
    Polynomial(u32),
    Exponential,
    Sine,
    Cosine,
    Tangent,
    LinearChirp,
    FourierKernel,
}

/// A validated derivator/integrator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Family {
    id: FamilyId,
}

impl Family {
    pub fn new(id: FamilyId) -> Result<Family, FamilyError> {
        if let FamilyId::Polynomial(0) = id {
            return Err(FamilyError::InvalidDegree);
        }
        Ok(Family { id })
    }

    pub const LINEAR: Family = Family { id: FamilyId::Linear };
    pub const EXPONENTIAL: Family = Family { id: FamilyId::Exponential };
    pub const SINE: Family = Family { id: FamilyId::Sine };
    pub const COSINE: Family = Family { id: FamilyId::Cosine };
    pub const TANGENT: Family = Family { id: FamilyId::Tangent };
    pub const LINEAR_CHIRP: Family = Family { id: FamilyId::LinearChirp };
    pub const FOURIER_KERNEL: Family = Family { id: FamilyId::FourierKernel };

    pub fn polynomial(degree: u32) -> Result<Family, FamilyError> {
        Family::new(FamilyId::Polynomial(degree))
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    /// Polynomial degree, with `Linear` reporting 1.
    pub fn degree(&self) -> Option<u32> {
        match self.id {
            FamilyId::Linear => Some(1),
            FamilyId::Polynomial(n) => Some(n),
            _ => None,
        }
    }

    pub fn arity(&self) -> usize {
        match self.id {
            FamilyId::Linear => 2,
            FamilyId::Polynomial(n) => n as usize + 1,
            FamilyId::Exponential
            | FamilyId::Sine
            | FamilyId::Cosine
            | FamilyId::Tangent
            | FamilyId::FourierKernel => 2,
            FamilyId::LinearChirp => 3,
        }
    }

    pub fn param_names(&self) -> Vec<String> {
        let fixed: &[&str] = match self.id {
            FamilyId::Linear | FamilyId::Polynomial(_) => {
                let n = self.degree().unwrap_or(1);
                return (0..=n).rev().map(|i| format!("a{i}")).collect();
            }
            FamilyId::Exponential => &["a", "b"],
            FamilyId::Sine | FamilyId::Cosine | FamilyId::Tangent => &["omega", "phi"],
            FamilyId::LinearChirp => &["omega1", "omega0", "phi"],
            FamilyId::FourierKernel => &["omega", "b"],
        };
        fixed.iter().map(|s| s.to_string()).collect()
    }

    /// Looks up a parameter by name; `w`, `w1`, `w0` are accepted for the omegas.
    pub fn param_index(&self, name: &str) -> Result<usize, FamilyError> {
        let canonical = match name {
            "w" => "omega",
            "w1" => "omega1",
            "w0" => "omega0",
            other => other,
        };
        self.param_names()
            .iter()
            .position(|p| p == canonical)
            .ok_or_else(|| FamilyError::UnknownParameter {
                family: self.to_string(),
                name: name.to_string(),
            })
    }

    /// Evaluates `h(x; params)`.
    pub fn eval(&self, params: &[Complex64], x: Complex64) -> Result<Complex64, FamilyError> {
        if params.len() != self.arity() {
            return Err(FamilyError::ArityMismatch {
                expected: self.arity(),
                got: params.len(),
            });
        }
        let i = Complex64::i();
        Ok(match self.id {
            FamilyId::Linear | FamilyId::Polynomial(_) => {
                params.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
            }
            FamilyId::Exponential => (params[0] * x + params[1]).exp(),
            FamilyId::Sine => (params[0] * x + params[1]).sin(),
            FamilyId::Cosine => (params[0] * x + params[1]).cos(),
            FamilyId::Tangent => {
                let arg = params[0] * x + params[1];
                if arg.cos().norm() <= f64::EPSILON {
                    return Err(FamilyError::TangentPole { x });
                }
                arg.tan()
            }
            FamilyId::LinearChirp => {
                let phase = 2.0 * PI * (0.5 * params[0] * x * x + params[1] * x) + params[2];
                phase.sin()
            }
            FamilyId::FourierKernel => (-i * params[0] * x + params[1]).exp(),
        })
    }
}

/// Evaluates `family` at a real abscissa.
pub fn family_eval(family: &Family, params: &[Complex64], x: f64) -> Result<Complex64, FamilyError> {
    family.eval(params, Complex64::new(x, 0.0))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            FamilyId::Linear => f.write_str("linear"),
            FamilyId::Polynomial(n) => write!(f, "poly:{n}"),
            FamilyId::Exponential => f.write_str("exp"),
            FamilyId::Sine => f.write_str("sin"),
            FamilyId::Cosine => f.write_str("cos"),
            FamilyId::Tangent => f.write_str("tan"),
            FamilyId::LinearChirp => f.write_str("chirp"),
            FamilyId::FourierKernel => f.write_str("fourier"),
        }
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let id = match s {
            "linear" => FamilyId::Linear,
            "exp" => FamilyId::Exponential,
            "sin" => FamilyId::Sine,
            "cos" => FamilyId::Cosine,
            "tan" => FamilyId::Tangent,
            "chirp" => FamilyId::LinearChirp,
            "fourier" => FamilyId::FourierKernel,
            other => match other.strip_prefix("poly:").map(str::parse::<u32>) {
                Some(Ok(n)) => FamilyId::Polynomial(n),
                _ => return Err(FamilyError::UnknownFamily(other.to_string())),
            },
        };
        Family::new(id)
    }
}

/// Samples on a stencil, validated against a family's arity.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilSamples {
    pub xs: Vec<f64>,
    pub ys: Vec<Complex64>,
}

impl StencilSamples {
    pub fn new(xs: Vec<f64>, ys: Vec<Complex64>) -> Result<Self, FamilyError> {
        if xs.len() != ys.len() {
            return Err(FamilyError::ArityMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        let ascending = xs.windows(2).all(|w| w[1] > w[0]);
        let descending = xs.windows(2).all(|w| w[1] < w[0]);
        if !(ascending || descending) {
            if xs.windows(2).any(|w| w[0] == w[1]) {
                return Err(FamilyError::SingularStencil);
            }
            return Err(FamilyError::NonMonotone);
        }
        Ok(StencilSamples { xs, ys })
    }

    /// Samples `f` on `stencil(x, delta, n)`.
    pub fn sample<D: Derivand + ?Sized>(
        f: &D,
        x: f64,
        delta: f64,
        n: usize,
    ) -> Result<Result<Self, FamilyError>, DerivandError> {
        let xs = stencil(x, delta, n);
        let ys = xs.iter().map(|&xi| f.value(xi)).collect::<Result<Vec<_>, _>>()?;
        Ok(StencilSamples::new(xs, ys))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Derivand(#[from] DerivandError),
    #[error("parameter index {index} out of range for arity {arity}")]
    ParamIndex { index: usize, arity: usize },
}

/// Pre-limit quotient: component `param_index` of the stencil fit at `x` with step `delta`.
pub fn param_quotient<D: Derivand + ?Sized>(
    family: &Family,
    param_index: usize,
    f: &D,
    x: f64,
    delta: f64,
) -> Result<Complex64, QuotientError> {
    let arity = family.arity();
    if param_index >= arity {
        return Err(QuotientError::ParamIndex {
            index: param_index,
            arity,
        });
    }
    let samples = StencilSamples::sample(f, x, delta, arity)??;
    Ok(solve_stencil(family, &samples)?.params[param_index])
}
