//! Things that can be differentiated: expressions, closures and sampled signals.

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("derivand undefined at x = {x}: {message}")]
pub struct DerivandError {
    pub x: f64,
    pub message: String,
}

impl DerivandError {
    pub fn new(x: f64, message: impl Into<String>) -> Self {
        DerivandError {
            x,
            message: message.into(),
        }
    }
}

/// Uniform sampling grid of a sampled derivand: point `k` is `x0 + k·dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub x0: f64,
    pub dx: f64,
    pub len: usize,
}

impl Sampling {
    /// Index of the grid point at `x`, if `x` is one (to 1e-9 of the spacing).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let k = ((x - self.x0) / self.dx).round();
        if k < 0.0 || k >= self.len as f64 {
            return None;
        }
        let snapped = self.x0 + k * self.dx;
        ((x - snapped).abs() <= 1e-9 * self.dx).then_some(k as usize)
    }
}

/// A function `f: ℝ → ℂ` that generalized derivatives can be taken of.
pub trait Derivand: Sync {
    fn value(&self, x: f64) -> Result<Complex64, DerivandError>;

    /// `Some` for sampled derivands, whose stencils must stay on the grid.
    fn sampling(&self) -> Option<Sampling> {
        None
    }
}

impl Derivand for Expr {
    fn value(&self, x: f64) -> Result<Complex64, DerivandError> {
        self.eval_real(x)
            .map_err(|e| DerivandError::new(x, e.to_string()))
    }
}

impl<F> Derivand for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    fn value(&self, x: f64) -> Result<Complex64, DerivandError> {
        Ok(self(x))
    }
}

/// Adapts a real-valued closure.
#[derive(Debug, Clone, Copy)]
pub struct RealFn<F>(pub F);

impl<F> Derivand for RealFn<F>
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, x: f64) -> Result<Complex64, DerivandError> {
        Ok(Complex64::new((self.0)(x), 0.0))
    }
}

pub fn real<F: Fn(f64) -> f64 + Sync>(f: F) -> RealFn<F> {
    RealFn(f)
}
