//! Numerical machinery standing in for symbolic limits: geometric step
//! sequences with Neville extrapolation to zero, branch unwrapping for
//! multivalued inverses, and forward stencils.

mod limit;

use num_complex::Complex64;

pub use limit::{
    estimate_limit, extrapolate_nodes, LimitError, LimitPolicy, LimitResult, PolicyError,
};

/// Which component of a complex value carries the periodic phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseAxis {
    /// Arcsine/arccosine/arctangent outputs: period on the real part.
    Real,
    /// Logarithms: period on the imaginary part.
    Imag,
}

/// Unwraps the real parts of `values` by multiples of `period`.
pub fn unwrap_branch(values: &[Complex64], period: f64) -> Vec<Complex64> {
    unwrap_branch_on(values, period, PhaseAxis::Real)
}

/// Adds integer multiples of `period` along `axis` so that consecutive
/// outputs differ by at most `period / 2` on that axis. The first entry is
/// returned unchanged.
pub fn unwrap_branch_on(values: &[Complex64], period: f64, axis: PhaseAxis) -> Vec<Complex64> {
    assert!(period > 0.0, "period must be positive");
    let phase = |z: Complex64| match axis {
        PhaseAxis::Real => z.re,
        PhaseAxis::Imag => z.im,
    };
    let mut out: Vec<Complex64> = Vec::with_capacity(values.len());
    for &v in values {
        let adjusted = match out.last() {
            None => v,
            Some(&prev) => {
                let m = ((phase(prev) - phase(v)) / period).round();
                shift(v, m * period, axis)
            }
        };
        out.push(adjusted);
    }
    out
}

/// Shifts `z` by `amount` along `axis`.
pub fn shift(z: Complex64, amount: f64, axis: PhaseAxis) -> Complex64 {
    match axis {
        PhaseAxis::Real => Complex64::new(z.re + amount, z.im),
        PhaseAxis::Imag => Complex64::new(z.re, z.im + amount),
    }
}

/// `[x, x+Δ, …, x+(count-1)Δ]`. Negative `delta` gives a backward stencil.
pub fn stencil(x: f64, delta: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| x + k as f64 * delta).collect()
}
