use std::f64::consts::PI;

use num_complex::Complex64;

use super::InstafreqError;
use crate::derivand::Derivand;
use crate::derivators::{Family, FamilyError};
use crate::gcalc::{
    derivative_trace_with, reconstruct, validate_grid, GcalcError, GeneralizedDerivativeRequest,
    InstParamTrace,
};
use crate::numerics::LimitPolicy;
use crate::par::Execution;

/// Samples smaller than this in modulus leave the logarithm undefined.
const MIN_MODULUS: f64 = 1e-12;

/// ω and b traces of `ψ(x) = e^{−iω(x)x + b(x)}`.
///
/// Per point, `b` comes from the principal logarithm at `x`, so its
/// imaginary part is only fixed modulo 2π. The trace is made continuous
/// along the grid and pinned so that the grid point nearest `x = 0` keeps
/// its principal value.
pub fn fourier_derivative<D: Derivand + ?Sized>(
    psi: &D,
    grid: &[f64],
    policy: &LimitPolicy,
) -> Result<(InstParamTrace, InstParamTrace), InstafreqError> {
    fourier_derivative_with(psi, grid, policy, Execution::default())
}

pub fn fourier_derivative_with<D: Derivand + ?Sized>(
    psi: &D,
    grid: &[f64],
    policy: &LimitPolicy,
    exec: Execution,
) -> Result<(InstParamTrace, InstParamTrace), InstafreqError> {
    validate_grid(grid)?;
    let family = Family::FOURIER_KERNEL;
    let omega_req = GeneralizedDerivativeRequest::new(psi, family, 0, *policy)?;
    let b_req = GeneralizedDerivativeRequest::new(psi, family, 1, *policy)?;
    let mut omega = derivative_trace_with(&omega_req, grid, exec)?;
    let mut b = derivative_trace_with(&b_req, grid, exec)?;

    for (i, &x) in grid.iter().enumerate() {
        let why = match psi.value(x) {
            Ok(v) if v.norm() < MIN_MODULUS => Some(GcalcError::Stencil {
                x,
                source: FamilyError::LogUndefined { x },
            }),
            Ok(_) => omega.hole_reason(i).or(b.hole_reason(i)).cloned(),
            Err(e) => Some(e.into()),
        };
        if let Some(why) = why {
            omega.punch_hole(i, why.clone());
            b.punch_hole(i, why);
        }
    }
    Ok((omega, unwrap_b(b)))
}

fn unwrap_b(b: InstParamTrace) -> InstParamTrace {
    let valid: Vec<usize> = (0..b.len()).filter(|&i| !b.is_hole(i)).collect();
    let Some(&anchor) = valid
        .iter()
        .min_by(|&&i, &&j| b.grid()[i].abs().total_cmp(&b.grid()[j].abs()))
    else {
        return b;
    };
    let period = 2.0 * PI;
    let mut shifts = vec![0.0; b.len()];
    let mut prev: Option<f64> = None;
    for &i in &valid {
        let im = b.values()[i].im;
        let m = match prev {
            None => 0.0,
            Some(p) => ((p - im) / period).round(),
        };
        shifts[i] = m * period;
        prev = Some(im + shifts[i]);
    }
    let pin = shifts[anchor];
    b.map(|x, v| {
        let i = b.index_of(x).expect("own grid point");
        Complex64::new(v.re, v.im + shifts[i] - pin)
    })
}

/// `e^{−iω(x)x + b(x)}` from the two traces at grid point `x`.
pub fn wavefunction_reconstruct(
    omega: &InstParamTrace,
    b: &InstParamTrace,
    x: f64,
) -> Result<Complex64, InstafreqError> {
    Ok(reconstruct(&Family::FOURIER_KERNEL, &[omega.clone(), b.clone()], x)?)
}
