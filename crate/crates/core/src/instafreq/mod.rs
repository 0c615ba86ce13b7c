//! Instantaneous frequency from chirp waveforms and complex wave functions,
//! and the amplitude spectrum built from a frequency trace.
//!
//! For a real chirp the linear-chirp family gives three traces ω₁, ω₀, φ
//! and the frequency is `ω(x) = ω₁(x)·x + ω₀(x)` in cycles per unit of x.
//! Arcsine linearization cannot tell a rising phase from the mirrored
//! falling one, so past every crest the fitted parameters come out as the
//! twin `(−ω₁, −ω₀, π−φ)`; [`instantaneous_frequency`] resolves that sign.

mod fourier;
mod spectrum;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::derivand::Derivand;
use crate::derivators::{Family, StencilSamples};
use crate::gcalc::{
    derivative_trace_with, validate_grid, Estimate, GcalcError, GeneralizedDerivativeRequest,
    InstParamTrace,
};
use crate::numerics::{estimate_limit, LimitPolicy};
use crate::par::Execution;
use crate::sigio::{fmt_num, write_table, SigioError};

pub use fourier::{fourier_derivative, fourier_derivative_with, wavefunction_reconstruct};
pub use spectrum::{amplitude_spectrum, AmplitudeSpectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstafreqError {
    #[error(transparent)]
    Gcalc(#[from] GcalcError),
    #[error("traces do not share a grid")]
    GridMismatch,
    #[error("frequency trace has no usable points")]
    EmptyTrace,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("bin width must be positive and finite, got {0}")]
    InvalidBinWidth(f64),
}

/// The three linear-chirp traces on a common grid. Points where the
/// arcsine linearization fails are holes in all three; a limit that misses
/// tolerance for one parameter only leaves a hole in that trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpDerivatives {
    pub omega1: InstParamTrace,
    pub omega0: InstParamTrace,
    pub phi: InstParamTrace,
}

impl ChirpDerivatives {
    pub fn grid(&self) -> &[f64] {
        self.omega1.grid()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChirpOptions {
    /// Uses `arcsin(2f(x+Δ))` in place of `2·arcsin(f(x+Δ))` in the ω₁
    /// quotient. The literal form has no finite limit on ordinary chirps;
    /// it exists to show that.
    pub literal_k1: bool,
    pub exec: Execution,
}

/// Limit policy suited to the chirp quotients.
///
/// ω₁ is a second difference of phases divided by `Δ²`, so rounding caps
/// its accuracy near `1e-8` relative; the general default asks for `1e-9`
/// and would leave most points as holes. The step is not scaled with `|x|`
/// because the phase of a chirp turns faster, not slower, far from the origin.
pub fn chirp_policy() -> LimitPolicy {
    LimitPolicy {
        delta0: 1e-2,
        scale_with_x: false,
        ratio: 0.5,
        max_stages: 8,
        rtol: 1e-7,
        atol: 1e-8,
    }
}

/// ω₁, ω₀ and φ traces of a real chirp `f` over `grid`.
pub fn chirp_derivatives<D: Derivand + ?Sized>(
    f: &D,
    grid: &[f64],
    policy: &LimitPolicy,
) -> Result<ChirpDerivatives, InstafreqError> {
    chirp_derivatives_with(f, grid, policy, ChirpOptions::default())
}

pub fn chirp_derivatives_with<D: Derivand + ?Sized>(
    f: &D,
    grid: &[f64],
    policy: &LimitPolicy,
    opts: ChirpOptions,
) -> Result<ChirpDerivatives, InstafreqError> {
    validate_grid(grid)?;
    let family = Family::LINEAR_CHIRP;
    let trace = |k: usize| -> Result<InstParamTrace, GcalcError> {
        let req = GeneralizedDerivativeRequest::new(f, family, k, *policy)?;
        derivative_trace_with(&req, grid, opts.exec)
    };
    let mut omega1 = if opts.literal_k1 {
        policy.validate().map_err(GcalcError::from)?;
        let results = opts
            .exec
            .map_indices(grid.len(), |i| literal_omega1(f, grid[i], policy));
        InstParamTrace::from_results(grid.to_vec(), results)
    } else {
        trace(0)?
    };
    let mut omega0 = trace(1)?;
    let mut phi = trace(2)?;

    // A failed linearization breaks the shared phase fit: a hole in every trace.
    let mut shared = BTreeMap::new();
    for t in [&omega1, &omega0, &phi] {
        for i in t.holes() {
            if let Some(e @ GcalcError::Stencil { .. }) = t.hole_reason(i) {
                shared.entry(i).or_insert_with(|| e.clone());
            }
        }
    }
    for (i, why) in shared {
        omega1.punch_hole(i, why.clone());
        omega0.punch_hole(i, why.clone());
        phi.punch_hole(i, why);
    }
    Ok(ChirpDerivatives { omega1, omega0, phi })
}

fn literal_omega1<D: Derivand + ?Sized>(
    f: &D,
    x: f64,
    policy: &LimitPolicy,
) -> Result<Estimate, GcalcError> {
    let quotient = |delta: f64| -> Result<Complex64, GcalcError> {
        let s = StencilSamples::sample(f, x, delta, 3)?.map_err(GcalcError::from)?;
        let k0 = s.ys[0].asin();
        let k1 = (2.0 * s.ys[1]).asin();
        let k2 = s.ys[2].asin();
        Ok((k0 - k1 + k2) / (2.0 * PI * delta * delta))
    };
    let r = estimate_limit(quotient, policy, x).map_err(|e| match e {
        crate::numerics::LimitError::Evaluation { source, .. } => source,
        crate::numerics::LimitError::Policy(p) => p.into(),
        crate::numerics::LimitError::NoNodes => GcalcError::EmptyGrid,
    })?;
    if !r.converged {
        return Err(GcalcError::NotConverged {
            x,
            value: r.value,
            est_error: r.est_error,
        });
    }
    Ok(Estimate {
        value: r.value,
        est_error: r.est_error,
    })
}

/// How the sign of `ω₁x + ω₀` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignMode {
    /// Per-point sign chosen to continue the trace smoothly, then the whole
    /// trace negated if it is mostly negative. Genuine sign changes of ω
    /// survive, so values may be negative.
    #[default]
    Continuity,
    /// Pointwise `|ω₁x + ω₀|`.
    Absolute,
}

impl std::str::FromStr for SignMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "continuity" => Ok(SignMode::Continuity),
            "absolute" => Ok(SignMode::Absolute),
            other => Err(format!("unknown sign mode '{other}' (continuity|absolute)")),
        }
    }
}

/// A real frequency trace, in cycles per unit of x.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTrace {
    grid: Vec<f64>,
    omega: Vec<f64>,
    holes: BTreeMap<usize, String>,
}

impl FrequencyTrace {
    /// `omega` entries at `holes` are replaced by NaN.
    pub fn new(grid: Vec<f64>, mut omega: Vec<f64>, holes: BTreeMap<usize, String>) -> Result<Self, InstafreqError> {
        if grid.len() != omega.len() {
            return Err(InstafreqError::GridMismatch);
        }
        validate_grid(&grid)?;
        for &i in holes.keys() {
            omega[i] = f64::NAN;
        }
        Ok(FrequencyTrace { grid, omega, holes })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn is_hole(&self, i: usize) -> bool {
        self.holes.contains_key(&i)
    }

    pub fn holes(&self) -> Vec<usize> {
        self.holes.keys().copied().collect()
    }

    pub fn hole_reason(&self, i: usize) -> Option<&str> {
        self.holes.get(&i).map(String::as_str)
    }

    /// `(x, ω)` at every non-hole point.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len())
            .filter(|&i| !self.is_hole(i))
            .map(|i| (self.grid[i], self.omega[i]))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SigioError> {
        self.write_to(std::fs::File::create(path)?)
    }

    /// CSV with header `x,omega,hole`.
    pub fn write_to<W: Write>(&self, w: W) -> Result<(), SigioError> {
        let rows = (0..self.len()).map(|i| {
            vec![
                fmt_num(self.grid[i]),
                fmt_num(self.omega[i]),
                if self.is_hole(i) { "1" } else { "0" }.to_string(),
            ]
        });
        write_table(w, &["x", "omega", "hole"], rows)
    }

    /// Copy with holes filled by monotone cubic (Fritsch–Carlson)
    /// interpolation between the neighbouring valid points, and the list of
    /// filled indices. Holes before the first or after the last valid point
    /// stay holes.
    pub fn fill_holes_monotone(&self) -> (FrequencyTrace, Vec<usize>) {
        let pts: Vec<(f64, f64)> = self.points().collect();
        let mut out = self.clone();
        let mut filled = Vec::new();
        if pts.len() < 2 {
            return (out, filled);
        }
        let slopes = pchip_slopes(&pts);
        for i in self.holes() {
            let x = self.grid[i];
            let k = pts.partition_point(|p| p.0 < x);
            if k == 0 || k == pts.len() {
                continue;
            }
            let (x0, y0) = pts[k - 1];
            let (x1, y1) = pts[k];
            let h = x1 - x0;
            let t = (x - x0) / h;
            let (t2, t3) = (t * t, t * t * t);
            out.omega[i] = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                + (t3 - 2.0 * t2 + t) * h * slopes[k - 1]
                + (-2.0 * t3 + 3.0 * t2) * y1
                + (t3 - t2) * h * slopes[k];
            out.holes.remove(&i);
            filled.push(i);
        }
        (out, filled)
    }
}

fn pchip_slopes(pts: &[(f64, f64)]) -> Vec<f64> {
    let n = pts.len();
    let secants: Vec<f64> = pts
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = secants[0];
    m[n - 1] = secants[n - 2];
    for i in 1..n - 1 {
        let (a, b) = (secants[i - 1], secants[i]);
        m[i] = if a * b <= 0.0 { 0.0 } else { 2.0 * a * b / (a + b) };
    }
    m
}

/// Below this magnitude `ω₁x + ω₀` has no usable sign in continuity mode.
const ZERO_CROSSING_EPS: f64 = 1e-9;

/// `ω(x) = ω₁(x)·x + ω₀(x)` with the branch sign resolved per `sign_mode`.
pub fn instantaneous_frequency(
    cd: &ChirpDerivatives,
    sign_mode: SignMode,
) -> Result<FrequencyTrace, InstafreqError> {
    let grid = cd.omega1.grid();
    if cd.omega0.grid() != grid || cd.phi.grid() != grid {
        return Err(InstafreqError::GridMismatch);
    }
    let mut holes = BTreeMap::new();
    let mut raw = vec![f64::NAN; grid.len()];
    for (i, &x) in grid.iter().enumerate() {
        for t in [&cd.omega1, &cd.omega0] {
            if let Some(why) = t.hole_reason(i) {
                holes.entry(i).or_insert_with(|| why.to_string());
            }
        }
        if !holes.contains_key(&i) {
            raw[i] = (cd.omega1.values()[i] * x + cd.omega0.values()[i]).re;
        }
    }
    let omega = match sign_mode {
        SignMode::Absolute => raw.iter().map(|v| v.abs()).collect(),
        SignMode::Continuity => {
            for (i, v) in raw.iter().enumerate() {
                if !holes.contains_key(&i) && v.abs() < ZERO_CROSSING_EPS {
                    holes.insert(i, "zero crossing: sign of ω undefined".to_string());
                }
            }
            continue_signs(grid, &raw, &holes)
        }
    };
    FrequencyTrace::new(grid.to_vec(), omega, holes)
}

fn continue_signs(grid: &[f64], raw: &[f64], holes: &BTreeMap<usize, String>) -> Vec<f64> {
    let mut out = raw.to_vec();
    let mut placed: Vec<(f64, f64)> = Vec::new();
    for i in 0..raw.len() {
        if holes.contains_key(&i) {
            continue;
        }
        let v = raw[i];
        let chosen = match placed.as_slice() {
            [] => v,
            [.., (xa, ya), (xb, yb)] => {
                let pred = yb + (yb - ya) / (xb - xa) * (grid[i] - xb);
                if (v - pred).abs() <= (-v - pred).abs() { v } else { -v }
            }
            [(_, y)] => {
                if (v - y).abs() <= (-v - y).abs() { v } else { -v }
            }
        };
        out[i] = chosen;
        placed.push((grid[i], chosen));
    }
    let negative = placed.iter().filter(|p| p.1 < 0.0).count();
    if 2 * negative > placed.len() {
        for (i, v) in out.iter_mut().enumerate() {
            if !holes.contains_key(&i) {
                *v = -*v;
            }
        }
    }
    out
}
