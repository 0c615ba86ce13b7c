use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Family, FamilyError, FamilyId, StencilSamples};
use crate::numerics::{unwrap_branch_on, PhaseAxis};

/// Below this, `1 - f²` counts as zero and arcsine/arccosine linearization is singular.
pub(crate) const FOLD_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StencilSolution {
    pub params: Vec<Complex64>,
    /// Set when a stencil point had two nearly equidistant branch candidates;
    /// the one closest to the continued phase was taken.
    pub ambiguous_branch: bool,
}

/// Solves the family's N-point system through `samples` exactly.
pub fn solve_stencil(family: &Family, s: &StencilSamples) -> Result<StencilSolution, FamilyError> {
    let n = family.arity();
    if s.xs.len() != n || s.ys.len() != n {
        return Err(FamilyError::ArityMismatch {
            expected: n,
            got: s.xs.len(),
        });
    }
    let exact = |params| StencilSolution {
        params,
        ambiguous_branch: false,
    };
    match family.id() {
        FamilyId::Linear | FamilyId::Polynomial(_) => {
            let mut coeffs = polynomial_coefficients(&s.xs, &s.ys)?;
            coeffs.reverse();
            Ok(exact(coeffs))
        }
        FamilyId::Exponential => {
            let logs = log_linearize(s)?;
            let [a, b] = line(&s.xs, &logs)?;
            Ok(exact(vec![a, b]))
        }
        FamilyId::FourierKernel => {
            let logs = log_linearize(s)?;
            let [slope, b] = line(&s.xs, &logs)?;
            // ln y = -iωx + b
            Ok(exact(vec![Complex64::i() * slope, b]))
        }
        FamilyId::Sine | FamilyId::Cosine | FamilyId::Tangent => {
            let (phases, ambiguous) = trig_linearize(family.id(), s)?;
            let [omega, phi] = line(&s.xs, &phases)?;
            Ok(StencilSolution {
                params: vec![omega, phi],
                ambiguous_branch: ambiguous,
            })
        }
        FamilyId::LinearChirp => {
            let (phases, ambiguous) = trig_linearize(family.id(), s)?;
            // phase = π·ω1·x² + 2π·ω0·x + φ
            let c = polynomial_coefficients(&s.xs, &phases)?;
            Ok(StencilSolution {
                params: vec![c[2] / PI, c[1] / (2.0 * PI), c[0]],
                ambiguous_branch: ambiguous,
            })
        }
    }
}

/// Monomial coefficients (ascending powers) of the interpolating polynomial,
/// via Newton divided differences.
pub fn polynomial_coefficients(xs: &[f64], ys: &[Complex64]) -> Result<Vec<Complex64>, FamilyError> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let h = xs[i] - xs[i - level];
            if h == 0.0 {
                return Err(FamilyError::SingularStencil);
            }
            dd[i] = (dd[i] - dd[i - 1]) / h;
        }
    }
    // Expand c_0 + (x-x_0)(c_1 + (x-x_1)(c_2 + …)) from the innermost term out.
    let mut poly = vec![Complex64::new(0.0, 0.0); n];
    poly[0] = dd[n - 1];
    for k in (0..n - 1).rev() {
        // poly <- poly·(x - x_k) + dd[k]; poly holds n - 1 - k coefficients.
        let len = n - 1 - k;
        for j in (0..=len).rev() {
            let shifted = if j > 0 { poly[j - 1] } else { Complex64::new(0.0, 0.0) };
            let kept = if j < len { poly[j] * xs[k] } else { Complex64::new(0.0, 0.0) };
            poly[j] = shifted - kept;
        }
        poly[0] += dd[k];
    }
    Ok(poly)
}

fn line(xs: &[f64], ys: &[Complex64]) -> Result<[Complex64; 2], FamilyError> {
    let c = polynomial_coefficients(xs, ys)?;
    Ok([c[1], c[0]])
}

fn log_linearize(s: &StencilSamples) -> Result<Vec<Complex64>, FamilyError> {
    let logs = s
        .xs
        .iter()
        .zip(&s.ys)
        .map(|(&x, &y)| {
            if y.norm() == 0.0 {
                Err(FamilyError::LogUndefined { x })
            } else {
                Ok(y.ln())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(unwrap_branch_on(&logs, 2.0 * PI, PhaseAxis::Imag))
}

/// Inverse-trig phases along the stencil: principal value at the base
/// point, then for each further point the branch candidate nearest to the
/// phase extrapolated from the points already placed.
fn trig_linearize(id: FamilyId, s: &StencilSamples) -> Result<(Vec<Complex64>, bool), FamilyError> {
    let y0 = s.ys[0];
    let has_fold = matches!(id, FamilyId::Sine | FamilyId::Cosine | FamilyId::LinearChirp);
    if has_fold && (Complex64::new(1.0, 0.0) - y0 * y0).norm() < FOLD_EPS {
        return Err(FamilyError::LinearizationSingular { x: s.xs[0] });
    }
    let principal = |y: Complex64| match id {
        FamilyId::Cosine => real_if_possible(y, |v| v.acos(), |z| z.acos()),
        FamilyId::Tangent => real_if_possible(y, |v| v.atan(), |z| z.atan()),
        _ => real_if_possible(y, |v| v.asin(), |z| z.asin()),
    };
    let mut phases = Vec::with_capacity(s.ys.len());
    let mut ambiguous = false;
    phases.push(principal(y0));
    for k in 1..s.ys.len() {
        let prediction = if k == 1 {
            phases[0]
        } else {
            let slope = (phases[k - 1] - phases[k - 2]) / (s.xs[k - 1] - s.xs[k - 2]);
            phases[k - 1] + slope * (s.xs[k] - s.xs[k - 1])
        };
        let a = principal(s.ys[k]);
        let (period, bases): (f64, Vec<Complex64>) = match id {
            FamilyId::Tangent => (PI, vec![a]),
            FamilyId::Cosine => (2.0 * PI, vec![a, -a]),
            _ => (2.0 * PI, vec![a, Complex64::new(PI, 0.0) - a]),
        };
        let (best, runner_up) = nearest_candidates(&bases, period, prediction);
        if runner_up.1 <= 2.0 * best.1 + 1e-12 {
            ambiguous = true;
        }
        phases.push(best.0);
    }
    Ok((phases, ambiguous))
}

fn real_if_possible(
    y: Complex64,
    real_fn: impl Fn(f64) -> f64,
    complex_fn: impl Fn(Complex64) -> Complex64,
) -> Complex64 {
    if y.im == 0.0 {
        let v = real_fn(y.re);
        if v.is_finite() {
            return Complex64::new(v, 0.0);
        }
    }
    complex_fn(y)
}

// Returns the nearest and second-nearest candidate `base + m·period` with their distances.
fn nearest_candidates(
    bases: &[Complex64],
    period: f64,
    prediction: Complex64,
) -> ((Complex64, f64), (Complex64, f64)) {
    let mut best = (prediction, f64::INFINITY);
    let mut second = (prediction, f64::INFINITY);
    for &b in bases {
        let m0 = ((prediction.re - b.re) / period).round();
        for dm in -1..=1 {
            let cand = Complex64::new(b.re + (m0 + dm as f64) * period, b.im);
            let d = (cand - prediction).norm();
            if d < best.1 {
                second = best;
                best = (cand, d);
            } else if d < second.1 {
                second = (cand, d);
            }
        }
    }
    (best, second)
}
