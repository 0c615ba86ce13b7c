use num_complex::Complex64;
use thiserror::Error;

/// Configuration of the numerical Δ → 0 limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPolicy {
    /// Initial step, in the units of x.
    pub delta0: f64,
    /// When set, the initial step used at `x` is `delta0 * max(1, |x|)`.
    pub scale_with_x: bool,
    /// Step shrink factor per stage, in (0, 1).
    pub ratio: f64,
    pub max_stages: usize,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for LimitPolicy {
    fn default() -> Self {
        LimitPolicy {
            delta0: 1e-2,
            scale_with_x: true,
            ratio: 0.5,
            max_stages: 8,
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

impl LimitPolicy {
    /// Fixed (not x-scaled) initial step.
    pub fn with_fixed_step(delta0: f64) -> Self {
        LimitPolicy {
            delta0,
            scale_with_x: false,
            ..LimitPolicy::default()
        }
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        if !(self.delta0 > 0.0 && self.delta0.is_finite()) {
            return Err(PolicyError("delta0 must be positive and finite"));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(PolicyError("ratio must lie in (0, 1)"));
        }
        if self.max_stages < 2 {
            return Err(PolicyError("max_stages must be at least 2"));
        }
        if !(self.rtol >= 0.0 && self.atol >= 0.0) || (self.rtol == 0.0 && self.atol == 0.0) {
            return Err(PolicyError("rtol and atol must be nonnegative and not both zero"));
        }
        Ok(())
    }

    /// Initial step used at base point `x`.
    pub fn initial_step(&self, x: f64) -> f64 {
        if self.scale_with_x {
            self.delta0 * x.abs().max(1.0)
        } else {
            self.delta0
        }
    }

    /// Geometric node sequence `Δ_k = Δ0 · ratio^k` at base point `x`.
    pub fn nodes(&self, x: f64) -> Vec<f64> {
        let d0 = self.initial_step(x);
        (0..self.max_stages)
            .map(|k| d0 * self.ratio.powi(k as i32))
            .collect()
    }

    pub fn tolerance(&self, value: Complex64) -> f64 {
        self.atol.max(self.rtol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("invalid limit policy: {0}")]
pub struct PolicyError(pub &'static str);

#[derive(Debug, Clone, PartialEq)]
pub struct LimitResult {
    pub value: Complex64,
    pub est_error: f64,
    pub converged: bool,
    pub stages_used: usize,
    /// Smallest correction seen in each tableau row, from the second row on.
    pub stage_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError<E> {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("evaluation failed at step {delta}: {source}")]
    Evaluation { delta: f64, source: E },
    #[error("no extrapolation nodes")]
    NoNodes,
}

const SETTLED_FRACTION: f64 = 1e-2;
const DIVERGENCE_FACTOR: f64 = 10.0;
/// Rows before this hold too few extrapolants for agreement at the
/// requested tolerance to mean much; they must agree ten times better.
const LATE_ROW: usize = 3;
const EARLY_TOLERANCE_FACTOR: f64 = 0.1;
/// Two samples cannot tell a limit from a stationary point of `g`, so the
/// first row only accepts near-exact agreement.
const FIRST_ROW_TOLERANCE_FACTOR: f64 = 1e-3;

/// Extrapolates `g(Δ)` to `Δ = 0` over the policy's geometric nodes at base point `x`.
pub fn estimate_limit<E, G>(g: G, policy: &LimitPolicy, x: f64) -> Result<LimitResult, LimitError<E>>
where
    G: FnMut(f64) -> Result<Complex64, E>,
{
    policy.validate()?;
    extrapolate_nodes(g, &policy.nodes(x), policy)
}

/// Neville extrapolation to zero over an explicit, strictly shrinking node list.
///
/// Row `k` of the tableau adds node `Δ_k`; entry `T[k][j]` is the value at 0 of
/// the polynomial through nodes `k-j ..= k`. Every entry gets the error
/// estimate `max(|T[k][j] - T[k][j-1]|, |T[k][j] - T[k-1][j-1]|)` and the
/// entry with the smallest estimate wins, so rows polluted by large early
/// steps cannot spoil later ones. Converges at the first row whose best
/// entry meets tolerance and matches the previous row's best entry to the
/// same tolerance. Agreement in the first three rows is too often a
/// coincidence, so there the tolerance is tightened tenfold. Stops
/// unconverged once the per-row correction, after dropping below 1% of the
/// value, has grown two rows in a row (past the first four) to more than ten
/// times its smallest size.
pub fn extrapolate_nodes<E, G>(
    mut g: G,
    nodes: &[f64],
    policy: &LimitPolicy,
) -> Result<LimitResult, LimitError<E>>
where
    G: FnMut(f64) -> Result<Complex64, E>,
{
    if nodes.is_empty() {
        return Err(LimitError::NoNodes);
    }
    let mut prev_row: Vec<Complex64> = Vec::with_capacity(nodes.len());
    let mut best = Complex64::new(f64::NAN, f64::NAN);
    let mut best_err = f64::INFINITY;
    let mut stage_errors = Vec::new();
    let mut growth_streak = 0;
    let mut last_row_err = f64::INFINITY;
    let mut min_row_err = f64::INFINITY;
    // Growth only counts as divergence once the tableau has settled to a
    // couple of digits; before that, large early steps are still washing out.
    let mut settled = false;

    // Entry with the smallest estimate in the previous row.
    let mut prev_row_best = Complex64::new(f64::NAN, f64::NAN);

    for (k, &delta) in nodes.iter().enumerate() {
        let gk = g(delta).map_err(|source| LimitError::Evaluation { delta, source })?;
        if !(gk.re.is_finite() && gk.im.is_finite()) {
            return Ok(diverged(best, best_err, k + 1, stage_errors));
        }
        let mut row = Vec::with_capacity(k + 1);
        row.push(gk);
        if k == 0 {
            best = gk;
            prev_row_best = gk;
        }
        let mut row_err = f64::INFINITY;
        let mut row_best = gk;
        for j in 1..=k {
            let num = nodes[k];
            let den = nodes[k - j] - nodes[k];
            let t = row[j - 1] + (row[j - 1] - prev_row[j - 1]) * (num / den);
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Ok(diverged(best, best_err, k + 1, stage_errors));
            }
            let err = (t - row[j - 1]).norm().max((t - prev_row[j - 1]).norm());
            if err < row_err {
                row_err = err;
                row_best = t;
            }
            if err <= best_err {
                best_err = err;
                best = t;
            }
            row.push(t);
        }
        if k >= 1 {
            stage_errors.push(row_err);
            let tol = policy.tolerance(row_best);
            let drift = (row_best - prev_row_best).norm();
            let tol = match k {
                1 => FIRST_ROW_TOLERANCE_FACTOR * tol,
                k if k < LATE_ROW => EARLY_TOLERANCE_FACTOR * tol,
                _ => tol,
            };
            if row_err <= tol && drift <= tol {
                return Ok(LimitResult {
                    value: row_best,
                    est_error: row_err.max(drift),
                    converged: true,
                    stages_used: k + 1,
                    stage_errors,
                });
            }
            if k > LATE_ROW && row_err > last_row_err {
                growth_streak += 1;
            } else {
                growth_streak = 0;
            }
            if row_err <= SETTLED_FRACTION * best.norm().max(1.0) {
                settled = true;
            }
            last_row_err = row_err;
            min_row_err = min_row_err.min(row_err);
            prev_row_best = row_best;
            if settled && growth_streak >= 2 && row_err > DIVERGENCE_FACTOR * min_row_err {
                return Ok(LimitResult {
                    value: best,
                    est_error: best_err,
                    converged: false,
                    stages_used: k + 1,
                    stage_errors,
                });
            }
        }
        prev_row = row;
    }
    Ok(LimitResult {
        value: best,
        est_error: best_err,
        converged: false,
        stages_used: nodes.len(),
        stage_errors,
    })
}

fn diverged(value: Complex64, err: f64, stages: usize, stage_errors: Vec<f64>) -> LimitResult {
    LimitResult {
        value,
        est_error: if err.is_finite() { err } else { f64::INFINITY },
        converged: false,
        stages_used: stages,
        stage_errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn policy(delta0: f64) -> LimitPolicy {
        LimitPolicy::with_fixed_step(delta0)
    }

    #[test]
    fn newton_quotient_of_square() {
        let r = estimate_limit(
            |d: f64| Ok::<_, Infallible>(c(((1.0 + d).powi(2) - 1.0) / d)),
            &policy(0.1),
            1.0,
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - c(2.0)).norm() < 1e-10);
        assert!(r.est_error < 1e-10);
    }

    #[test]
    fn constant_converges_at_second_stage() {
        let r = estimate_limit(|_| Ok::<_, Infallible>(c(7.0)), &policy(0.1), 0.0).unwrap();
        assert!(r.converged);
        assert_eq!(r.stages_used, 2);
        assert_eq!(r.value, c(7.0));
    }

    #[test]
    fn reciprocal_diverges() {
        let r = estimate_limit(|d: f64| Ok::<_, Infallible>(c(1.0 / d)), &policy(0.1), 0.0).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn non_finite_sample_is_a_diverged_result() {
        let r = estimate_limit(
            |d: f64| Ok::<_, Infallible>(if d < 0.02 { c(f64::NAN) } else { c(1.0 + d.sqrt()) }),
            &policy(0.1),
            0.0,
        )
        .unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn evaluation_error_names_the_step() {
        let r = estimate_limit(
            |d: f64| if d < 0.06 { Err("boom") } else { Ok(c(d)) },
            &policy(0.1),
            0.0,
        );
        assert_eq!(
            r,
            Err(LimitError::Evaluation {
                delta: 0.05,
                source: "boom"
            })
        );
    }

    #[test]
    fn invalid_policies() {
        let bad = [
            LimitPolicy { delta0: 0.0, ..LimitPolicy::default() },
            LimitPolicy { ratio: 1.0, ..LimitPolicy::default() },
            LimitPolicy { max_stages: 1, ..LimitPolicy::default() },
            LimitPolicy { rtol: 0.0, atol: 0.0, ..LimitPolicy::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn default_step_scales_with_x() {
        let p = LimitPolicy::default();
        assert_eq!(p.initial_step(0.5), 1e-2);
        assert_eq!(p.initial_step(-4.0), 4e-2);
    }

    #[test]
    fn sinc_refinement_is_monotone_at_the_end() {
        let r = estimate_limit(|d: f64| Ok::<_, Infallible>(c(d.sin() / d)), &policy(0.5), 0.0)
            .unwrap();
        assert!(r.converged);
        assert!((r.value - c(1.0)).norm() < 1e-10);
        let n = r.stage_errors.len();
        assert!(n >= 2);
        assert!(r.stage_errors[n - 1] <= r.stage_errors[n - 2], "{:?}", r.stage_errors);
    }
}
