use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use super::{Estimate, GcalcError};
use crate::sigio::{fmt_num, write_table, SigioError};

/// Instantaneous parameter values over a grid. Hole entries hold NaN and
/// keep the reason the point failed.
#[derive(Debug, Clone, PartialEq)]
pub struct InstParamTrace {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    est_errors: Vec<f64>,
    holes: BTreeMap<usize, GcalcError>,
}

const NAN: Complex64 = Complex64::new(f64::NAN, f64::NAN);

impl InstParamTrace {
    pub(crate) fn from_results(grid: Vec<f64>, results: Vec<Result<Estimate, GcalcError>>) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        let mut est_errors = Vec::with_capacity(grid.len());
        let mut holes = BTreeMap::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(e) => {
                    values.push(e.value);
                    est_errors.push(e.est_error);
                }
                Err(err) => {
                    values.push(NAN);
                    est_errors.push(f64::NAN);
                    holes.insert(i, err);
                }
            }
        }
        InstParamTrace {
            grid,
            values,
            est_errors,
            holes,
        }
    }

    /// Trace with exact values `f(x)`, zero error estimates and no holes.
    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.iter().map(|&x| f(x)).collect();
        let est_errors = vec![0.0; grid.len()];
        InstParamTrace {
            grid,
            values,
            est_errors,
            holes: BTreeMap::new(),
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn est_errors(&self) -> &[f64] {
        &self.est_errors
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

    /// Hole indices in increasing order.
    pub fn holes(&self) -> Vec<usize> {
        self.holes.keys().copied().collect()
    }

    /// Why point `i` is a hole.
    pub fn hole_reason(&self, i: usize) -> Option<&GcalcError> {
        self.holes.get(&i)
    }

    /// Marks `i` as a hole; its value becomes NaN. An existing reason is kept.
    pub fn punch_hole(&mut self, i: usize, reason: GcalcError) {
        self.values[i] = NAN;
        self.est_errors[i] = f64::NAN;
        self.holes.entry(i).or_insert(reason);
    }

    /// Grid index of `x`, matched to within `1e-9·max(1, |x|)`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let tol = 1e-9 * x.abs().max(1.0);
        let i = self.grid.partition_point(|&g| g < x - tol);
        (i < self.grid.len() && (self.grid[i] - x).abs() <= tol).then_some(i)
    }

    /// Value at grid point `x`; `param` names the trace in errors.
    pub fn value_at(&self, x: f64, param: &str) -> Result<Complex64, GcalcError> {
        let i = self.index_of(x).ok_or(GcalcError::OffGrid { x })?;
        if self.is_hole(i) {
            return Err(GcalcError::Hole {
                param: param.to_string(),
                x,
            });
        }
        Ok(self.values[i])
    }

    /// Replaces non-hole values with `f(x, value)`.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..out.len() {
            if !out.is_hole(i) {
                out.values[i] = f(out.grid[i], out.values[i]);
            }
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SigioError> {
        self.write_to(std::fs::File::create(path)?)
    }

    /// CSV with header `x,re,im,err,hole`.
    pub fn write_to<W: Write>(&self, w: W) -> Result<(), SigioError> {
        let rows = (0..self.len()).map(|i| {
            vec![
                fmt_num(self.grid[i]),
                fmt_num(self.values[i].re),
                fmt_num(self.values[i].im),
                fmt_num(self.est_errors[i]),
                if self.is_hole(i) { "1" } else { "0" }.to_string(),
            ]
        });
        write_table(w, &["x", "re", "im", "err", "hole"], rows)
    }
}
