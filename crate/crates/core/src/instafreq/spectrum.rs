use std::io::Write;
use std::path::Path;

use super::{FrequencyTrace, InstafreqError};
use crate::sigio::{fmt_num, write_table, SigioError};

/// `F(ω) = (1/ω)·∫ ω(x)·[ω(x) ∈ bin] dx` on bins of width `bin_width`
/// centred at integer multiples of it.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpectrum {
    pub bin_centers: Vec<f64>,
    /// `None` for the bin centred at 0, where the division is undefined.
    pub values: Vec<Option<f64>>,
    pub bin_width: f64,
}

impl AmplitudeSpectrum {
    /// Value of the bin containing `omega`, if that bin was produced.
    pub fn at(&self, omega: f64) -> Option<f64> {
        let k = bin_index(omega, self.bin_width);
        let first = bin_index(*self.bin_centers.first()?, self.bin_width);
        let i = usize::try_from(k - first).ok()?;
        self.values.get(i).copied().flatten()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SigioError> {
        self.write_to(std::fs::File::create(path)?)
    }

    /// CSV with header `omega,F`; undefined bins are written as NaN.
    pub fn write_to<W: Write>(&self, w: W) -> Result<(), SigioError> {
        let rows = self.bin_centers.iter().zip(&self.values).map(|(&c, v)| {
            vec![fmt_num(c), fmt_num(v.unwrap_or(f64::NAN))]
        });
        write_table(w, &["omega", "F"], rows)
    }
}

// Half-open bins [c − δ/2, c + δ/2).
fn bin_index(omega: f64, width: f64) -> i64 {
    (omega / width + 0.5).floor() as i64
}

/// Histogram-style amplitude spectrum of a frequency trace. Each grid
/// interval with valid endpoints contributes trapezoid halves `ω_i·h/2`
/// to the bins of its two endpoints.
pub fn amplitude_spectrum(
    ft: &FrequencyTrace,
    delta_omega: f64,
) -> Result<AmplitudeSpectrum, InstafreqError> {
    if !(delta_omega > 0.0 && delta_omega.is_finite()) {
        return Err(InstafreqError::InvalidBinWidth(delta_omega));
    }
    if ft.len() < 2 {
        return Err(InstafreqError::TooFewPoints {
            needed: 2,
            got: ft.len(),
        });
    }
    let valid = |i: usize| !ft.is_hole(i) && ft.omega()[i].is_finite();
    let (lo, hi) = (0..ft.len())
        .filter(|&i| valid(i))
        .map(|i| bin_index(ft.omega()[i], delta_omega))
        .fold((i64::MAX, i64::MIN), |(lo, hi), k| (lo.min(k), hi.max(k)));
    if lo > hi {
        return Err(InstafreqError::EmptyTrace);
    }
    let mut sums = vec![0.0; (hi - lo + 1) as usize];
    let (x, w) = (ft.grid(), ft.omega());
    for i in 0..ft.len() - 1 {
        if !(valid(i) && valid(i + 1)) {
            continue;
        }
        let half = 0.5 * (x[i + 1] - x[i]);
        for j in [i, i + 1] {
            sums[(bin_index(w[j], delta_omega) - lo) as usize] += half * w[j];
        }
    }
    let bin_centers: Vec<f64> = (lo..=hi).map(|k| k as f64 * delta_omega).collect();
    let values = bin_centers
        .iter()
        .zip(&sums)
        .map(|(&c, &s)| (c.abs() >= delta_omega / 2.0).then(|| s / c))
        .collect();
    Ok(AmplitudeSpectrum {
        bin_centers,
        values,
        bin_width: delta_omega,
    })
}
