//! Classical time–frequency baseline: discrete Fourier transform, Gaussian
//! transform pair check, Gabor spectrogram with ridge extraction, and
//! second-moment uncertainty widths. Frequencies are in cycles per unit of
//! x (Hz when x is seconds) except inside [`gaussian_pair_check`], which
//! works on the angular axis of its closed form.

mod fft;
mod stft;

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::sigio::{fmt_num, write_table, SampledSignal, SigioError};

pub use fft::{fft, ifft};
pub use stft::{ridge, stft, stft_with, Ridge, Spectrogram};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BaselineError {
    #[error("{what} must be positive and finite, got {value}")]
    InvalidParameter { what: &'static str, value: f64 },
    #[error("hop must be at least 1")]
    InvalidHop,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("signal of {got} samples is shorter than one {needed}-sample frame")]
    SignalShorterThanFrame { needed: usize, got: usize },
    #[error("aliasing: {where_} tail {tail:e} exceeds 1e-12")]
    Aliasing { where_: &'static str, tail: f64 },
    #[error("spectrogram is empty")]
    EmptySpectrogram,
}

fn positive(what: &'static str, value: f64) -> Result<(), BaselineError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(BaselineError::InvalidParameter { what, value })
    }
}

/// Order of the frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumLayout {
    /// `0, fs/n, …, (n−1)·fs/n`, as the transform produces it.
    FromZero,
    /// `−fs/2 … fs/2` (ascending, zero in the middle).
    Centered,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub coeffs: Vec<Complex64>,
    pub layout: SpectrumLayout,
}

impl Spectrum {
    /// Same spectrum with the upper half moved below zero.
    pub fn centered(&self) -> Spectrum {
        if self.layout == SpectrumLayout::Centered {
            return self.clone();
        }
        let n = self.freqs.len();
        let fs = if n > 1 { self.freqs[1] * n as f64 } else { 0.0 };
        let split = n.div_ceil(2);
        let order: Vec<usize> = (split..n).chain(0..split).collect();
        Spectrum {
            freqs: order
                .iter()
                .map(|&k| if k >= split { self.freqs[k] - fs } else { self.freqs[k] })
                .collect(),
            coeffs: order.iter().map(|&k| self.coeffs[k]).collect(),
            layout: SpectrumLayout::Centered,
        }
    }

    /// Frequency of the largest-magnitude coefficient (lowest frequency on ties).
    pub fn peak_frequency(&self) -> f64 {
        let mut best = 0;
        for k in 1..self.coeffs.len() {
            let (a, b) = (self.coeffs[k].norm(), self.coeffs[best].norm());
            if a > b || (a == b && self.freqs[k].abs() < self.freqs[best].abs()) {
                best = k;
            }
        }
        self.freqs[best]
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SigioError> {
        self.write_to(std::fs::File::create(path)?)
    }

    /// CSV with header `omega,re,im`.
    pub fn write_to<W: Write>(&self, w: W) -> Result<(), SigioError> {
        let rows = self
            .freqs
            .iter()
            .zip(&self.coeffs)
            .map(|(&f, z)| vec![fmt_num(f), fmt_num(z.re), fmt_num(z.im)]);
        write_table(w, &["omega", "re", "im"], rows)
    }
}

/// Forward transform of the samples with the frequency axis `k/(n·dx)`.
pub fn dft(signal: &SampledSignal) -> Spectrum {
    let n = signal.len();
    let df = 1.0 / (n as f64 * signal.dx());
    Spectrum {
        freqs: (0..n).map(|k| k as f64 * df).collect(),
        coeffs: fft(signal.samples()),
        layout: SpectrumLayout::FromZero,
    }
}

fn signed_frequency(k: usize, n: usize, dx: f64) -> f64 {
    let k = if 2 * k < n { k as f64 } else { k as f64 - n as f64 };
    k / (n as f64 * dx)
}

/// Samples `e^{−σx²}` on `n` points spanning `[−span/2, span/2)`, transforms
/// with continuous scaling `dx/√(2π)` (plus the phase of the grid origin) and
/// returns the largest deviation from `e^{−ω²/(4σ)}/√(2σ)` over all bins.
pub fn gaussian_pair_check(sigma: f64, n: usize, span: f64) -> Result<f64, BaselineError> {
    positive("sigma", sigma)?;
    positive("span", span)?;
    if n < 2 {
        return Err(BaselineError::TooFewSamples { needed: 2, got: n });
    }
    let tail = (-sigma * (span / 2.0).powi(2)).exp();
    if tail >= 1e-12 {
        return Err(BaselineError::Aliasing { where_: "sample-domain", tail });
    }
    let dx = span / n as f64;
    let x0 = -span / 2.0;
    let omega_nyquist = PI / dx;
    let ftail = (-omega_nyquist * omega_nyquist / (4.0 * sigma)).exp() / (2.0 * sigma).sqrt();
    if ftail >= 1e-12 {
        return Err(BaselineError::Aliasing { where_: "frequency-domain", tail: ftail });
    }
    let samples: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = x0 + j as f64 * dx;
            Complex64::new((-sigma * x * x).exp(), 0.0)
        })
        .collect();
    let coeffs = fft(&samples);
    let scale = dx / (2.0 * PI).sqrt();
    let max_err = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let omega = 2.0 * PI * signed_frequency(k, n, dx);
            let numeric = c * scale * Complex64::from_polar(1.0, -omega * x0);
            let exact = (-omega * omega / (4.0 * sigma)).exp() / (2.0 * sigma).sqrt();
            (numeric - exact).norm()
        })
        .fold(0.0, f64::max);
    Ok(max_err)
}

/// Window shapes for [`uncertainty_product_for`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// Unit-peak `e^{−x²/(2σ²)}`.
    Gaussian { sigma: f64 },
    /// 1 on `|x| ≤ width/2`, 0 elsewhere.
    Rectangular { width: f64 },
}

/// Second-moment widths of a window and of its transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty {
    /// Standard deviation of `|g(x)|²` (normalized), in x units.
    pub sigma_x: f64,
    /// Standard deviation of `|G(f)|²` (normalized), in cycles per x unit.
    pub sigma_f: f64,
    pub product: f64,
}

/// [`uncertainty_product_for`] of the Gaussian window.
pub fn uncertainty_product(window_sigma: f64, n: usize, span: f64) -> Result<Uncertainty, BaselineError> {
    uncertainty_product_for(Window::Gaussian { sigma: window_sigma }, n, span)
}

/// Samples the window on `n` points over `[−span/2, span/2)` and measures
/// both widths. For the Gaussian the product is `1/(4π)`.
pub fn uncertainty_product_for(window: Window, n: usize, span: f64) -> Result<Uncertainty, BaselineError> {
    positive("span", span)?;
    if n < 2 {
        return Err(BaselineError::TooFewSamples { needed: 2, got: n });
    }
    let dx = span / n as f64;
    let x0 = -span / 2.0;
    let g: Box<dyn Fn(f64) -> f64> = match window {
        Window::Gaussian { sigma } => {
            positive("window sigma", sigma)?;
            let tail = (-(span / 2.0).powi(2) / (2.0 * sigma * sigma)).exp();
            if tail >= 1e-12 {
                return Err(BaselineError::Aliasing { where_: "sample-domain", tail });
            }
            let f_nyq = 0.5 / dx;
            let ftail = (-2.0 * (PI * sigma * f_nyq).powi(2)).exp();
            if ftail >= 1e-12 {
                return Err(BaselineError::Aliasing { where_: "frequency-domain", tail: ftail });
            }
            Box::new(move |x: f64| (-x * x / (2.0 * sigma * sigma)).exp())
        }
        Window::Rectangular { width } => {
            positive("window width", width)?;
            if width > span {
                return Err(BaselineError::InvalidParameter { what: "span (narrower than window)", value: span });
            }
            Box::new(move |x: f64| if x.abs() <= width / 2.0 { 1.0 } else { 0.0 })
        }
    };
    let xs: Vec<f64> = (0..n).map(|j| x0 + j as f64 * dx).collect();
    let samples: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(g(x), 0.0)).collect();
    let intensity: Vec<f64> = samples.iter().map(|z| z.norm_sqr()).collect();
    let sigma_x = spread(&xs, &intensity);
    let fs: Vec<f64> = (0..n).map(|k| signed_frequency(k, n, dx)).collect();
    let power: Vec<f64> = fft(&samples).iter().map(|z| z.norm_sqr()).collect();
    let sigma_f = spread(&fs, &power);
    Ok(Uncertainty {
        sigma_x,
        sigma_f,
        product: sigma_x * sigma_f,
    })
}

/// Standard deviation of `axis` under nonnegative `weights`.
pub(crate) fn spread(axis: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mean = axis.iter().zip(weights).map(|(a, w)| a * w).sum::<f64>() / total;
    let var = axis
        .iter()
        .zip(weights)
        .map(|(a, w)| (a - mean).powi(2) * w)
        .sum::<f64>()
        / total;
    var.sqrt()
}
