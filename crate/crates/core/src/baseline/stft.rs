use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use super::{fft, positive, spread, BaselineError};
use crate::instafreq::FrequencyTrace;
use crate::par::Execution;
use crate::sigio::{fmt_num, write_table, SampledSignal, SigioError};

/// `|F(x, f)|` on frame centres × frequency bins (rows are frames).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    times: Vec<f64>,
    freqs: Vec<f64>,
    magnitudes: Vec<Vec<f64>>,
    window_sigma: f64,
}

impl Spectrogram {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn magnitudes(&self) -> &[Vec<f64>] {
        &self.magnitudes
    }

    pub fn window_sigma(&self) -> f64 {
        self.window_sigma
    }

    /// Spacing of the frequency axis.
    pub fn bin_width(&self) -> f64 {
        self.freqs[1] - self.freqs[0]
    }

    /// Second-moment width of `|F|²` along frequency, per frame.
    pub fn spreads(&self) -> Vec<f64> {
        self.magnitudes
            .iter()
            .map(|row| {
                let power: Vec<f64> = row.iter().map(|m| m * m).collect();
                spread(&self.freqs, &power)
            })
            .collect()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SigioError> {
        self.write_to(std::fs::File::create(path)?)
    }

    /// Long-form CSV with header `x,omega,mag`.
    pub fn write_to<W: Write>(&self, w: W) -> Result<(), SigioError> {
        let rows = self.times.iter().zip(&self.magnitudes).flat_map(|(&t, row)| {
            self.freqs
                .iter()
                .zip(row)
                .map(move |(&f, &m)| vec![fmt_num(t), fmt_num(f), fmt_num(m)])
        });
        write_table(w, &["x", "omega", "mag"], rows)
    }
}

/// [`stft_with`] using the default execution mode.
pub fn stft(signal: &SampledSignal, window_sigma: f64, hop: usize) -> Result<Spectrogram, BaselineError> {
    stft_with(signal, window_sigma, hop, Execution::default())
}

/// Gabor spectrogram. The window is `e^{−x²/(2σ²)}` with `σ` in x units,
/// truncated at `±4σ`; frames are centred on samples `0, hop, 2·hop, …`,
/// zero-padded to a power of two, and scaled by the window sum so a tone
/// of amplitude `A` peaks near `A/2` (real) or `A` (complex). Real signals
/// give the one-sided spectrum `0 … fs/2`, complex ones the full centred one.
pub fn stft_with(
    signal: &SampledSignal,
    window_sigma: f64,
    hop: usize,
    exec: Execution,
) -> Result<Spectrogram, BaselineError> {
    positive("window sigma", window_sigma)?;
    if hop == 0 {
        return Err(BaselineError::InvalidHop);
    }
    let dx = signal.dx();
    let half = (4.0 * window_sigma / dx).ceil() as usize;
    let width = 2 * half + 1;
    if signal.len() < width {
        return Err(BaselineError::SignalShorterThanFrame {
            needed: width,
            got: signal.len(),
        });
    }
    let frame_len = width.next_power_of_two();
    let window: Vec<f64> = (0..width)
        .map(|j| {
            let x = (j as f64 - half as f64) * dx;
            (-x * x / (2.0 * window_sigma * window_sigma)).exp()
        })
        .collect();
    let norm: f64 = window.iter().sum();
    let real = signal.is_real();
    let df = 1.0 / (frame_len as f64 * dx);
    let (freqs, bins): (Vec<f64>, Vec<usize>) = if real {
        (0..=frame_len / 2).map(|k| (k as f64 * df, k)).unzip()
    } else {
        let split = frame_len / 2;
        (split..frame_len)
            .chain(0..split)
            .map(|k| {
                let f = if k >= split { k as f64 - frame_len as f64 } else { k as f64 };
                (f * df, k)
            })
            .unzip()
    };
    let samples = signal.samples();
    let n_frames = (signal.len() - 1) / hop + 1;
    let magnitudes = exec.map_indices(n_frames, |i| {
        let centre = (i * hop) as isize;
        let mut frame = vec![Complex64::new(0.0, 0.0); frame_len];
        for (j, &w) in window.iter().enumerate() {
            let k = centre + j as isize - half as isize;
            if k >= 0 && (k as usize) < samples.len() {
                frame[j] = samples[k as usize] * w;
            }
        }
        let spec = fft(&frame);
        bins.iter().map(|&k| spec[k].norm() / norm).collect::<Vec<f64>>()
    });
    Ok(Spectrogram {
        times: (0..n_frames).map(|i| signal.x(i * hop)).collect(),
        freqs,
        magnitudes,
        window_sigma,
    })
}

/// Per-frame peak frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Ridge {
    pub trace: FrequencyTrace,
    /// Frames whose magnitudes are all zero; their ridge value is 0.
    pub degenerate: Vec<usize>,
}

/// Argmax frequency of every frame, ties going to the lower frequency.
pub fn ridge(sg: &Spectrogram) -> Ridge {
    let mut degenerate = Vec::new();
    let omega = sg
        .magnitudes
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut best: Option<usize> = None;
            for (k, &m) in row.iter().enumerate() {
                let better = match best {
                    None => m > 0.0,
                    Some(b) => m > row[b] || (m == row[b] && sg.freqs[k] < sg.freqs[b]),
                };
                if better {
                    best = Some(k);
                }
            }
            match best {
                Some(k) => sg.freqs[k],
                None => {
                    degenerate.push(i);
                    0.0
                }
            }
        })
        .collect();
    let trace = FrequencyTrace::new(sg.times.clone(), omega, BTreeMap::new())
        .expect("frame times are increasing and nonempty");
    Ridge { trace, degenerate }
}
