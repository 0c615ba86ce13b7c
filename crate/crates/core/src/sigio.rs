//! Uniformly sampled signals, their CSV form, and synthesis from expressions.
//!
//! Signal files carry a header `x,re,im`; `im` may be omitted, in which case
//! the signal is real. Numbers are written in shortest round-trip decimal
//! form, so a write/read cycle preserves every sample bit for bit.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::derivand::{Derivand, DerivandError, Sampling};
use crate::expr::{Expr, ExprError};

#[derive(Debug, Error)]
pub enum SigioError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: x column is not uniformly spaced")]
    NonUniform { line: u64 },
    #[error("signal needs at least {needed} samples")]
    TooShort { needed: usize },
    #[error("sample spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
    #[error("evaluation failed at sample {index}: {source}")]
    Eval { index: usize, source: ExprError },
}

impl From<csv::Error> for SigioError {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => SigioError::Io(io),
            other => SigioError::Malformed {
                line,
                message: format!("{other:?}"),
            },
        }
    }
}

/// A uniformly sampled, possibly complex, waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    x0: f64,
    dx: f64,
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(x0: f64, dx: f64, samples: Vec<Complex64>) -> Result<Self, SigioError> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(SigioError::InvalidSpacing(dx));
        }
        if samples.is_empty() {
            return Err(SigioError::TooShort { needed: 1 });
        }
        Ok(SampledSignal { x0, dx, samples })
    }

    pub fn from_real(x0: f64, dx: f64, samples: &[f64]) -> Result<Self, SigioError> {
        SampledSignal::new(x0, dx, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.x(k)).collect()
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im == 0.0)
    }

    pub fn sampling(&self) -> Sampling {
        Sampling {
            x0: self.x0,
            dx: self.dx,
            len: self.len(),
        }
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SigioError> {
        self.write_to(File::create(path)?)
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<(), SigioError> {
        let rows = self.samples.iter().enumerate().map(|(k, z)| {
            vec![fmt_num(self.x(k)), fmt_num(z.re), fmt_num(z.im)]
        });
        write_table(w, &["x", "re", "im"], rows)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self, SigioError> {
        Self::read_from(File::open(path)?)
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self, SigioError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let headers = reader.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        let has_im = match names.as_slice() {
            ["x", "re"] => false,
            ["x", "re", "im"] => true,
            _ => {
                return Err(SigioError::Malformed {
                    line: 1,
                    message: format!("expected header x,re[,im], found {}", names.join(",")),
                })
            }
        };
        let mut xs = Vec::new();
        let mut lines = Vec::new();
        let mut samples = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let field = |i: usize| -> Result<f64, SigioError> {
                let text = record.get(i).ok_or_else(|| SigioError::Malformed {
                    line,
                    message: format!("missing column {}", i + 1),
                })?;
                text.parse::<f64>().map_err(|_| SigioError::Malformed {
                    line,
                    message: format!("not a number: '{text}'"),
                })
            };
            xs.push(field(0)?);
            let im = if has_im { field(2)? } else { 0.0 };
            samples.push(Complex64::new(field(1)?, im));
            lines.push(line);
        }
        if xs.len() < 2 {
            return Err(SigioError::TooShort { needed: 2 });
        }
        let n = xs.len();
        let x0 = xs[0];
        let dx = (xs[n - 1] - x0) / (n - 1) as f64;
        if !(dx > 0.0) {
            return Err(SigioError::NonUniform { line: lines[1] });
        }
        let scale = x0.abs().max(xs[n - 1].abs()).max(dx);
        for (k, &x) in xs.iter().enumerate() {
            if (x - (x0 + k as f64 * dx)).abs() > 1e-9 * scale {
                return Err(SigioError::NonUniform { line: lines[k] });
            }
        }
        SampledSignal::new(x0, dx, samples)
    }
}

impl Derivand for SampledSignal {
    fn value(&self, x: f64) -> Result<Complex64, DerivandError> {
        self.sampling()
            .index_of(x)
            .map(|k| self.samples[k])
            .ok_or_else(|| DerivandError::new(x, "not a sample point of the signal"))
    }

    fn sampling(&self) -> Option<Sampling> {
        Some(SampledSignal::sampling(self))
    }
}

/// `samples[k] = expr(x0 + k·dx)` for `k < n`.
pub fn generate(expr: &Expr, x0: f64, dx: f64, n: usize) -> Result<SampledSignal, SigioError> {
    if n == 0 {
        return Err(SigioError::TooShort { needed: 1 });
    }
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(SigioError::InvalidSpacing(dx));
    }
    let samples = (0..n)
        .map(|k| {
            expr.eval_real(x0 + k as f64 * dx)
                .map_err(|source| SigioError::Eval { index: k, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    SampledSignal::new(x0, dx, samples)
}

/// Shortest decimal text that parses back to exactly `v`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Writes a header and rows as CSV.
pub fn write_table<W, I>(w: W, header: &[&str], rows: I) -> Result<(), SigioError>
where
    W: Write,
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}
