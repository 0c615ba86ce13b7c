//! Batch front end for gencalc: traces, reconstructions, frequency traces
//! and spectrograms written as CSV, with optional SVG plots.

pub mod error;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gencalc::baseline::{ridge, stft, Spectrogram};
use gencalc::expr::Expr;
use gencalc::instafreq::{
    amplitude_spectrum, chirp_derivatives_with, chirp_policy, fourier_derivative, instantaneous_frequency,
    wavefunction_reconstruct, ChirpDerivatives, ChirpOptions, FrequencyTrace, SignMode,
};
use gencalc::sigio::{fmt_num, generate, write_table};
use gencalc::{
    derivative_trace, reconstruct, Derivand, Execution, Family, GcalcError, GeneralizedDerivativeRequest,
    InstParamTrace, LimitPolicy, SampledSignal,
};
use num_complex::Complex64;

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gencalc", version, about = "Generalized derivatives, instantaneous frequency and spectrograms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace of one instantaneous parameter over the grid.
    Derive(DeriveArgs),
    /// Evaluate a family with all of its instantaneous parameters.
    Reconstruct(ReconstructArgs),
    /// Instantaneous frequency from the linear-chirp derivatives.
    Instafreq(InstafreqArgs),
    /// Gabor spectrogram and its ridge.
    Stft(StftArgs),
    /// Worked examples with known answers.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Sample an expression to CSV.
    Gen(GenArgs),
    /// Parse an expression and print it back in canonical form.
    ParseCheck {
        #[arg(long)]
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// `sin(2π(x³/3 + x² + x))` on [0, 3]: ω trace, spectrum, spectrogram, overlay.
    QuadraticChirp(DemoArgs),
    /// `2e^{−i(x⁴/4 + x²)}` on [−2, 2]: ω and b traces and the round trip.
    Wavefunction(DemoArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Expression in x.
    #[arg(long)]
    pub expr: Option<String>,
    /// Signal CSV with header `x,re[,im]`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct PolicyArgs {
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub stages: Option<usize>,
}

impl PolicyArgs {
    fn apply(&self, mut p: LimitPolicy) -> Result<LimitPolicy, CliError> {
        if let Some(d) = self.delta0 {
            p.delta0 = d;
        }
        if let Some(r) = self.ratio {
            p.ratio = r;
        }
        if let Some(s) = self.stages {
            p.max_stages = s;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory; without it the main CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot (needs --out).
    #[arg(long)]
    pub svg: bool,
}

/// Half-open grid `[x0, x1)` with spacing `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        // Points closer to x1 than a part in 1e9 of a step count as x1.
        let n = ((self.x1 - self.x0) / self.step - 1e-9).ceil().max(0.0) as usize;
        (0..n).map(|k| self.x0 + k as f64 * self.step).collect()
    }
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("grid '{s}' is not x0:x1:step"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("grid '{s}': '{t}' is not a number"));
        let g = GridSpec {
            x0: num(a)?,
            x1: num(b)?,
            step: num(c)?,
        };
        if !(g.x0.is_finite() && g.x1.is_finite() && g.x1 > g.x0) {
            return Err(format!("grid '{s}': need x1 > x0"));
        }
        if !(g.step > 0.0 && g.step.is_finite()) {
            return Err(format!("grid '{s}': need step > 0"));
        }
        Ok(g)
    }
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// linear, poly:N, exp, sin, cos, tan, chirp, fourier.
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub param: String,
    /// x0:x1:step, half-open; defaults to the sample points of --csv.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub family: Family,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct InstafreqArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// continuity or absolute.
    #[arg(long, default_value = "continuity")]
    pub sign_mode: SignMode,
    /// Also write the amplitude spectrum with this bin width (needs --out).
    #[arg(long)]
    pub bin_width: Option<f64>,
    /// Use the literal ω₁ quotient, for comparison.
    #[arg(long)]
    pub literal_k1: bool,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct StftArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Sampling grid for --expr.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Gaussian window σ in x units.
    #[arg(long, default_value_t = 1.0)]
    pub window_sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub hop: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value = "continuity")]
    pub sign_mode: SignMode,
    #[arg(long, default_value_t = 0.1)]
    pub bin_width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub window_sigma: f64,
    #[arg(long, default_value_t = 5)]
    pub hop: usize,
    #[arg(long)]
    pub literal_k1: bool,
    /// Also plot the traces of the wave-function demo.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub expr: String,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[command(flatten)]
    pub out: OutArgs,
}

/// What a successful command reports in its summary line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub ok: bool,
    pub max_err: f64,
}

impl Outcome {
    fn ok(max_err: f64) -> Self {
        Outcome { ok: true, max_err }
    }
}

/// Parses `argv` (program name first), runs the command and prints the
/// summary line `status=<ok|fail> max_err=<val>`. Returns the exit code:
/// 0 ok, 1 usage, 2 numeric non-convergence, 3 I/O.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let result = execute(&cli.command, stdout);
    let (outcome, code) = match result {
        Ok(o) => (o, if o.ok { 0 } else { 2 }),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            (Outcome { ok: false, max_err: f64::NAN }, e.exit_code())
        }
    };
    let _ = writeln!(
        stdout,
        "status={} max_err={}",
        if outcome.ok { "ok" } else { "fail" },
        fmt_err(outcome.max_err)
    );
    code
}

fn fmt_err(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3e}")
    } else {
        "NaN".to_string()
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match cmd {
        Command::Derive(a) => derive(a, stdout),
        Command::Reconstruct(a) => reconstruct_cmd(a, stdout),
        Command::Instafreq(a) => instafreq(a, stdout),
        Command::Stft(a) => stft_cmd(a, stdout),
        Command::Demo { which: Demo::QuadraticChirp(a) } => demo_quadratic_chirp(a),
        Command::Demo { which: Demo::Wavefunction(a) } => demo_wavefunction(a),
        Command::Gen(a) => gen(a, stdout),
        Command::ParseCheck { expr } => {
            let e = Expr::parse_str(expr)?;
            writeln!(stdout, "{}", e.to_text())?;
            Ok(Outcome::ok(0.0))
        }
    }
}

enum Input {
    Expr(Expr),
    Signal(SampledSignal),
}

impl Input {
    fn load(a: &InputArgs) -> Result<Input, CliError> {
        match (&a.expr, &a.csv) {
            (Some(e), None) => Ok(Input::Expr(Expr::parse_str(e)?)),
            (None, Some(p)) => Ok(Input::Signal(SampledSignal::read_csv(p)?)),
            _ => Err(CliError::Usage("give exactly one of --expr, --csv".into())),
        }
    }

    fn derivand(&self) -> &dyn Derivand {
        match self {
            Input::Expr(e) => e,
            Input::Signal(s) => s,
        }
    }

    fn grid(&self, spec: Option<GridSpec>) -> Result<Vec<f64>, CliError> {
        let g = match (spec, self) {
            (Some(g), _) => g.points(),
            (None, Input::Signal(s)) => s.xs(),
            (None, Input::Expr(_)) => return Err(CliError::Usage("--expr needs --grid x0:x1:step".into())),
        };
        if g.is_empty() {
            return Err(CliError::Usage("grid has no points".into()));
        }
        Ok(g)
    }
}

/// Where CSV output goes: a file under `--out`, or stdout.
fn emit(
    out: Option<&Path>,
    name: &str,
    stdout: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> Result<(), gencalc::sigio::SigioError>,
) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut file = std::io::BufWriter::new(fs::File::create(dir.join(name))?);
            write(&mut file)?;
            file.flush()?;
        }
        None => write(stdout)?,
    }
    Ok(())
}

fn needs_out<'a>(out: &'a OutArgs, what: &str) -> Result<&'a Path, CliError> {
    out.out
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{what} needs --out <dir>")))
}

fn write_svg(dir: &Path, name: &str, svg: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), svg)?;
    Ok(())
}

fn max_converged_err(t: &InstParamTrace) -> f64 {
    (0..t.len())
        .filter(|&i| !t.is_hole(i))
        .map(|i| t.est_errors()[i])
        .fold(0.0, f64::max)
}

fn trace_series(name: &str, t: &InstParamTrace) -> svg::Series {
    let pts = t
        .grid()
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, if t.is_hole(i) { f64::NAN } else { t.values()[i].re }))
        .collect();
    svg::Series::new(name, pts)
}

fn frequency_series(name: &str, ft: &FrequencyTrace) -> svg::Series {
    let pts = ft
        .grid()
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, if ft.is_hole(i) { f64::NAN } else { ft.omega()[i] }))
        .collect();
    svg::Series::new(name, pts)
}

fn derive(a: &DeriveArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let input = Input::load(&a.input)?;
    let grid = input.grid(a.grid)?;
    let policy = a.policy.apply(LimitPolicy::default())?;
    let svg_dir = if a.out.svg { Some(needs_out(&a.out, "--svg")?) } else { None };
    let req = GeneralizedDerivativeRequest::named(input.derivand(), a.family, &a.param, policy)?;
    let trace = derivative_trace(&req, &grid)?;
    emit(a.out.out.as_deref(), "derive.csv", stdout, |w| trace.write_to(w))?;
    if let Some(dir) = svg_dir {
        let title = format!("{} {}", a.family, a.param);
        write_svg(dir, "derive.svg", &svg::line_plot(&title, "x", &a.param, &[trace_series(&a.param, &trace)]))?;
    }
    Ok(Outcome {
        ok: trace.holes().is_empty(),
        max_err: max_converged_err(&trace),
    })
}

fn reconstruct_cmd(a: &ReconstructArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let input = Input::load(&a.input)?;
    let grid = input.grid(a.grid)?;
    let policy = a.policy.apply(LimitPolicy::default())?;
    let svg_dir = if a.out.svg { Some(needs_out(&a.out, "--svg")?) } else { None };
    let f = input.derivand();
    let traces = (0..a.family.arity())
        .map(|k| {
            let req = GeneralizedDerivativeRequest::new(f, a.family, k, policy)?;
            derivative_trace(&req, &grid)
        })
        .collect::<Result<Vec<_>, GcalcError>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    let (mut max_err, mut holes) = (0.0_f64, 0);
    let mut back_pts = Vec::with_capacity(grid.len());
    let mut f_pts = Vec::with_capacity(grid.len());
    for &x in &grid {
        let want = f.value(x).map_err(GcalcError::from)?;
        f_pts.push((x, want.re));
        match reconstruct(&a.family, &traces, x) {
            Ok(v) => {
                let err = (v - want).norm();
                max_err = max_err.max(err);
                back_pts.push((x, v.re));
                rows.push(vec![fmt_num(x), fmt_num(v.re), fmt_num(v.im), fmt_num(err), "0".into()]);
            }
            Err(GcalcError::Hole { .. }) => {
                holes += 1;
                back_pts.push((x, f64::NAN));
                let nan = fmt_num(f64::NAN);
                rows.push(vec![fmt_num(x), nan.clone(), nan.clone(), nan, "1".into()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(a.out.out.as_deref(), "reconstruct.csv", stdout, |w| {
        write_table(w, &["x", "re", "im", "err", "hole"], rows)
    })?;
    if let Some(dir) = svg_dir {
        let series = [svg::Series::new("f", f_pts), svg::Series::new("reconstructed", back_pts)];
        write_svg(dir, "reconstruct.svg", &svg::line_plot(&a.family.to_string(), "x", "Re", &series))?;
    }
    Ok(Outcome {
        ok: holes == 0,
        max_err,
    })
}

/// Error bound on `ω₁x + ω₀` from the two limit estimates.
fn omega_err(cd: &ChirpDerivatives, ft: &FrequencyTrace) -> f64 {
    (0..ft.len())
        .filter(|&i| !ft.is_hole(i))
        .map(|i| cd.omega1.est_errors()[i] * ft.grid()[i].abs() + cd.omega0.est_errors()[i])
        .fold(0.0, f64::max)
}

fn instafreq(a: &InstafreqArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let input = Input::load(&a.input)?;
    let grid = input.grid(a.grid)?;
    let policy = a.policy.apply(chirp_policy())?;
    let spectrum_dir = match a.bin_width {
        Some(_) => Some(needs_out(&a.out, "--bin-width")?),
        None => None,
    };
    let svg_dir = if a.out.svg { Some(needs_out(&a.out, "--svg")?) } else { None };
    let opts = ChirpOptions {
        literal_k1: a.literal_k1,
        exec: Execution::default(),
    };
    let cd = chirp_derivatives_with(input.derivand(), &grid, &policy, opts)?;
    let ft = instantaneous_frequency(&cd, a.sign_mode)?;
    emit(a.out.out.as_deref(), "omega.csv", stdout, |w| ft.write_to(w))?;
    if let (Some(dir), Some(width)) = (spectrum_dir, a.bin_width) {
        let spec = amplitude_spectrum(&ft, width)?;
        spec.write_csv(dir.join("spectrum.csv"))?;
    }
    if let Some(dir) = svg_dir {
        write_svg(dir, "omega.svg", &svg::line_plot("instantaneous frequency", "x", "ω", &[frequency_series("ω", &ft)]))?;
    }
    Ok(Outcome::ok(omega_err(&cd, &ft)))
}

fn stft_cmd(a: &StftArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let signal = match Input::load(&a.input)? {
        Input::Signal(s) => s,
        Input::Expr(e) => {
            let g = a
                .grid
                .ok_or_else(|| CliError::Usage("--expr needs --grid x0:x1:step".into()))?;
            generate(&e, g.x0, g.step, g.points().len())?
        }
    };
    let svg_dir = if a.out.svg { Some(needs_out(&a.out, "--svg")?) } else { None };
    let sg = stft(&signal, a.window_sigma, a.hop)?;
    emit(a.out.out.as_deref(), "stft.csv", stdout, |w| sg.write_to(w))?;
    let r = ridge(&sg);
    if let Some(dir) = a.out.out.as_deref() {
        r.trace.write_csv(dir.join("ridge.csv"))?;
    }
    if let Some(dir) = svg_dir {
        let y_max = ridge_ceiling(&sg, &r.trace);
        let svg = spectrogram_svg("spectrogram", &sg, y_max, &[frequency_series("ridge", &r.trace)]);
        write_svg(dir, "stft.svg", &svg)?;
    }
    Ok(Outcome::ok(f64::NAN))
}

/// Upper frequency shown in plots: a margin above the highest ridge value.
fn ridge_ceiling(sg: &Spectrogram, ridge: &FrequencyTrace) -> f64 {
    let top = ridge.omega().iter().copied().fold(0.0_f64, f64::max);
    let nyquist = sg.freqs().iter().copied().fold(0.0_f64, f64::max);
    (1.25 * top + 5.0 * sg.bin_width()).min(nyquist)
}

fn spectrogram_svg(title: &str, sg: &Spectrogram, y_max: f64, overlays: &[svg::Series]) -> String {
    let map = svg::Heatmap {
        xs: sg.times(),
        ys: sg.freqs(),
        values: sg.magnitudes(),
    };
    svg::heatmap_plot(title, "x", "frequency", &map, y_max, overlays)
}

fn gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let e = Expr::parse_str(&a.expr)?;
    let signal = generate(&e, a.grid.x0, a.grid.step, a.grid.points().len())?;
    emit(a.out.out.as_deref(), "signal.csv", stdout, |w| signal.write_to(w))?;
    if a.out.svg {
        let dir = needs_out(&a.out, "--svg")?;
        let re: Vec<(f64, f64)> = signal.xs().into_iter().zip(signal.samples()).map(|(x, z)| (x, z.re)).collect();
        let mut series = vec![svg::Series::new("Re", re)];
        if !signal.is_real() {
            let im = signal.xs().into_iter().zip(signal.samples()).map(|(x, z)| (x, z.im)).collect();
            series.push(svg::Series::new("Im", im));
        }
        write_svg(dir, "signal.svg", &svg::line_plot(&a.expr, "x", "value", &series))?;
    }
    Ok(Outcome::ok(0.0))
}

/// Closed grid `x0, x0 + step, …, x1`.
fn closed_grid(x0: f64, x1: f64, step: f64) -> Vec<f64> {
    let n = ((x1 - x0) / step).round() as usize;
    (0..=n).map(|k| x0 + k as f64 * step).collect()
}

const CHIRP: &str = "sin(2*pi*(x^3/3+x^2+x))";

fn demo_quadratic_chirp(a: &DemoArgs) -> Result<Outcome, CliError> {
    let f = Expr::parse_str(CHIRP)?;
    let grid = closed_grid(0.0, 3.0, 0.01);
    let policy = a.policy.apply(chirp_policy())?;
    let opts = ChirpOptions {
        literal_k1: a.literal_k1,
        exec: Execution::default(),
    };
    let cd = chirp_derivatives_with(&f, &grid, &policy, opts)?;
    let ft = instantaneous_frequency(&cd, a.sign_mode)?;
    let truth = |x: f64| x * x + 2.0 * x + 1.0;
    let (mut max_err, mut good) = (0.0_f64, 0);
    for (i, &x) in grid.iter().enumerate() {
        if ft.is_hole(i) {
            continue;
        }
        let err = (ft.omega()[i] - truth(x)).abs();
        max_err = max_err.max(err);
        if err < 1e-3 {
            good += 1;
        }
    }
    fs::create_dir_all(&a.out)?;
    ft.write_csv(a.out.join("omega_qr.csv"))?;
    amplitude_spectrum(&ft, a.bin_width)?.write_csv(a.out.join("spectrum.csv"))?;

    // Frames reach ±4σ, so the signal extends past [0, 3] on both sides.
    let pad = 4.0 * a.window_sigma;
    let dx = 0.01;
    let n = ((3.0 + 2.0 * pad) / dx).round() as usize + 1;
    let signal = generate(&f, -pad, dx, n)?;
    let sg = stft(&signal, a.window_sigma, a.hop)?;
    sg.write_csv(a.out.join("stft.csv"))?;
    let r = ridge(&sg);
    // Only frames centred inside the demo interval are drawn.
    let inside = |x: f64| (-1e-9..=3.0 + 1e-9).contains(&x);
    let first = sg.times().iter().position(|&x| inside(x)).unwrap_or(0);
    let last = sg.times().iter().rposition(|&x| inside(x)).unwrap_or(0);
    let map = svg::Heatmap {
        xs: &sg.times()[first..=last],
        ys: sg.freqs(),
        values: &sg.magnitudes()[first..=last],
    };
    let overlays = [
        svg::Series::new("x²+2x+1", grid.iter().map(|&x| (x, truth(x))).collect()).dashed(),
        frequency_series("ω from chirp derivatives", &ft),
        svg::Series::new("spectrogram ridge", r.trace.points().filter(|&(x, _)| inside(x)).collect()),
    ];
    let title = "quadratic chirp: spectrogram, ridge and ω(x)";
    let svg = svg::heatmap_plot(title, "x", "frequency", &map, 1.25 * truth(3.0), &overlays);
    fs::write(a.out.join("overlay.svg"), svg)?;
    let enough = good as f64 >= 0.95 * grid.len() as f64;
    Ok(Outcome {
        ok: enough && max_err < 1e-3,
        max_err,
    })
}

fn demo_wavefunction(a: &DemoArgs) -> Result<Outcome, CliError> {
    let psi = |x: f64| 2.0 * Complex64::from_polar(1.0, -(x.powi(4) / 4.0 + x * x));
    let grid = closed_grid(-2.0, 2.0, 0.01);
    let policy = a.policy.apply(LimitPolicy::default())?;
    let (omega, b) = fourier_derivative(&psi, &grid, &policy)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_err = 0.0_f64;
    let mut holes = omega.holes().len() + b.holes().len();
    for (i, &x) in grid.iter().enumerate() {
        if omega.is_hole(i) || b.is_hole(i) {
            continue;
        }
        let ew = (omega.values()[i] - Complex64::new(x.powi(3) + 2.0 * x, 0.0)).norm();
        let eb = (b.values()[i] - Complex64::new(2f64.ln(), 0.75 * x.powi(4) + x * x)).norm();
        match wavefunction_reconstruct(&omega, &b, x) {
            Ok(back) => {
                let er = (back - psi(x)).norm();
                max_err = max_err.max(ew).max(eb).max(er);
                rows.push(vec![fmt_num(x), fmt_num(back.re), fmt_num(back.im), fmt_num(er)]);
            }
            Err(_) => holes += 1,
        }
    }
    fs::create_dir_all(&a.out)?;
    omega.write_csv(a.out.join("omega.csv"))?;
    b.write_csv(a.out.join("b.csv"))?;
    write_table(fs::File::create(a.out.join("roundtrip.csv"))?, &["x", "re", "im", "err"], rows)?;
    if a.svg {
        let b_im = b.map(|_, v| Complex64::new(v.im, 0.0));
        let series = [trace_series("ω", &omega), trace_series("Im b", &b_im)];
        fs::write(a.out.join("wavefunction.svg"), svg::line_plot("wave function", "x", "value", &series))?;
    }
    Ok(Outcome {
        ok: holes == 0 && max_err < 1e-5,
        max_err,
    })
}
