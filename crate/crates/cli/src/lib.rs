//! Implementation of the `trajgp` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod modelfile;
pub mod text;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use trajgp::modelspec::{self, ModelSpec};
use trajgp::optimize::LIKELIHOOD_PATH;
use trajgp::{
    demo, fit_axis, fit_trajectory, prepare, sample_prior, Axis, FitOptions, GpError, GpModel, NoiseMode, PrepConfig,
};

use modelfile::ModelFile;
use text::fmt_sig;

pub const EXIT_OK: i32 = 0;
/// A reproduction check in `demo` missed its tolerance.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "trajgp", version, about = "Gaussian-process interpolation of noisy trajectories")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train per-axis models on a trajectory CSV (`t,lon,lat,sigma`).
    Fit(FitArgs),
    /// Predict positions with uncertainty from a saved model.
    Predict(PredictArgs),
    /// Draw functions from the prior of a model spec.
    Sample(SampleArgs),
    /// Run the m0-m5 model ladder on the built-in ten-point dataset.
    Demo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    Lon,
    Lat,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NoiseArg {
    AsSpecified,
    PinWhite,
    PerPoint,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, conflicts_with = "spec_file", required_unless_present = "spec_file")]
    spec: Option<String>,
    #[arg(long)]
    spec_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    axis: AxisArg,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    normalize_time: bool,
    /// Prior standard deviation used to initialize the main kernel variance.
    #[arg(long)]
    sigma_prior: Option<f64>,
    /// How the per-point sigmas enter the model.
    #[arg(long, value_enum, default_value = "as-specified")]
    noise: NoiseArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TimeArgs {
    /// `a..b` (inclusive), or a comma-separated list.
    #[arg(long, conflicts_with = "times_file", required_unless_present = "times_file")]
    times: Option<String>,
    /// One time per line.
    #[arg(long)]
    times_file: Option<PathBuf>,
    /// Spacing for `a..b` ranges.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    times: TimeArgs,
    /// Output CSV; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    spec: String,
    #[command(flatten)]
    times: TimeArgs,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<GpError> for Failure {
    fn from(e: GpError) -> Self {
        let code = match e {
            GpError::NotPositiveDefinite { .. } | GpError::NumericalBreakdown(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read `{}`: {e}", path.display())))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, content).map_err(|e| Failure::usage(format!("cannot write `{}`: {e}", p.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_spec(text: &str) -> Result<ModelSpec, Failure> {
    modelspec::parse(text).map_err(|e| Failure::usage(format!("invalid model spec at {e}")))
}

fn resolve_times(args: &TimeArgs) -> Result<Vec<f64>, Failure> {
    let times = match (&args.times, &args.times_file) {
        (Some(t), _) => text::parse_times(t, args.step),
        (None, Some(path)) => text::parse_times_file(&read_file(path)?),
        (None, None) => Err("no times given".into()),
    };
    times.map_err(Failure::usage)
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let res = match cli.cmd {
        Command::Fit(a) => cmd_fit(&a),
        Command::Predict(a) => cmd_predict(&a),
        Command::Sample(a) => cmd_sample(&a),
        Command::Demo => cmd_demo(),
    };
    match res {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn param_table(model: &GpModel<f64>) -> String {
    let mut rows: Vec<(String, f64, bool)> =
        model.kernel().flatten_params().into_iter().map(|(p, v)| (p, v.value, v.trainable)).collect();
    let lik = model.likelihood_variance();
    rows.push((LIKELIHOOD_PATH.into(), lik.value, lik.trainable));
    rows.extend(model.mean().flatten_params().into_iter().map(|(p, c)| (format!("mean.{p}"), c.value, c.trainable)));
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(9);
    let mut s = format!("  {:width$}  {:>14}  trainable\n", "parameter", "value");
    for (p, v, t) in rows {
        let _ = writeln!(s, "  {p:width$}  {:>14}  {t}", fmt_sig(v, 6));
    }
    s
}

fn cmd_fit(a: &FitArgs) -> Result<i32, Failure> {
    let traj = modelfile::read_trajectory_csv(&read_file(&a.input)?)
        .map_err(|e| Failure::usage(format!("`{}`: {e}", a.input.display())))?;
    let spec_text = match (&a.spec, &a.spec_file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => read_file(p)?,
        (None, None) => return Err(Failure::usage("either --spec or --spec-file is required")),
    };
    let spec = parse_spec(&spec_text)?;
    if let Some(s) = a.sigma_prior {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Failure::usage("--sigma-prior must be positive"));
        }
    }
    let noise = match a.noise {
        NoiseArg::AsSpecified => NoiseMode::AsSpecified,
        NoiseArg::PinWhite => NoiseMode::PinWhite,
        NoiseArg::PerPoint => NoiseMode::PerPoint,
    };
    let opts = FitOptions { noise, ..Default::default() };
    let cfg = |axis| PrepConfig { sigma_prior: a.sigma_prior, normalize_time: a.normalize_time, axis };

    let (lon, lat, time_offset) = match a.axis {
        AxisArg::Both => {
            let fit = fit_trajectory(&traj, &spec, a.sigma_prior, a.normalize_time, &opts)?;
            (Some(fit.lon), Some(fit.lat), fit.time_offset)
        }
        AxisArg::Lon | AxisArg::Lat => {
            let axis = if matches!(a.axis, AxisArg::Lon) { Axis::Lon } else { Axis::Lat };
            let ds = prepare(&traj, &cfg(axis))?;
            let res = fit_axis(&ds, &spec, &opts)?;
            if axis == Axis::Lon {
                (Some(res), None, ds.time_offset)
            } else {
                (None, Some(res), ds.time_offset)
            }
        }
    };

    let mut report = String::new();
    for (name, res) in [("lon", &lon), ("lat", &lat)] {
        if let Some(r) = res {
            let _ = writeln!(
                report,
                "axis {name}: nlml {} (from {}), {} iterations, converged: {}",
                fmt_sig(r.final_nlml, 8),
                fmt_sig(r.initial_nlml, 8),
                r.iterations,
                r.converged
            );
            report.push_str(&param_table(&r.model));
        }
    }
    let to_spec = |r: &Option<trajgp::OptResult<f64>>| -> Result<Option<ModelSpec>, Failure> {
        r.as_ref().map(|r| ModelSpec::from_model(&r.model)).transpose().map_err(Failure::from)
    };
    let file = ModelFile {
        normalize_time: a.normalize_time,
        noise,
        time_offset,
        lon: to_spec(&lon)?,
        lat: to_spec(&lat)?,
        data: traj,
    };
    write_output(Some(&a.out), &file.render())?;
    print!("{report}");
    Ok(EXIT_OK)
}

/// Prediction CSV for a loaded model; axes that were not fitted get empty
/// columns.
pub fn prediction_csv(file: &ModelFile, times: &[f64]) -> Result<String, Failure> {
    if times.is_empty() {
        return Err(GpError::EmptyTimestampSet.into());
    }
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let shifted: Vec<f64> = sorted.iter().map(|t| t - file.time_offset).collect();
    let mut cols = Vec::new();
    for axis in [Axis::Lon, Axis::Lat] {
        cols.push(match file.axis_model(axis) {
            Some(m) => Some(m?.predict_y(&shifted)?),
            None => None,
        });
    }
    let cell = |p: &Option<trajgp::PredictionSet<f64>>, i: usize| match p {
        Some(p) => format!("{},{}", fmt_sig(p.means[i], 6), fmt_sig(p.variances[i].sqrt(), 6)),
        None => ",".to_owned(),
    };
    let mut s = String::from("t,lon_mean,lon_std,lat_mean,lat_std\n");
    for (i, t) in sorted.iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", fmt_sig(*t, 6), cell(&cols[0], i), cell(&cols[1], i));
    }
    Ok(s)
}

fn cmd_predict(a: &PredictArgs) -> Result<i32, Failure> {
    let times = resolve_times(&a.times)?;
    let file =
        ModelFile::parse(&read_file(&a.model)?).map_err(|e| Failure::usage(format!("`{}`: {e}", a.model.display())))?;
    write_output(a.out.as_deref(), &prediction_csv(&file, &times)?)?;
    Ok(EXIT_OK)
}

fn cmd_sample(a: &SampleArgs) -> Result<i32, Failure> {
    let spec = parse_spec(&a.spec)?;
    let times = resolve_times(&a.times)?;
    if a.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let kernel = spec.kernel.to_kernel::<f64>();
    kernel.validate()?;
    let draws = sample_prior(&kernel, &spec.mean.to_mean(), &times, a.n, a.seed)?;
    let mut s = String::from("t");
    for k in 1..=a.n {
        let _ = write!(s, ",sample_{k}");
    }
    s.push('\n');
    for (i, t) in times.iter().enumerate() {
        s.push_str(&fmt_sig(*t, 6));
        for d in &draws {
            let _ = write!(s, ",{}", fmt_sig(d[i], 6));
        }
        s.push('\n');
    }
    write_output(a.out.as_deref(), &s)?;
    Ok(EXIT_OK)
}

fn cmd_demo() -> Result<i32, Failure> {
    let rows = demo::run()?;
    let opt = |v: Option<f64>| v.map_or("-".to_owned(), |v| fmt_sig(v, 6));
    println!(
        "{:<5}{:>10}{:>12}{:>10}{:>12}{:>10}{:>10}{:>10}",
        "model", "l", "variance", "white", "likelihood", "slope", "intercept", "nlml"
    );
    for r in &rows {
        let line = r.mean_line();
        println!(
            "{:<5}{:>10}{:>12}{:>10}{:>12}{:>10}{:>10}{:>10}",
            r.name,
            fmt_sig(r.lengthscale(), 6),
            fmt_sig(r.kernel_variance(), 6),
            opt(r.white_variance()),
            fmt_sig(r.likelihood_variance(), 6),
            opt(line.map(|l| l.0)),
            opt(line.map(|l| l.1)),
            fmt_sig(r.nlml, 6),
        );
    }
    println!();
    let m0 = &rows[0].model;
    let p = m0.predict_y(&demo::X_STAR)?;
    println!("m0 predictions at {:?}:", demo::X_STAR);
    for i in 0..p.times.len() {
        println!("  t={}  mean={}  var={}", p.times[i], fmt_sig(p.means[i], 6), fmt_sig(p.variances[i], 10));
    }
    println!();
    let checks = demo::checks(&rows)?;
    for c in &checks {
        println!("{} {}  [{}]", if c.passed { "PASS" } else { "FAIL" }, c.label, c.detail);
    }
    Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_CHECK_FAILED })
}
