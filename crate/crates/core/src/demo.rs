//! The ten-point toy dataset and the ladder of models m0–m5 fitted to it.

use crate::error::Result;
use crate::gpr::GpModel;
use crate::means::MeanFn;
use crate::modelspec::{self, ModelSpec};
use crate::optimize::{minimize, OptConfig};
use crate::trajectory::CoordinateDataset;

pub const X: [f64; 10] = [11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0];
pub const Y: [f64; 10] = [1.0, 10.0, 30.0, 45.0, 40.0, 40.0, 50.0, 40.0, 35.0, 50.0];

/// Query times used for extrapolation.
pub const X_STAR: [f64; 4] = [21.0, 22.0, 23.0, 24.0];

/// `(name, spec, trained)`.
pub const LADDER: [(&str, &str, bool); 6] = [
    ("m0", "matern32()", false),
    ("m1", "matern32()", true),
    ("m2", "matern32() + white()", true),
    ("m3", "matern32() + white(variance=4, trainable=false)", true),
    ("m4", "matern32() + white(variance=4, trainable=false); likelihood(init=0.0001)", true),
    ("m5", "matern32() + white(variance=4, trainable=false); mean=linear(a=1, b=1); likelihood(init=0.0001)", true),
];

pub fn dataset() -> CoordinateDataset<f64> {
    CoordinateDataset::from_xy(X.to_vec(), Y.to_vec())
}

#[derive(Debug, Clone)]
pub struct DemoRow {
    pub name: &'static str,
    pub model: GpModel<f64>,
    pub nlml: f64,
    pub iterations: usize,
}

impl DemoRow {
    /// Value of the hyperparameter whose path ends with `suffix`.
    pub fn param(&self, suffix: &str) -> Option<f64> {
        self.model.kernel().flatten_params().into_iter().find(|(p, _)| p.ends_with(suffix)).map(|(_, p)| p.value)
    }

    pub fn lengthscale(&self) -> f64 {
        self.param("matern32.lengthscale").unwrap_or(f64::NAN)
    }

    pub fn kernel_variance(&self) -> f64 {
        self.param("matern32.variance").unwrap_or(f64::NAN)
    }

    pub fn white_variance(&self) -> Option<f64> {
        self.param("white.variance")
    }

    pub fn likelihood_variance(&self) -> f64 {
        self.model.likelihood_variance().value
    }

    /// `(slope, intercept)` of a linear mean.
    pub fn mean_line(&self) -> Option<(f64, f64)> {
        match self.model.mean() {
            MeanFn::Linear { slope, intercept } => Some((slope.value, intercept.value)),
            _ => None,
        }
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec::from_model(&self.model).expect("ladder specs have uniform trainable flags")
    }
}

pub fn run_one(name: &'static str, spec: &str, train: bool) -> Result<DemoRow> {
    let spec = modelspec::parse(spec).expect("ladder specs are valid");
    let model = modelspec::build(&spec, &dataset())?;
    if !train {
        let nlml = model.nlml()?;
        return Ok(DemoRow { name, model, nlml, iterations: 0 });
    }
    let res = minimize(&model, &OptConfig::default())?;
    Ok(DemoRow { name, nlml: res.final_nlml, iterations: res.iterations, model: res.model })
}

pub fn run() -> Result<Vec<DemoRow>> {
    LADDER.iter().map(|&(name, spec, train)| run_one(name, spec, train)).collect()
}

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

fn within(actual: f64, expected: f64, rel: f64) -> bool {
    (actual - expected).abs() <= rel * expected.abs()
}

/// Reproduction checks for a full ladder as returned by [`run`].
pub fn checks(rows: &[DemoRow]) -> Result<Vec<Check>> {
    let get = |n: &str| rows.iter().find(|r| r.name == n).expect("row present");
    let mut out = Vec::new();
    let mut push = |label: &str, passed: bool, detail: String| {
        out.push(Check { label: label.to_owned(), passed, detail });
    };

    let m1 = get("m1");
    let (l1, v1, s1) = (m1.lengthscale(), m1.kernel_variance(), m1.likelihood_variance());
    push(
        "m1 l, variance, likelihood within 5% of 7.35, 1346.36, 36.4",
        within(l1, 7.35, 0.05) && within(v1, 1346.36, 0.05) && within(s1, 36.4, 0.05),
        format!("l={l1:.4} var={v1:.2} lik={s1:.4}"),
    );

    let m2 = get("m2");
    let (w2, s2) = (m2.white_variance().unwrap_or(f64::NAN), m2.likelihood_variance());
    push(
        "m2 white == likelihood (1e-6 rel), sum within 5% of 36.46",
        (w2 - s2).abs() <= 1e-6 * s2.abs() && within(w2 + s2, 36.46, 0.05),
        format!("white={w2:.6} lik={s2:.6}"),
    );

    let m3 = get("m3");
    let (l3, v3, s3) = (m3.lengthscale(), m3.kernel_variance(), m3.likelihood_variance());
    push(
        "m3 likelihood within 5% of 32.464, l and variance within 5% of m1",
        within(s3, 32.464, 0.05) && within(l3, l1, 0.05) && within(v3, v1, 0.05) && m3.white_variance() == Some(4.0),
        format!("l={l3:.4} var={v3:.2} lik={s3:.4}"),
    );

    let m4 = get("m4");
    let (l4, v4, s4) = (m4.lengthscale(), m4.kernel_variance(), m4.likelihood_variance());
    push(
        "m4 l, variance within 10% of 4.11, 1328.03; likelihood <= 1e-3",
        within(l4, 4.11, 0.10) && within(v4, 1328.03, 0.10) && s4 <= 1e-3,
        format!("l={l4:.4} var={v4:.2} lik={s4:.3e}"),
    );

    let m5 = get("m5");
    let (a5, b5) = m5.mean_line().unwrap_or((f64::NAN, f64::NAN));
    let (l5, v5) = (m5.lengthscale(), m5.kernel_variance());
    push(
        "m5 slope, intercept within 10% of 4.84, -42.14; l, variance within 15% of 1.37, 107.24",
        within(a5, 4.84, 0.10) && within(b5, -42.14, 0.10) && within(l5, 1.37, 0.15) && within(v5, 107.24, 0.15),
        format!("a={a5:.4} b={b5:.4} l={l5:.4} var={v5:.2}"),
    );

    let m0 = get("m0");
    let p = m0.model.predict_y(&[24.0])?;
    let (mean, var) = (p.means[0], p.variances[0]);
    push(
        "m0 at t=24: |mean| < 0.5, variance within 1e-6 of 2",
        mean.abs() < 0.5 && (var - 2.0).abs() <= 1e-6,
        format!("mean={mean:.6} var={var:.10}"),
    );
    Ok(out)
}
