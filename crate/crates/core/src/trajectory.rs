//! Trajectories of noisy position fixes, split into one GP per coordinate axis.

use crate::error::{GpError, Result};
use crate::gpr::GpModel;
use crate::kernels::Kernel;
use crate::modelspec::{self, ModelSpec};
use crate::optimize::{minimize, OptConfig, OptResult};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement<T> {
    pub lon: T,
    pub lat: T,
    pub t: T,
    /// Standard deviation of the noise on each coordinate.
    pub sigma: T,
}

impl<T: Scalar> Measurement<T> {
    pub fn new(t: T, lon: T, lat: T, sigma: T) -> Self {
        Self { lon, lat, t, sigma }
    }
}

/// Nonempty, strictly time-ordered sequence of measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    points: Vec<Measurement<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(points: Vec<Measurement<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(GpError::EmptyInput);
        }
        for p in &points {
            if !(p.t.is_finite() && p.lon.is_finite() && p.lat.is_finite() && p.sigma.is_finite()) {
                return Err(GpError::InvalidModel(format!("non-finite measurement at t={}", p.t)));
            }
            if p.sigma < T::zero() {
                return Err(GpError::InvalidModel(format!("negative sigma at t={}", p.t)));
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].t == w[0].t {
                return Err(GpError::DuplicateTimestamp(w[1].t.as_f64()));
            }
            if w[1].t < w[0].t {
                return Err(GpError::UnorderedTimestamps(i + 1));
            }
        }
        Ok(Self { points })
    }

    /// Sorts by time first; duplicates are still rejected.
    pub fn from_unsorted(mut points: Vec<Measurement<T>>) -> Result<Self> {
        points.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap_or(std::cmp::Ordering::Equal));
        Self::new(points)
    }

    pub fn points(&self) -> &[Measurement<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Lon,
    Lat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepConfig<T> {
    pub sigma_prior: Option<T>,
    pub normalize_time: bool,
    pub axis: Axis,
}

impl<T> PrepConfig<T> {
    pub fn new(axis: Axis) -> Self {
        Self { sigma_prior: None, normalize_time: true, axis }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateDataset<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    /// Root-mean-square of the per-point sigmas.
    pub sigma_m: T,
    /// Subtracted from the raw timestamps to get `x`.
    pub time_offset: T,
    pub sigmas: Vec<T>,
    pub sigma_prior: Option<T>,
}

impl<T: Scalar> CoordinateDataset<T> {
    /// Dataset with no per-point noise information.
    pub fn from_xy(x: Vec<T>, y: Vec<T>) -> Self {
        let n = x.len();
        Self { x, y, sigma_m: T::zero(), time_offset: T::zero(), sigmas: vec![T::zero(); n], sigma_prior: None }
    }
}

pub fn prepare<T: Scalar>(traj: &Trajectory<T>, cfg: &PrepConfig<T>) -> Result<CoordinateDataset<T>> {
    if let Some(s) = cfg.sigma_prior {
        if !(s > T::zero()) {
            return Err(GpError::InvalidModel("sigma_prior must be positive".into()));
        }
    }
    let pts = traj.points();
    for w in pts.windows(2) {
        if w[0].t == w[1].t {
            return Err(GpError::DuplicateTimestamp(w[1].t.as_f64()));
        }
    }
    let time_offset = if cfg.normalize_time { pts[0].t } else { T::zero() };
    let x = pts.iter().map(|p| p.t - time_offset).collect();
    let y = pts
        .iter()
        .map(|p| match cfg.axis {
            Axis::Lon => p.lon,
            Axis::Lat => p.lat,
        })
        .collect();
    let sigmas: Vec<T> = pts.iter().map(|p| p.sigma).collect();
    let first = sigmas[0];
    let sigma_m = if sigmas.iter().all(|&s| s == first) {
        first
    } else {
        let ms = sigmas.iter().fold(T::zero(), |acc, &s| acc + s * s) / T::from_usize_lossy(sigmas.len());
        ms.sqrt()
    };
    Ok(CoordinateDataset { x, y, sigma_m, time_offset, sigmas, sigma_prior: cfg.sigma_prior })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseMode {
    /// Kernel and likelihood as written in the spec.
    #[default]
    AsSpecified,
    /// Every White leaf gets variance σ_m² and is frozen.
    PinWhite,
    /// Per-point σ² is added to the diagonal of the training covariance.
    PerPoint,
}

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    pub noise: NoiseMode,
    pub opt: OptConfig,
}

/// Builds the model for one axis with the initialization rules applied,
/// without training it.
pub fn initial_model<T: Scalar>(ds: &CoordinateDataset<T>, spec: &ModelSpec, opts: &FitOptions) -> Result<GpModel<T>> {
    let mut model = modelspec::build(spec, ds)?;
    let mut kernel = model.kernel().clone();
    if opts.noise == NoiseMode::PinWhite {
        kernel.visit_params_mut(&mut |path, p| {
            if path.ends_with("white.variance") {
                p.value = (ds.sigma_m * ds.sigma_m).max(p.lower_bound);
                p.trainable = false;
            }
        });
    }
    if let Some(s0) = ds.sigma_prior {
        init_prior_variance(&mut kernel, s0 * s0);
    }
    model = model.with_kernel(kernel)?;
    if opts.noise == NoiseMode::PerPoint {
        model = model.with_extra_noise(ds.sigmas.iter().map(|&s| s * s).collect())?;
    }
    Ok(model)
}

/// Sets the first stationary, non-white term of the top-level sum to `v`
/// if its variance still has the default value 1.
fn init_prior_variance<T: Scalar>(kernel: &mut Kernel<T>, v: T) -> bool {
    match kernel {
        Kernel::Sum(a, b) => init_prior_variance(a, v) || init_prior_variance(b, v),
        Kernel::SquaredExponential { variance, .. }
        | Kernel::RationalQuadratic { variance, .. }
        | Kernel::Matern { variance, .. }
        | Kernel::Constant { variance }
            if variance.value == T::one() =>
        {
            variance.value = v;
            true
        }
        _ => false,
    }
}

pub fn fit_axis<T: Scalar>(ds: &CoordinateDataset<T>, spec: &ModelSpec, opts: &FitOptions) -> Result<OptResult<T>> {
    minimize(&initial_model(ds, spec, opts)?, &opts.opt)
}

/// Fitted pair of per-axis models sharing one time origin.
#[derive(Debug, Clone)]
pub struct TrajectoryModel<T> {
    pub lon: GpModel<T>,
    pub lat: GpModel<T>,
    pub time_offset: T,
}

#[derive(Debug, Clone)]
pub struct TrajectoryFit<T> {
    pub lon: OptResult<T>,
    pub lat: OptResult<T>,
    pub time_offset: T,
}

impl<T: Scalar> TrajectoryFit<T> {
    pub fn model(&self) -> TrajectoryModel<T> {
        TrajectoryModel { lon: self.lon.model.clone(), lat: self.lat.model.clone(), time_offset: self.time_offset }
    }
}

/// Fits both axes with the same spec; the two fits run on separate threads.
pub fn fit_trajectory<T: Scalar>(
    traj: &Trajectory<T>,
    spec: &ModelSpec,
    sigma_prior: Option<T>,
    normalize_time: bool,
    opts: &FitOptions,
) -> Result<TrajectoryFit<T>> {
    let cfg = |axis| PrepConfig { sigma_prior, normalize_time, axis };
    let lon_ds = prepare(traj, &cfg(Axis::Lon))?;
    let lat_ds = prepare(traj, &cfg(Axis::Lat))?;
    let (lon, lat) = std::thread::scope(|s| {
        let h = s.spawn(|| fit_axis(&lat_ds, spec, opts));
        let lon = fit_axis(&lon_ds, spec, opts);
        (lon, h.join().expect("axis fit panicked"))
    });
    Ok(TrajectoryFit { lon: lon?, lat: lat?, time_offset: lon_ds.time_offset })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocatedPrediction<T> {
    pub t: T,
    pub lon_mean: T,
    pub lat_mean: T,
    pub lon_std: T,
    pub lat_std: T,
}

/// Predictive distribution of the observed position at each time in `ts`
/// (raw timestamps), sorted by time.
pub fn interpolate<T: Scalar>(model: &TrajectoryModel<T>, ts: &[T]) -> Result<Vec<LocatedPrediction<T>>> {
    if ts.is_empty() {
        return Err(GpError::EmptyTimestampSet);
    }
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(GpError::InvalidModel("non-finite query time".into()));
    }
    let mut sorted = ts.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let shifted: Vec<T> = sorted.iter().map(|&t| t - model.time_offset).collect();
    let lon = model.lon.predict_y(&shifted)?;
    let lat = model.lat.predict_y(&shifted)?;
    Ok((0..sorted.len())
        .map(|i| LocatedPrediction {
            t: sorted[i],
            lon_mean: lon.means[i],
            lat_mean: lat.means[i],
            lon_std: lon.variances[i].sqrt(),
            lat_std: lat.variances[i].sqrt(),
        })
        .collect())
}

const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Local equirectangular projection to metres around a reference point.
/// Adequate over a few tens of kilometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalProjection {
    pub lon0: f64,
    pub lat0: f64,
}

impl LocalProjection {
    pub fn centered_on<T: Scalar>(traj: &Trajectory<T>) -> Self {
        let n = traj.len() as f64;
        let (lon, lat) = traj.points().iter().fold((0.0, 0.0), |(a, b), p| (a + p.lon.as_f64(), b + p.lat.as_f64()));
        Self { lon0: lon / n, lat0: lat / n }
    }

    fn kx(&self) -> f64 {
        EARTH_RADIUS_M * self.lat0.to_radians().cos()
    }

    pub fn forward(&self, lon: f64, lat: f64) -> (f64, f64) {
        ((lon - self.lon0).to_radians() * self.kx(), (lat - self.lat0).to_radians() * EARTH_RADIUS_M)
    }

    pub fn inverse(&self, x: f64, y: f64) -> (f64, f64) {
        (self.lon0 + (x / self.kx()).to_degrees(), self.lat0 + (y / EARTH_RADIUS_M).to_degrees())
    }

    /// Projects positions; sigmas are taken to be in metres already.
    pub fn project<T: Scalar>(&self, traj: &Trajectory<T>) -> Trajectory<T> {
        let points = traj
            .points()
            .iter()
            .map(|p| {
                let (x, y) = self.forward(p.lon.as_f64(), p.lat.as_f64());
                Measurement { lon: T::lit(x), lat: T::lit(y), ..*p }
            })
            .collect();
        Trajectory { points }
    }

    /// Maps projected predictions back to degrees. Standard deviations
    /// are converted with the local scale factors.
    pub fn unproject<T: Scalar>(&self, preds: &[LocatedPrediction<T>]) -> Vec<LocatedPrediction<T>> {
        preds
            .iter()
            .map(|p| {
                let (lon, lat) = self.inverse(p.lon_mean.as_f64(), p.lat_mean.as_f64());
                LocatedPrediction {
                    t: p.t,
                    lon_mean: T::lit(lon),
                    lat_mean: T::lit(lat),
                    lon_std: T::lit((p.lon_std.as_f64() / self.kx()).to_degrees()),
                    lat_std: T::lit((p.lat_std.as_f64() / EARTH_RADIUS_M).to_degrees()),
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpr::tests::{DEMO_X, DEMO_Y};
    use crate::modelspec::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use rand_distr::{Distribution, Normal};

    fn traj(points: &[(f64, f64, f64)], sigma: f64) -> Trajectory<f64> {
        Trajectory::new(points.iter().map(|&(t, lon, lat)| Measurement::new(t, lon, lat, sigma)).collect()).unwrap()
    }

    #[test]
    fn prepare_two_points() {
        let tr = traj(&[(100.0, 1.0, 2.0), (103.5, 1.5, 2.5)], 0.1);
        let ds = prepare(&tr, &PrepConfig::new(Axis::Lon)).unwrap();
        assert_eq!(ds.x, vec![0.0, 3.5]);
        assert_eq!(ds.y, vec![1.0, 1.5]);
        assert_eq!(ds.time_offset, 100.0);
        assert_eq!(ds.sigma_m, 0.1);
        let lat = prepare(&tr, &PrepConfig { normalize_time: false, ..PrepConfig::new(Axis::Lat) }).unwrap();
        assert_eq!(lat.x, vec![100.0, 103.5]);
        assert_eq!(lat.y, vec![2.0, 2.5]);
    }

    #[test]
    fn demo_as_pseudo_trajectory() {
        let pts: Vec<_> = DEMO_X.iter().zip(DEMO_Y).map(|(&t, y)| (t, y, 0.0)).collect();
        let ds =
            prepare(&traj(&pts, 0.0), &PrepConfig { normalize_time: false, ..PrepConfig::new(Axis::Lon) }).unwrap();
        assert_eq!(ds.x, DEMO_X.to_vec());
        assert_eq!(ds.y, DEMO_Y.to_vec());
    }

    #[test]
    fn rejects_bad_trajectories() {
        let m = |t| Measurement::new(t, 0.0, 0.0, 0.0);
        assert_eq!(Trajectory::new(vec![m(1.0), m(1.0)]), Err(GpError::DuplicateTimestamp(1.0)));
        assert_eq!(Trajectory::new(vec![m(2.0), m(1.0)]), Err(GpError::UnorderedTimestamps(1)));
        assert_eq!(Trajectory::<f64>::new(vec![]), Err(GpError::EmptyInput));
        assert!(Trajectory::new(vec![Measurement::new(0.0, 0.0, 0.0, -1.0)]).is_err());
        assert_eq!(Trajectory::from_unsorted(vec![m(2.0), m(1.0), m(2.0)]), Err(GpError::DuplicateTimestamp(2.0)));
        assert_eq!(Trajectory::from_unsorted(vec![m(2.0), m(1.0)]).unwrap().points()[0].t, 1.0);
    }

    #[test]
    fn sigma_m_is_rms() {
        let tr =
            Trajectory::new(vec![Measurement::new(0.0, 0.0, 0.0, 3.0), Measurement::new(1.0, 0.0, 0.0, 4.0)]).unwrap();
        let ds = prepare(&tr, &PrepConfig::new(Axis::Lon)).unwrap();
        assert!((ds.sigma_m - 12.5f64.sqrt()).abs() < 1e-15);
        for s in [0.1, 1e-3, 7.3] {
            let tr = traj(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (2.0, 0.0, 0.0)], s);
            assert_eq!(prepare(&tr, &PrepConfig::new(Axis::Lat)).unwrap().sigma_m, s);
        }
    }

    #[test]
    fn m3_through_fit_axis() {
        let ds = CoordinateDataset::from_xy(DEMO_X.to_vec(), DEMO_Y.to_vec());
        let spec = parse("matern32() + white(variance=4, trainable=false)").unwrap();
        let fit = fit_axis(&ds, &spec, &FitOptions::default()).unwrap();
        let lik = fit.model.likelihood_variance().value;
        assert!((lik - 32.464).abs() < 0.05 * 32.464, "{lik}");
    }

    #[test]
    fn sigma_prior_initializes_variance() {
        let ds =
            CoordinateDataset { sigma_prior: Some(10.0), ..CoordinateDataset::from_xy(vec![0.0, 1.0], vec![0.0, 1.0]) };
        let m = initial_model(&ds, &parse("se()").unwrap(), &FitOptions::default()).unwrap();
        assert_eq!(m.kernel().flatten_params()[0].1.value, 100.0);
        let m = initial_model(&ds, &parse("white() + se(variance=2) + matern32()").unwrap(), &FitOptions::default())
            .unwrap();
        let vals: Vec<f64> = m.kernel().flatten_params().iter().map(|(_, p)| p.value).collect();
        assert_eq!(vals, vec![1.0, 2.0, 1.0, 100.0, 1.0]);
        // products are not top-level terms
        let m = initial_model(&ds, &parse("se() * linear()").unwrap(), &FitOptions::default()).unwrap();
        assert_eq!(m.kernel().flatten_params()[0].1.value, 1.0);
    }

    #[test]
    fn noise_modes() {
        let tr = Trajectory::new(vec![
            Measurement::new(0.0, 0.0, 0.0, 0.5),
            Measurement::new(1.0, 1.0, 0.0, 0.5),
            Measurement::new(2.0, 1.5, 0.0, 0.5),
        ])
        .unwrap();
        let ds = prepare(&tr, &PrepConfig::new(Axis::Lon)).unwrap();
        let spec = parse("se() + white()").unwrap();
        let pinned =
            initial_model(&ds, &spec, &FitOptions { noise: NoiseMode::PinWhite, ..Default::default() }).unwrap();
        let (path, p) = &pinned.kernel().flatten_params()[2];
        assert_eq!(path, "sum.right.white.variance");
        assert_eq!((p.value, p.trainable), (0.25, false));
        let per = initial_model(&ds, &spec, &FitOptions { noise: NoiseMode::PerPoint, ..Default::default() }).unwrap();
        assert_eq!(per.extra_noise(), Some(&[0.25, 0.25, 0.25][..]));
    }

    #[test]
    fn single_point() {
        let tr = traj(&[(5.0, 13.4, 52.5)], 0.0);
        let spec = parse("se(); likelihood(init=0.000001, trainable=false)").unwrap();
        let fit = fit_trajectory(&tr, &spec, None, true, &FitOptions::default()).unwrap();
        let model = fit.model();
        let p = interpolate(&model, &[5.0]).unwrap();
        assert!((p[0].lon_mean - 13.4).abs() < 1e-3, "{:?}", p[0]);
        assert!(p[0].lat_mean.is_finite() && p[0].lat_std >= 0.0);
        assert_eq!(interpolate(&model, &[]), Err(GpError::EmptyTimestampSet));
    }

    fn line_fit(vlon: f64, vlat: f64, seed: u64) -> TrajectoryFit<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 1e-3).unwrap();
        let pts: Vec<_> = (0..30)
            .map(|i| {
                let t = 1000.0 + 2.0 * f64::from(i);
                let dt = t - 1000.0;
                Measurement::new(
                    t,
                    13.0 + vlon * dt + noise.sample(&mut rng),
                    52.0 + vlat * dt + noise.sample(&mut rng),
                    1e-3,
                )
            })
            .collect();
        let spec = parse("white(); mean=linear(a=0, b=0); likelihood(init=0.000001, trainable=false)").unwrap();
        let opts = FitOptions { noise: NoiseMode::PinWhite, ..Default::default() };
        fit_trajectory(&Trajectory::new(pts).unwrap(), &spec, None, true, &opts).unwrap()
    }

    fn slope(r: &OptResult<f64>) -> f64 {
        match r.model.mean() {
            crate::means::MeanFn::Linear { slope, .. } => slope.value,
            _ => unreachable!(),
        }
    }

    #[test]
    fn straight_line_velocity() {
        let (vlon, vlat) = (2e-3, -1e-3);
        let fit = line_fit(vlon, vlat, 7);
        assert!((slope(&fit.lon) - vlon).abs() < 0.05 * vlon.abs(), "{}", slope(&fit.lon));
        assert!((slope(&fit.lat) - vlat).abs() < 0.05 * vlat.abs(), "{}", slope(&fit.lat));
    }

    #[test]
    fn east_west_motion() {
        let fit = line_fit(3e-3, 0.0, 11);
        assert!((slope(&fit.lon) - 3e-3).abs() < 3e-5);
        assert!(slope(&fit.lat).abs() < 3e-5, "{}", slope(&fit.lat));
        let p = interpolate(&fit.model(), &[1000.0, 1058.0]).unwrap();
        assert!((p[1].lat_mean - p[0].lat_mean).abs() < 1e-3);
        assert!(p[1].lon_mean - p[0].lon_mean > 0.15);
    }

    #[test]
    fn axis_order_is_irrelevant() {
        let tr = traj(&[(0.0, 1.0, 5.0), (1.0, 2.0, 4.0), (2.0, 2.5, 4.5), (4.0, 3.0, 3.0)], 0.1);
        let spec = parse("matern52() + white()").unwrap();
        let opts = FitOptions::default();
        let both = fit_trajectory(&tr, &spec, None, true, &opts).unwrap();
        let lat = fit_axis(&prepare(&tr, &PrepConfig::new(Axis::Lat)).unwrap(), &spec, &opts).unwrap();
        let lon = fit_axis(&prepare(&tr, &PrepConfig::new(Axis::Lon)).unwrap(), &spec, &opts).unwrap();
        assert_eq!(both.lat.model, lat.model);
        assert_eq!(both.lon.model, lon.model);
    }

    #[test]
    fn time_shift_invariance() {
        let base = [(0.0, 1.0, 5.0), (1.0, 2.0, 4.0), (2.5, 2.5, 4.5), (4.0, 3.0, 3.0), (6.0, 2.0, 3.5)];
        let shifted: Vec<_> = base.iter().map(|&(t, a, b)| (t + 1.7e5, a, b)).collect();
        let spec = parse("matern32() + white()").unwrap();
        let opts = FitOptions::default();
        let raw = fit_trajectory(&traj(&base, 0.1), &spec, None, false, &opts).unwrap().model();
        let norm = fit_trajectory(&traj(&shifted, 0.1), &spec, None, true, &opts).unwrap().model();
        let qs = [0.5, 3.0, 7.0];
        let a = interpolate(&raw, &qs).unwrap();
        let b = interpolate(&norm, &qs.map(|t: f64| t + 1.7e5)).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p.lon_mean - q.lon_mean).abs() < 1e-9);
            assert!((p.lat_mean - q.lat_mean).abs() < 1e-9);
            assert!((p.lon_std - q.lon_std).abs() < 1e-9);
            assert!((p.lat_std - q.lat_std).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolates_training_points() {
        let pts = [(0.0, 1.0, 5.0), (1.0, 2.0, 4.0), (2.0, 2.5, 4.5), (3.0, 3.0, 3.0)];
        let spec = parse("matern52(variance=10); likelihood(init=0.000001, trainable=false)").unwrap();
        let fit = fit_trajectory(&traj(&pts, 0.0), &spec, None, true, &FitOptions::default()).unwrap();
        let p = interpolate(&fit.model(), &[3.0, 0.0, 2.0, 1.0]).unwrap();
        for (q, &(t, lon, lat)) in p.iter().zip(&pts) {
            assert_eq!(q.t, t);
            assert!((q.lon_mean - lon).abs() < 1e-3 && (q.lat_mean - lat).abs() < 1e-3, "{q:?}");
        }
    }

    #[test]
    fn projection_round_trip() {
        let tr = traj(&[(0.0, 13.40, 52.52), (1.0, 13.41, 52.53)], 5.0);
        let proj = LocalProjection::centered_on(&tr);
        let (x, y) = proj.forward(13.41, 52.53);
        let (lon, lat) = proj.inverse(x, y);
        assert!((lon - 13.41).abs() < 1e-12 && (lat - 52.53).abs() < 1e-12);
        // 0.01 degrees of latitude is about 1.1 km
        assert!((y - 556.0).abs() < 1.0, "{y}");
        let p = proj.project(&tr);
        assert!(p.points()[0].lon < 0.0 && p.points()[1].lon > 0.0);
        assert_eq!(p.points()[0].sigma, 5.0);
    }
}
