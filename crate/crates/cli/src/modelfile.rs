//! Trajectory CSV input and the text model file.
//!
//! A model file looks like
//!
//! ```text
//! trajgp-model 1
//! normalize_time = true
//! noise = as-specified
//! time_offset = 1000
//! digest = sha256:<hex of the data section>
//! lon = <canonical spec with trained values>
//! lat = <canonical spec with trained values>
//! data
//! t,lon,lat,sigma
//! ...
//! ```
//!
//! Either axis line may be absent. Values use the shortest decimal form that
//! parses back to the same `f64`, so saving and loading is lossless.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use trajgp::modelspec::{self, ModelSpec};
use trajgp::{prepare, Axis, GpModel, Measurement, NoiseMode, PrepConfig, Trajectory};

const MAGIC: &str = "trajgp-model 1";

pub fn read_trajectory_csv(text: &str) -> Result<Trajectory<f64>, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| format!("bad CSV header: {e}"))?.clone();
    let col =
        |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| format!("CSV header lacks column `{name}`"));
    let (ti, loi, lai, si) = (col("t")?, col("lon")?, col("lat")?, col("sigma")?);
    let mut points = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format!("CSV row {}: {e}", row + 2))?;
        let field = |i: usize, name: &str| -> Result<f64, String> {
            let raw = rec.get(i).unwrap_or("");
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("CSV row {}: column `{name}` is not a finite number: `{raw}`", row + 2)),
            }
        };
        let sigma = field(si, "sigma")?;
        if sigma < 0.0 {
            return Err(format!("CSV row {}: negative sigma", row + 2));
        }
        points.push(Measurement::new(field(ti, "t")?, field(loi, "lon")?, field(lai, "lat")?, sigma));
    }
    if points.is_empty() {
        return Err("CSV contains no measurements".into());
    }
    Trajectory::from_unsorted(points).map_err(|e| e.to_string())
}

fn write_data(traj: &Trajectory<f64>) -> String {
    let mut s = String::from("t,lon,lat,sigma\n");
    for p in traj.points() {
        let _ = writeln!(s, "{},{},{},{}", p.t, p.lon, p.lat, p.sigma);
    }
    s
}

fn digest(data: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(data.as_bytes())))
}

pub fn noise_name(mode: NoiseMode) -> &'static str {
    match mode {
        NoiseMode::AsSpecified => "as-specified",
        NoiseMode::PinWhite => "pin-white",
        NoiseMode::PerPoint => "per-point",
    }
}

fn noise_from_name(s: &str) -> Option<NoiseMode> {
    Some(match s {
        "as-specified" => NoiseMode::AsSpecified,
        "pin-white" => NoiseMode::PinWhite,
        "per-point" => NoiseMode::PerPoint,
        _ => return None,
    })
}

#[derive(Debug, Clone)]
pub struct ModelFile {
    pub normalize_time: bool,
    pub noise: NoiseMode,
    pub time_offset: f64,
    pub lon: Option<ModelSpec>,
    pub lat: Option<ModelSpec>,
    pub data: Trajectory<f64>,
}

impl ModelFile {
    pub fn render(&self) -> String {
        let data = write_data(&self.data);
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "normalize_time = {}", self.normalize_time);
        let _ = writeln!(s, "noise = {}", noise_name(self.noise));
        let _ = writeln!(s, "time_offset = {}", self.time_offset);
        let _ = writeln!(s, "digest = {}", digest(&data));
        if let Some(spec) = &self.lon {
            let _ = writeln!(s, "lon = {spec}");
        }
        if let Some(spec) = &self.lat {
            let _ = writeln!(s, "lat = {spec}");
        }
        s.push_str("data\n");
        s.push_str(&data);
        s
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let (head, data) = text.split_once("\ndata\n").ok_or("model file has no data section")?;
        let mut lines = head.lines();
        if lines.next().map(str::trim) != Some(MAGIC) {
            return Err("not a trajgp model file".into());
        }
        let (mut normalize_time, mut noise, mut time_offset, mut sum) = (None, None, None, None);
        let (mut lon, mut lat) = (None, None);
        for line in lines.map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line.split_once('=').ok_or_else(|| format!("malformed model file line `{line}`"))?;
            let v = v.trim();
            let spec = |v: &str| modelspec::parse(v).map_err(|e| format!("model file spec: {e}"));
            match k.trim() {
                "normalize_time" => normalize_time = Some(v.parse::<bool>().map_err(|e| e.to_string())?),
                "noise" => noise = Some(noise_from_name(v).ok_or_else(|| format!("unknown noise mode `{v}`"))?),
                "time_offset" => time_offset = Some(v.parse::<f64>().map_err(|e| e.to_string())?),
                "digest" => sum = Some(v.to_owned()),
                "lon" => lon = Some(spec(v)?),
                "lat" => lat = Some(spec(v)?),
                other => return Err(format!("unknown model file key `{other}`")),
            }
        }
        if sum.as_deref() != Some(digest(data).as_str()) {
            return Err("model file data does not match its digest".into());
        }
        if lon.is_none() && lat.is_none() {
            return Err("model file contains no fitted axis".into());
        }
        Ok(Self {
            normalize_time: normalize_time.ok_or("model file lacks normalize_time")?,
            noise: noise.ok_or("model file lacks noise")?,
            time_offset: time_offset.ok_or("model file lacks time_offset")?,
            lon,
            lat,
            data: read_trajectory_csv(data)?,
        })
    }

    /// Rebuilds the trained model for one axis from its spec and the data.
    pub fn axis_model(&self, axis: Axis) -> Option<trajgp::Result<GpModel<f64>>> {
        let spec = match axis {
            Axis::Lon => self.lon.as_ref()?,
            Axis::Lat => self.lat.as_ref()?,
        };
        Some((|| {
            let cfg = PrepConfig { normalize_time: self.normalize_time, ..PrepConfig::new(axis) };
            let ds = prepare(&self.data, &cfg)?;
            let model = modelspec::build(spec, &ds)?;
            if self.noise == NoiseMode::PerPoint {
                return model.with_extra_noise(ds.sigmas.iter().map(|s| s * s).collect());
            }
            Ok(model)
        })())
    }
}
