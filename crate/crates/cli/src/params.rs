//! JSON documents exchanged on the command line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hmpareto::fitting::FitReport;
use hmpareto::{PerfParams, PlatformSpec, PowerParams};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const ODROID_XU3: &str = "odroid-xu3";

pub fn load_platform(reference: &str) -> Result<PlatformSpec> {
    if reference == ODROID_XU3 {
        return Ok(PlatformSpec::odroid_xu3());
    }
    let platform: PlatformSpec = read_json(Path::new(reference))?;
    platform
        .validate()
        .with_context(|| format!("platform {reference}"))?;
    Ok(platform)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid", path.display()))
}

/// `{"f", "perf", "t_l_ref", "f_ref"}`. `simulate` also reads the optional
/// noise and app fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerfJson {
    pub f: f64,
    pub perf: f64,
    pub t_l_ref: f64,
    pub f_ref: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_time_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app: Option<String>,
}

impl PerfJson {
    pub fn params(&self) -> PerfParams {
        PerfParams::new(self.f, self.perf, self.t_l_ref, self.f_ref)
    }
}

impl From<&PerfParams> for PerfJson {
    fn from(p: &PerfParams) -> Self {
        Self {
            f: p.parallel_fraction,
            perf: p.big_speedup,
            t_l_ref: p.ref_time_s,
            f_ref: p.ref_freq_hz,
            noise_time_sigma: None,
            app: None,
        }
    }
}

/// `{"alpha_b", "beta_b", "alpha_l", "beta_l"}`; cluster sizes come from the
/// platform.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerJson {
    pub alpha_b: f64,
    pub beta_b: f64,
    pub alpha_l: f64,
    pub beta_l: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_power_sigma: Option<f64>,
}

impl PowerJson {
    pub fn params(&self, platform: &PlatformSpec) -> PowerParams {
        PowerParams::for_platform(platform, self.alpha_b, self.beta_b, self.alpha_l, self.beta_l)
    }
}

impl From<&PowerParams> for PowerJson {
    fn from(q: &PowerParams) -> Self {
        Self {
            alpha_b: q.alpha_big,
            beta_b: q.beta_big,
            alpha_l: q.alpha_little,
            beta_l: q.beta_little,
            noise_power_sigma: None,
        }
    }
}

/// Fitted parameters followed by the fit diagnostics, flat in one object so
/// the file can be fed straight back as `--perf-params` / `--power-params`.
#[derive(Debug, Serialize)]
pub struct FitJson<P> {
    #[serde(flatten)]
    pub params: P,
    pub rmse: f64,
    pub n_points: usize,
    pub iterations: usize,
    pub converged: bool,
    pub underdetermined: bool,
}

impl<P> FitJson<P> {
    pub fn new<Q>(report: &FitReport<Q, f64>, params: P) -> Self {
        Self {
            params,
            rmse: report.rmse,
            n_points: report.n_points,
            iterations: report.iterations,
            converged: report.converged,
            underdetermined: report.underdetermined,
        }
    }
}

/// Parses `"b,L,fb_hz,fl_hz"`.
pub fn parse_config(text: &str) -> Result<hmpareto::Configuration> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("--config expects \"b,L,fb_hz,fl_hz\", got {text:?}");
    }
    let b = parts[0].parse().with_context(|| format!("bad big core count {:?}", parts[0]))?;
    let l = parts[1].parse().with_context(|| format!("bad LITTLE core count {:?}", parts[1]))?;
    let fb = parts[2].parse().with_context(|| format!("bad big frequency {:?}", parts[2]))?;
    let fl = parts[3].parse().with_context(|| format!("bad LITTLE frequency {:?}", parts[3]))?;
    Ok(hmpareto::Configuration::new(b, l, fb, fl))
}
