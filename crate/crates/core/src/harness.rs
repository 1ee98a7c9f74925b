//! Synthetic measurement campaigns and ingestion of measurement files.
//!
//! The simulator stands in for runs on real hardware: it evaluates the models
//! at known parameters and perturbs every repeat with Gaussian noise, relative
//! on time and absolute on power.

use std::collections::HashMap;
use std::io::Read;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fitting::{median, MeasurementRecord};
use crate::formats::{read_measurement_rows, MeasurementRow, PowerSample};
use crate::models::{power_parallel, predict_time, PerfParams, PowerParams};
use crate::platform::{Configuration, PlatformSpec};
use crate::scalar::Scalar;

/// Default relative standard deviation of measured execution times.
pub const DEFAULT_TIME_SIGMA: f64 = 0.01;
/// Default absolute standard deviation of measured chip power, in watts.
pub const DEFAULT_POWER_SIGMA_W: f64 = 0.15;
/// Simulated power readings are floored here, in watts.
pub const POWER_FLOOR_W: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticGroundTruth<T> {
    pub app: String,
    pub perf_params: PerfParams<T>,
    pub power_params: PowerParams<T>,
    pub noise_time_sigma: T,
    pub noise_power_sigma: T,
    pub seed: u64,
}

impl<T: Scalar> SyntheticGroundTruth<T> {
    /// Ground truth with the default noise levels.
    pub fn new(perf_params: PerfParams<T>, power_params: PowerParams<T>, seed: u64) -> Self {
        Self {
            app: "synthetic".into(),
            perf_params,
            power_params,
            noise_time_sigma: T::of(DEFAULT_TIME_SIGMA),
            noise_power_sigma: T::of(DEFAULT_POWER_SIGMA_W),
            seed,
        }
    }

    pub fn noiseless(perf_params: PerfParams<T>, power_params: PowerParams<T>) -> Self {
        Self::new(perf_params, power_params, 0).with_noise(T::zero(), T::zero())
    }

    pub fn with_noise(mut self, time_sigma: T, power_sigma: T) -> Self {
        self.noise_time_sigma = time_sigma;
        self.noise_power_sigma = power_sigma;
        self
    }

    pub fn with_app(mut self, app: impl Into<String>) -> Self {
        self.app = app.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        self.perf_params.validate()?;
        self.power_params.validate()?;
        for (name, s) in [("time", self.noise_time_sigma), ("power", self.noise_power_sigma)] {
            if !(s >= T::zero() && s.is_finite()) {
                return Err(Error::InvalidParameters(format!("{name} noise sigma must be >= 0")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign<T> {
    pub platform: PlatformSpec<T>,
    pub configurations: Vec<Configuration<T>>,
    pub repeats: u32,
}

impl<T: Scalar> Campaign<T> {
    /// Five repeats per configuration.
    pub fn new(platform: PlatformSpec<T>, configurations: Vec<Configuration<T>>) -> Self {
        Self {
            platform,
            configurations,
            repeats: 5,
        }
    }

    pub fn with_repeats(mut self, repeats: u32) -> Self {
        self.repeats = repeats;
        self
    }

    fn validate(&self) -> Result<()> {
        self.platform.validate()?;
        if self.repeats == 0 {
            return Err(Error::InvalidParameters("campaign needs at least one repeat".into()));
        }
        for (i, c) in self.configurations.iter().enumerate() {
            if !self.platform.is_valid(c) {
                return Err(Error::InvalidConfiguration(format!("{c:?} is not valid on the platform")));
            }
            if self.configurations[..i].contains(c) {
                return Err(Error::InvalidConfiguration(format!("{c:?} appears twice")));
            }
        }
        Ok(())
    }
}

/// Every simulated run, one row per (configuration, repeat). Rows are drawn
/// serially from a single seeded stream, configuration-major.
pub fn simulate_runs<T: Scalar>(
    gt: &SyntheticGroundTruth<T>,
    campaign: &Campaign<T>,
) -> Result<Vec<MeasurementRow<T>>> {
    gt.validate()?;
    campaign.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(gt.seed);
    let floor = T::of(POWER_FLOOR_W);
    let mut rows = Vec::with_capacity(campaign.configurations.len() * campaign.repeats as usize);
    for c in &campaign.configurations {
        let time = predict_time(&gt.perf_params, c)?;
        let power = power_parallel(&gt.power_params, c);
        for repeat in 1..=campaign.repeats {
            let z_time: f64 = StandardNormal.sample(&mut rng);
            let z_power: f64 = StandardNormal.sample(&mut rng);
            let t = time * (T::one() + gt.noise_time_sigma * T::of(z_time));
            let p = (power + gt.noise_power_sigma * T::of(z_power)).max(floor);
            rows.push(MeasurementRow {
                app: gt.app.clone(),
                config: *c,
                time_s: Some(t.max(T::min_positive_value())),
                power_w: Some(p),
                repeat,
            });
        }
    }
    Ok(rows)
}

/// Simulated records: median time and mean power over the repeats of each
/// configuration.
pub fn simulate_measurements<T: Scalar>(
    gt: &SyntheticGroundTruth<T>,
    campaign: &Campaign<T>,
) -> Result<Vec<MeasurementRecord<T>>> {
    Ok(aggregate(&simulate_runs(gt, campaign)?))
}

type GroupKey = (String, u32, u32, u64, u64);

fn key<T: Scalar>(row: &MeasurementRow<T>) -> GroupKey {
    (
        row.app.clone(),
        row.config.big_cores,
        row.config.little_cores,
        row.config.big_freq_hz.as_f64().to_bits(),
        row.config.little_freq_hz.as_f64().to_bits(),
    )
}

/// Groups runs by (app, configuration) in order of first appearance; time is
/// the median of the timed runs and power the mean of the powered runs.
pub fn aggregate<T: Scalar>(rows: &[MeasurementRow<T>]) -> Vec<MeasurementRecord<T>> {
    let mut index: HashMap<GroupKey, usize> = HashMap::new();
    let mut groups: Vec<(&MeasurementRow<T>, Vec<T>, Vec<T>, u32)> = Vec::new();
    for row in rows {
        let slot = *index.entry(key(row)).or_insert_with(|| {
            groups.push((row, Vec::new(), Vec::new(), 0));
            groups.len() - 1
        });
        let g = &mut groups[slot];
        g.1.extend(row.time_s);
        g.2.extend(row.power_w);
        g.3 += 1;
    }
    groups
        .into_iter()
        .map(|(first, mut times, powers, n)| MeasurementRecord {
            app: first.app.clone(),
            config: first.config,
            time_s: (!times.is_empty()).then(|| median(&mut times)),
            power_w: powers.first().map(|&first| {
                // offset from the first sample keeps identical repeats exact
                first + powers.iter().map(|&p| p - first).sum::<T>() / T::count(powers.len())
            }),
            repeats: n,
        })
        .collect()
}

/// Reads a measurement CSV, validates every row against `platform` and
/// aggregates repeated runs.
pub fn ingest_measurements<T: Scalar, R: Read>(
    input: R,
    platform: &PlatformSpec<T>,
) -> Result<Vec<MeasurementRecord<T>>> {
    platform.validate()?;
    let rows = read_measurement_rows::<T, _>(input)?;
    if rows.is_empty() {
        return Err(Error::Empty("measurement file has no rows"));
    }
    for (line, row) in &rows {
        if !platform.is_valid(&row.config) {
            return Err(Error::Row {
                row: *line,
                message: format!(
                    "configuration b={} l={} fb={} fl={} is not valid on the platform",
                    row.config.big_cores,
                    row.config.little_cores,
                    row.config.big_freq_hz,
                    row.config.little_freq_hz
                ),
            });
        }
    }
    let rows: Vec<MeasurementRow<T>> = rows.into_iter().map(|(_, r)| r).collect();
    Ok(aggregate(&rows))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEnergy<T> {
    pub energy_j: T,
    pub duration_s: T,
    pub average_power_w: T,
}

/// Trapezoidal integral of a timestamped power trace.
pub fn energy_from_power_trace<T: Scalar>(samples: &[PowerSample<T>]) -> Result<TraceEnergy<T>> {
    if samples.len() < 2 {
        return Err(Error::Trace(format!("need at least 2 samples, got {}", samples.len())));
    }
    if let Some(i) = samples.windows(2).position(|w| !(w[1].t_s > w[0].t_s)) {
        return Err(Error::Trace(format!(
            "timestamps must be strictly increasing (sample {})",
            i + 2
        )));
    }
    let half = T::of(0.5);
    let energy_j = samples
        .windows(2)
        .map(|w| (w[1].t_s - w[0].t_s) * (w[0].power_w + w[1].power_w) * half)
        .sum::<T>();
    let duration_s = samples[samples.len() - 1].t_s - samples[0].t_s;
    Ok(TraceEnergy {
        energy_j,
        duration_s,
        average_power_w: energy_j / duration_s,
    })
}
