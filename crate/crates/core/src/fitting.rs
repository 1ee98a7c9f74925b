//! Model fitting from measurements by minimizing the root mean square error.
//!
//! The power constants are fitted with a multi-start bounded Nelder–Mead in
//! coordinates rescaled so that every constant is O(1) at the start point;
//! the parallel fraction with a golden-section search on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{phase_times, power_parallel, predict_time, PerfParams, PowerParams};
use crate::optimize::{golden_section, NelderMead};
use crate::platform::{Configuration, PlatformSpec};
use crate::scalar::Scalar;

/// One observation of a configuration: median execution time and/or average
/// chip power over `repeats` runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord<T> {
    pub app: String,
    pub config: Configuration<T>,
    pub time_s: Option<T>,
    pub power_w: Option<T>,
    pub repeats: u32,
}

impl<T: Scalar> MeasurementRecord<T> {
    pub fn validate(&self) -> Result<()> {
        if self.time_s.is_none() && self.power_w.is_none() {
            return Err(Error::InvalidParameters(
                "measurement has neither time nor power".into(),
            ));
        }
        for v in self.time_s.iter().chain(self.power_w.iter()) {
            if !(*v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidParameters(format!(
                    "measured value {v} is not positive"
                )));
            }
        }
        Ok(())
    }
}

/// Execution times of the same fixed workload on one LITTLE and one big core
/// at a shared frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupPair<T> {
    pub freq_hz: T,
    pub t_little_s: T,
    pub t_big_s: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport<P, T> {
    pub params: P,
    pub rmse: T,
    pub n_points: usize,
    pub iterations: usize,
    pub converged: bool,
    /// The data does not pin the fitted parameters down; any value in the
    /// reported range is equally good.
    pub underdetermined: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions<T> {
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::of(1e-10),
            max_iterations: 10_000,
        }
    }
}

pub fn rmse<T: Scalar>(actual: &[T], estimated: &[T]) -> Result<T> {
    if actual.len() != estimated.len() {
        return Err(Error::LengthMismatch(actual.len(), estimated.len()));
    }
    if actual.is_empty() {
        return Err(Error::Empty("rmse needs at least one pair"));
    }
    Ok(squared_error_mean(actual.iter().zip(estimated).map(|(&a, &e)| a - e)))
}

fn squared_error_mean<T: Scalar>(residuals: impl Iterator<Item = T>) -> T {
    let (sum, n) = residuals.fold((T::zero(), 0usize), |(s, n), r| (s + r * r, n + 1));
    (sum / T::count(n)).sqrt()
}

pub(crate) fn median<T: Scalar>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("median of finite values"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / T::of(2.0)
    }
}

/// Big-over-LITTLE speedup as the median of per-frequency time ratios.
pub fn fit_perf<T: Scalar>(pairs: &[SpeedupPair<T>]) -> Result<T> {
    if pairs.is_empty() {
        return Err(Error::Empty("speedup fit needs at least one pair"));
    }
    let mut ratios = pairs
        .iter()
        .map(|p| {
            if p.t_little_s > T::zero() && p.t_big_s > T::zero() && p.t_little_s.is_finite() && p.t_big_s.is_finite() {
                Ok(p.t_little_s / p.t_big_s)
            } else {
                Err(Error::InvalidParameters(format!(
                    "non-positive time in pair at {} Hz",
                    p.freq_hz
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(median(&mut ratios))
}

/// Regressors multiplying (α_big, β_big, α_LITTLE, β_LITTLE) in the
/// parallel-phase power model.
fn power_regressors<T: Scalar>(c: &Configuration<T>, big_total: u32, little_total: u32) -> [T; 4] {
    let fb = c.big_freq_hz;
    let fl = c.little_freq_hz;
    [
        T::of(c.big_cores as f64) * fb * fb * fb,
        T::of(big_total as f64) * fb,
        T::of(c.little_cores as f64) * fl * fl * fl,
        T::of(little_total as f64) * fl,
    ]
}

fn distinct_count<T: PartialEq + Copy>(values: impl Iterator<Item = T>) -> usize {
    let mut seen: Vec<T> = Vec::new();
    for v in values {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen.len()
}

/// Deterministic start points, as multipliers of the balanced start.
const POWER_STARTS: [[f64; 4]; 5] = [
    [1.0, 1.0, 1.0, 1.0],
    [2.0, 0.5, 2.0, 0.5],
    [0.5, 2.0, 0.5, 2.0],
    [2.0, 2.0, 0.5, 0.5],
    [0.5, 0.5, 2.0, 2.0],
];

pub fn fit_power<T: Scalar>(
    measurements: &[MeasurementRecord<T>],
    platform: &PlatformSpec<T>,
) -> Result<FitReport<PowerParams<T>, T>> {
    fit_power_with(measurements, platform, &FitOptions::default())
}

/// Fits the four chip power constants against measured average power,
/// using the parallel-phase model as predictor.
pub fn fit_power_with<T: Scalar>(
    measurements: &[MeasurementRecord<T>],
    platform: &PlatformSpec<T>,
    options: &FitOptions<T>,
) -> Result<FitReport<PowerParams<T>, T>> {
    platform.validate()?;
    let points: Vec<(Configuration<T>, T)> = measurements
        .iter()
        .filter_map(|m| m.power_w.map(|p| (m.config, p)))
        .collect();
    if points.len() < 4 {
        return Err(Error::Underdetermined(format!(
            "{} power measurements for 4 constants",
            points.len()
        )));
    }
    let varies = [
        ("big core count", distinct_count(points.iter().map(|(c, _)| c.big_cores))),
        ("LITTLE core count", distinct_count(points.iter().map(|(c, _)| c.little_cores))),
        ("big frequency", distinct_count(points.iter().map(|(c, _)| c.big_freq_hz))),
        ("LITTLE frequency", distinct_count(points.iter().map(|(c, _)| c.little_freq_hz))),
    ];
    if let Some((what, _)) = varies.iter().find(|(_, n)| *n < 2) {
        return Err(Error::Underdetermined(format!("{what} takes a single value")));
    }

    let (big_total, little_total) = (platform.big.core_count, platform.little.core_count);
    let rows: Vec<([T; 4], T)> = points
        .iter()
        .map(|(c, p)| (power_regressors(c, big_total, little_total), *p))
        .collect();

    // Balanced start: each term explains a quarter of the mean power.
    let n = T::count(rows.len());
    let mean_power = rows.iter().map(|(_, p)| *p).sum::<T>() / n;
    let scale: [T; 4] = std::array::from_fn(|i| {
        let mean_x = rows.iter().map(|(x, _)| x[i]).sum::<T>() / n;
        if mean_x > T::zero() {
            mean_power / (T::of(4.0) * mean_x)
        } else {
            T::one()
        }
    });

    let objective = |u: &[T]| -> T {
        squared_error_mean(rows.iter().map(|(x, p)| {
            let predicted = (0..4).map(|i| u[i] * scale[i] * x[i]).sum::<T>();
            *p - predicted
        }))
    };

    let nm = NelderMead {
        tolerance: options.tolerance,
        max_iterations: options.max_iterations,
        ..NelderMead::default()
    };
    let lower = [T::zero(); 4];
    let upper = [T::infinity(); 4];
    let mut best: Option<crate::optimize::Minimum<T>> = None;
    let mut iterations = 0;
    for start in POWER_STARTS {
        let start: Vec<T> = start.iter().map(|&s| T::of(s)).collect();
        let m = nm.minimize(objective, &start, &lower, &upper);
        iterations += m.iterations;
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    let best = best.expect("at least one start");
    let constants: [T; 4] = std::array::from_fn(|i| best.point[i] * scale[i]);
    let params = PowerParams::for_platform(platform, constants[0], constants[1], constants[2], constants[3]);

    let actual: Vec<T> = points.iter().map(|(_, p)| *p).collect();
    let predicted: Vec<T> = points.iter().map(|(c, _)| power_parallel(&params, c)).collect();
    Ok(FitReport {
        params,
        rmse: rmse(&actual, &predicted)?,
        n_points: points.len(),
        iterations,
        converged: best.converged,
        underdetermined: false,
    })
}

pub fn fit_parallel_fraction<T: Scalar>(
    measurements: &[MeasurementRecord<T>],
    big_speedup: T,
    ref_time_s: T,
    ref_freq_hz: T,
) -> Result<FitReport<PerfParams<T>, T>> {
    fit_parallel_fraction_with(measurements, big_speedup, ref_time_s, ref_freq_hz, &FitOptions::default())
}

/// Fits the parallel fraction with `perf`, the reference time and the
/// reference frequency held fixed.
pub fn fit_parallel_fraction_with<T: Scalar>(
    measurements: &[MeasurementRecord<T>],
    big_speedup: T,
    ref_time_s: T,
    ref_freq_hz: T,
    options: &FitOptions<T>,
) -> Result<FitReport<PerfParams<T>, T>> {
    let base = PerfParams::new(T::of(0.5), big_speedup, ref_time_s, ref_freq_hz);
    base.validate()?;
    let points: Vec<(Configuration<T>, T)> = measurements
        .iter()
        .filter_map(|m| m.time_s.map(|t| (m.config, t)))
        .collect();
    if points.is_empty() {
        return Err(Error::Empty("parallel fraction fit needs timed measurements"));
    }

    // Predicted time is affine in f: t(f) = t0 + f·(t1 - t0).
    let lines = points
        .iter()
        .map(|(c, t)| {
            let serial = phase_times(&base.with_parallel_fraction(T::zero()), c)?.total();
            let parallel = phase_times(&base.with_parallel_fraction(T::one()), c)?.total();
            Ok((serial, parallel - serial, *t))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_time = lines.iter().map(|l| l.0.abs()).fold(T::zero(), T::max);
    let max_slope = lines.iter().map(|l| l.1.abs()).fold(T::zero(), T::max);
    let underdetermined = max_slope <= T::epsilon() * T::of(16.0) * max_time;

    let objective = |f: T| squared_error_mean(lines.iter().map(|&(t0, slope, t)| t - (t0 + f * slope)));

    let (f, iterations, converged) = if underdetermined {
        (base.parallel_fraction, 0, true)
    } else {
        let m = golden_section(objective, T::zero(), T::one(), options.tolerance, options.max_iterations);
        (m.point[0], m.iterations, m.converged)
    };

    let params = base.with_parallel_fraction(f);
    let actual: Vec<T> = points.iter().map(|(_, t)| *t).collect();
    let predicted = points
        .iter()
        .map(|(c, _)| predict_time(&params, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(FitReport {
        params,
        rmse: rmse(&actual, &predicted)?,
        n_points: points.len(),
        iterations,
        converged,
        underdetermined,
    })
}
