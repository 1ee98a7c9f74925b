//! Analytical performance, power and energy models for a two-cluster chip.
//!
//! Execution time follows an Amdahl-style split: the sequential fraction runs
//! on one big core when any is active (on one LITTLE core otherwise), and the
//! parallel fraction runs on all active cores, a big core counting as `perf`
//! LITTLE cores at equal frequency.
//!
//! Per-cluster power is `n·α·F³ + C·β·F`: dynamic power scales with the
//! number of active cores `n`, static power with the full core count `C`
//! because idle cores cannot be switched off. Energy is the sum of the
//! sequential and parallel phases, each phase's time multiplied by the chip
//! power drawn during it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::platform::{enumerate_configurations, Configuration, PlatformSpec};
use crate::scalar::Scalar;

/// Application performance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerfParams<T> {
    /// Share of the work that scales with active cores, in `[0, 1]`.
    pub parallel_fraction: T,
    /// Speedup of one big core over one LITTLE core at equal frequency.
    pub big_speedup: T,
    /// Execution time on a single LITTLE core at `ref_freq_hz`, in seconds.
    pub ref_time_s: T,
    /// Frequency at which `ref_time_s` was measured, in Hz.
    pub ref_freq_hz: T,
}

impl<T: Scalar> PerfParams<T> {
    pub fn new(parallel_fraction: T, big_speedup: T, ref_time_s: T, ref_freq_hz: T) -> Self {
        Self {
            parallel_fraction,
            big_speedup,
            ref_time_s,
            ref_freq_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.parallel_fraction;
        if !(f >= T::zero() && f <= T::one()) {
            return Err(Error::InvalidParameters(format!(
                "parallel fraction {f} outside [0, 1]"
            )));
        }
        for (name, v) in [
            ("perf", self.big_speedup),
            ("reference time", self.ref_time_s),
            ("reference frequency", self.ref_freq_hz),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidParameters(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn with_parallel_fraction(mut self, f: T) -> Self {
        self.parallel_fraction = f;
        self
    }

    pub fn with_ref_time(mut self, t: T) -> Self {
        self.ref_time_s = t;
        self
    }
}

/// Chip power constants. `alpha_*` in W/Hz³, `beta_*` in W/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams<T> {
    pub alpha_big: T,
    pub beta_big: T,
    pub alpha_little: T,
    pub beta_little: T,
    /// Total big cores on the chip (static power is charged for all of them).
    pub big_cores_total: u32,
    pub little_cores_total: u32,
}

impl<T: Scalar> PowerParams<T> {
    pub fn new(
        alpha_big: T,
        beta_big: T,
        alpha_little: T,
        beta_little: T,
        big_cores_total: u32,
        little_cores_total: u32,
    ) -> Self {
        Self {
            alpha_big,
            beta_big,
            alpha_little,
            beta_little,
            big_cores_total,
            little_cores_total,
        }
    }

    /// Takes the total core counts from `platform`.
    pub fn for_platform(
        platform: &PlatformSpec<T>,
        alpha_big: T,
        beta_big: T,
        alpha_little: T,
        beta_little: T,
    ) -> Self {
        Self::new(
            alpha_big,
            beta_big,
            alpha_little,
            beta_little,
            platform.big.core_count,
            platform.little.core_count,
        )
    }

    /// The constants in the order (α_big, β_big, α_LITTLE, β_LITTLE).
    pub fn constants(&self) -> [T; 4] {
        [self.alpha_big, self.beta_big, self.alpha_little, self.beta_little]
    }

    pub fn with_constants(mut self, [ab, bb, al, bl]: [T; 4]) -> Self {
        self.alpha_big = ab;
        self.beta_big = bb;
        self.alpha_little = al;
        self.beta_little = bl;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.constants().iter().any(|v| !(*v >= T::zero() && v.is_finite())) {
            return Err(Error::InvalidParameters(
                "power constants must be finite and non-negative".into(),
            ));
        }
        if self.big_cores_total == 0 || self.little_cores_total == 0 {
            return Err(Error::InvalidParameters(
                "total core counts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Predicted outcome of running the application in one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate<T> {
    pub config: Configuration<T>,
    pub time_s: T,
    pub energy_j: T,
    pub power_seq_w: T,
    pub power_par_w: T,
}

/// Duration of the sequential and parallel phases, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimes<T> {
    pub sequential_s: T,
    pub parallel_s: T,
}

impl<T: Scalar> PhaseTimes<T> {
    pub fn total(&self) -> T {
        self.sequential_s + self.parallel_s
    }
}

pub fn phase_times<T: Scalar>(p: &PerfParams<T>, c: &Configuration<T>) -> Result<PhaseTimes<T>> {
    let f = p.parallel_fraction;
    let serial = T::one() - f;
    let little = T::of(c.little_cores as f64) * c.little_freq_hz;
    let (seq_rate, par_rate) = if c.big_cores > 0 {
        let big_one = p.big_speedup * c.big_freq_hz;
        (big_one, T::of(c.big_cores as f64) * big_one + little)
    } else if c.little_cores > 0 {
        (c.little_freq_hz, little)
    } else {
        return Err(Error::NoActiveCores);
    };
    let work = p.ref_time_s * p.ref_freq_hz;
    Ok(PhaseTimes {
        sequential_s: work * serial / seq_rate,
        parallel_s: work * f / par_rate,
    })
}

pub fn predict_time<T: Scalar>(p: &PerfParams<T>, c: &Configuration<T>) -> Result<T> {
    phase_times(p, c).map(|t| t.total())
}

fn static_power<T: Scalar>(q: &PowerParams<T>, c: &Configuration<T>) -> T {
    T::of(q.big_cores_total as f64) * q.beta_big * c.big_freq_hz
        + T::of(q.little_cores_total as f64) * q.beta_little * c.little_freq_hz
}

fn cube<T: Scalar>(x: T) -> T {
    x * x * x
}

/// Whole-chip power while every active core runs the parallel phase.
pub fn power_parallel<T: Scalar>(q: &PowerParams<T>, c: &Configuration<T>) -> T {
    T::of(c.big_cores as f64) * q.alpha_big * cube(c.big_freq_hz)
        + T::of(c.little_cores as f64) * q.alpha_little * cube(c.little_freq_hz)
        + static_power(q, c)
}

/// Whole-chip power while the sequential phase runs on a single core: one big
/// core if any is active, otherwise one LITTLE core. Other active cores
/// contribute only static power.
pub fn power_sequential<T: Scalar>(q: &PowerParams<T>, c: &Configuration<T>) -> T {
    let dynamic = if c.big_cores > 0 {
        q.alpha_big * cube(c.big_freq_hz)
    } else {
        q.alpha_little * cube(c.little_freq_hz)
    };
    dynamic + static_power(q, c)
}

/// Energy in joules, evaluated from the consolidated closed form.
pub fn predict_energy<T: Scalar>(
    p: &PerfParams<T>,
    q: &PowerParams<T>,
    c: &Configuration<T>,
) -> Result<T> {
    let f = p.parallel_fraction;
    let (fb, fl) = (c.big_freq_hz, c.little_freq_hz);
    let b = T::of(c.big_cores as f64);
    let l = T::of(c.little_cores as f64);
    let big_static = T::of(q.big_cores_total as f64) * q.beta_big * fb;
    let little_static = T::of(q.little_cores_total as f64) * q.beta_little * fl;
    let little_dyn = l * q.alpha_little * fl * fl * fl;

    let bracket = if c.big_cores > 0 {
        let big_one = q.alpha_big * fb * fb * fb;
        (T::one() - f) * (little_static + big_one + big_static) / (p.big_speedup * fb)
            + f * (little_dyn + little_static + b * big_one + big_static)
                / (b * p.big_speedup * fb + l * fl)
    } else if c.little_cores > 0 {
        (T::one() - f) * (big_static + q.alpha_little * fl * fl * fl + little_static) / fl
            + f * (little_dyn + little_static + big_static) / (l * fl)
    } else {
        return Err(Error::NoActiveCores);
    };
    Ok(p.ref_time_s * p.ref_freq_hz * bracket)
}

pub fn estimate<T: Scalar>(
    p: &PerfParams<T>,
    q: &PowerParams<T>,
    c: &Configuration<T>,
) -> Result<Estimate<T>> {
    Ok(Estimate {
        config: *c,
        time_s: predict_time(p, c)?,
        energy_j: predict_energy(p, q, c)?,
        power_seq_w: power_sequential(q, c),
        power_par_w: power_parallel(q, c),
    })
}

/// One estimate per configuration, in enumeration order.
pub fn predict_all<T: Scalar>(
    p: &PerfParams<T>,
    q: &PowerParams<T>,
    platform: &PlatformSpec<T>,
) -> Result<Vec<Estimate<T>>> {
    p.validate()?;
    q.validate()?;
    enumerate_configurations(platform)?
        .iter()
        .map(|c| estimate(p, q, c))
        .collect()
}
