//! Two-cluster hardware description and the discrete configuration space.
//!
//! Frequencies are carried in Hz everywhere so that fitted power constants
//! (W/Hz³ and W/Hz) can be used verbatim.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One frequency/voltage domain: a group of identical cores sharing a
/// frequency ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec<T> {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub core_count: u32,
    /// Available operating frequencies in Hz, strictly ascending.
    pub frequencies_hz: Vec<T>,
}

impl<T: Scalar> ClusterSpec<T> {
    pub fn new(name: impl Into<String>, core_count: u32, frequencies_hz: Vec<T>) -> Self {
        Self {
            name: name.into(),
            core_count,
            frequencies_hz,
        }
    }

    /// Evenly spaced ladder `start, start + step, ..., stop` (inclusive).
    pub fn with_ladder(
        name: impl Into<String>,
        core_count: u32,
        start_hz: f64,
        stop_hz: f64,
        step_hz: f64,
    ) -> Self {
        let levels = ((stop_hz - start_hz) / step_hz).round() as usize + 1;
        let frequencies_hz = (0..levels)
            .map(|i| T::of(start_hz + step_hz * i as f64))
            .collect();
        Self::new(name, core_count, frequencies_hz)
    }

    pub fn levels(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn supports(&self, freq_hz: T) -> bool {
        self.frequencies_hz.contains(&freq_hz)
    }

    fn validate(&self, role: &str) -> Result<()> {
        if self.core_count == 0 {
            return Err(Error::InvalidPlatform(format!(
                "{role} cluster must have at least one core"
            )));
        }
        if self.frequencies_hz.is_empty() {
            return Err(Error::InvalidPlatform(format!(
                "{role} cluster has an empty frequency ladder"
            )));
        }
        if let Some(bad) = self
            .frequencies_hz
            .iter()
            .find(|f| !f.is_finite() || **f <= T::zero())
        {
            return Err(Error::InvalidPlatform(format!(
                "{role} cluster frequency {bad} is not a positive finite value"
            )));
        }
        if self.frequencies_hz.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPlatform(format!(
                "{role} cluster frequencies must be strictly ascending"
            )));
        }
        Ok(())
    }
}

/// A big.LITTLE-style platform with exactly two clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformSpec<T> {
    pub big: ClusterSpec<T>,
    pub little: ClusterSpec<T>,
}

impl<T: Scalar> PlatformSpec<T> {
    pub fn new(big: ClusterSpec<T>, little: ClusterSpec<T>) -> Result<Self> {
        let platform = Self { big, little };
        platform.validate()?;
        Ok(platform)
    }

    /// Hardkernel ODROID-XU3 (Exynos 5422): four Cortex-A15 cores with 19
    /// levels from 200 MHz to 2 GHz and four Cortex-A7 cores with 14 levels
    /// from 200 MHz to 1.5 GHz, both in 100 MHz steps.
    pub fn odroid_xu3() -> Self {
        Self {
            big: ClusterSpec::with_ladder("Cortex-A15", 4, 200e6, 2000e6, 100e6),
            little: ClusterSpec::with_ladder("Cortex-A7", 4, 200e6, 1500e6, 100e6),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.big.validate("big")?;
        self.little.validate("LITTLE")?;
        if !self.big.name.is_empty() && self.big.name == self.little.name {
            return Err(Error::InvalidPlatform(format!(
                "big and LITTLE clusters share the name {:?}",
                self.big.name
            )));
        }
        Ok(())
    }

    /// Number of valid configurations: every core-count pair except (0, 0),
    /// times every frequency pair.
    pub fn space_size(&self) -> usize {
        let cores = (self.big.core_count as usize + 1) * (self.little.core_count as usize + 1) - 1;
        cores * self.big.levels() * self.little.levels()
    }

    /// Builds a configuration from core counts and ladder indices.
    ///
    /// Panics if an index is off the ladder.
    pub fn configuration_at(
        &self,
        big_cores: u32,
        little_cores: u32,
        big_level: usize,
        little_level: usize,
    ) -> Configuration<T> {
        Configuration {
            big_cores,
            little_cores,
            big_freq_hz: self.big.frequencies_hz[big_level],
            little_freq_hz: self.little.frequencies_hz[little_level],
        }
    }

    pub fn enumerate(&self) -> Result<Vec<Configuration<T>>> {
        enumerate_configurations(self)
    }

    pub fn is_valid(&self, config: &Configuration<T>) -> bool {
        validate_configuration(self, config)
    }
}

/// One point of the configuration space. Both frequencies are always carried,
/// even for a cluster with no active cores, because idle clusters still draw
/// static power at their current frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration<T> {
    pub big_cores: u32,
    pub little_cores: u32,
    pub big_freq_hz: T,
    pub little_freq_hz: T,
}

impl<T: Scalar> Configuration<T> {
    pub fn new(big_cores: u32, little_cores: u32, big_freq_hz: T, little_freq_hz: T) -> Self {
        Self {
            big_cores,
            little_cores,
            big_freq_hz,
            little_freq_hz,
        }
    }

    pub fn active_cores(&self) -> u32 {
        self.big_cores + self.little_cores
    }

    /// Converts the frequency fields to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Configuration<U> {
        Configuration {
            big_cores: self.big_cores,
            little_cores: self.little_cores,
            big_freq_hz: U::of(self.big_freq_hz.as_f64()),
            little_freq_hz: U::of(self.little_freq_hz.as_f64()),
        }
    }
}

/// Every valid configuration, ordered lexicographically by
/// (big cores, LITTLE cores, big frequency level, LITTLE frequency level).
pub fn enumerate_configurations<T: Scalar>(platform: &PlatformSpec<T>) -> Result<Vec<Configuration<T>>> {
    platform.validate()?;
    let mut out = Vec::with_capacity(platform.space_size());
    for b in 0..=platform.big.core_count {
        for l in 0..=platform.little.core_count {
            if b + l == 0 {
                continue;
            }
            for &fb in &platform.big.frequencies_hz {
                for &fl in &platform.little.frequencies_hz {
                    out.push(Configuration::new(b, l, fb, fl));
                }
            }
        }
    }
    Ok(out)
}

pub fn validate_configuration<T: Scalar>(platform: &PlatformSpec<T>, config: &Configuration<T>) -> bool {
    config.active_cores() >= 1
        && config.big_cores <= platform.big.core_count
        && config.little_cores <= platform.little.core_count
        && platform.big.supports(config.big_freq_hz)
        && platform.little.supports(config.little_freq_hz)
}
