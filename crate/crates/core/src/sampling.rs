//! Halton sampling of the configuration space.
//!
//! Each Halton point in `[0, 1)^4` is mapped onto (big cores, LITTLE cores,
//! big frequency level, LITTLE frequency level). Core counts range over
//! `0..=core_count` so that configurations with an idle cluster are drawn.
//! Points that land on the excluded (0, 0) combination or on an already drawn
//! configuration are skipped by advancing the sequence index.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::platform::{Configuration, PlatformSpec};
use crate::scalar::Scalar;

/// Bases for the dimensions (big cores, LITTLE cores, big level, LITTLE level).
pub const DEFAULT_BASES: [u64; 4] = [2, 3, 5, 7];

/// Radical inverse of `index` in `base`: the base-`base` digits of `index`
/// mirrored around the radix point.
pub fn halton_value(index: u64, base: u64) -> f64 {
    assert!(base >= 2, "Halton base must be at least 2");
    let inv_base = 1.0 / base as f64;
    let mut scale = inv_base;
    let mut n = index;
    let mut value = 0.0;
    while n > 0 {
        value += (n % base) as f64 * scale;
        n /= base;
        scale *= inv_base;
    }
    value
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub count: usize,
    pub bases: [u64; 4],
    pub start_index: u64,
}

impl SamplePlan {
    pub fn new(count: usize) -> Self {
        Self {
            count,
            bases: DEFAULT_BASES,
            start_index: 1,
        }
    }

    pub fn with_start_index(mut self, start_index: u64) -> Self {
        self.start_index = start_index;
        self
    }

    pub fn with_bases(mut self, bases: [u64; 4]) -> Self {
        self.bases = bases;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidPlan("count must be at least 1".into()));
        }
        if self.start_index == 0 {
            return Err(Error::InvalidPlan("start index must be at least 1".into()));
        }
        for (i, &b) in self.bases.iter().enumerate() {
            if !is_prime(b) {
                return Err(Error::InvalidPlan(format!("base {b} is not a prime")));
            }
            if self.bases[..i].contains(&b) {
                return Err(Error::InvalidPlan(format!("base {b} is repeated")));
            }
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Discrete coordinates of a configuration: core counts and ladder indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Cell {
    big_cores: u32,
    little_cores: u32,
    big_level: usize,
    little_level: usize,
}

fn scale_to(u: f64, size: usize) -> usize {
    ((u * size as f64).floor() as usize).min(size - 1)
}

/// Draws `plan.count` distinct valid configurations from the Halton sequence.
pub fn sample_configurations<T: Scalar>(
    platform: &PlatformSpec<T>,
    plan: &SamplePlan,
) -> Result<Vec<Configuration<T>>> {
    platform.validate()?;
    plan.validate()?;
    let available = platform.space_size();
    if plan.count > available {
        return Err(Error::SampleCountExceedsSpace {
            requested: plan.count,
            available,
        });
    }

    let big_range = platform.big.core_count as usize + 1;
    let little_range = platform.little.core_count as usize + 1;
    let [b_base, l_base, fb_base, fl_base] = plan.bases;

    let mut seen = HashSet::with_capacity(plan.count);
    let mut out = Vec::with_capacity(plan.count);
    let mut index = plan.start_index;
    while out.len() < plan.count {
        let cell = Cell {
            big_cores: scale_to(halton_value(index, b_base), big_range) as u32,
            little_cores: scale_to(halton_value(index, l_base), little_range) as u32,
            big_level: scale_to(halton_value(index, fb_base), platform.big.levels()),
            little_level: scale_to(halton_value(index, fl_base), platform.little.levels()),
        };
        index += 1;
        if cell.big_cores + cell.little_cores == 0 || !seen.insert(cell) {
            continue;
        }
        out.push(platform.configuration_at(
            cell.big_cores,
            cell.little_cores,
            cell.big_level,
            cell.little_level,
        ));
    }
    Ok(out)
}
