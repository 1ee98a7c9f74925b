//! Time/energy Pareto frontier and validation metrics.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::Estimate;
use crate::scalar::Scalar;

/// An estimate together with how many other estimates dominate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoPoint<T> {
    pub estimate: Estimate<T>,
    pub dominated_count: usize,
}

impl<T: Scalar> ParetoPoint<T> {
    pub fn on_frontier(&self) -> bool {
        self.dominated_count == 0
    }
}

/// `a` dominates `b` when it is no worse in both objectives and strictly
/// better in at least one.
pub fn dominates<T: Scalar>(a: (T, T), b: (T, T)) -> bool {
    a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1)
}

fn check_finite<T: Scalar>(objectives: &[(T, T)]) -> Result<()> {
    if objectives.iter().any(|(t, e)| !t.is_finite() || !e.is_finite()) {
        return Err(Error::NonFinite("frontier objectives"));
    }
    Ok(())
}

/// Indices of the non-dominated (time, energy) pairs, ordered by ascending
/// time then ascending energy. Exactly equal pairs are all kept; among equal
/// pairs the original order is preserved.
pub fn frontier_indices<T: Scalar>(objectives: &[(T, T)]) -> Result<Vec<usize>> {
    if objectives.is_empty() {
        return Err(Error::Empty("frontier of an empty set"));
    }
    check_finite(objectives)?;
    let mut order: Vec<usize> = (0..objectives.len()).collect();
    order.sort_by(|&a, &b| {
        let (ta, ea) = objectives[a];
        let (tb, eb) = objectives[b];
        ta.partial_cmp(&tb)
            .unwrap_or(Ordering::Equal)
            .then(ea.partial_cmp(&eb).unwrap_or(Ordering::Equal))
    });

    let mut kept = Vec::new();
    let mut last: Option<(T, T)> = None;
    for i in order {
        let point = objectives[i];
        let keep = match last {
            None => true,
            Some(prev) => point.1 < prev.1 || point == prev,
        };
        if keep {
            kept.push(i);
            last = Some(point);
        }
    }
    Ok(kept)
}

/// Non-dominated estimates sorted by ascending time.
pub fn pareto_frontier<T: Scalar>(points: &[Estimate<T>]) -> Result<Vec<Estimate<T>>> {
    let objectives: Vec<(T, T)> = points.iter().map(|e| (e.time_s, e.energy_j)).collect();
    Ok(frontier_indices(&objectives)?
        .into_iter()
        .map(|i| points[i])
        .collect())
}

/// Every estimate with its domination count. Quadratic in the input size.
pub fn pareto_points<T: Scalar>(points: &[Estimate<T>]) -> Vec<ParetoPoint<T>> {
    points
        .iter()
        .map(|p| {
            let own = (p.time_s, p.energy_j);
            ParetoPoint {
                estimate: *p,
                dominated_count: points
                    .iter()
                    .filter(|q| dominates((q.time_s, q.energy_j), own))
                    .count(),
            }
        })
        .collect()
}

/// Mean absolute percentage error, as a fraction.
pub fn mape<T: Scalar>(actual: &[T], estimated: &[T]) -> Result<T> {
    if actual.len() != estimated.len() {
        return Err(Error::LengthMismatch(actual.len(), estimated.len()));
    }
    if actual.is_empty() {
        return Err(Error::Empty("mape needs at least one pair"));
    }
    let mut total = T::zero();
    for (i, (&a, &e)) in actual.iter().zip(estimated).enumerate() {
        if a == T::zero() {
            return Err(Error::ZeroActual(i));
        }
        total = total + ((a - e) / a).abs();
    }
    Ok(total / T::count(actual.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierVariation<T> {
    pub energy: T,
    pub performance: T,
}

fn spread<T: Scalar>(values: impl Iterator<Item = T> + Clone) -> T {
    let max = values.clone().fold(T::neg_infinity(), T::max);
    let min = values.fold(T::infinity(), T::min);
    (max - min) / max
}

/// Range of energy and of execution time across a frontier, each relative to
/// its maximum: `(max - min) / max`.
pub fn frontier_variation<T: Scalar>(frontier: &[Estimate<T>]) -> Result<FrontierVariation<T>> {
    if frontier.is_empty() {
        return Err(Error::Empty("variation of an empty frontier"));
    }
    Ok(FrontierVariation {
        energy: spread(frontier.iter().map(|e| e.energy_j)),
        performance: spread(frontier.iter().map(|e| e.time_s)),
    })
}

/// A measured baseline run, e.g. an OS frequency governor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePoint<T> {
    pub label: String,
    pub time_s: T,
    pub energy_j: T,
}

/// How a frontier compares with one reference run. Percentages are signed;
/// positive means the frontier does better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison<T> {
    pub label: String,
    /// Largest energy saving among frontier points at least as fast as the
    /// reference; `None` when no frontier point is.
    pub energy_saving_pct: Option<T>,
    /// Largest time reduction among frontier points using no more energy than
    /// the reference; `None` when no frontier point does.
    pub speedup_pct: Option<T>,
    /// Energy saving of the least-energy frontier point.
    pub least_energy_saving_pct: T,
    /// Time reduction of the fastest frontier point.
    pub fastest_speedup_pct: T,
}

fn pct_reduction<T: Scalar>(reference: T, value: T) -> T {
    T::of(100.0) * (reference - value) / reference
}

pub fn compare_to_reference<T: Scalar>(
    frontier: &[Estimate<T>],
    reference: &ReferencePoint<T>,
) -> Result<ReferenceComparison<T>> {
    if frontier.is_empty() {
        return Err(Error::Empty("comparison against an empty frontier"));
    }
    let min_energy = frontier.iter().map(|e| e.energy_j).fold(T::infinity(), T::min);
    let min_time = frontier.iter().map(|e| e.time_s).fold(T::infinity(), T::min);
    let energy_saving_pct = frontier
        .iter()
        .filter(|e| e.time_s <= reference.time_s)
        .map(|e| e.energy_j)
        .reduce(T::min)
        .map(|e| pct_reduction(reference.energy_j, e));
    let speedup_pct = frontier
        .iter()
        .filter(|e| e.energy_j <= reference.energy_j)
        .map(|e| e.time_s)
        .reduce(T::min)
        .map(|t| pct_reduction(reference.time_s, t));
    Ok(ReferenceComparison {
        label: reference.label.clone(),
        energy_saving_pct,
        speedup_pct,
        least_energy_saving_pct: pct_reduction(reference.energy_j, min_energy),
        fastest_speedup_pct: pct_reduction(reference.time_s, min_time),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::Configuration;

    fn est(time_s: f64, energy_j: f64) -> Estimate<f64> {
        Estimate {
            config: Configuration::new(1, 1, 1e9, 1e9),
            time_s,
            energy_j,
            power_seq_w: 1.0,
            power_par_w: 1.0,
        }
    }

    fn pairs(v: &[Estimate<f64>]) -> Vec<(f64, f64)> {
        v.iter().map(|e| (e.time_s, e.energy_j)).collect()
    }

    #[test]
    fn dominated_point_is_dropped() {
        let pts = [est(1.0, 3.0), est(2.0, 2.0), est(3.0, 1.0), est(2.0, 3.0)];
        let f = pareto_frontier(&pts).unwrap();
        assert_eq!(pairs(&f), vec![(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]);
    }

    #[test]
    fn single_point_and_empty() {
        assert_eq!(pareto_frontier(&[est(5.0, 5.0)]).unwrap().len(), 1);
        assert!(pareto_frontier::<f64>(&[]).is_err());
    }

    #[test]
    fn exact_ties_are_kept() {
        let pts = [est(2.0, 2.0), est(1.0, 3.0), est(2.0, 2.0), est(3.0, 2.0)];
        let f = pareto_frontier(&pts).unwrap();
        assert_eq!(pairs(&f), vec![(1.0, 3.0), (2.0, 2.0), (2.0, 2.0)]);
    }

    #[test]
    fn nan_is_rejected() {
        assert!(pareto_frontier(&[est(f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn domination_counts() {
        let pts = [est(1.0, 3.0), est(2.0, 2.0), est(3.0, 3.0)];
        let counts: Vec<_> = pareto_points(&pts).iter().map(|p| p.dominated_count).collect();
        assert_eq!(counts, vec![0, 0, 2]);
    }

    #[test]
    fn mape_examples() {
        assert_eq!(mape(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((mape::<f64>(&[100.0], &[110.0]).unwrap() - 0.10).abs() < 1e-15);
        assert!((mape::<f64>(&[100.0, 200.0], &[90.0, 220.0]).unwrap() - 0.10).abs() < 1e-15);
        assert!(matches!(mape(&[0.0], &[1.0]), Err(Error::ZeroActual(0))));
        assert!(matches!(mape(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch(1, 2))));
    }

    #[test]
    fn variation_examples() {
        let v = frontier_variation(&[est(1.0, 5.0)]).unwrap();
        assert_eq!((v.energy, v.performance), (0.0, 0.0));
        let v = frontier_variation(&[est(1.0, 100.0), est(4.0, 40.0)]).unwrap();
        assert!((v.energy - 0.60).abs() < 1e-15);
        assert!((v.performance - 0.75).abs() < 1e-15);
        assert!(frontier_variation::<f64>(&[]).is_err());
    }

    #[test]
    fn reference_on_frontier_gives_zero() {
        let frontier = [est(1.0, 3.0), est(2.0, 2.0), est(3.0, 1.0)];
        let r = ReferencePoint { label: "gov".into(), time_s: 2.0, energy_j: 2.0 };
        let c = compare_to_reference(&frontier, &r).unwrap();
        assert_eq!(c.energy_saving_pct, Some(0.0));
        assert_eq!(c.speedup_pct, Some(0.0));
    }

    #[test]
    fn dominated_reference_gives_positive_gains() {
        let frontier = [est(1.0, 3.0), est(2.0, 2.0), est(3.0, 1.0)];
        let r = ReferencePoint { label: "gov".into(), time_s: 2.5, energy_j: 2.5 };
        let c = compare_to_reference(&frontier, &r).unwrap();
        assert!(c.energy_saving_pct.unwrap() > 0.0);
        assert!(c.speedup_pct.unwrap() > 0.0);
    }

    #[test]
    fn hand_computed_comparison() {
        // frontier (t, E): (1, 8), (2, 5), (4, 3), (8, 2)
        // powersave-like reference (10, 4):
        //   fastest frontier point with E <= 4 is (4, 3) -> (10-4)/10 = 60 %
        //   least energy with t <= 10 is 2 -> (4-2)/4 = 50 %
        //   fastest overall 1 -> 90 %, least energy overall 2 -> 50 %
        let frontier = [est(1.0, 8.0), est(2.0, 5.0), est(4.0, 3.0), est(8.0, 2.0)];
        let r = ReferencePoint { label: "powersave".into(), time_s: 10.0, energy_j: 4.0 };
        let c = compare_to_reference(&frontier, &r).unwrap();
        assert_eq!(c.speedup_pct, Some(60.0));
        assert_eq!(c.energy_saving_pct, Some(50.0));
        assert_eq!(c.fastest_speedup_pct, 90.0);
        assert_eq!(c.least_energy_saving_pct, 50.0);
        // performance-like reference (1.5, 10): only (1, 8) is as fast
        let r = ReferencePoint { label: "performance".into(), time_s: 1.5, energy_j: 10.0 };
        let c = compare_to_reference(&frontier, &r).unwrap();
        assert_eq!(c.energy_saving_pct, Some(20.0));
        // a reference faster than everything has no energy-saving candidate
        let r = ReferencePoint { label: "fast".into(), time_s: 0.5, energy_j: 1.0 };
        let c = compare_to_reference(&frontier, &r).unwrap();
        assert_eq!(c.energy_saving_pct, None);
        assert_eq!(c.speedup_pct, None);
    }
}
