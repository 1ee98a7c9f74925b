//! Derivative-free bounded minimizers.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub point: Vec<T>,
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex search inside a box. Trial points are projected onto
/// the box. After the simplex collapses the search is restarted around the
/// best vertex until a restart no longer improves on it.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead<T> {
    /// Relative spread of simplex values (and relative improvement between
    /// restarts) below which the search stops.
    pub tolerance: T,
    pub max_iterations: usize,
    /// Initial simplex edge, relative to each coordinate (absolute when the
    /// coordinate is zero).
    pub initial_step: T,
    pub max_restarts: usize,
}

impl<T: Scalar> Default for NelderMead<T> {
    fn default() -> Self {
        Self {
            tolerance: T::of(1e-10),
            max_iterations: 10_000,
            initial_step: T::of(0.5),
            max_restarts: 20,
        }
    }
}

fn project<T: Scalar>(x: &mut [T], lower: &[T], upper: &[T]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.max(lo).min(hi);
    }
}

impl<T: Scalar> NelderMead<T> {
    pub fn minimize<F>(&self, mut objective: F, start: &[T], lower: &[T], upper: &[T]) -> Minimum<T>
    where
        F: FnMut(&[T]) -> T,
    {
        assert_eq!(start.len(), lower.len());
        assert_eq!(start.len(), upper.len());
        let mut best = start.to_vec();
        project(&mut best, lower, upper);
        let mut best_value = objective(&best);
        // improvements below rounding noise of the starting value do not count
        let floor = (T::epsilon() * T::of(100.0) * best_value.abs()).max(T::min_positive_value().sqrt());
        let mut iterations = 0;
        let mut converged = false;

        for _ in 0..=self.max_restarts {
            let (point, value, used, collapsed) = self.run_simplex(
                &mut objective,
                &best,
                lower,
                upper,
                self.max_iterations - iterations,
                floor,
            );
            iterations += used;
            let improved = best_value - value > self.threshold(best_value, floor);
            if value < best_value {
                best = point;
                best_value = value;
            }
            if !collapsed || iterations >= self.max_iterations {
                converged = false;
                break;
            }
            if !improved {
                converged = true;
                break;
            }
        }

        Minimum {
            point: best,
            value: best_value,
            iterations,
            converged,
        }
    }

    fn threshold(&self, value: T, floor: T) -> T {
        self.tolerance * value.abs() + floor
    }

    fn run_simplex<F>(
        &self,
        objective: &mut F,
        start: &[T],
        lower: &[T],
        upper: &[T],
        budget: usize,
        floor: T,
    ) -> (Vec<T>, T, usize, bool)
    where
        F: FnMut(&[T]) -> T,
    {
        let n = start.len();
        let half = T::of(0.5);
        let two = T::of(2.0);

        let mut simplex: Vec<Vec<T>> = Vec::with_capacity(n + 1);
        simplex.push(start.to_vec());
        for i in 0..n {
            let mut v = start.to_vec();
            let step = if v[i] != T::zero() {
                self.initial_step * v[i].abs()
            } else {
                self.initial_step
            };
            // step away from whichever bound is closer
            v[i] = if v[i] + step <= upper[i] { v[i] + step } else { v[i] - step };
            project(&mut v, lower, upper);
            simplex.push(v);
        }
        let mut values: Vec<T> = simplex.iter().map(|v| objective(v)).collect();

        let mut iterations = 0;
        while iterations < budget {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            if values[n] - values[0] <= self.threshold(values[0], floor) {
                return (simplex.swap_remove(0), values[0], iterations, true);
            }
            iterations += 1;

            let inv_n = T::one() / T::count(n);
            let centroid: Vec<T> = (0..n)
                .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<T>() * inv_n)
                .collect();
            let along = |coef: T| -> Vec<T> {
                let mut p: Vec<T> = centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(&c, &w)| c + coef * (c - w))
                    .collect();
                project(&mut p, lower, upper);
                p
            };

            let reflected = along(T::one());
            let fr = objective(&reflected);
            if fr < values[0] {
                let expanded = along(two);
                let fe = objective(&expanded);
                if fe < fr {
                    simplex[n] = expanded;
                    values[n] = fe;
                } else {
                    simplex[n] = reflected;
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n] = reflected;
                values[n] = fr;
                continue;
            }
            let (contracted, fc) = if fr < values[n] {
                let p = along(half);
                let v = objective(&p);
                (p, v)
            } else {
                let p = along(-half);
                let v = objective(&p);
                (p, v)
            };
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
                continue;
            }
            // shrink towards the best vertex
            for i in 1..=n {
                let shrunk: Vec<T> = simplex[0]
                    .iter()
                    .zip(&simplex[i])
                    .map(|(&b, &x)| b + half * (x - b))
                    .collect();
                values[i] = objective(&shrunk);
                simplex[i] = shrunk;
            }
        }

        let (best, _) = values
            .iter()
            .enumerate()
            .fold((0, values[0]), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        (simplex.swap_remove(best), values[best], iterations, false)
    }
}

/// Golden-section search for a unimodal function on `[lower, upper]`. Both
/// endpoints are also evaluated so that a minimum on the boundary is returned
/// exactly.
pub fn golden_section<T, F>(
    mut objective: F,
    lower: T,
    upper: T,
    tolerance: T,
    max_iterations: usize,
) -> Minimum<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let inv_phi = (T::of(5.0).sqrt() - T::one()) / T::of(2.0);
    let (mut a, mut b) = (lower, upper);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    let mut iterations = 0;
    while (b - a) > tolerance && iterations < max_iterations {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let converged = (b - a) <= tolerance;
    let mid = (a + b) / T::of(2.0);
    let candidates = [(mid, objective(mid)), (c, fc), (d, fd), (lower, objective(lower)), (upper, objective(upper))];
    let (x, v) = candidates
        .into_iter()
        .fold(candidates[0], |acc, cand| if cand.1 < acc.1 { cand } else { acc });
    Minimum {
        point: vec![x],
        value: v,
        iterations,
        converged,
    }
}
