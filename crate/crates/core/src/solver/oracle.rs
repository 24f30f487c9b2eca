//! Exhaustive lattice search, for verification on small instances.
//!
//! Generation times are enumerated on a lattice of idle gaps: `t_1` and every
//! gap `t_k - t_{k-1} - T_{k-1}` is a non-negative multiple of the grid step.
//! The greedy schedule is always a lattice point, and rounding every gap of
//! an optimal schedule down to the grid gives a feasible lattice point whose
//! area exceeds the optimum by at most [`oracle_error_bound`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Instance, Schedule, DEFAULT_TOL};

use super::{require_feasible_deadline, Method, SolveResult};

/// Upper bound on how far the lattice optimum can sit above the true
/// optimum: `n * step * (T + initial_age)`.
pub fn oracle_error_bound(instance: &Instance, grid_step: f64) -> f64 {
    instance.n() as f64 * grid_step * (instance.deadline() + instance.initial_age())
}

struct Lattice<'a> {
    tx: &'a [f64],
    comp: &'a [f64],
    deadline: f64,
    step: f64,
    /// Latest generation time per packet that can still meet the deadline.
    upper: Vec<f64>,
    /// Latest completion epoch per packet that can still meet the deadline.
    latest_done: Vec<f64>,
}

#[derive(Clone)]
struct Best {
    area: f64,
    t: Vec<f64>,
}

impl Lattice<'_> {
    fn descend(
        &self,
        k: usize,
        prev_t: f64,
        prev_done: f64,
        partial: f64,
        path: &mut Vec<f64>,
        best: &mut Option<Best>,
    ) {
        let n = self.tx.len();
        let lo = prev_t + self.tx[k - 1];
        for j in 0.. {
            let t = lo + j as f64 * self.step;
            if t > self.upper[k] {
                break;
            }
            self.visit(k, t, prev_t, prev_done, partial, path, best, n);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn visit(
        &self,
        k: usize,
        t: f64,
        prev_t: f64,
        prev_done: f64,
        partial: f64,
        path: &mut Vec<f64>,
        best: &mut Option<Best>,
        n: usize,
    ) {
        let done = (prev_done + self.comp[k]).max(t + self.tx[k] + self.comp[k]);
        if done > self.latest_done[k] {
            return;
        }
        let before = done - prev_t;
        let after = done - t;
        let partial = partial + 0.5 * (before * before - after * after);
        path.push(t);
        if k + 1 == n {
            let tail = self.deadline - t;
            let area = partial + 0.5 * tail * tail;
            // Strict comparison keeps the lexicographically first minimizer.
            if best.as_ref().is_none_or(|b| area < b.area) {
                *best = Some(Best {
                    area,
                    t: path.clone(),
                });
            }
        } else {
            self.descend(k + 1, t, done, partial, path, best);
        }
        path.pop();
    }
}

/// Lattice minimizer of the area, with computation started as early as
/// possible. Ties go to the lexicographically smallest generation times.
pub fn oracle_solve(instance: &Instance, grid_step: f64) -> Result<SolveResult> {
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::InvalidGridStep(grid_step));
    }
    let regime = require_feasible_deadline(instance)?;
    let n = instance.n();
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let deadline = instance.deadline();

    let mut upper = vec![0.0; n];
    let mut latest_done = vec![0.0; n];
    let mut tail = 0.0;
    for k in (0..n).rev() {
        latest_done[k] = deadline - tail + DEFAULT_TOL;
        tail += comp[k];
        upper[k] = deadline - tx[k] - tail + DEFAULT_TOL;
    }
    let lattice = Lattice {
        tx,
        comp,
        deadline,
        step: grid_step,
        upper,
        latest_done,
    };

    let prior = instance.prior_generation();
    let first_count = (lattice.upper[0] / grid_step).floor().max(-1.0) as i64 + 1;
    let per_first: Vec<Option<Best>> = (0..first_count)
        .into_par_iter()
        .map(|j| {
            let mut best = None;
            let mut path = Vec::with_capacity(n);
            let t = j as f64 * grid_step;
            lattice.visit(0, t, prior, f64::NEG_INFINITY, 0.0, &mut path, &mut best, n);
            best
        })
        .collect();
    let mut best: Option<Best> = None;
    for b in per_first.into_iter().flatten() {
        if best.as_ref().is_none_or(|cur| b.area < cur.area) {
            best = Some(b);
        }
    }
    let best = best.ok_or(Error::InfeasibleDeadline {
        deadline,
        min_deadline: regime.thresholds.min_deadline,
    })?;
    let schedule = Schedule::with_earliest_computing(instance, best.t);
    SolveResult::new(instance, schedule, Method::Oracle, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_packet_lattice_minimum_is_at_zero() {
        // area(t) = 6.5 + t^2 on [0, 1]
        let inst = Instance::new(vec![1.0], vec![1.0], 1.0, 3.0).unwrap();
        let r = oracle_solve(&inst, 0.001).unwrap();
        assert_eq!(r.schedule.gen_times, vec![0.0]);
        assert!((r.metrics.area - 6.5).abs() < 1e-12);
    }

    #[test]
    fn tight_deadline_lattice_contains_greedy() {
        let inst = Instance::new(
            vec![0.5, 0.1, 0.3, 0.7, 0.4],
            vec![0.2, 0.4, 0.3, 0.6, 0.8],
            1.0,
            3.0,
        )
        .unwrap();
        let r = oracle_solve(&inst, 0.01).unwrap();
        let greedy = crate::solver::greedy_solve(&inst).unwrap();
        assert!(r.metrics.area <= greedy.metrics.area + 1e-12);
        assert!((r.metrics.area - greedy.metrics.area).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let inst = Instance::new(vec![1.0], vec![1.0], 1.0, 3.0).unwrap();
        assert_eq!(
            oracle_solve(&inst, 0.0).unwrap_err(),
            Error::InvalidGridStep(0.0)
        );
        assert!(oracle_solve(&inst, f64::NAN).is_err());
        let short = inst.with_deadline(1.5).unwrap();
        assert!(matches!(
            oracle_solve(&short, 0.1),
            Err(Error::InfeasibleDeadline { .. })
        ));
    }
}
