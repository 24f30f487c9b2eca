//! The no-wait problem in reduced coordinates.
//!
//! For a no-wait schedule set `x_k = t_k - t_{k-1} + T_k + C_k` (the peak age
//! of packet `k`) and `x_{n+1} = T - t_n`. The area then depends on `x` only
//! through `sum x_k^2`, the schedule constraints become lower bounds
//! `x_k >= a_k`, and the coordinates must add up to `b`. The minimizer is
//! `x_k = max(a_k, mu)` for the unique level `mu` that meets the sum.

use crate::error::{Error, Result};
use crate::feasibility::ReducedParams;
use crate::model::{validate_schedule, Instance, Schedule, DEFAULT_TOL};

/// Minimizes `sum x_k^2` subject to `x_k >= a_k` and `sum x_k = b`.
/// Returns the minimizer and the water level.
pub fn water_fill(params: &ReducedParams) -> Result<(Vec<f64>, f64)> {
    let a = &params.a;
    let b = params.b;
    let bound_sum = params.bound_sum();
    if a.is_empty() || b.is_nan() || b < bound_sum - DEFAULT_TOL {
        return Err(Error::ReducedInfeasible {
            budget: b,
            bound_sum,
        });
    }

    let mut sorted = a.clone();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let m = sorted.len();
    // Clamp the j largest bounds; the rest share what is left.
    let mut clamped = 0.0;
    let mut level = sorted[m - 1];
    for (j, &aj) in sorted.iter().enumerate() {
        let candidate = (b - clamped) / (m - j) as f64;
        if candidate >= aj {
            level = candidate;
            break;
        }
        clamped += aj;
    }
    let x = a.iter().map(|&ak| ak.max(level)).collect();
    Ok((x, level))
}

/// Inverts the change of variables with `t_0 = -initial_age` and computes
/// every packet the moment it arrives.
pub fn nowait_schedule_from_x(instance: &Instance, x: &[f64]) -> Result<Schedule> {
    let n = instance.n();
    if x.len() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            found: x.len(),
        });
    }
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let mut prev = instance.prior_generation();
    let mut gen_times = Vec::with_capacity(n);
    for k in 0..n {
        prev += x[k] - tx[k] - comp[k];
        gen_times.push(prev);
    }
    let left = instance.deadline() - prev;
    if (left - x[n]).abs() > DEFAULT_TOL * (1.0 + x[n].abs()) {
        return Err(Error::InconsistentReduced {
            expected: x[n],
            found: left,
        });
    }
    let comp_starts = gen_times.iter().zip(tx).map(|(t, d)| t + d).collect();
    let schedule = Schedule::new(gen_times, comp_starts);
    let violations = validate_schedule(instance, &schedule, DEFAULT_TOL)?;
    if !violations.is_empty() {
        return Err(Error::InfeasibleSchedule { violations });
    }
    Ok(schedule)
}

/// Reduced coordinates of any schedule (only meaningful for no-wait ones).
pub fn reduced_coordinates(instance: &Instance, schedule: &Schedule) -> Vec<f64> {
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let mut prev = instance.prior_generation();
    let mut x: Vec<f64> = schedule
        .gen_times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let xk = t - prev + tx[k] + comp[k];
            prev = t;
            xk
        })
        .collect();
    x.push(instance.deadline() - prev);
    x
}
