//! Schedule construction.
//!
//! | deadline regime  | solver                                   |
//! |------------------|------------------------------------------|
//! | tight            | [`general_solve`] (or [`greedy_schedule`]) |
//! | no-wait feasible | [`general_solve`] and [`nowait_solve`]   |
//! | closed form      | [`closed_form_schedule`]                 |
//!
//! [`oracle_solve`] is an exhaustive lattice search used to check the others.

mod general;
mod greedy;
mod oracle;
mod waterfill;

use std::fmt;

pub use general::{general_solve, EXACT_MAX_PACKETS};
pub use greedy::greedy_schedule;
pub use oracle::{oracle_error_bound, oracle_solve};
pub use waterfill::{nowait_schedule_from_x, reduced_coordinates, water_fill};

use crate::error::{Error, Result};
use crate::feasibility::{classify, reduced_params, Regime, RegimeKind};
use crate::model::{evaluate, AoiMetrics, Instance, Schedule, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Greedy,
    ClosedForm,
    WaterFill,
    General,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Greedy => "Greedy",
            Method::ClosedForm => "ClosedForm",
            Method::WaterFill => "WaterFill",
            Method::General => "General",
            Method::Oracle => "Oracle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub schedule: Schedule,
    pub metrics: AoiMetrics,
    pub regime: Regime,
    pub method: Method,
    /// Common value of the unclamped reduced coordinates, for no-wait
    /// solutions.
    pub water_level: Option<f64>,
}

impl SolveResult {
    fn new(
        instance: &Instance,
        schedule: Schedule,
        method: Method,
        water_level: Option<f64>,
    ) -> Result<Self> {
        let metrics = evaluate(instance, &schedule)?;
        Ok(Self {
            schedule,
            metrics,
            regime: classify(instance),
            method,
            water_level,
        })
    }
}

pub(crate) fn require_feasible_deadline(instance: &Instance) -> Result<Regime> {
    let regime = classify(instance);
    if regime.kind == RegimeKind::Infeasible {
        return Err(Error::InfeasibleDeadline {
            deadline: instance.deadline(),
            min_deadline: regime.thresholds.min_deadline,
        });
    }
    Ok(regime)
}

/// Greedy schedule wrapped as a result.
pub fn greedy_solve(instance: &Instance) -> Result<SolveResult> {
    let schedule = greedy_schedule(instance)?;
    SolveResult::new(instance, schedule, Method::Greedy, None)
}

/// Best no-wait schedule, from the water-filling solution of the reduced
/// problem.
pub fn nowait_solve(instance: &Instance) -> Result<SolveResult> {
    let regime = require_feasible_deadline(instance)?;
    if regime.kind == RegimeKind::TightFeasible {
        return Err(Error::NoWaitInfeasible {
            deadline: instance.deadline(),
            threshold: regime.thresholds.nowait,
        });
    }
    let (x, level) = water_fill(&reduced_params(instance))?;
    let schedule = nowait_schedule_from_x(instance, &x)?;
    SolveResult::new(instance, schedule, Method::WaterFill, Some(level))
}

/// Equal-peak schedule, optimal once the deadline reaches the closed-form
/// threshold: every reduced coordinate equals `b / (n + 1)`.
pub fn closed_form_schedule(instance: &Instance) -> Result<SolveResult> {
    let regime = classify(instance);
    if regime.kind != RegimeKind::ClosedForm {
        return Err(Error::BelowClosedForm {
            deadline: instance.deadline(),
            threshold: regime.thresholds.closed_form,
        });
    }
    let n = instance.n();
    let level = reduced_params(instance).b / (n + 1) as f64;
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let mut consumed = 0.0;
    let mut gen_times = Vec::with_capacity(n);
    for k in 0..n {
        consumed += tx[k] + comp[k];
        gen_times.push((k + 1) as f64 * level - consumed - instance.initial_age());
    }
    let comp_starts = gen_times.iter().zip(tx).map(|(t, d)| t + d).collect();
    SolveResult::new(
        instance,
        Schedule::new(gen_times, comp_starts),
        Method::ClosedForm,
        Some(level),
    )
}

/// Solves any feasible instance, choosing the solver from the regime.
pub fn solve(instance: &Instance) -> Result<SolveResult> {
    let regime = require_feasible_deadline(instance)?;
    match regime.kind {
        RegimeKind::ClosedForm => closed_form_schedule(instance),
        RegimeKind::NoWaitFeasible => {
            let general = general_solve(instance)?;
            let nowait = nowait_solve(instance)?;
            if nowait.metrics.area <= general.metrics.area + DEFAULT_TOL {
                Ok(nowait)
            } else {
                Ok(general)
            }
        }
        _ => general_solve(instance),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(deadline: f64) -> Instance {
        Instance::new(
            vec![0.5, 0.1, 0.3, 0.7, 0.4],
            vec![0.2, 0.4, 0.3, 0.6, 0.8],
            1.0,
            deadline,
        )
        .unwrap()
    }

    #[test]
    fn closed_form_at_reference_deadline() {
        let r = closed_form_schedule(&reference(7.5)).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        let expected_t = [13.0 / 30.0, 31.0 / 15.0, 3.6, 133.0 / 30.0, 161.0 / 30.0];
        for (t, e) in r.schedule.gen_times.iter().zip(expected_t) {
            assert!((t - e).abs() < 1e-9, "{:?}", r.schedule.gen_times);
        }
        assert!((r.schedule.comp_starts[0] - 14.0 / 15.0).abs() < 1e-9);
        for p in r.metrics.peak_values() {
            assert!((p - 32.0 / 15.0).abs() < 1e-9);
        }
        assert!((r.metrics.area - 11.038_333_333_333_333).abs() < 1e-6);
        assert!((r.water_level.unwrap() - 32.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_at_its_threshold() {
        let r = closed_form_schedule(&reference(7.3)).unwrap();
        for p in r.metrics.peak_values() {
            assert!((p - 2.1).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_refuses_short_deadlines() {
        match closed_form_schedule(&reference(5.0)) {
            Err(Error::BelowClosedForm { threshold, .. }) => assert_eq!(threshold, 7.3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nowait_refuses_tight_deadlines() {
        assert!(matches!(
            nowait_solve(&reference(3.0)),
            Err(Error::NoWaitInfeasible { threshold, .. }) if threshold == 3.2
        ));
    }

    #[test]
    fn dispatch_follows_regime() {
        assert_eq!(solve(&reference(7.5)).unwrap().method, Method::ClosedForm);
        let tight = solve(&reference(3.0)).unwrap();
        assert_eq!(tight.method, Method::General);
        assert!((tight.schedule.completion_time(&reference(3.0)) - 3.0).abs() < 1e-9);
        let mid = solve(&reference(5.0)).unwrap();
        assert!(mid.schedule.is_no_wait(&reference(5.0), 1e-6));
        assert!(matches!(
            solve(&reference(2.9)),
            Err(Error::InfeasibleDeadline { min_deadline, .. }) if min_deadline == 3.0
        ));
    }
}
