use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("schedule violates {} constraint(s): {}", violations.len(), format_violations(violations))]
    InfeasibleSchedule { violations: Vec<Violation> },

    /// The deadline is shorter than the minimum time needed to transmit and
    /// compute every packet.
    #[error("deadline {deadline} is below the minimum feasible deadline {min_deadline}")]
    InfeasibleDeadline { deadline: f64, min_deadline: f64 },

    /// The no-wait policy cannot meet the deadline.
    #[error("no-wait computing is infeasible: deadline {deadline} is below the no-wait threshold {threshold}")]
    NoWaitInfeasible { deadline: f64, threshold: f64 },

    /// Sum of the reduced lower bounds exceeds the reduced budget.
    #[error("reduced problem is infeasible: budget {budget} is below the sum of lower bounds {bound_sum}")]
    ReducedInfeasible { budget: f64, bound_sum: f64 },

    #[error("closed-form policy requires deadline >= {threshold}, got {deadline}; use the general solver")]
    BelowClosedForm { deadline: f64, threshold: f64 },

    #[error("reduced coordinates are inconsistent: last coordinate {expected} but deadline leaves {found}")]
    InconsistentReduced { expected: f64, found: f64 },

    #[error("grid step must be positive and finite, got {0}")]
    InvalidGridStep(f64),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
