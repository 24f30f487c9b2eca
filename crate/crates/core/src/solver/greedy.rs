use crate::error::Result;
use crate::model::{Instance, Schedule};

use super::require_feasible_deadline;

/// Transmits every packet as soon as the channel frees up and computes it
/// as soon as the server frees up. This minimizes the completion time of
/// the last packet, so it is feasible exactly when the deadline is.
pub fn greedy_schedule(instance: &Instance) -> Result<Schedule> {
    require_feasible_deadline(instance)?;
    let mut gen_times = Vec::with_capacity(instance.n());
    let mut next = 0.0;
    for &tx in instance.tx_times() {
        gen_times.push(next);
        next += tx;
    }
    Ok(Schedule::with_earliest_computing(instance, gen_times))
}
