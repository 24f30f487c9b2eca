//! Problem instances, schedules and exact evaluation of the age-of-information
//! objective.
//!
//! A schedule fixes, for every packet `k`, the instant `t_k` at which it is
//! generated and put on the channel and the instant `c_k` at which the edge
//! server starts computing it. Packet `k` occupies the channel for `T_k`
//! seconds and the server for `C_k` seconds; its information reaches the
//! destination at the completion epoch `d_k = c_k + C_k`.
//!
//! The age at the destination grows with slope one and drops to `d_k - t_k`
//! at every completion epoch. The generation time preceding the first packet
//! is taken to be `-initial_age`.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute slack tolerance, in seconds, used when checking constraints.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Packet durations, initial age and deadline of one scheduling problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    tx_times: Vec<f64>,
    comp_times: Vec<f64>,
    initial_age: f64,
    deadline: f64,
}

impl Instance {
    pub fn new(
        tx_times: Vec<f64>,
        comp_times: Vec<f64>,
        initial_age: f64,
        deadline: f64,
    ) -> Result<Self> {
        if tx_times.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one packet is required".into(),
            ));
        }
        if tx_times.len() != comp_times.len() {
            return Err(Error::InvalidInstance(format!(
                "{} transmission times but {} computing times",
                tx_times.len(),
                comp_times.len()
            )));
        }
        for (name, values) in [("transmission", &tx_times), ("computing", &comp_times)] {
            if let Some((k, v)) = values
                .iter()
                .enumerate()
                .find(|(_, v)| !(v.is_finite() && **v > 0.0))
            {
                return Err(Error::InvalidInstance(format!(
                    "{name} time of packet {} must be positive and finite, got {v}",
                    k + 1
                )));
            }
        }
        if !(initial_age.is_finite() && initial_age >= 0.0) {
            return Err(Error::InvalidInstance(format!(
                "initial age must be non-negative and finite, got {initial_age}"
            )));
        }
        if !(deadline.is_finite() && deadline > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "deadline must be positive and finite, got {deadline}"
            )));
        }
        Ok(Self {
            tx_times,
            comp_times,
            initial_age,
            deadline,
        })
    }

    /// Same packets and initial age, different deadline.
    pub fn with_deadline(&self, deadline: f64) -> Result<Self> {
        Self::new(
            self.tx_times.clone(),
            self.comp_times.clone(),
            self.initial_age,
            deadline,
        )
    }

    /// Number of packets.
    pub fn n(&self) -> usize {
        self.tx_times.len()
    }

    pub fn tx_times(&self) -> &[f64] {
        &self.tx_times
    }

    pub fn comp_times(&self) -> &[f64] {
        &self.comp_times
    }

    pub fn initial_age(&self) -> f64 {
        self.initial_age
    }

    pub fn deadline(&self) -> f64 {
        self.deadline
    }

    /// Generation time of the update held at time zero.
    pub fn prior_generation(&self) -> f64 {
        -self.initial_age
    }
}

/// Generation instants `t_k` and computation-start instants `c_k`.
///
/// A schedule may be infeasible for a given instance; use
/// [`validate_schedule`] to find out.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub gen_times: Vec<f64>,
    pub comp_starts: Vec<f64>,
}

impl Schedule {
    pub fn new(gen_times: Vec<f64>, comp_starts: Vec<f64>) -> Self {
        Self {
            gen_times,
            comp_starts,
        }
    }

    /// Pairs generation times with the earliest computation starts they allow.
    pub fn with_earliest_computing(instance: &Instance, gen_times: Vec<f64>) -> Self {
        let comp_starts = earliest_comp_starts(instance, &gen_times);
        Self::new(gen_times, comp_starts)
    }

    pub fn len(&self) -> usize {
        self.gen_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gen_times.is_empty()
    }

    /// Completion epochs `d_k = c_k + C_k`.
    pub fn completions(&self, instance: &Instance) -> Vec<f64> {
        self.comp_starts
            .iter()
            .zip(instance.comp_times())
            .map(|(c, cc)| c + cc)
            .collect()
    }

    /// Time at which the last packet finishes computing.
    pub fn completion_time(&self, instance: &Instance) -> f64 {
        self.comp_starts.last().copied().unwrap_or(0.0)
            + instance.comp_times().last().copied().unwrap_or(0.0)
    }

    /// True when every packet starts computing the moment it arrives.
    pub fn is_no_wait(&self, instance: &Instance, tol: f64) -> bool {
        self.gen_times
            .iter()
            .zip(&self.comp_starts)
            .zip(instance.tx_times())
            .all(|((t, c), tx)| (c - (t + tx)).abs() <= tol)
    }
}

/// Componentwise-smallest computation starts compatible with the given
/// generation times: each packet is computed as soon as it has arrived and
/// the server is free.
pub fn earliest_comp_starts(instance: &Instance, gen_times: &[f64]) -> Vec<f64> {
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let mut out = Vec::with_capacity(gen_times.len());
    let mut server_free = f64::NEG_INFINITY;
    for (k, &t) in gen_times.iter().enumerate() {
        let c = (t + tx[k]).max(server_free);
        server_free = c + comp[k];
        out.push(c);
    }
    out
}

/// Constraints of the scheduling problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `t_1 >= 0`
    FirstGeneration,
    /// `t_k >= t_{k-1} + T_{k-1}`: one packet on the channel at a time.
    ChannelOrder,
    /// `c_k >= c_{k-1} + C_{k-1}`: one packet on the server at a time.
    ServerOrder,
    /// `c_k >= t_k + T_k`: computing starts after reception.
    Arrival,
    /// `c_n + C_n <= T`
    Deadline,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Constraint::FirstGeneration => "first-generation",
            Constraint::ChannelOrder => "channel-order",
            Constraint::ServerOrder => "server-order",
            Constraint::Arrival => "arrival",
            Constraint::Deadline => "deadline",
        };
        f.write_str(name)
    }
}

/// One broken constraint. `index` is the 1-based packet index; `slack` is
/// negative by at least the tolerance used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub index: usize,
    pub slack: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (packet {}): slack {}",
            self.constraint, self.index, self.slack
        )
    }
}

/// Lists every constraint whose slack is below `-tol`.
pub fn validate_schedule(
    instance: &Instance,
    schedule: &Schedule,
    tol: f64,
) -> Result<Vec<Violation>> {
    let n = instance.n();
    for len in [schedule.gen_times.len(), schedule.comp_starts.len()] {
        if len != n {
            return Err(Error::Dimension {
                expected: n,
                found: len,
            });
        }
    }
    let t = &schedule.gen_times;
    let c = &schedule.comp_starts;
    let tx = instance.tx_times();
    let comp = instance.comp_times();

    let mut violations = Vec::new();
    let mut check = |constraint, index, slack: f64| {
        // NaN slack counts as a violation.
        if slack.is_nan() || slack < -tol {
            violations.push(Violation {
                constraint,
                index,
                slack,
            });
        }
    };

    check(Constraint::FirstGeneration, 1, t[0]);
    for k in 1..n {
        check(Constraint::ChannelOrder, k + 1, t[k] - t[k - 1] - tx[k - 1]);
    }
    for k in 1..n {
        check(
            Constraint::ServerOrder,
            k + 1,
            c[k] - c[k - 1] - comp[k - 1],
        );
    }
    for k in 0..n {
        check(Constraint::Arrival, k + 1, c[k] - t[k] - tx[k]);
    }
    check(
        Constraint::Deadline,
        n,
        instance.deadline() - c[n - 1] - comp[n - 1],
    );
    Ok(violations)
}

fn ensure_feasible(instance: &Instance, schedule: &Schedule) -> Result<()> {
    let violations = validate_schedule(instance, schedule, DEFAULT_TOL)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InfeasibleSchedule { violations })
    }
}

/// Evaluated objective of a feasible schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct AoiMetrics {
    /// Area under the age curve on `[0, T]`, in seconds squared.
    pub area: f64,
    /// `area / T`
    pub average: f64,
    /// Peak age `c_k + C_k - t_{k-1}` just before each completion.
    pub peaks: Vec<f64>,
    /// Age at the deadline, `T - t_n`.
    pub final_age: f64,
}

impl AoiMetrics {
    /// The packet peaks followed by the final age: the `n + 1` reduced
    /// coordinates of a no-wait schedule.
    pub fn peak_values(&self) -> Vec<f64> {
        let mut v = self.peaks.clone();
        v.push(self.final_age);
        v
    }
}

// Unchecked area: sum of trapezoids between consecutive generations plus the
// trailing triangle, minus the triangle before time zero.
pub(crate) fn area_unchecked(instance: &Instance, schedule: &Schedule) -> f64 {
    let t = &schedule.gen_times;
    let mut prev = instance.prior_generation();
    let mut area = 0.0;
    for (k, d) in schedule.completions(instance).into_iter().enumerate() {
        let before = d - prev;
        let after = d - t[k];
        area += 0.5 * (before * before - after * after);
        prev = t[k];
    }
    let tail = instance.deadline() - prev;
    let d0 = instance.initial_age();
    area + 0.5 * tail * tail - 0.5 * d0 * d0
}

fn peaks_unchecked(instance: &Instance, schedule: &Schedule) -> Vec<f64> {
    let mut prev = instance.prior_generation();
    schedule
        .completions(instance)
        .into_iter()
        .zip(&schedule.gen_times)
        .map(|(d, &t)| {
            let peak = d - prev;
            prev = t;
            peak
        })
        .collect()
}

/// Area under the age curve on `[0, T]`.
pub fn aoi_area(instance: &Instance, schedule: &Schedule) -> Result<f64> {
    ensure_feasible(instance, schedule)?;
    Ok(area_unchecked(instance, schedule))
}

/// Time-average age over `[0, T]`.
pub fn average_aoi(instance: &Instance, schedule: &Schedule) -> Result<f64> {
    Ok(aoi_area(instance, schedule)? / instance.deadline())
}

/// Peak age just before each completion epoch.
pub fn peak_aoi(instance: &Instance, schedule: &Schedule) -> Result<Vec<f64>> {
    ensure_feasible(instance, schedule)?;
    Ok(peaks_unchecked(instance, schedule))
}

pub fn evaluate(instance: &Instance, schedule: &Schedule) -> Result<AoiMetrics> {
    ensure_feasible(instance, schedule)?;
    let area = area_unchecked(instance, schedule);
    Ok(AoiMetrics {
        area,
        average: area / instance.deadline(),
        peaks: peaks_unchecked(instance, schedule),
        final_age: instance.deadline() - schedule.gen_times[instance.n() - 1],
    })
}

/// Piecewise-linear age curve. Each completion epoch contributes two points
/// with the same time: the age just before and just after the drop.
#[derive(Debug, Clone, PartialEq)]
pub struct AoiCurve {
    pub breakpoints: Vec<(f64, f64)>,
}

impl AoiCurve {
    /// Exact integral of the polyline.
    pub fn trapezoid_area(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    /// Ages just before each drop.
    pub fn local_maxima(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .filter(|w| w[0].0 == w[1].0 && w[1].1 < w[0].1)
            .map(|w| w[0].1)
            .collect()
    }

    pub fn max_age(&self) -> f64 {
        self.breakpoints.iter().map(|p| p.1).fold(0.0, f64::max)
    }
}

pub fn sample_curve(instance: &Instance, schedule: &Schedule) -> Result<AoiCurve> {
    ensure_feasible(instance, schedule)?;
    let mut points = Vec::with_capacity(2 * instance.n() + 2);
    points.push((0.0, instance.initial_age()));
    let mut prev = instance.prior_generation();
    for (d, &t) in schedule
        .completions(instance)
        .into_iter()
        .zip(&schedule.gen_times)
    {
        points.push((d, d - prev));
        points.push((d, d - t));
        prev = t;
    }
    let end = (instance.deadline(), instance.deadline() - prev);
    if points.last() != Some(&end) {
        points.push(end);
    }
    Ok(AoiCurve {
        breakpoints: points,
    })
}
