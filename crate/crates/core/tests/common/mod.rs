//! Independent reference computations and property checks shared by the
//! integration test targets. Nothing here calls the solver code it checks.
#![allow(dead_code)]

use mec_aoi::feasibility::{
    closedform_threshold, min_deadline, nowait_threshold, reduced_params, ReducedParams,
};
use mec_aoi::model::{
    aoi_area, earliest_comp_starts, validate_schedule, Instance, Schedule, DEFAULT_TOL,
};
use mec_aoi::solver::{
    general_solve, greedy_schedule, nowait_schedule_from_x, nowait_solve, oracle_error_bound,
    oracle_solve, solve, water_fill, SolveResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TX: [f64; 5] = [0.5, 0.1, 0.3, 0.7, 0.4];
pub const COMP: [f64; 5] = [0.2, 0.4, 0.3, 0.6, 0.8];

pub fn reference(deadline: f64) -> Instance {
    Instance::new(TX.to_vec(), COMP.to_vec(), 1.0, deadline).unwrap()
}

/// Integral of the age `t - U(t)` on `[0, T]`, where `U(t)` is the latest
/// generation time among packets completed by `t`. Integrates exactly
/// between consecutive completion epochs.
pub fn event_area(instance: &Instance, schedule: &Schedule) -> f64 {
    let mut events: Vec<(f64, f64)> = schedule
        .comp_starts
        .iter()
        .zip(instance.comp_times())
        .zip(&schedule.gen_times)
        .map(|((c, cc), &t)| (c + cc, t))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut latest_gen = -instance.initial_age();
    let mut from = 0.0;
    let mut area = 0.0;
    let piece = |a: f64, b: f64, u: f64| (b - a) * (0.5 * (a + b) - u);
    for (done, gen) in events {
        let to = done.min(instance.deadline());
        area += piece(from, to, latest_gen);
        latest_gen = latest_gen.max(gen);
        from = to;
    }
    area + piece(from, instance.deadline(), latest_gen)
}

/// Completion time of the last packet when both stages run back-to-back,
/// by direct event simulation.
pub fn simulated_makespan(instance: &Instance) -> f64 {
    let mut channel_free = 0.0;
    let mut server_free = 0.0_f64;
    for (tx, comp) in instance.tx_times().iter().zip(instance.comp_times()) {
        let arrival = channel_free + tx;
        channel_free = arrival;
        server_free = server_free.max(arrival) + comp;
    }
    server_free
}

/// The no-wait schedule that starts at zero and sends each packet as soon as
/// it can still avoid queueing: `t_k = t_{k-1} + T_{k-1} + max(0, C_{k-1} - T_k)`.
pub fn earliest_nowait(instance: &Instance) -> Schedule {
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let mut t = vec![0.0];
    for k in 1..instance.n() {
        let prev = t[k - 1];
        t.push(prev + tx[k - 1] + (comp[k - 1] - tx[k]).max(0.0));
    }
    let c = t.iter().zip(tx).map(|(a, b)| a + b).collect();
    Schedule::new(t, c)
}

/// Closed-form optimum written out directly: `t_k = k b/(n+1) - sum_{i<=k}(T_i + C_i) - initial_age`.
pub fn equal_peak_gen_times(instance: &Instance) -> Vec<f64> {
    let n = instance.n();
    let total: f64 = instance
        .tx_times()
        .iter()
        .chain(instance.comp_times())
        .sum();
    let b = instance.initial_age() + total + instance.deadline();
    let mut consumed = 0.0;
    (0..n)
        .map(|k| {
            consumed += instance.tx_times()[k] + instance.comp_times()[k];
            (k + 1) as f64 * b / (n + 1) as f64 - consumed - instance.initial_age()
        })
        .collect()
}

/// Minimum of `sum x^2` on the three-coordinate slice `x >= a, sum x = b`,
/// by grid search.
pub fn grid_min_three(a: [f64; 3], b: f64, step: f64) -> f64 {
    let mut best = f64::INFINITY;
    let mut x0 = a[0];
    while x0 <= b {
        let mut x1 = a[1];
        while x0 + x1 <= b {
            let x2 = b - x0 - x1;
            if x2 >= a[2] - 1e-12 {
                best = best.min(x0 * x0 + x1 * x1 + x2 * x2);
            }
            x1 += step;
        }
        x0 += step;
    }
    best
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
}

/// Random instance: durations uniform on `[0.1, 1.0]`, initial age on
/// `[0, 1]`, deadline `min_deadline * u` with `u` uniform on `[lo, hi]`.
pub fn random_instance(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Instance {
    let tx: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..=1.0)).collect();
    let comp: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..=1.0)).collect();
    let d0 = rng.random_range(0.0..=1.0);
    let base = Instance::new(tx, comp, d0, 1.0).unwrap();
    let u = rng.random_range(lo..=hi);
    base.with_deadline(simulated_makespan(&base) * u).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random feasible schedule for a feasible instance; computation may be
/// delayed beyond the earliest start.
pub fn random_schedule(instance: &Instance, rng: &mut impl Rng) -> Schedule {
    let n = instance.n();
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let deadline = instance.deadline();
    let mut tail = vec![0.0; n + 1];
    for k in (0..n).rev() {
        tail[k] = tail[k + 1] + comp[k];
    }
    // latest generation per packet, backwards
    let mut latest = vec![0.0; n];
    for k in (0..n).rev() {
        let own = deadline - tx[k] - tail[k];
        latest[k] = if k + 1 < n {
            own.min(latest[k + 1] - tx[k])
        } else {
            own
        };
    }
    let mut t = Vec::with_capacity(n);
    let mut lo = 0.0;
    for k in 0..n {
        let x = if latest[k] > lo {
            rng.random_range(lo..=latest[k])
        } else {
            lo
        };
        t.push(x);
        lo = x + tx[k];
    }
    let mut c = Vec::with_capacity(n);
    let mut server_free = f64::NEG_INFINITY;
    for k in 0..n {
        let lower = (t[k] + tx[k]).max(server_free);
        let upper = deadline - tail[k];
        let x = if upper > lower {
            rng.random_range(lower..=upper)
        } else {
            lower
        };
        c.push(x);
        server_free = x + comp[k];
    }
    Schedule::new(t, c)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Finite-difference monotonicity: with computation starts held fixed the
/// area never increases in a generation time; it strictly increases in a
/// computation start.
pub fn check_monotonicity(instance: &Instance, schedule: &Schedule) -> Result<(), String> {
    const H: f64 = 1e-6;
    const GUARD: f64 = 1e-4;
    let n = instance.n();
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let t = &schedule.gen_times;
    let c = &schedule.comp_starts;
    let base = aoi_area(instance, schedule).map_err(|e| e.to_string())?;
    for k in 0..n {
        let room_t = {
            let mut r = c[k] - t[k] - tx[k];
            if k + 1 < n {
                r = r.min(t[k + 1] - t[k] - tx[k]);
            }
            r
        };
        if room_t > GUARD {
            let mut s = schedule.clone();
            s.gen_times[k] += H;
            let a = aoi_area(instance, &s).map_err(|e| e.to_string())?;
            ensure(a <= base + 1e-12, || {
                format!("area rose when t_{} moved later: {base} -> {a}", k + 1)
            })?;
        }
        let room_c = if k + 1 < n {
            c[k + 1] - c[k] - comp[k]
        } else {
            instance.deadline() - c[k] - comp[k]
        };
        if room_c > GUARD {
            let mut s = schedule.clone();
            s.comp_starts[k] += H;
            let a = aoi_area(instance, &s).map_err(|e| e.to_string())?;
            let gap = if k == 0 {
                t[0] + instance.initial_age()
            } else {
                t[k] - t[k - 1]
            };
            if gap > GUARD {
                ensure(a > base, || {
                    format!("area did not rise when c_{} moved later", k + 1)
                })?;
            } else {
                ensure(a >= base - 1e-12, || {
                    format!("area fell when c_{} moved later", k + 1)
                })?;
            }
        }
    }
    Ok(())
}

/// Optimal schedules start every computation as early as possible and
/// compute the last packet upon arrival.
pub fn check_structure(instance: &Instance, schedule: &Schedule) -> Result<(), String> {
    const TOL: f64 = 1e-6;
    let n = instance.n();
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let t = &schedule.gen_times;
    let c = &schedule.comp_starts;
    ensure((c[0] - t[0] - tx[0]).abs() <= TOL, || {
        "first packet waits".into()
    })?;
    ensure((c[n - 1] - t[n - 1] - tx[n - 1]).abs() <= TOL, || {
        "last packet waits".into()
    })?;
    for k in 1..n.saturating_sub(1) {
        let expected = (c[k - 1] + comp[k - 1]).max(t[k] + tx[k]);
        ensure((c[k] - expected).abs() <= TOL, || {
            format!("packet {} starts late", k + 1)
        })?;
    }
    Ok(())
}

/// Water-filling output satisfies bounds, budget and the level structure,
/// and beats random feasible redistributions.
pub fn check_water_fill(
    params: &ReducedParams,
    rng: &mut impl Rng,
    perturbations: usize,
) -> Result<(), String> {
    let (x, mu) = water_fill(params).map_err(|e| e.to_string())?;
    let sum: f64 = x.iter().sum();
    ensure(
        (sum - params.b).abs() <= 1e-12 * params.b.abs().max(1.0),
        || format!("sum {sum} != budget {}", params.b),
    )?;
    for (xk, ak) in x.iter().zip(&params.a) {
        ensure(*xk >= ak - 1e-12, || format!("{xk} below bound {ak}"))?;
        let at_level = (xk - mu).abs() <= 1e-12 * mu.abs().max(1.0);
        let clamped = (xk - ak).abs() <= 1e-15 && *ak >= mu - 1e-12;
        ensure(at_level || clamped, || {
            format!("coordinate {xk} neither at level {mu} nor clamped at {ak}")
        })?;
    }
    let best: f64 = x.iter().map(|v| v * v).sum();
    let m = x.len();
    for _ in 0..perturbations {
        // move mass from one coordinate's slack to another
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        if i == j {
            continue;
        }
        let room = x[i] - params.a[i];
        if room <= 0.0 {
            continue;
        }
        let delta = rng.random_range(0.0..=room);
        let mut y = x.clone();
        y[i] -= delta;
        y[j] += delta;
        let val: f64 = y.iter().map(|v| v * v).sum();
        ensure(best <= val + 1e-12, || {
            format!("perturbation improved: {val} < {best}")
        })?;
    }
    Ok(())
}

pub fn check_threshold_order(instance: &Instance) -> Result<(), String> {
    let a = min_deadline(instance);
    let b = nowait_threshold(instance);
    let c = closedform_threshold(instance);
    ensure(a <= b + 1e-12 && b <= c + 1e-12, || {
        format!("thresholds out of order: {a} {b} {c}")
    })
}

/// Both feasibility thresholds are tight: met exactly at the threshold,
/// missed just below it.
pub fn check_tightness(instance: &Instance) -> Result<(), String> {
    const EPS: f64 = 1e-6;
    let md = min_deadline(instance);
    let at = instance.with_deadline(md).unwrap();
    let g = greedy_schedule(&at).map_err(|e| e.to_string())?;
    ensure(
        validate_schedule(&at, &g, DEFAULT_TOL).unwrap().is_empty(),
        || "greedy infeasible at threshold".into(),
    )?;
    ensure((g.completion_time(&at) - md).abs() <= 1e-9, || {
        "greedy does not finish at the minimum deadline".into()
    })?;
    let below = instance.with_deadline(md - EPS).unwrap();
    ensure(simulated_makespan(&below) > below.deadline(), || {
        "makespan fits below minimum deadline".into()
    })?;
    ensure(greedy_schedule(&below).is_err(), || {
        "greedy accepted a short deadline".into()
    })?;

    let nw = nowait_threshold(instance);
    let at = instance.with_deadline(nw).unwrap();
    let s = earliest_nowait(&at);
    ensure(
        validate_schedule(&at, &s, DEFAULT_TOL).unwrap().is_empty(),
        || "constructive no-wait infeasible".into(),
    )?;
    ensure((s.completion_time(&at) - nw).abs() <= 1e-9, || {
        "constructive no-wait misses threshold".into()
    })?;
    ensure(nowait_solve(&at).is_ok(), || {
        "no-wait rejected at its threshold".into()
    })?;
    let below = instance.with_deadline(nw - EPS).unwrap();
    let p = reduced_params(&below);
    ensure(p.b < p.bound_sum(), || {
        "budget covers bounds below threshold".into()
    })?;
    ensure(water_fill(&p).is_err(), || {
        "water filling accepted a short deadline".into()
    })?;
    Ok(())
}

/// Above the closed-form threshold, water filling gives equal coordinates
/// whose schedule matches the equal-peak formula.
pub fn check_closed_form_agreement(instance: &Instance) -> Result<(), String> {
    let (x, mu) = water_fill(&reduced_params(instance)).map_err(|e| e.to_string())?;
    ensure(
        x.iter().all(|v| (v - mu).abs() <= 1e-12 * mu.max(1.0)),
        || "coordinates not equal".into(),
    )?;
    let s = nowait_schedule_from_x(instance, &x).map_err(|e| e.to_string())?;
    for (a, b) in s.gen_times.iter().zip(equal_peak_gen_times(instance)) {
        ensure((a - b).abs() <= 1e-9, || {
            format!("generation {a} vs formula {b}")
        })?;
    }
    let r = solve(instance).map_err(|e| e.to_string())?;
    for (a, b) in r.schedule.gen_times.iter().zip(&s.gen_times) {
        ensure((a - b).abs() <= 1e-9, || {
            "closed form differs from water filling".into()
        })?;
    }
    ensure(r.schedule.is_no_wait(instance, 1e-9), || {
        "closed form not no-wait".into()
    })
}

/// The general solver is no worse than the greedy and no-wait schedules.
pub fn check_dominance(instance: &Instance, general: &SolveResult) -> Result<(), String> {
    let g = greedy_schedule(instance).map_err(|e| e.to_string())?;
    let ga = aoi_area(instance, &g).unwrap();
    ensure(general.metrics.area <= ga + 1e-9, || {
        format!("general {} worse than greedy {ga}", general.metrics.area)
    })?;
    if let Ok(nw) = nowait_solve(instance) {
        ensure(general.metrics.area <= nw.metrics.area + 1e-9, || {
            format!(
                "general {} worse than no-wait {}",
                general.metrics.area, nw.metrics.area
            )
        })?;
    }
    Ok(())
}

/// General solver agrees with the lattice oracle: never worse than the
/// lattice optimum, never better by more than the lattice error bound.
pub fn check_oracle_agreement(instance: &Instance, grid_step: f64) -> Result<(), String> {
    let general = general_solve(instance).map_err(|e| e.to_string())?;
    let oracle = oracle_solve(instance, grid_step).map_err(|e| e.to_string())?;
    let bound = oracle_error_bound(instance, grid_step);
    let (g, o) = (general.metrics.area, oracle.metrics.area);
    ensure(g <= o + 1e-6 * (1.0 + o.abs()), || {
        format!("general {g} above lattice optimum {o}")
    })?;
    ensure(g >= o - bound, || {
        format!("general {g} below lattice optimum {o} minus bound {bound}")
    })?;
    // the lattice point is a real schedule: recheck its area independently
    ensure(
        (event_area(instance, &oracle.schedule) - o).abs() <= 1e-9,
        || "oracle area mismatch".into(),
    )?;
    Ok(())
}

/// Reruns the oracle checks for `count` random instances.
pub fn oracle_agreement_suite(seed: u64, count: usize, grid_step: f64) -> Result<(), String> {
    let mut r = rng(seed);
    for i in 0..count {
        let n = r.random_range(2..=4);
        let instance = random_instance(&mut r, n, 1.0, 3.0);
        check_oracle_agreement(&instance, grid_step)
            .map_err(|e| format!("instance {i} ({instance:?}): {e}"))?;
    }
    Ok(())
}

pub fn earliest(instance: &Instance, t: Vec<f64>) -> Schedule {
    let c = earliest_comp_starts(instance, &t);
    Schedule::new(t, c)
}
