//! Optimal schedules for arbitrary feasible deadlines.
//!
//! For fixed generation times the area grows with every computation start,
//! so computation always starts as early as possible and the generation
//! times are the only decision variables. The resulting objective is
//! piecewise quadratic: each packet after the first either arrives to an
//! idle server (its completion depends on its own generation time) or
//! queues behind its predecessor (its completion is inherited). Fixing that
//! choice for every packet gives a branch on which the objective is a
//! single, possibly indefinite, quadratic over a polytope.
//!
//! Up to [`EXACT_MAX_PACKETS`] packets the global optimum is found exactly:
//! every branch is enumerated and, within it, every face of the polytope is
//! visited by solving its equality-constrained stationarity system. Two
//! facts prune the search. The last packet can always be moved to arrive
//! exactly when the server frees up without increasing the area, so it is
//! fixed to the idle branch. A queued packet whose successor is not sent
//! back-to-back can be delayed for a strict gain, so that channel
//! constraint is always active on a queued branch.
//!
//! Larger instances use block-coordinate descent with exact line searches
//! from several feasible starting points.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::feasibility::RegimeKind;
use crate::model::{
    area_unchecked, earliest_comp_starts, validate_schedule, Instance, Schedule, DEFAULT_TOL,
};

use super::{greedy_schedule, nowait_solve, require_feasible_deadline, Method, SolveResult};

/// Largest packet count solved by exhaustive branch and face enumeration.
pub const EXACT_MAX_PACKETS: usize = 8;

const TIE_TOL: f64 = 1e-9;
const DESCENT_SEED: u64 = 0x5eed_a011;

/// Minimum-area schedule for any deadline at or above the minimum deadline.
///
/// Among optimal schedules the returned one has the last packet computed
/// upon arrival and, after that, the lexicographically smallest generation
/// times.
pub fn general_solve(instance: &Instance) -> Result<SolveResult> {
    let regime = require_feasible_deadline(instance)?;
    let mut pool = Pool::new(instance);
    pool.offer(greedy_schedule(instance)?.gen_times);
    if regime.kind != RegimeKind::TightFeasible {
        if let Ok(nowait) = nowait_solve(instance) {
            pool.offer(nowait.schedule.gen_times);
        }
    }
    if instance.n() <= EXACT_MAX_PACKETS {
        exact_search(instance, &mut pool);
    } else {
        descent_search(instance, &mut pool);
    }
    let gen_times = pool.best().expect("greedy schedule is always a candidate");
    let schedule = Schedule::with_earliest_computing(instance, gen_times);
    SolveResult::new(instance, schedule, Method::General, None)
}

/// Pushes the last generation up to its arrival deadline, which never
/// increases the area, and snaps a marginally negative first generation.
fn normalize(instance: &Instance, mut t: Vec<f64>) -> Vec<f64> {
    let n = t.len();
    if t[0] < 0.0 && t[0] >= -DEFAULT_TOL {
        t[0] = 0.0;
    }
    let c = earliest_comp_starts(instance, &t);
    t[n - 1] = c[n - 1] - instance.tx_times()[n - 1];
    t
}

/// Area of the schedule induced by `t`, if it is feasible.
fn induced_area(instance: &Instance, t: &[f64]) -> Option<f64> {
    if t.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let schedule = Schedule::with_earliest_computing(instance, t.to_vec());
    let violations = validate_schedule(instance, &schedule, DEFAULT_TOL).ok()?;
    violations
        .is_empty()
        .then(|| area_unchecked(instance, &schedule))
}

struct Candidate {
    area: f64,
    t: Vec<f64>,
}

/// Feasible candidates seen so far.
struct Pool<'a> {
    instance: &'a Instance,
    candidates: Vec<Candidate>,
    best_area: f64,
}

impl<'a> Pool<'a> {
    fn new(instance: &'a Instance) -> Self {
        Self {
            instance,
            candidates: Vec::new(),
            best_area: f64::INFINITY,
        }
    }

    fn offer(&mut self, t: Vec<f64>) -> Option<f64> {
        let t = normalize(self.instance, t);
        let area = induced_area(self.instance, &t)?;
        if area <= self.best_area + TIE_TOL {
            self.best_area = self.best_area.min(area);
            let cutoff = self.best_area + TIE_TOL;
            self.candidates.retain(|c| c.area <= cutoff);
            self.candidates.push(Candidate { area, t });
        }
        Some(area)
    }

    fn best(&self) -> Option<Vec<f64>> {
        self.candidates
            .iter()
            .filter(|c| c.area <= self.best_area + TIE_TOL)
            .min_by(|a, b| {
                a.t.iter()
                    .zip(&b.t)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|c| c.t.clone())
    }
}

/// Affine function of the generation times: `coef . t + constant`.
#[derive(Clone)]
struct Affine {
    coef: Vec<f64>,
    constant: f64,
}

impl Affine {
    fn constant(n: usize, value: f64) -> Self {
        Self {
            coef: vec![0.0; n],
            constant: value,
        }
    }

    fn var(n: usize, k: usize) -> Self {
        let mut a = Self::constant(n, 0.0);
        a.coef[k] = 1.0;
        a
    }

    fn plus(mut self, value: f64) -> Self {
        self.constant += value;
        self
    }

    fn minus(&self, other: &Affine) -> Self {
        Self {
            coef: self
                .coef
                .iter()
                .zip(&other.coef)
                .map(|(a, b)| a - b)
                .collect(),
            constant: self.constant - other.constant,
        }
    }
}

/// The quadratic `0.5 t'Ht + h't` restricted to one branch, with the
/// branch's linear constraints `g . t >= rhs`.
struct Branch {
    hessian: DMatrix<f64>,
    gradient: DVector<f64>,
    rows: Vec<Affine>,
    forced: Vec<usize>,
}

impl Branch {
    /// `queued[k]` says packet `k` waits for its predecessor.
    fn build(instance: &Instance, queued: &[bool]) -> Self {
        let n = instance.n();
        let tx = instance.tx_times();
        let comp = instance.comp_times();

        // completion epochs
        let mut done: Vec<Affine> = Vec::with_capacity(n);
        for k in 0..n {
            let d = if k > 0 && queued[k] {
                done[k - 1].clone().plus(comp[k])
            } else {
                Affine::var(n, k).plus(tx[k] + comp[k])
            };
            done.push(d);
        }

        let mut hessian = DMatrix::zeros(n, n);
        let mut gradient = DVector::zeros(n);
        let mut add_square = |weight: f64, a: &Affine| {
            for i in 0..n {
                if a.coef[i] == 0.0 {
                    continue;
                }
                gradient[i] += 2.0 * weight * a.constant * a.coef[i];
                for j in 0..n {
                    hessian[(i, j)] += 2.0 * weight * a.coef[i] * a.coef[j];
                }
            }
        };
        let mut prev = Affine::constant(n, instance.prior_generation());
        for (k, d) in done.iter().enumerate() {
            let gen = Affine::var(n, k);
            add_square(0.5, &d.minus(&prev));
            add_square(-0.5, &d.minus(&gen));
            prev = gen;
        }
        add_square(0.5, &Affine::constant(n, instance.deadline()).minus(&prev));

        // Constraint rows, in the form `coef . t + constant >= 0`.
        let mut rows = vec![Affine::var(n, 0)];
        let mut forced = Vec::new();
        for k in 1..n {
            if queued[k.saturating_sub(1)] && k >= 2 {
                // queued packet k-1 with its successor sent back-to-back
                forced.push(rows.len());
            }
            rows.push(
                Affine::var(n, k)
                    .minus(&Affine::var(n, k - 1))
                    .plus(-tx[k - 1]),
            );
        }
        for k in 1..n {
            let arrival = Affine::var(n, k).plus(tx[k]);
            let server_free = &done[k - 1];
            rows.push(if queued[k] {
                server_free.minus(&arrival)
            } else {
                arrival.minus(server_free)
            });
        }
        rows.push(Affine::constant(n, instance.deadline()).minus(&done[n - 1]));

        Self {
            hessian,
            gradient,
            rows,
            forced,
        }
    }

    /// Stationary point of the quadratic on the affine hull of the given
    /// active rows, if the system is nonsingular.
    fn stationary_point(&self, active: &[usize]) -> Option<Vec<f64>> {
        let n = self.gradient.len();
        let m = active.len();
        let mut kkt = DMatrix::zeros(n + m, n + m);
        kkt.view_mut((0, 0), (n, n)).copy_from(&self.hessian);
        let mut rhs = DVector::zeros(n + m);
        for i in 0..n {
            rhs[i] = -self.gradient[i];
        }
        for (r, &row) in active.iter().enumerate() {
            let a = &self.rows[row];
            for i in 0..n {
                kkt[(n + r, i)] = a.coef[i];
                kkt[(i, n + r)] = -a.coef[i];
            }
            rhs[n + r] = -a.constant;
        }
        let sol = kkt.lu().solve(&rhs)?;
        Some(sol.rows(0, n).iter().copied().collect())
    }
}

fn for_each_subset(pool: &[usize], max_len: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(
        pool: &[usize],
        start: usize,
        max_len: usize,
        current: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        f(current);
        if current.len() == max_len {
            return;
        }
        for i in start..pool.len() {
            current.push(pool[i]);
            rec(pool, i + 1, max_len, current, f);
            current.pop();
        }
    }
    rec(pool, 0, max_len, &mut Vec::new(), f);
}

fn exact_search(instance: &Instance, pool: &mut Pool<'_>) {
    let n = instance.n();
    // Packets 2..n-1 (0-based 1..n-2) may queue; the first never does and
    // the last is fixed to the idle branch.
    let free_packets = n.saturating_sub(2);
    for mask in 0u32..(1u32 << free_packets) {
        let mut queued = vec![false; n];
        for (bit, slot) in queued.iter_mut().skip(1).take(free_packets).enumerate() {
            *slot = mask & (1 << bit) != 0;
        }
        let branch = Branch::build(instance, &queued);
        let optional: Vec<usize> = (0..branch.rows.len())
            .filter(|r| !branch.forced.contains(r))
            .collect();
        let room = n - branch.forced.len();
        let mut active = branch.forced.clone();
        for_each_subset(&optional, room, &mut |subset| {
            active.truncate(branch.forced.len());
            active.extend_from_slice(subset);
            if let Some(t) = branch.stationary_point(&active) {
                pool.offer(t);
            }
        });
    }
}

/// Latest feasible generation times: each packet as late as the deadline
/// and its successor allow.
fn latest_gen_times(instance: &Instance) -> Vec<f64> {
    let n = instance.n();
    let upper = upper_bounds(instance);
    let mut t = upper.clone();
    for k in (0..n - 1).rev() {
        t[k] = upper[k].min(t[k + 1] - instance.tx_times()[k]);
    }
    t
}

/// `t_k <= T - T_k - (C_k + ... + C_n)`, the deadline seen from packet k.
fn upper_bounds(instance: &Instance) -> Vec<f64> {
    let n = instance.n();
    let comp = instance.comp_times();
    let mut out = vec![0.0; n];
    let mut tail = 0.0;
    for k in (0..n).rev() {
        tail += comp[k];
        out[k] = instance.deadline() - instance.tx_times()[k] - tail;
    }
    out
}

fn random_gen_times(instance: &Instance, latest: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    let mut t = Vec::with_capacity(latest.len());
    let mut lo = 0.0;
    for (k, &hi) in latest.iter().enumerate() {
        let x = if hi > lo {
            rng.random_range(lo..=hi)
        } else {
            lo
        };
        t.push(x);
        lo = x + instance.tx_times()[k];
    }
    t
}

fn descent_search(instance: &Instance, pool: &mut Pool<'_>) {
    let n = instance.n();
    let latest = latest_gen_times(instance);
    let mut rng = ChaCha8Rng::seed_from_u64(DESCENT_SEED);
    let mut starts = vec![greedy_schedule(instance)
        .map(|s| s.gen_times)
        .unwrap_or_else(|_| latest.clone())];
    if let Ok(nowait) = nowait_solve(instance) {
        starts.push(nowait.schedule.gen_times);
    }
    starts.push(latest.clone());
    for _ in 0..=n {
        starts.push(random_gen_times(instance, &latest, &mut rng));
    }
    for start in starts {
        let t = descend(instance, start);
        pool.offer(t);
    }
}

const MAX_SWEEPS: usize = 500;

fn descend(instance: &Instance, mut t: Vec<f64>) -> Vec<f64> {
    let n = t.len();
    let Some(mut area) = induced_area(instance, &t) else {
        return t;
    };
    for _ in 0..MAX_SWEEPS {
        let before = area;
        for first in 0..n {
            for last in first..n {
                if let Some((s, a)) = line_search(instance, &t, first, last) {
                    if a < area - 1e-15 {
                        for x in &mut t[first..=last] {
                            *x += s;
                        }
                        area = a;
                    }
                }
            }
        }
        if before - area <= 1e-13 * (1.0 + area.abs()) {
            break;
        }
    }
    t
}

/// Exact minimization over `s` of the area when `t[first..=last]` shifts by
/// `s`. Between breakpoints of the completion epochs the area is quadratic
/// in `s`, so three evaluations per piece determine it.
fn line_search(instance: &Instance, t: &[f64], first: usize, last: usize) -> Option<(f64, f64)> {
    let n = t.len();
    let tx = instance.tx_times();
    let comp = instance.comp_times();
    let upper = upper_bounds(instance);

    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    if first == 0 {
        lo = lo.max(-t[0]);
    } else {
        lo = lo.max(t[first - 1] + tx[first - 1] - t[first]);
    }
    if last + 1 < n {
        hi = hi.min(t[last + 1] - tx[last] - t[last]);
    }
    for k in first..=last {
        hi = hi.min(upper[k] - t[k]);
    }
    if lo.is_nan() || hi.is_nan() || lo > hi || !lo.is_finite() {
        return None;
    }

    // Arrival epochs shifted by the computing already queued before them;
    // the completion of packet k is max over j <= k of these plus a
    // constant, so pieces change where a moving and a fixed one cross.
    let mut prior = 0.0;
    let offsets: Vec<f64> = (0..n)
        .map(|j| {
            let o = t[j] + tx[j] - prior;
            prior += comp[j];
            o
        })
        .collect();
    let mut cuts = vec![lo, hi];
    for &oj in &offsets[first..=last] {
        for (i, &oi) in offsets.iter().enumerate() {
            if i < first || i > last {
                let s = oi - oj;
                if s > lo && s < hi {
                    cuts.push(s);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let eval = |s: f64| {
        let mut moved = t.to_vec();
        for x in &mut moved[first..=last] {
            *x += s;
        }
        induced_area(instance, &moved)
    };
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |s: f64, a: Option<f64>| {
        if let Some(a) = a {
            if best.is_none_or(|(_, b)| a < b) {
                best = Some((s, a));
            }
        }
    };
    for w in cuts.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let (f0, f1) = (eval(s0), eval(s1));
        consider(s0, f0);
        consider(s1, f1);
        let mid = 0.5 * (s0 + s1);
        let (Some(f0), Some(f1), Some(fm)) = (f0, f1, eval(mid)) else {
            continue;
        };
        let half = 0.5 * (s1 - s0);
        let curvature = (f0 + f1 - 2.0 * fm) / (half * half);
        if curvature > 0.0 {
            let slope = (f1 - f0) / (s1 - s0);
            let vertex = mid - slope / curvature;
            if vertex > s0 && vertex < s1 {
                consider(vertex, eval(vertex));
            }
        }
    }
    best
}
