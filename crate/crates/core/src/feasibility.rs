//! Deadline thresholds and the reduced no-wait problem.
//!
//! Three deadlines partition the feasible range:
//!
//! * the minimum deadline, below which no schedule exists;
//! * the no-wait threshold, from which every packet can start computing the
//!   moment it arrives;
//! * the closed-form threshold, from which the optimal no-wait schedule has
//!   all peak ages equal.
//!
//! Thresholds are sums of input durations. They are evaluated in decimal
//! arithmetic on the shortest round-trip representation of each input and
//! rounded once, so that decimal inputs such as `0.7` produce the same
//! threshold a hand calculation gives. Inputs that do not fit a 96-bit
//! decimal fall back to `f64`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use rust_decimal::Decimal;

use crate::model::{Instance, DEFAULT_TOL};

/// Lower bounds `a` and budget `b` of the reduced no-wait problem
/// `min sum x_k^2  s.t.  x_k >= a_k, sum x_k = b` over `n + 1` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedParams {
    pub a: Vec<f64>,
    pub b: f64,
}

impl ReducedParams {
    pub fn bound_sum(&self) -> f64 {
        self.a.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    Infeasible,
    /// Feasible, but no-wait computing cannot meet the deadline.
    TightFeasible,
    NoWaitFeasible,
    ClosedForm,
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeKind::Infeasible => "Infeasible",
            RegimeKind::TightFeasible => "TightFeasible",
            RegimeKind::NoWaitFeasible => "NoWaitFeasible",
            RegimeKind::ClosedForm => "ClosedForm",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub min_deadline: f64,
    pub nowait: f64,
    pub closed_form: f64,
}

/// Classification of an instance's deadline against its thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub kind: RegimeKind,
    pub deadline: f64,
    pub thresholds: Thresholds,
}

trait Field: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + PartialOrd {
    fn zero() -> Self;
    fn count(n: usize) -> Self;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn count(n: usize) -> Self {
        n as f64
    }
}

impl Field for Decimal {
    fn zero() -> Self {
        Decimal::ZERO
    }
    fn count(n: usize) -> Self {
        Decimal::from(n)
    }
}

fn max<F: Field>(a: F, b: F) -> F {
    if b > a {
        b
    } else {
        a
    }
}

struct Data<F> {
    tx: Vec<F>,
    comp: Vec<F>,
    initial_age: F,
    deadline: F,
}

// Inputs beyond this magnitude are left to f64 so that sums and the
// (n + 1) multiplier cannot overflow the decimal mantissa.
const DECIMAL_LIMIT: f64 = 1e12;

fn to_decimal(x: f64) -> Option<Decimal> {
    if x.abs() > DECIMAL_LIMIT {
        return None;
    }
    Decimal::from_str_exact(&x.to_string()).ok()
}

fn to_f64(x: Decimal) -> f64 {
    // Parsing the decimal string rounds correctly.
    x.to_string()
        .parse()
        .expect("decimal renders as a float literal")
}

impl Data<Decimal> {
    fn exact(instance: &Instance) -> Option<Self> {
        let conv = |v: &[f64]| v.iter().map(|&x| to_decimal(x)).collect::<Option<Vec<_>>>();
        Some(Self {
            tx: conv(instance.tx_times())?,
            comp: conv(instance.comp_times())?,
            initial_age: to_decimal(instance.initial_age())?,
            deadline: to_decimal(instance.deadline())?,
        })
    }
}

impl Data<f64> {
    fn float(instance: &Instance) -> Self {
        Self {
            tx: instance.tx_times().to_vec(),
            comp: instance.comp_times().to_vec(),
            initial_age: instance.initial_age(),
            deadline: instance.deadline(),
        }
    }
}

impl<F: Field> Data<F> {
    fn total(&self) -> F {
        self.tx
            .iter()
            .chain(&self.comp)
            .fold(F::zero(), |acc, &x| acc + x)
    }

    fn min_deadline(&self) -> F {
        let n = self.tx.len();
        // prefix of transmissions through k plus suffix of computations from k
        let mut suffix = vec![F::zero(); n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] + self.comp[k];
        }
        let mut prefix = F::zero();
        let mut best = F::zero();
        for (&tx, &rest) in self.tx.iter().zip(&suffix) {
            prefix = prefix + tx;
            best = max(best, prefix + rest);
        }
        best
    }

    fn nowait_threshold(&self) -> F {
        let n = self.tx.len();
        let middle = (0..n - 1).fold(F::zero(), |acc, k| acc + max(self.comp[k], self.tx[k + 1]));
        self.tx[0] + middle + self.comp[n - 1]
    }

    fn lower_bounds(&self) -> Vec<F> {
        let n = self.tx.len();
        let mut a = Vec::with_capacity(n + 1);
        a.push(self.initial_age + self.tx[0] + self.comp[0]);
        for k in 1..n {
            a.push(self.tx[k - 1] + max(self.comp[k - 1], self.tx[k]) + self.comp[k]);
        }
        a.push(self.tx[n - 1] + self.comp[n - 1]);
        a
    }

    fn budget(&self) -> F {
        self.initial_age + self.total() + self.deadline
    }

    fn closed_form_threshold(&self) -> F {
        let a = self.lower_bounds();
        let top = a.iter().copied().fold(a[0], max);
        F::count(self.tx.len() + 1) * top - self.total() - self.initial_age
    }
}

/// Evaluates `f` exactly when possible, otherwise in `f64`.
fn eval<R>(
    instance: &Instance,
    exact: impl FnOnce(&Data<Decimal>) -> R,
    float: impl FnOnce(&Data<f64>) -> R,
) -> R {
    match Data::exact(instance) {
        Some(d) => exact(&d),
        None => float(&Data::float(instance)),
    }
}

/// Smallest deadline for which any feasible schedule exists.
pub fn min_deadline(instance: &Instance) -> f64 {
    eval(instance, |d| to_f64(d.min_deadline()), |d| d.min_deadline())
}

/// Smallest deadline for which a no-wait schedule exists.
pub fn nowait_threshold(instance: &Instance) -> f64 {
    eval(
        instance,
        |d| to_f64(d.nowait_threshold()),
        |d| d.nowait_threshold(),
    )
}

/// Deadline from which the equal-peak schedule is optimal. Independent of
/// the instance's own deadline.
pub fn closedform_threshold(instance: &Instance) -> f64 {
    eval(
        instance,
        |d| to_f64(d.closed_form_threshold()),
        |d| d.closed_form_threshold(),
    )
}

pub fn reduced_params(instance: &Instance) -> ReducedParams {
    eval(
        instance,
        |d| ReducedParams {
            a: d.lower_bounds().into_iter().map(to_f64).collect(),
            b: to_f64(d.budget()),
        },
        |d| ReducedParams {
            a: d.lower_bounds(),
            b: d.budget(),
        },
    )
}

pub fn thresholds(instance: &Instance) -> Thresholds {
    Thresholds {
        min_deadline: min_deadline(instance),
        nowait: nowait_threshold(instance),
        closed_form: closedform_threshold(instance),
    }
}

/// Places the deadline among the thresholds. A deadline within
/// [`DEFAULT_TOL`] of a threshold counts as meeting it.
pub fn classify(instance: &Instance) -> Regime {
    let th = thresholds(instance);
    let deadline = instance.deadline();
    let meets = |threshold: f64| deadline >= threshold - DEFAULT_TOL;
    let kind = if !meets(th.min_deadline) {
        RegimeKind::Infeasible
    } else if !meets(th.nowait) {
        RegimeKind::TightFeasible
    } else if !meets(th.closed_form) {
        RegimeKind::NoWaitFeasible
    } else {
        RegimeKind::ClosedForm
    };
    Regime {
        kind,
        deadline,
        thresholds: th,
    }
}
