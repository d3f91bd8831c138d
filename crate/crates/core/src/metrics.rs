//! Anytime quality measures: primal gap and primal integral.
//!
//! Time is kept in whole microseconds and every quantity is an exact
//! rational, so worked examples reproduce without tolerance.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::instance::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TracePoint {
    pub micros: u64,
    pub objective: Time,
}

/// Incumbent objectives over one run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IncumbentTrace {
    /// Strictly increasing in time, strictly decreasing in objective.
    pub points: Vec<TracePoint>,
    pub horizon_micros: u64,
    /// Objective the gaps are measured against; the last point if unset.
    pub reference: Option<Time>,
    /// Time at which infeasibility was proven, if it was.
    pub infeasible_at: Option<u64>,
}

impl IncumbentTrace {
    /// Appends a point, replacing the last one when the timestamps coincide.
    pub fn push(&mut self, micros: u64, objective: Time) {
        match self.points.last_mut() {
            Some(last) if last.micros >= micros => last.objective = objective,
            _ => self.points.push(TracePoint { micros, objective }),
        }
    }

    pub fn best(&self) -> Option<Time> {
        self.points.last().map(|p| p.objective)
    }

    /// Writes `seconds,objective` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seconds,objective\n");
        for p in &self.points {
            out.push_str(&format!("{:.6},{}\n", p.micros as f64 / 1e6, p.objective));
        }
        out
    }
}

/// Gap in `[0, 1]` of an incumbent against a reference objective.
pub fn primal_gap(incumbent: Option<Time>, reference: Time) -> Ratio<i64> {
    let Some(c) = incumbent else {
        return Ratio::from_integer(1);
    };
    if c == 0 && reference == 0 {
        return Ratio::from_integer(0);
    }
    if c.signum() * reference.signum() < 0 {
        return Ratio::from_integer(1);
    }
    Ratio::new((reference - c).abs(), reference.abs().max(c.abs()))
}

/// Integral of the gap step function over `[0, horizon]`, in seconds.
pub fn primal_integral(trace: &IncumbentTrace) -> Ratio<i128> {
    let reference = trace.reference.or_else(|| trace.best());
    let horizon = trace.horizon_micros;
    let mut total = Ratio::<i128>::from_integer(0);
    let mut last_t = 0u64;
    let mut gap = Ratio::<i128>::from_integer(1);
    let widen = |r: Ratio<i64>| Ratio::new(i128::from(*r.numer()), i128::from(*r.denom()));
    let cut = trace.infeasible_at.unwrap_or(u64::MAX).min(horizon);
    for p in &trace.points {
        let t = p.micros.min(cut);
        total += gap * i128::from(t - last_t);
        last_t = t;
        gap = match reference {
            Some(r) => widen(primal_gap(Some(p.objective), r)),
            None => Ratio::from_integer(1),
        };
    }
    total += gap * i128::from(cut.saturating_sub(last_t));
    total / 1_000_000
}

/// Floating-point value of a ratio, for reports.
pub fn ratio_to_f64<T: Clone + Integer + ToPrimitive>(r: &Ratio<T>) -> f64 {
    let (n, d) = (r.numer().to_f64(), r.denom().to_f64());
    match (n, d) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}
