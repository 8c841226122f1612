//! Simultaneous rational approximation with a bounded common denominator.
//!
//! For reals `x_1, …, x_k` and a ceiling `n` there are integers `a_i` and a
//! denominator `0 < b <= n` with `|x_i - a_i/b| <= 1/(b n^(1/k))`, i.e.
//! `|b x_i - a_i| <= n^(-1/k)`. The bound even holds strictly, since only
//! the denominator's constraint needs to be non-strict in Minkowski's
//! linear forms theorem. The solver scans `b = 1, 2, …, n` and returns the
//! first denominator whose error is strictly below `n^(-1/k)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Slack absorbing rounding in `n^(-1/k)` at the pigeonhole boundary.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxResult {
    pub a: Vec<i64>,
    pub b: u64,
    /// `max_i |b x_i - a_i|`.
    pub err: f64,
    pub satisfied: bool,
}

fn threshold(n: u64, k: usize) -> f64 {
    (n as f64).powf(-1.0 / k as f64)
}

fn numerators(x: &[f64], b: u64) -> (Vec<i64>, f64) {
    let mut err: f64 = 0.0;
    let a = x
        .iter()
        .map(|&xi| {
            let scaled = b as f64 * xi;
            let ai = scaled.round_ties_even();
            err = err.max((scaled - ai).abs());
            ai as i64
        })
        .collect();
    (a, err)
}

/// Scans `b = 1..=n` with `a_i = round(b x_i)` (ties to even) and returns the
/// first `b` whose error is strictly below `n^(-1/k)`.
///
/// When no denominator qualifies, which only floating-point effects can
/// cause, the result carries the `b` of least error; `satisfied` then
/// reports whether that error still meets `n^(-1/k)` up to [`BOUND_SLACK`].
pub fn simultaneous_approx(x: &[f64], n: u64) -> Result<ApproxResult> {
    if x.is_empty() {
        return Err(Error::domain("diophantine", "at least one real number is required"));
    }
    if n == 0 {
        return Err(Error::domain(
            "diophantine",
            "the denominator ceiling n must be positive",
        ));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain("diophantine", format!("x[{i}] is not finite")));
    }
    let limit = threshold(n, x.len());
    let mut best: Option<ApproxResult> = None;
    for b in 1..=n {
        let (a, err) = numerators(x, b);
        if err < limit {
            return Ok(ApproxResult {
                a,
                b,
                err,
                satisfied: true,
            });
        }
        if best.as_ref().is_none_or(|r| err < r.err) {
            best = Some(ApproxResult {
                a,
                b,
                err,
                satisfied: err <= limit + BOUND_SLACK,
            });
        }
    }
    Ok(best.expect("n >= 1 guarantees one candidate"))
}

/// Re-checks `max_i |x_i - a_i/b| <= 1/(b n^(1/k))` directly from the result.
pub fn verify_bound(x: &[f64], r: &ApproxResult, n: u64) -> bool {
    if x.len() != r.a.len() || x.is_empty() || r.b == 0 || r.b > n {
        return false;
    }
    let b = r.b as f64;
    let rhs = 1.0 / (b * (n as f64).powf(1.0 / x.len() as f64));
    x.iter()
        .zip(&r.a)
        .all(|(&xi, &ai)| (xi - ai as f64 / b).abs() <= rhs + BOUND_SLACK)
}
