//! Integer-order Bessel functions of the first kind.
//!
//! Two evaluation paths, selected by argument magnitude:
//!
//! * ascending power series for |x| < 12, where the largest series term is
//!   small enough that cancellation stays below ~1e-12 absolute;
//! * downward (Miller) recurrence with normalization against
//!   `J_0 + 2*sum_{k>=1} J_{2k} = 1` otherwise. The upward recurrence is
//!   unstable for orders above the argument, the downward one is not.
//!
//! Validity envelope: |order| <= 64, |x| <= 1e4, absolute error <= 1e-10.

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const MAX_ORDER: i64 = 64;
/// Largest |argument| accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1.0e4;

const SERIES_CUTOFF: f64 = 12.0;

/// Evaluate `J_order(x)`.
///
/// Negative orders and arguments are reduced through the exact symmetries
/// `J_{-n}(x) = (-1)^n J_n(x)` and `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(order: i64, x: f64) -> Result<f64> {
    if order.abs() > MAX_ORDER || !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::BesselDomain { order, x });
    }
    let mut sign = 1.0;
    let n = if order < 0 {
        if order % 2 != 0 {
            sign = -sign;
        }
        (-order) as usize
    } else {
        order as usize
    };
    let ax = if x < 0.0 {
        if n % 2 != 0 {
            sign = -sign;
        }
        -x
    } else {
        x
    };
    Ok(sign * bessel_j_core(n, ax))
}

/// Core evaluation for n >= 0, x >= 0.
fn bessel_j_core(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_CUTOFF {
        series(n, x)
    } else {
        miller(n, x)
    }
}

/// Ascending series J_n(x) = sum_m (-1)^m (x/2)^{n+2m} / (m! (n+m)!).
fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = half * half;
    let mut sum = term;
    for m in 1..500 {
        term *= -q / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * (sum.abs() + 1e-300) {
            break;
        }
    }
    sum
}

/// Miller downward recurrence with even-order normalization.
fn miller(n: usize, x: f64) -> f64 {
    let base = (n as f64).max(x);
    // Start high enough above max(n, x) that the seeded tail has decayed
    // below f64 precision by the time the recurrence reaches order n.
    let mut m_start = (base + 12.0 * base.sqrt() + 30.0) as usize;
    m_start += m_start & 1; // even

    let mut next = 0.0_f64; // J_{m+1}
    let mut cur = 1.0e-30_f64; // J_m (arbitrary seed)
    let mut even_sum = 0.0_f64; // sum of J_{2k}, k >= 1
    let mut target = if n == m_start { cur } else { 0.0 };

    for m in (1..=m_start).rev() {
        let prev = (2.0 * m as f64 / x) * cur - next; // J_{m-1}
        next = cur;
        cur = prev;
        if cur.abs() > 1.0e100 {
            cur *= 1.0e-100;
            next *= 1.0e-100;
            even_sum *= 1.0e-100;
            target *= 1.0e-100;
        }
        let order = m - 1;
        if order >= 2 && order % 2 == 0 {
            even_sum += cur;
        }
        if order == n {
            target = cur;
        }
    }
    // cur now holds the unnormalized J_0
    target / (cur + 2.0 * even_sum)
}
