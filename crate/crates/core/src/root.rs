//! Monotone bisection.
//!
//! Every indifference query in the crate reduces to finding the zero of a
//! value gap that is nondecreasing in one free outcome. Bisection is slow but
//! deterministic and needs nothing beyond monotonicity and continuity.

use crate::error::{Error, Result};

/// Stopping rule for [`bisect_increasing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Accept `x` once `|gap(x)| <= tol`.
    pub tol: f64,
    /// Hard cap on halvings.
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200 }
    }
}

/// Finds `x` in `[lo, hi]` with `|gap(x)| <= tol` for a nondecreasing `gap`.
///
/// When the bracket collapses to adjacent floats before the tolerance is met
/// (a gap with a jump, or a tolerance below float resolution) the endpoint
/// with the smaller residual is returned.
pub fn bisect_increasing<F>(mut gap: F, lo: f64, hi: f64, rule: Bisection) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let (mut ga, mut gb) = (gap(a)?, gap(b)?);
    if ga.abs() <= rule.tol {
        return Ok(a);
    }
    if gb.abs() <= rule.tol {
        return Ok(b);
    }
    if ga > 0.0 || gb < 0.0 {
        return Err(Error::NoSolution { gap_lo: ga, gap_hi: gb });
    }
    for _ in 0..rule.max_iter {
        let mid = a + (b - a) / 2.0;
        if mid <= a || mid >= b {
            return Ok(if ga.abs() <= gb.abs() { a } else { b });
        }
        let gm = gap(mid)?;
        if gm.abs() <= rule.tol {
            return Ok(mid);
        }
        if gm < 0.0 {
            a = mid;
            ga = gm;
        } else {
            b = mid;
            gb = gm;
        }
    }
    Err(Error::NoConvergence { iterations: rule.max_iter, residual: ga.abs().min(gb.abs()) })
}
