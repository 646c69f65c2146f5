//! Strictly increasing, continuous utility curves.
//!
//! Two shapes are supported: signed power curves `sign(x)|x|^e` (covering
//! linear and square-root utility) evaluated in closed form, and piecewise
//! linear grids. Grids extrapolate linearly from their end segments so that
//! evaluation and inversion stay total and strictly increasing.

use alloc::format;
use alloc::vec::Vec;

use crate::domain::OutcomeInterval;
use crate::error::{Error, Result};

/// Default number of knots when sampling a closed form onto a grid.
pub const DEFAULT_KNOTS: usize = 1025;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Power { exponent: f64 },
    Grid { xs: Vec<f64>, us: Vec<f64> },
}

/// `U(x) = offset + scale * base(x)` with `scale > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityCurve {
    shape: Shape,
    offset: f64,
    scale: f64,
}

impl UtilityCurve {
    /// `U(x) = x`.
    pub fn linear() -> Self {
        Self::power(1.0).expect("exponent 1 is admissible")
    }

    /// `U(x) = sqrt(x)` (odd extension below zero).
    pub fn sqrt() -> Self {
        Self::power(0.5).expect("exponent 0.5 is admissible")
    }

    /// `U(x) = sign(x) |x|^exponent`, exponent > 0.
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidParameter(format!("power utility exponent {exponent} must be > 0")));
        }
        Ok(Self { shape: Shape::Power { exponent }, offset: 0.0, scale: 1.0 })
    }

    /// `linear`, `sqrt` or `power:<exponent>`.
    pub fn named(name: &str) -> Result<Self> {
        match name.trim() {
            "linear" => Ok(Self::linear()),
            "sqrt" => Ok(Self::sqrt()),
            other => match other.strip_prefix("power:") {
                Some(e) => {
                    let e: f64 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Schema(format!("bad power exponent `{e}`")))?;
                    Self::power(e)
                }
                None => Err(Error::Schema(format!("unknown utility form `{other}`"))),
            },
        }
    }

    /// Piecewise linear curve through `(outcome, utility)` knots.
    pub fn from_grid(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Inconsistent(format!("utility grid needs 2 knots, got {}", knots.len())));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
                return Err(Error::Inconsistent(format!(
                    "utility grid not strictly increasing at ({}, {}) -> ({}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        if knots.iter().any(|(x, u)| !x.is_finite() || !u.is_finite()) {
            return Err(Error::Inconsistent("utility grid has non-finite knots".into()));
        }
        Ok(Self {
            shape: Shape::Grid {
                xs: knots.iter().map(|k| k.0).collect(),
                us: knots.iter().map(|k| k.1).collect(),
            },
            offset: 0.0,
            scale: 1.0,
        })
    }

    /// Samples this curve on `knots` uniform points of the interval.
    pub fn to_grid(&self, interval: OutcomeInterval, knots: usize) -> Result<Self> {
        let n = knots.max(2);
        let step = (interval.hi() - interval.lo()) / (n - 1) as f64;
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let x = if k == n - 1 { interval.hi() } else { interval.lo() + step * k as f64 };
                (x, self.eval(x))
            })
            .collect();
        Self::from_grid(&pts)
    }

    /// `a + b U`, `b > 0`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite() && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("affine map needs b > 0, got {b}")));
        }
        Ok(Self { shape: self.shape.clone(), offset: a + b * self.offset, scale: b * self.scale })
    }

    /// Rescaled so that `U(zero_at) = 0` and `U(one_at) = 1`.
    pub fn normalized(&self, zero_at: f64, one_at: f64) -> Result<Self> {
        let (u0, u1) = (self.eval(zero_at), self.eval(one_at));
        if u1 <= u0 {
            return Err(Error::InvalidParameter("normalization points must be increasing".into()));
        }
        let b = 1.0 / (u1 - u0);
        self.affine(-u0 * b, b)
    }

    /// Knots of a grid curve (after any affine map); `None` for closed forms.
    pub fn knots(&self) -> Option<Vec<(f64, f64)>> {
        match &self.shape {
            Shape::Grid { xs, us } => {
                Some(xs.iter().zip(us).map(|(&x, &u)| (x, self.offset + self.scale * u)).collect())
            }
            Shape::Power { .. } => None,
        }
    }

    /// Exponent of a closed-form curve.
    pub fn exponent(&self) -> Option<f64> {
        match self.shape {
            Shape::Power { exponent } => Some(exponent),
            Shape::Grid { .. } => None,
        }
    }

    /// `U(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let base = match &self.shape {
            Shape::Power { exponent } => signed_pow(x, *exponent),
            Shape::Grid { xs, us } => interpolate(xs, us, x),
        };
        self.offset + self.scale * base
    }

    /// `U⁻¹(u)`.
    pub fn inverse(&self, u: f64) -> f64 {
        let base = (u - self.offset) / self.scale;
        match &self.shape {
            Shape::Power { exponent } => signed_pow(base, 1.0 / exponent),
            Shape::Grid { xs, us } => interpolate(us, xs, base),
        }
    }
}

fn signed_pow(x: f64, e: f64) -> f64 {
    if e == 1.0 {
        x
    } else if e == 0.5 {
        if x >= 0.0 {
            libm::sqrt(x)
        } else {
            -libm::sqrt(-x)
        }
    } else if x >= 0.0 {
        libm::pow(x, e)
    } else {
        -libm::pow(-x, e)
    }
}

// Piecewise linear through (from[k], to[k]); linear extrapolation outside.
fn interpolate(from: &[f64], to: &[f64], x: f64) -> f64 {
    let n = from.len();
    let k = from.partition_point(|&v| v <= x).clamp(1, n - 1);
    let (x0, x1, y0, y1) = (from[k - 1], from[k], to[k - 1], to[k]);
    if x == x0 {
        return y0;
    }
    if x == x1 {
        return y1;
    }
    y0 + (x - x0) * (y1 - y0) / (x1 - x0)
}
