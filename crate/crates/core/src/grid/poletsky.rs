//! The one-sided disc-functional bound: for every analytic disc `φ` in `D`
//! with `φ(0) = z`, the boundary average of `1_{D∖A}∘φ` is at least
//! `ω(z, A, D)`.

use alloc::vec::Vec;

use super::shape::Shape;
use super::solve::ScalarField;
use crate::math::cis;
use crate::{Error, Point, Result};

/// Boundary samples per disc.
pub const DISC_SAMPLES: usize = 1 << 12;

/// Allowed shortfall of a disc average below `ω`.
pub const POLETSKY_TOL: f64 = 1e-2;

/// The polynomial disc `t ↦ Σ c_k t^k`; `c_0` is the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyDisc {
    pub coeffs: Vec<Point>,
}

impl PolyDisc {
    pub fn new(coeffs: Vec<Point>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("disc needs finite coefficients"));
        }
        Ok(PolyDisc { coeffs })
    }

    pub fn center(&self) -> Point {
        self.coeffs[0]
    }

    pub fn eval(&self, t: Point) -> Point {
        self.coeffs.iter().rev().fold(Point::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    /// `Σ k|c_k|`, a bound for `|φ'|` on the closed disc.
    pub fn derivative_bound(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.norm()).sum()
    }

    /// Boundary average of the indicator of `D \ A`, or `None` when the
    /// sampled image (widened by the largest possible drift between samples)
    /// leaves `D`.
    pub fn average_outside<S: Shape + ?Sized>(&self, shape: &S) -> Option<f64> {
        let margin = self.derivative_bound() * core::f64::consts::PI / DISC_SAMPLES as f64;
        let mut outside = 0usize;
        for k in 0..DISC_SAMPLES {
            let t = cis(crate::TAU * (k as f64 + 0.5) / DISC_SAMPLES as f64);
            let p = self.eval(t);
            let safe = shape.in_domain(p)
                && (margin == 0.0
                    || (0..4).all(|q| shape.in_domain(p + cis(q as f64 * core::f64::consts::FRAC_PI_2) * margin)));
            if !safe {
                return None;
            }
            if !shape.in_target(p) {
                outside += 1;
            }
        }
        Some(outside as f64 / DISC_SAMPLES as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoletskyReport {
    /// `ω(z, A, D)` from the solved field.
    pub omega: f64,
    /// Smallest average over accepted discs (`+∞` if none was accepted).
    pub min_average: f64,
    pub accepted: usize,
    pub rejected: usize,
    /// Discs whose average fell below `ω − tol`.
    pub violations: usize,
    pub pass: bool,
}

/// Checks `average ≥ ω(z, A, D) − 1e−2` over `discs`, all centered at `z`.
/// `shape` supplies membership in `D` and in the compact target `A`; the
/// field must be the extremal function of the same pair.
pub fn poletsky_upper_check<S: Shape + ?Sized>(
    field: &ScalarField,
    shape: &S,
    z: Point,
    discs: &[PolyDisc],
) -> Result<PoletskyReport> {
    if discs.iter().any(|d| (d.center() - z).norm() > 1e-12) {
        return Err(Error::input("every disc must be centered at z"));
    }
    let omega = if shape.in_target(z) {
        0.0
    } else {
        field
            .sample(z)
            .ok_or_else(|| Error::domain("base point is outside the grid domain"))?
    };
    let averages = crate::par::map_range(discs.len(), |k| discs[k].average_outside(shape));
    let mut rep = PoletskyReport {
        omega,
        min_average: f64::INFINITY,
        accepted: 0,
        rejected: 0,
        violations: 0,
        pass: true,
    };
    for a in averages {
        match a {
            None => rep.rejected += 1,
            Some(a) => {
                rep.accepted += 1;
                rep.min_average = rep.min_average.min(a);
                if a < omega - POLETSKY_TOL {
                    rep.violations += 1;
                }
            }
        }
    }
    rep.pass = rep.violations == 0;
    Ok(rep)
}
