//! Planar regions with Dirichlet data, as seen by the grid builder.

use alloc::vec::Vec;

use crate::arcs::UnitCircleSet;
use crate::math;
use crate::{Error, Point, Result};

use super::JumpPoint;

/// A bounded open region `D \ Ā` together with boundary data: `0` on the
/// target set `A`, `1` on the rest of the boundary.
pub trait Shape: Sync {
    /// Closed box containing the region, as `(lower-left, upper-right)`.
    fn bbox(&self) -> (Point, Point);

    /// Points where the Laplace equation is solved.
    fn is_interior(&self, p: Point) -> bool;

    /// Dirichlet datum at a boundary point.
    fn boundary_value(&self, p: Point) -> f64;

    /// Points of a compact target `A ⊂ D` (fixed-value cells). Boundary
    /// targets are encoded in [`Shape::boundary_value`] instead.
    fn in_target(&self, _p: Point) -> bool {
        false
    }

    /// The open set `D` itself (interior plus compact target).
    fn in_domain(&self, p: Point) -> bool {
        self.is_interior(p) || self.in_target(p)
    }

    /// Fraction `t ∈ (0, 1]` at which the segment from the interior point
    /// `p` to `q` first leaves the interior. Bisection by default.
    fn exit_fraction(&self, p: Point, q: Point) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.is_interior(p + (q - p) * mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Boundary points where the data jumps between 0 and 1.
    fn jumps(&self) -> Vec<JumpPoint> {
        Vec::new()
    }
}

/// Smallest root in `(0, 1]` of `|p + t d − c|² = r²`, if any.
fn circle_crossing(p: Point, d: Point, c: Point, r: f64) -> Option<f64> {
    let f = p - c;
    let a = d.norm_sqr();
    let b = f.re * d.re + f.im * d.im;
    let cc = f.norm_sqr() - r * r;
    let disc = (b * b - a * cc).max(0.0);
    let s = math::sqrt(disc);
    let mut best: Option<f64> = None;
    for t in [(-b - s) / a, (-b + s) / a] {
        if t > 0.0 && t <= 1.0 + 1e-12 && best.is_none_or(|x| t < x) {
            best = Some(t.min(1.0));
        }
    }
    best
}

/// Jumps of arc data on a circle-like boundary, given the outward normal at
/// the arc endpoints.
fn arc_jumps(target: &UnitCircleSet, at: impl Fn(f64) -> (Point, Point)) -> Vec<JumpPoint> {
    if target.is_empty() || target.is_full() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for arc in target.arcs() {
        let (p, n) = at(arc.start);
        out.push(JumpPoint::new(p, n * Point::i(), 1.0, core::f64::consts::PI, 0.0, 1.0));
        let (p, n) = at(arc.end);
        out.push(JumpPoint::new(p, -n * Point::i(), -1.0, core::f64::consts::PI, 0.0, 1.0));
    }
    out
}

/// A disc whose boundary target is an arc set, measured by polar angle about
/// the center.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscShape {
    pub center: Point,
    pub radius: f64,
    pub target: UnitCircleSet,
}

impl DiscShape {
    pub fn new(center: Point, radius: f64, target: UnitCircleSet) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::input("disc needs a finite center and positive radius"));
        }
        Ok(DiscShape { center, radius, target })
    }

    /// The unit disc with boundary target `target`.
    pub fn unit(target: UnitCircleSet) -> Self {
        DiscShape {
            center: Point::new(0.0, 0.0),
            radius: 1.0,
            target,
        }
    }
}

impl Shape for DiscShape {
    fn bbox(&self) -> (Point, Point) {
        let r = Point::new(self.radius, self.radius);
        (self.center - r, self.center + r)
    }

    fn is_interior(&self, p: Point) -> bool {
        (p - self.center).norm_sqr() < self.radius * self.radius
    }

    fn boundary_value(&self, p: Point) -> f64 {
        let d = p - self.center;
        if self.target.contains(math::atan2(d.im, d.re)) {
            0.0
        } else {
            1.0
        }
    }

    fn exit_fraction(&self, p: Point, q: Point) -> f64 {
        circle_crossing(p, q - p, self.center, self.radius).unwrap_or(1.0)
    }

    fn jumps(&self) -> Vec<JumpPoint> {
        arc_jumps(&self.target, |t| {
            let n = math::cis(t);
            (self.center + n * self.radius, n)
        })
    }
}

/// The region between two circles, `{|z − c₀| < R} \ {|z − c₁| ≤ r}`, with
/// target the inner disc (data 0 on the inner circle, 1 on the outer).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusShape {
    pub outer_center: Point,
    pub outer_radius: f64,
    pub inner_center: Point,
    pub inner_radius: f64,
}

impl AnnulusShape {
    pub fn new(
        outer_center: Point,
        outer_radius: f64,
        inner_center: Point,
        inner_radius: f64,
    ) -> Result<Self> {
        let gap = outer_radius - (inner_center - outer_center).norm() - inner_radius;
        if !(inner_radius > 0.0 && gap > 0.0 && outer_radius.is_finite()) {
            return Err(Error::input(
                "annulus needs a hole of positive radius strictly inside the outer disc",
            ));
        }
        Ok(AnnulusShape {
            outer_center,
            outer_radius,
            inner_center,
            inner_radius,
        })
    }

    /// The concentric annulus `r₁ < |z| < r₂`.
    pub fn concentric(r1: f64, r2: f64) -> Result<Self> {
        let o = Point::new(0.0, 0.0);
        Self::new(o, r2, o, r1)
    }
}

impl Shape for AnnulusShape {
    fn bbox(&self) -> (Point, Point) {
        let r = Point::new(self.outer_radius, self.outer_radius);
        (self.outer_center - r, self.outer_center + r)
    }

    fn is_interior(&self, p: Point) -> bool {
        (p - self.outer_center).norm_sqr() < self.outer_radius * self.outer_radius
            && (p - self.inner_center).norm_sqr() > self.inner_radius * self.inner_radius
    }

    fn in_target(&self, p: Point) -> bool {
        (p - self.inner_center).norm_sqr() <= self.inner_radius * self.inner_radius
    }

    fn boundary_value(&self, p: Point) -> f64 {
        let di = math::abs((p - self.inner_center).norm() - self.inner_radius);
        let d_o = math::abs((p - self.outer_center).norm() - self.outer_radius);
        if di <= d_o {
            0.0
        } else {
            1.0
        }
    }

    fn exit_fraction(&self, p: Point, q: Point) -> f64 {
        let d = q - p;
        let a = circle_crossing(p, d, self.outer_center, self.outer_radius);
        let b = circle_crossing(p, d, self.inner_center, self.inner_radius);
        match (a, b) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => 1.0,
        }
    }
}

/// The ellipse `x²/a² + y²/b² < 1`; the boundary target is an arc set in
/// polar angle.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseShape {
    pub a: f64,
    pub b: f64,
    pub target: UnitCircleSet,
}

impl EllipseShape {
    pub fn new(a: f64, b: f64, target: UnitCircleSet) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::input("ellipse semi-axes must be positive"));
        }
        Ok(EllipseShape { a, b, target })
    }

    fn level(&self, p: Point) -> f64 {
        (p.re / self.a) * (p.re / self.a) + (p.im / self.b) * (p.im / self.b)
    }
}

impl Shape for EllipseShape {
    fn bbox(&self) -> (Point, Point) {
        (Point::new(-self.a, -self.b), Point::new(self.a, self.b))
    }

    fn is_interior(&self, p: Point) -> bool {
        self.level(p) < 1.0
    }

    fn boundary_value(&self, p: Point) -> f64 {
        if self.target.contains(math::atan2(p.im, p.re)) {
            0.0
        } else {
            1.0
        }
    }

    fn exit_fraction(&self, p: Point, q: Point) -> f64 {
        // Scale to the unit circle; fractions are affine invariants.
        let s = |z: Point| Point::new(z.re / self.a, z.im / self.b);
        let (ps, qs) = (s(p), s(q));
        circle_crossing(ps, qs - ps, Point::new(0.0, 0.0), 1.0).unwrap_or(1.0)
    }

    fn jumps(&self) -> Vec<JumpPoint> {
        arc_jumps(&self.target, |t| {
            let (s, c) = math::sin_cos(t);
            let r = 1.0 / math::sqrt((c / self.a) * (c / self.a) + (s / self.b) * (s / self.b));
            let p = Point::new(r * c, r * s);
            let n = Point::new(p.re / (self.a * self.a), p.im / (self.b * self.b));
            (p, n / n.norm())
        })
    }
}

/// The upper half of the unit disc, with constant data 1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HalfDiscShape;

impl Shape for HalfDiscShape {
    fn bbox(&self) -> (Point, Point) {
        (Point::new(-1.0, 0.0), Point::new(1.0, 1.0))
    }

    fn is_interior(&self, p: Point) -> bool {
        p.im > 0.0 && p.norm_sqr() < 1.0
    }

    fn boundary_value(&self, _p: Point) -> f64 {
        1.0
    }

    fn exit_fraction(&self, p: Point, q: Point) -> f64 {
        let d = q - p;
        let mut t = circle_crossing(p, d, Point::new(0.0, 0.0), 1.0).unwrap_or(1.0);
        if q.im <= 0.0 && d.im < 0.0 {
            t = t.min(p.im / -d.im);
        }
        t
    }
}

/// A region given by closures; exits are found by bisection.
pub struct FnShape<I, V> {
    pub bbox: (Point, Point),
    pub interior: I,
    pub value: V,
}

impl<I, V> Shape for FnShape<I, V>
where
    I: Fn(Point) -> bool + Sync,
    V: Fn(Point) -> f64 + Sync,
{
    fn bbox(&self) -> (Point, Point) {
        self.bbox
    }

    fn is_interior(&self, p: Point) -> bool {
        (self.interior)(p)
    }

    fn boundary_value(&self, p: Point) -> f64 {
        (self.value)(p)
    }
}
