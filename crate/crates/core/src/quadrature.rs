//! Trapezoid rules on arcs of the unit circle.
//!
//! Integrands over boundary arcs here have logarithmic phase singularities at
//! the arc endpoints (`ω̂` diverges there) and, for evaluation points close to
//! the circle, near-singular Cauchy kernels. Both are handled by running the
//! trapezoid rule in the tanh-sinh variable `θ = m + r tanh((π/2) sinh t)`,
//! which grades the nodes double-exponentially towards the endpoints, and by
//! splitting arcs at the projection of a nearby evaluation point.
//!
//! Nodes are stored as `base + offset` with `base` the closer endpoint, so
//! that a node `1e-300` away from an endpoint still knows its distance to it.

use alloc::vec::Vec;

use crate::math::{self, cis};
use crate::{Point, TAU};

/// Truncation of the tanh-sinh variable; the neglected tail is below
/// `1e-16` of the arc length.
const T_MAX: f64 = 3.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcNode {
    pub base: f64,
    pub offset: f64,
    /// `dθ` weight.
    pub weight: f64,
}

impl ArcNode {
    pub fn angle(&self) -> f64 {
        self.base + self.offset
    }

    pub fn point(&self) -> Point {
        cis(self.base) * cis(self.offset)
    }

    /// `da = i a dθ` for the contour integral.
    pub fn dz(&self) -> Point {
        self.point() * Point::new(0.0, self.weight)
    }
}

/// `n` tanh-sinh trapezoid nodes on `[start, end]` (midpoint-offset in `t`,
/// so no node sits on an endpoint).
pub fn tanh_sinh_arc(start: f64, end: f64, n: usize) -> Vec<ArcNode> {
    let n = n.max(2);
    let r = 0.5 * (end - start);
    let h = 2.0 * T_MAX / n as f64;
    let half_pi = 0.5 * core::f64::consts::PI;
    (0..n)
        .map(|k| {
            let t = -T_MAX + (k as f64 + 0.5) * h;
            let x = half_pi * math::sinh(t);
            let ch = math::cosh(x);
            let weight = r * half_pi * math::cosh(t) / (ch * ch) * h;
            if t < 0.0 {
                ArcNode {
                    base: start,
                    offset: 2.0 * r / (1.0 + math::exp(-2.0 * x)),
                    weight,
                }
            } else {
                ArcNode {
                    base: end,
                    offset: -2.0 * r / (1.0 + math::exp(2.0 * x)),
                    weight,
                }
            }
        })
        .collect()
}

/// Tanh-sinh nodes on `[start, end]`, with the arc first cut at every angle
/// of `splits` that falls strictly inside it. Each piece gets `n` nodes.
pub fn tanh_sinh_arc_split(start: f64, end: f64, splits: &[f64], n: usize) -> Vec<ArcNode> {
    let mut cuts: Vec<f64> = splits
        .iter()
        .filter_map(|&s| {
            let off = math::wrap_angle(s - start);
            let len = end - start;
            let margin = 1e-9 * len;
            (off > margin && off < len - margin).then_some(start + off)
        })
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity((cuts.len() + 1) * n);
    let mut a = start;
    for c in cuts.into_iter().chain(core::iter::once(end)) {
        out.extend(tanh_sinh_arc(a, c, n));
        a = c;
    }
    out
}

/// The uniform `n`-point trapezoid rule on the whole circle, offset by half
/// a step.
pub fn circle_nodes(n: usize) -> Vec<ArcNode> {
    let h = TAU / n as f64;
    (0..n)
        .map(|k| ArcNode {
            base: (k as f64 + 0.5) * h,
            offset: 0.0,
            weight: h,
        })
        .collect()
}

/// `(1/2πi) ∮_{|λ| = radius} F(λ)/(λ − t) dλ` by the uniform trapezoid rule
/// on `n` nodes.
pub fn cauchy_circle<F>(radius: f64, t: Point, n: usize, mut f: F) -> Point
where
    F: FnMut(Point) -> Point,
{
    let mut acc = Point::new(0.0, 0.0);
    for node in circle_nodes(n) {
        let lambda = node.point() * radius;
        acc += f(lambda) * lambda / (lambda - t);
    }
    acc / n as f64
}
