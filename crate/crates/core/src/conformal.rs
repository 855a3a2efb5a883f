//! Riemann maps of simply connected grid components onto the unit disc
//! (geodesic zipper), their limits at end-points, and the transfer of
//! boundary sets through them.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8, TAU};
use core::ops::RangeInclusive;

use crate::arcs::UnitCircleSet;
use crate::grid::{solve_extremal_with, BoundaryLoop, DiscShape, GridDomain, SolveOptions};
use crate::math;
use crate::potential::{omega_disc, StolzRegion};
use crate::{Complex64, Error, Point, Result};

/// Boundary vertices used by [`riemann_map`].
pub const MAP_VERTICES: usize = 2048;
/// `|Φ|` tolerance on the boundary polyline.
pub const TOL_BOUNDARY: f64 = 1e-2;
/// Round-trip tolerance of `Φ ∘ Φ⁻¹` on `|w| ≤ 0.95`.
pub const TOL_ROUND_TRIP: f64 = 1e-3;

/// Principal square root moved into the closed upper half plane; real
/// results take the sign of `hint`.
fn sqrt_upper(z: Complex64, hint: f64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && hint < 0.0) {
        -r
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy)]
struct Geodesic {
    a: f64,
    inv_b: f64,
}

impl Geodesic {
    /// Sends the arc from 0 to `c` onto `[0, i/b]` and unzips it.
    fn through(c: Complex64) -> Self {
        let n = c.norm_sqr();
        Geodesic {
            a: c.re / n,
            inv_b: n / c.im,
        }
    }

    fn forward(&self, w: Complex64) -> (Complex64, Complex64) {
        let den = Complex64::new(1.0, 0.0) - w * self.a;
        let t = w / den;
        // Zipped boundary lies on the negative axis, so 0 goes left.
        let hint = if t.re == 0.0 { -1.0 } else { t.re };
        let u = sqrt_upper(t * t + self.inv_b * self.inv_b, hint);
        let du = if u.norm() > 0.0 { t / u / (den * den) } else { Complex64::new(f64::INFINITY, 0.0) };
        (u, du)
    }

    fn forward_real_infinity(&self) -> f64 {
        if self.a == 0.0 {
            return f64::INFINITY;
        }
        let t = -1.0 / self.a;
        math::sqrt(t * t + self.inv_b * self.inv_b).copysign(t)
    }

    fn inverse(&self, u: Complex64) -> Complex64 {
        let t = sqrt_upper(u * u - self.inv_b * self.inv_b, u.re);
        t / (Complex64::new(1.0, 0.0) + t * self.a)
    }
}

/// A conformal map `Φ` of the interior of a closed polyline onto the unit
/// disc with `Φ(center) = 0` and `Φ′(center) > 0`.
#[derive(Debug, Clone)]
pub struct DiscreteConformalMap {
    boundary: BoundaryLoop,
    center: Point,
    v0: Point,
    v1: Point,
    steps: Vec<Geodesic>,
    x0: f64,
    sign: f64,
    p: Complex64,
    rot: Complex64,
    boundary_image: Vec<Point>,
}

impl DiscreteConformalMap {
    /// Zipper map of the polygon `vertices` (counter-clockwise, not
    /// closed).
    pub fn from_polyline(vertices: Vec<Point>, center: Point) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::input("a boundary polyline needs at least 3 vertices"));
        }
        if vertices.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::input("non-finite boundary vertex"));
        }
        let mut boundary = BoundaryLoop { vertices };
        if boundary.signed_area() < 0.0 {
            boundary.vertices.reverse();
        }
        if !boundary.contains(center) {
            return Err(Error::domain("center is not inside the boundary"));
        }
        let v = &boundary.vertices;
        let (v0, v1) = (v[0], v[1]);

        let first = |z: Point| Complex64::new(0.0, 1.0) * ((z - v1) / (z - v0)).sqrt();
        // Images of all vertices; vertex k ends up real once it has been
        // zipped.
        let mut img: Vec<Complex64> = v.iter().map(|&z| first(z)).collect();
        img[0] = Complex64::new(f64::INFINITY, 0.0);
        img[1] = Complex64::new(0.0, 0.0);
        let mut x0 = f64::INFINITY;
        let mut steps = Vec::with_capacity(n - 2);
        for k in 2..n {
            let c = img[k];
            if c.im <= 1e-12 * c.norm().max(1.0) {
                continue;
            }
            let g = Geodesic::through(c);
            x0 = if x0.is_finite() {
                g.forward(Complex64::new(x0, 0.0)).0.re
            } else {
                g.forward_real_infinity()
            };
            for z in img[1..].iter_mut() {
                *z = g.forward(*z).0;
            }
            img[k] = Complex64::new(0.0, 0.0);
            steps.push(g);
        }

        let mut map = DiscreteConformalMap {
            boundary,
            center,
            v0,
            v1,
            steps,
            x0,
            sign: 1.0,
            p: Complex64::new(0.0, 1.0),
            rot: Complex64::new(1.0, 0.0),
            boundary_image: Vec::new(),
        };
        let (y, _) = map.close(map.zip(center).0);
        map.sign = if (y * y).im >= 0.0 { 1.0 } else { -1.0 };
        let (p, dp) = map.half_plane(center);
        if !(p.im > 0.0) || !dp.norm().is_finite() {
            return Err(Error::domain("zipper failed to place the center in the half plane"));
        }
        map.p = p;
        let d = dp / Complex64::new(0.0, 2.0 * p.im);
        map.rot = math::cis(-math::atan2(d.im, d.re));

        map.boundary_image = img
            .iter()
            .map(|&z| {
                if !z.re.is_finite() {
                    return map.rot;
                }
                let (y, _) = map.close(Complex64::new(z.re, 0.0));
                if !y.re.is_finite() {
                    return map.rot;
                }
                let w = map.to_disc(y * y * map.sign);
                w / w.norm()
            })
            .collect();
        Ok(map)
    }

    /// First map and geodesic steps, with derivative.
    fn zip(&self, z: Point) -> (Complex64, Complex64) {
        let r = (z - self.v1) / (z - self.v0);
        let mut w = Complex64::new(0.0, 1.0) * r.sqrt();
        let dr = (self.v1 - self.v0) / ((z - self.v0) * (z - self.v0));
        let mut dw = -dr / (w * 2.0);
        for g in &self.steps {
            let (u, du) = g.forward(w);
            w = u;
            dw *= du;
        }
        (w, dw)
    }

    /// Sends `x0` to infinity: the last edge becomes the imaginary axis.
    fn close(&self, w: Complex64) -> (Complex64, Complex64) {
        let den = Complex64::new(1.0, 0.0) - w / self.x0;
        (w / den, Complex64::new(1.0, 0.0) / (den * den))
    }

    /// `Ψ` onto the upper half plane, with derivative.
    fn half_plane(&self, z: Point) -> (Complex64, Complex64) {
        let (w, dw) = self.zip(z);
        let (y, dy) = self.close(w);
        (y * y * self.sign, y * dy * dw * (2.0 * self.sign))
    }

    fn to_disc(&self, psi: Complex64) -> Complex64 {
        self.rot * (psi - self.p) / (psi - self.p.conj())
    }

    pub fn boundary(&self) -> &BoundaryLoop {
        &self.boundary
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// Image of each boundary vertex on the unit circle.
    pub fn boundary_image(&self) -> &[Point] {
        &self.boundary_image
    }

    /// `Φ(z)` without checking that `z` is inside.
    pub fn eval_unchecked(&self, z: Point) -> Point {
        self.to_disc(self.half_plane(z).0)
    }

    /// `Φ(z)` and `Φ′(z)`.
    pub fn eval_with_derivative(&self, z: Point) -> Result<(Point, Complex64)> {
        self.check_inside(z)?;
        let (psi, dpsi) = self.half_plane(z);
        let q = psi - self.p.conj();
        let d = self.rot * (self.p - self.p.conj()) / (q * q);
        Ok((self.to_disc(psi), d * dpsi))
    }

    pub fn eval(&self, z: Point) -> Result<Point> {
        self.check_inside(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// `Φ⁻¹(w)` for `|w| < 1`.
    pub fn inverse(&self, w: Point) -> Result<Point> {
        if !(w.norm() < 1.0) {
            return Err(Error::domain("Φ⁻¹ is defined on the open unit disc"));
        }
        let zeta = w / self.rot;
        let psi = (self.p - zeta * self.p.conj()) / (Complex64::new(1.0, 0.0) - zeta);
        let y = sqrt_upper(psi / self.sign, self.sign);
        let mut u = y / (Complex64::new(1.0, 0.0) + y / self.x0);
        for g in self.steps.iter().rev() {
            u = g.inverse(u);
        }
        let m = -(u * u);
        Ok((self.v1 - m * self.v0) / (Complex64::new(1.0, 0.0) - m))
    }

    fn check_inside(&self, z: Point) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::input("non-finite point"));
        }
        if !self.boundary.contains(z) {
            return Err(Error::domain("point is outside the mapped domain"));
        }
        Ok(())
    }
}

/// The Riemann map of a simply connected component, built on
/// [`MAP_VERTICES`] arclength-equispaced points of its traced boundary.
pub fn riemann_map(component: &GridDomain, center: Point) -> Result<DiscreteConformalMap> {
    let outer = component.outer_boundary()?;
    if !outer.contains(center) {
        return Err(Error::domain("center is outside the component"));
    }
    DiscreteConformalMap::from_polyline(outer.resample(MAP_VERTICES).vertices, center)
}

/// Inward direction used for approach regions at `zeta`: the radius when
/// `zeta` is on the unit circle, otherwise the polyline's inner normal at
/// the closest vertex.
fn inward(boundary: &BoundaryLoop, zeta: Point) -> Point {
    if math::abs(zeta.norm() - 1.0) <= 1e-9 {
        return -zeta / zeta.norm();
    }
    let v = &boundary.vertices;
    let n = v.len();
    let k = (0..n)
        .min_by(|&i, &j| (v[i] - zeta).norm().total_cmp(&(v[j] - zeta).norm()))
        .unwrap_or(0);
    let t = v[(k + 1) % n] - v[(k + n - 1) % n];
    let normal = Point::new(-t.im, t.re);
    normal / normal.norm()
}

/// Depths `2^{−k}` sampled by [`endpoint_limit`].
pub const LIMIT_DEPTHS: RangeInclusive<u32> = 5..=7;

/// `Φ(ζ)`: the limit of `Φ` along the approach region of opening `alpha`
/// at `zeta`, extrapolated from the radial samples and projected onto the
/// circle.
pub fn endpoint_limit(m: &DiscreteConformalMap, zeta: Point, alpha: f64) -> Result<Point> {
    if !(alpha > 0.0 && alpha < core::f64::consts::FRAC_PI_2) {
        return Err(Error::input("approach opening must lie in (0, π/2)"));
    }
    let dir = inward(m.boundary(), zeta);
    let mut radial = Vec::new();
    for k in LIMIT_DEPTHS {
        let rho = math::exp(-(k as f64) * core::f64::consts::LN_2);
        for phi in [0.5 * alpha, -0.5 * alpha, 0.0] {
            let z = zeta + dir * math::cis(phi) * rho;
            if !m.boundary().contains(z) {
                return Err(Error::NotEndPoint(alloc::format!(
                    "approach ray at {phi:.3} leaves the domain at depth {k}"
                )));
            }
        }
        radial.push(m.eval_unchecked(zeta + dir * rho));
    }
    // Two Richardson passes over ρ, ρ/2, ρ/4.
    let r1 = radial[1] * 2.0 - radial[0];
    let r2 = radial[2] * 2.0 - radial[1];
    let limit = (r2 * 4.0 - r1) / 3.0;
    if math::abs(limit.norm() - 1.0) > TOL_BOUNDARY {
        return Err(Error::Domain(alloc::format!(
            "boundary limit has modulus {:.4}",
            limit.norm()
        )));
    }
    Ok(limit / limit.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndPointOptions {
    /// Equispaced angles tested on the circle.
    pub samples: usize,
    pub openings: Vec<f64>,
    pub depths: RangeInclusive<u32>,
}

impl Default for EndPointOptions {
    fn default() -> Self {
        EndPointOptions {
            samples: 4096,
            openings: alloc::vec![FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8],
            depths: 4..=12,
        }
    }
}

fn in_loops(loops: &[BoundaryLoop], p: Point) -> bool {
    loops.iter().filter(|l| l.contains(p)).count() % 2 == 1
}

/// Sampled density points of `b` whose approach rays stay in `omega`.
pub fn end_points(omega: &GridDomain, b: &UnitCircleSet) -> Vec<Point> {
    end_points_with(omega, b, &EndPointOptions::default())
}

pub fn end_points_with(omega: &GridDomain, b: &UnitCircleSet, opts: &EndPointOptions) -> Vec<Point> {
    let loops = omega.boundary_loops();
    if loops.is_empty() || opts.samples == 0 {
        return Vec::new();
    }
    let dense = b.density_points();
    let n = opts.samples;
    let hits = crate::par::map_range(n, |k| {
        let theta = TAU * (k as f64 + 0.5) / n as f64;
        if !dense.contains(theta) || dense.distance_to_endpoints(theta) < 1e-9 {
            return None;
        }
        let zeta = math::cis(theta);
        for &alpha in &opts.openings {
            let region = StolzRegion::new(zeta, alpha).ok()?;
            for k in opts.depths.clone() {
                let rho = math::exp(-(k as f64) * core::f64::consts::LN_2);
                for phi in [0.0, 0.5 * alpha, -0.5 * alpha] {
                    if !in_loops(&loops, region.ray_point(rho, phi)) {
                        return None;
                    }
                }
            }
        }
        Some(zeta)
    });
    hits.into_iter().flatten().collect()
}

/// Largest gap between consecutive images still bridged by the hull.
pub const HULL_GAP: f64 = TAU / 512.0;

/// Arcs covering sorted runs of `points` on the circle whose consecutive
/// gaps are below `gap`, padded at both ends by half the end spacing.
pub fn arc_hull(points: &[Point], gap: f64) -> Result<UnitCircleSet> {
    let mut t: Vec<f64> = points.iter().map(|p| math::wrap_angle(math::atan2(p.im, p.re))).collect();
    if t.len() < 2 {
        return Ok(UnitCircleSet::empty());
    }
    t.sort_by(f64::total_cmp);
    let n = t.len();
    let gaps: Vec<f64> = (0..n)
        .map(|k| if k + 1 < n { t[k + 1] - t[k] } else { t[0] + TAU - t[n - 1] })
        .collect();
    let Some(start) = (0..n).find(|&k| gaps[k] >= gap) else {
        return Ok(UnitCircleSet::full());
    };
    // Runs begin after each wide gap; each sample stands for the cell
    // around it, so run ends reach out by half the neighbouring gap.
    let mut arcs = Vec::new();
    let mut k = (start + 1) % n;
    let (mut run_start, mut first_gap, mut length) = (t[k], 0.0, 0.0);
    for _ in 0..n {
        if gaps[k] >= gap {
            if length > 0.0 {
                let last_gap = gaps[(k + n - 1) % n];
                arcs.push((run_start - 0.5 * first_gap, run_start + length + 0.5 * last_gap));
            }
            k = (k + 1) % n;
            run_start = t[k];
            length = 0.0;
        } else {
            if length == 0.0 {
                first_gap = gaps[k];
            }
            length += gaps[k];
            k = (k + 1) % n;
        }
    }
    UnitCircleSet::from_intervals(&arcs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferOptions {
    /// Grid spacing of the extremal-function solve.
    pub h: f64,
    pub end_points: EndPointOptions,
    /// Opening of the approach region for [`endpoint_limit`].
    pub alpha: f64,
    pub solve: SolveOptions,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions {
            h: 1.0 / 128.0,
            end_points: EndPointOptions::default(),
            alpha: FRAC_PI_4,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransferReport {
    /// `max |(1−δ)ω(Φ(z), Φ(Δ), E) − ω(z, B, E)|` with the right side from
    /// the grid solve.
    pub max_deviation: f64,
    /// The same with the right side in closed form.
    pub max_deviation_exact: f64,
    /// Largest grid error of `ω(z, B, E)` at the samples.
    pub grid_error: f64,
    pub end_points: usize,
    /// `Φ(Δ)`.
    pub image: UnitCircleSet,
    pub map: DiscreteConformalMap,
}

/// Maps the component of `{ω(·, B, E) < 1 − δ}` holding the samples onto
/// the disc and compares both sides of the transfer identity there.
pub fn verify_transfer_identity_with(
    b: &UnitCircleSet,
    delta: f64,
    samples: &[Point],
    opts: &TransferOptions,
) -> Result<TransferReport> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::input("δ must lie in [0, 1)"));
    }
    let Some(&first) = samples.first() else {
        return Err(Error::input("no samples"));
    };
    let disc = GridDomain::from_shape(&DiscShape::unit(b.clone()), opts.h)?;
    let field = solve_extremal_with(&disc, &opts.solve)?;
    let level = if delta == 0.0 { disc.clone() } else { crate::grid::level_set(&field, delta)? };
    let omega = level.component_containing(first)?;

    let depth = omega.interior_depth();
    let (nx, _) = omega.dims();
    let deepest = (0..depth.len())
        .filter(|&k| depth[k] != u32::MAX)
        .max_by_key(|&k| depth[k])
        .ok_or_else(|| Error::domain("empty component"))?;
    let map = riemann_map(&omega, omega.point(deepest % nx, deepest / nx))?;

    let ends = end_points_with(&omega, b, &opts.end_points);
    let images: Vec<Point> = crate::par::map_range(ends.len(), |k| endpoint_limit(&map, ends[k], opts.alpha))
        .into_iter()
        .collect::<Result<_>>()?;
    let image = arc_hull(&images, HULL_GAP)?;

    let (mut dev, mut dev_exact, mut grid_error) = (0.0f64, 0.0f64, 0.0f64);
    for &z in samples {
        let w = map.eval(z)?;
        let left = (1.0 - delta) * omega_disc(w, &image)?;
        let exact = omega_disc(z, b)?;
        let grid = field
            .sample(z)
            .ok_or_else(|| Error::domain("sample outside the discretized disc"))?;
        dev = dev.max(math::abs(left - grid));
        dev_exact = dev_exact.max(math::abs(left - exact));
        grid_error = grid_error.max(math::abs(grid - exact));
    }
    Ok(TransferReport {
        max_deviation: dev,
        max_deviation_exact: dev_exact,
        grid_error,
        end_points: ends.len(),
        image,
        map,
    })
}

pub fn verify_transfer_identity(b: &UnitCircleSet, delta: f64, samples: &[Point]) -> Result<f64> {
    Ok(verify_transfer_identity_with(b, delta, samples, &TransferOptions::default())?.max_deviation)
}
