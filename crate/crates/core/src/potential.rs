//! The relative extremal function of a boundary set on the unit disc.
//!
//! For `B ⊂ ∂E`, `ω(z, B, E)` is the Poisson integral of the indicator of
//! `∂E \ B`. Over one arc `[α, β]` the Poisson integral has the closed form
//!
//! ```text
//! ω_arc(z) = arg( (e^{iβ/2} − z e^{−iβ/2}) / (e^{iα/2} − z e^{−iα/2}) ) / π
//! ```
//!
//! (the angle the arc subtends at `z`, less half its length, over π) and the
//! holomorphic completion `g = ω + iω̂` normalized by `ω̂(0) = 0` has
//!
//! ```text
//! ω̂_arc(z) = ln( |e^{iα} − z| / |e^{iβ} − z| ) / π.
//! ```
//!
//! Summing over the arcs of the complement gives `ω` and `ω̂` with nothing
//! but rounding error.

use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::arcs::{Arc, UnitCircleSet};
use crate::math::{self, cis};
use crate::{Complex64, Error, Point, Result};

/// Points with `|z| >= 1 - GUARD` are rejected by the interior evaluators.
pub const GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct ComplementArc {
    /// `e^{iα/2}`, `e^{iβ/2}`.
    half_start: Point,
    half_end: Point,
    start: f64,
    end: f64,
}

impl ComplementArc {
    fn new(arc: &Arc) -> Self {
        ComplementArc {
            half_start: cis(0.5 * arc.start),
            half_end: cis(0.5 * arc.end),
            start: arc.start,
            end: arc.end,
        }
    }

    #[inline]
    fn omega(&self, z: Point) -> f64 {
        let num = self.half_end - z * self.half_end.conj();
        let den = self.half_start - z * self.half_start.conj();
        let q = num * den.conj();
        math::atan2(q.im, q.re) / core::f64::consts::PI
    }

    #[inline]
    fn conjugate(&self, z: Point) -> f64 {
        let a = (self.half_start * self.half_start - z).norm();
        let b = (self.half_end * self.half_end - z).norm();
        math::ln(a / b) / core::f64::consts::PI
    }

    /// Conjugate at the boundary point `e^{i(base + offset)}`. Distances to
    /// the endpoints are computed from the angular offset so that nodes
    /// clustered at an endpoint keep full relative precision.
    #[inline]
    fn conjugate_on_circle(&self, base: f64, offset: f64) -> f64 {
        let da = chord(base, offset, self.start);
        let db = chord(base, offset, self.end);
        math::ln(da / db) / core::f64::consts::PI
    }
}

/// `|e^{i(base+offset)} − e^{iφ}|`.
#[inline]
fn chord(base: f64, offset: f64, phi: f64) -> f64 {
    let d = math::wrap_signed(base - phi) + offset;
    2.0 * math::abs(math::sin(0.5 * d))
}

/// `ω(·, B, E)` and its conjugate for a fixed boundary set `B`, with the
/// complement arcs precomputed.
#[derive(Debug, Clone)]
pub struct DiscPotential {
    set: UnitCircleSet,
    complement: Vec<ComplementArc>,
    /// `B = ∅`: `ω ≡ 1`.
    empty: bool,
}

impl DiscPotential {
    pub fn new(set: &UnitCircleSet) -> Self {
        let comp = set.complement();
        let empty = set.is_empty();
        let complement = if empty || comp.is_empty() {
            Vec::new()
        } else {
            comp.arcs().iter().map(ComplementArc::new).collect()
        };
        DiscPotential {
            set: set.clone(),
            complement,
            empty,
        }
    }

    pub fn set(&self) -> &UnitCircleSet {
        &self.set
    }

    fn check_interior(z: Point) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::input("non-finite point"));
        }
        if z.norm() >= 1.0 - GUARD {
            return Err(Error::domain("point is not inside the unit disc"));
        }
        Ok(())
    }

    /// `ω(z, B, E)`; no domain check.
    #[inline]
    pub fn omega_unchecked(&self, z: Point) -> f64 {
        if self.empty {
            return 1.0;
        }
        let s: f64 = self.complement.iter().map(|a| a.omega(z)).sum();
        s.clamp(0.0, 1.0)
    }

    /// `ω̂(z, B, E)`; no domain check.
    #[inline]
    pub fn conjugate_unchecked(&self, z: Point) -> f64 {
        self.complement.iter().map(|a| a.conjugate(z)).sum()
    }

    pub fn omega(&self, z: Point) -> Result<f64> {
        Self::check_interior(z)?;
        Ok(self.omega_unchecked(z))
    }

    pub fn conjugate(&self, z: Point) -> Result<f64> {
        Self::check_interior(z)?;
        Ok(self.conjugate_unchecked(z))
    }

    /// `g(z) = ω(z) + iω̂(z)`, holomorphic in `E`.
    pub fn g(&self, z: Point) -> Result<Complex64> {
        Self::check_interior(z)?;
        Ok(self.g_unchecked(z))
    }

    #[inline]
    pub fn g_unchecked(&self, z: Point) -> Complex64 {
        Complex64::new(self.omega_unchecked(z), self.conjugate_unchecked(z))
    }

    /// Boundary value of `ω̂` at `e^{i(base+offset)}`, assumed to be a density
    /// point of `B`.
    #[inline]
    pub fn boundary_conjugate(&self, base: f64, offset: f64) -> f64 {
        self.complement
            .iter()
            .map(|a| a.conjugate_on_circle(base, offset))
            .sum()
    }

    /// Boundary value of `g` at a density point `a` of `B`. The real part
    /// is 0 there, since `ω` has angular limit 0 at density points.
    pub fn g_boundary(&self, a: Point) -> Result<Complex64> {
        if math::abs(a.norm() - 1.0) > 1e-9 {
            return Err(Error::domain("boundary point must lie on the unit circle"));
        }
        let theta = a.arg();
        if !self.set.density_points().contains(theta) {
            return Err(Error::domain("point is not a density point of the set"));
        }
        Ok(Complex64::new(0.0, self.boundary_conjugate(theta, 0.0)))
    }
}

/// `ω(z, B, E)` for `|z| < 1`.
pub fn omega_disc(z: Point, b: &UnitCircleSet) -> Result<f64> {
    DiscPotential::new(b).omega(z)
}

/// Harmonic conjugate of `ω(·, B, E)` vanishing at the origin.
pub fn omega_conjugate_disc(z: Point, b: &UnitCircleSet) -> Result<f64> {
    DiscPotential::new(b).conjugate(z)
}

/// Boundary value of `ω + iω̂` at a density point of `B`.
pub fn g_boundary(a: Point, b: &UnitCircleSet) -> Result<Complex64> {
    DiscPotential::new(b).g_boundary(a)
}

/// The Stolz angle `A_α(ζ) = {t ∈ E : |arg((ζ − t)/ζ)| < α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzRegion {
    vertex: Point,
    opening: f64,
}

impl StolzRegion {
    pub fn new(vertex: Point, opening: f64) -> Result<Self> {
        if math::abs(vertex.norm() - 1.0) > 1e-12 {
            return Err(Error::domain("Stolz vertex must be on the unit circle"));
        }
        if !(opening > 0.0 && opening < core::f64::consts::FRAC_PI_2) {
            return Err(Error::input("Stolz opening must lie in (0, π/2)"));
        }
        Ok(StolzRegion { vertex, opening })
    }

    pub fn vertex(&self) -> Point {
        self.vertex
    }

    pub fn opening(&self) -> f64 {
        self.opening
    }

    pub fn contains(&self, z: Point) -> bool {
        if z.norm() >= 1.0 {
            return false;
        }
        let q = (self.vertex - z) / self.vertex;
        if q.norm() == 0.0 {
            return false;
        }
        math::abs(math::atan2(q.im, q.re)) < self.opening
    }

    /// The point at distance `rho` from the vertex along the ray that makes
    /// angle `phi` with the radius (|phi| < opening).
    pub fn ray_point(&self, rho: f64, phi: f64) -> Point {
        self.vertex - self.vertex * cis(phi) * rho
    }
}

/// `stolz_contains` as a free function.
pub fn stolz_contains(region: &StolzRegion, z: Point) -> bool {
    region.contains(z)
}

/// Field values at one depth of an angular probe: along the radius and
/// along the two rays at `±α/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSample {
    pub depth: u32,
    pub radial: Complex64,
    pub rays: [Complex64; 2],
}

impl ProbeSample {
    pub fn values(&self) -> [Complex64; 3] {
        [self.radial, self.rays[0], self.rays[1]]
    }

    /// Largest distance of the three samples from `target`.
    pub fn deviation_from(&self, target: Complex64) -> f64 {
        self.values()
            .iter()
            .map(|v| (v - target).norm())
            .fold(0.0, f64::max)
    }

    /// Largest disagreement between a ray and the radius.
    pub fn spread(&self) -> f64 {
        self.rays
            .iter()
            .map(|v| (v - self.radial).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularProbe {
    /// Richardson extrapolation of the two deepest radial samples.
    pub limit: Complex64,
    /// `residuals[k]`: largest distance of the depth-`k` samples from `limit`.
    pub residuals: Vec<f64>,
    pub samples: Vec<ProbeSample>,
    /// False when the rays still disagree by more than the tolerance at the
    /// deepest level.
    pub stolz_converged: bool,
}

impl AngularProbe {
    /// Residuals measured against a known limit instead of the extrapolated
    /// one.
    pub fn residuals_against(&self, target: Complex64) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| s.deviation_from(target))
            .collect()
    }
}

/// Samples `field` at `z_k = ζ − 2^{−k}ζ e^{iφ}` for `φ ∈ {0, ±α/2}` and each
/// depth `k`, and estimates the angular limit at `ζ`.
pub fn angular_limit_probe<F>(
    mut field: F,
    zeta: Point,
    alpha: f64,
    depths: RangeInclusive<u32>,
    tol: f64,
) -> Result<AngularProbe>
where
    F: FnMut(Point) -> Result<Complex64>,
{
    let region = StolzRegion::new(zeta, alpha)?;
    let mut samples = Vec::new();
    for k in depths {
        let rho = math::exp(-(k as f64) * core::f64::consts::LN_2);
        let radial = field(region.ray_point(rho, 0.0))?;
        let up = field(region.ray_point(rho, 0.5 * alpha))?;
        let down = field(region.ray_point(rho, -0.5 * alpha))?;
        samples.push(ProbeSample {
            depth: k,
            radial,
            rays: [up, down],
        });
    }
    let limit = match samples.len() {
        0 => return Err(Error::input("empty depth range")),
        1 => samples[0].radial,
        n => samples[n - 1].radial * 2.0 - samples[n - 2].radial,
    };
    let residuals = samples.iter().map(|s| s.deviation_from(limit)).collect();
    let stolz_converged = samples.last().map(|s| s.spread() <= tol).unwrap_or(false);
    Ok(AngularProbe {
        limit,
        residuals,
        samples,
        stolz_converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    /// Composite trapezoid on `n` uniform nodes of the Poisson integral of
    /// `1_{∂E\B}`.
    fn trapezoid_omega(z: Point, b: &UnitCircleSet, n: usize) -> f64 {
        let h = crate::TAU / n as f64;
        let mut s = 0.0;
        for k in 0..n {
            let t = h * k as f64;
            if !b.contains(t) {
                let e = cis(t);
                s += (1.0 - z.norm_sqr()) / (e - z).norm_sqr();
            }
        }
        s * h / crate::TAU
    }

    /// Conjugate by truncated Fourier series of the boundary indicator:
    /// `u = Re F`, `F = c0 + 2 Σ c_k z^k`, `ω̂ = Im F`.
    fn fourier_conjugate(z: Point, b: &UnitCircleSet, modes: usize) -> f64 {
        let comp = b.complement();
        let mut f = Complex64::new(0.0, 0.0);
        let mut zk = Complex64::new(1.0, 0.0);
        for k in 1..=modes {
            zk *= z;
            let mut ck = Complex64::new(0.0, 0.0);
            for a in comp.arcs() {
                ck += (cis(-(k as f64) * a.start) - cis(-(k as f64) * a.end))
                    / Complex64::new(0.0, crate::TAU * k as f64);
            }
            f += ck * zk * 2.0;
            if zk.norm() < 1e-30 {
                break;
            }
        }
        f.im
    }

    #[test]
    fn center_of_half_circle() {
        let b = UnitCircleSet::arc(0.0, PI).unwrap();
        assert!((omega_disc(c(0.0, 0.0), &b).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn full_and_empty_sets() {
        let z = c(0.3, -0.4);
        assert_eq!(omega_disc(c(0.0, 0.0), &UnitCircleSet::full()).unwrap(), 0.0);
        assert_eq!(omega_disc(z, &UnitCircleSet::full()).unwrap(), 0.0);
        assert_eq!(omega_disc(z, &UnitCircleSet::empty()).unwrap(), 1.0);
        assert_eq!(omega_conjugate_disc(z, &UnitCircleSet::full()).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_matches_trapezoid() {
        let b = UnitCircleSet::arc(-FRAC_PI_2, FRAC_PI_2).unwrap();
        let z = c(0.5, 0.0);
        let exact = omega_disc(z, &b).unwrap();
        let quad = trapezoid_omega(z, &b, 1_000_000);
        assert!((exact - quad).abs() < 1e-8, "{exact} vs {quad}");
        // Both halves of the circle subtend the same angle pattern here:
        // frozen value from the trapezoid oracle.
        assert!((exact - 0.204_832_764_699_133_5).abs() < 1e-8);
    }

    #[test]
    fn outside_disc_is_domain_error() {
        let b = UnitCircleSet::arc(0.0, 1.0).unwrap();
        assert!(matches!(omega_disc(c(1.0, 0.0), &b), Err(Error::Domain(_))));
        assert!(matches!(omega_conjugate_disc(c(0.0, 1.2), &b), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugate_normalized_at_center() {
        for b in [
            UnitCircleSet::arc(0.0, 1.0).unwrap(),
            UnitCircleSet::from_intervals(&[(0.2, 1.0), (3.0, 5.5)]).unwrap(),
        ] {
            assert!(omega_conjugate_disc(c(0.0, 0.0), &b).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn conjugate_vanishes_on_real_axis_for_symmetric_set() {
        let b = UnitCircleSet::arc(-1.0, 1.0).unwrap();
        for x in [-0.9, -0.3, 0.2, 0.7] {
            assert!(omega_conjugate_disc(c(x, 0.0), &b).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn conjugate_matches_fourier_oracle() {
        let b = UnitCircleSet::arc(0.0, PI).unwrap();
        let z = c(0.3, 0.2);
        let exact = omega_conjugate_disc(z, &b).unwrap();
        let oracle = fourier_conjugate(z, &b, 1 << 16);
        assert!((exact - oracle).abs() < 1e-12, "{exact} vs {oracle}");
        assert!((exact - 0.188_280_246_898_636_4).abs() < 1e-12, "{exact}");
    }

    #[test]
    fn g_boundary_cases() {
        let b = UnitCircleSet::arc(0.0, PI).unwrap();
        let g = g_boundary(cis(FRAC_PI_2), &b).unwrap();
        assert_eq!(g.re, 0.0);
        assert!(g.im.abs() < 1e-15, "symmetric point");
        let g = g_boundary(cis(1.234), &UnitCircleSet::full()).unwrap();
        assert_eq!(g, Complex64::new(0.0, 0.0));
        assert!(g_boundary(cis(0.0), &b).is_err());
        assert!(g_boundary(cis(4.0), &b).is_err());
        assert!(g_boundary(c(0.5, 0.0), &b).is_err());
    }

    #[test]
    fn g_boundary_matches_radial_richardson_limit() {
        let b = UnitCircleSet::arc(0.0, PI).unwrap();
        let a = cis(FRAC_PI_4);
        // Radial oracle: ω̂((1 − 2^{-k}) a), k = 4..20, repeated Richardson.
        let mut table: Vec<f64> = (4..=20)
            .map(|k| {
                let r = 1.0 - (0.5f64).powi(k);
                omega_conjugate_disc(a * r, &b).unwrap()
            })
            .collect();
        let mut factor = 2.0;
        while table.len() > 1 {
            table = table
                .windows(2)
                .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
                .collect();
            factor *= 2.0;
            if table.len() <= 12 {
                break;
            }
        }
        let oracle = *table.last().unwrap();
        let g = g_boundary(a, &b).unwrap();
        assert_eq!(g.re, 0.0);
        assert!((g.im - oracle).abs() < 1e-9, "{} vs {oracle}", g.im);
        // ln(|1 − a| / |−1 − a|)/π with a = e^{iπ/4} and B^c = [π, 2π).
        let closed = (2.0 * (3.0 * PI / 8.0).sin()).ln() - (2.0 * (PI / 8.0).sin()).ln();
        assert!((g.im - closed / PI).abs() < 1e-14);
    }

    #[test]
    fn stolz_membership() {
        let zeta = cis(0.7);
        let r = StolzRegion::new(zeta, 0.3).unwrap();
        for s in [0.01, 0.5, 0.99] {
            assert!(r.contains(zeta * (1.0 - s)));
        }
        assert!(r.contains(c(0.0, 0.0)));
        let r1 = StolzRegion::new(c(1.0, 0.0), FRAC_PI_4).unwrap();
        assert!(!r1.contains(c(1.0, 0.0) - c(0.1, 0.2)));
        assert!(StolzRegion::new(c(0.5, 0.0), 0.3).is_err());
        assert!(StolzRegion::new(c(1.0, 0.0), 1.6).is_err());
    }

    #[test]
    fn probe_constant_field() {
        let p = angular_limit_probe(|_| Ok(Complex64::new(2.5, -1.0)), cis(1.0), 0.5, 4..=10, 1e-9)
            .unwrap();
        assert_eq!(p.limit, Complex64::new(2.5, -1.0));
        assert!(p.residuals.iter().all(|&r| r == 0.0));
        assert!(p.stolz_converged);
    }

    #[test]
    fn probe_omega_at_density_point() {
        let b = UnitCircleSet::arc(0.0, PI).unwrap();
        let pot = DiscPotential::new(&b);
        let p = angular_limit_probe(
            |z| pot.omega(z).map(|v| Complex64::new(v, 0.0)),
            cis(FRAC_PI_2),
            FRAC_PI_4,
            4..=12,
            1e-2,
        )
        .unwrap();
        assert!(p.limit.norm() < 1e-6, "{}", p.limit);
        let r = p.residuals_against(Complex64::new(0.0, 0.0));
        assert!(r.windows(2).all(|w| w[1] < w[0]));
        assert!(*r.last().unwrap() < 1e-3);
        assert!(p.stolz_converged);
    }

    fn arb_set() -> impl Strategy<Value = UnitCircleSet> {
        proptest::collection::vec((0.0..crate::TAU, 0.0..2.5f64), 0..5).prop_map(|v| {
            let iv: Vec<(f64, f64)> = v.into_iter().map(|(s, l)| (s, s + l)).collect();
            UnitCircleSet::from_intervals(&iv).unwrap()
        })
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (0.0..0.95f64, 0.0..crate::TAU).prop_map(|(r, t)| cis(t) * r)
    }

    proptest! {
        #[test]
        fn center_formula(b in arb_set()) {
            let w = omega_disc(c(0.0, 0.0), &b).unwrap();
            prop_assert!((w - (1.0 - b.measure() / crate::TAU)).abs() < 1e-12);
        }

        #[test]
        fn partition(b in arb_set(), z in arb_point()) {
            let s = omega_disc(z, &b).unwrap() + omega_disc(z, &b.complement()).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn monotone_in_set(b in arb_set(), extra in arb_set(), z in arb_point()) {
            let mut iv = b.intervals();
            iv.extend(extra.intervals());
            let bigger = UnitCircleSet::from_intervals(&iv).unwrap();
            prop_assert!(omega_disc(z, &bigger).unwrap() <= omega_disc(z, &b).unwrap() + 1e-12);
        }

        #[test]
        fn rotation_equivariance(b in arb_set(), z in arb_point(), phi in -7.0..7.0f64) {
            let lhs = omega_disc(z * cis(phi), &b.rotate(phi)).unwrap();
            prop_assert!((lhs - omega_disc(z, &b).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn values_in_unit_interval(b in arb_set(), z in arb_point()) {
            let w = omega_disc(z, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&w));
        }
    }

    /// Max of the scaled 5-point Laplacian `|Δ_h ω|` over a lattice in
    /// `|z| <= 0.8`.
    fn max_discrete_laplacian(pot: &DiscPotential, h: f64) -> f64 {
        let n = (0.8 / h) as i64;
        let mut m: f64 = 0.0;
        let stride = (n / 40).max(1);
        for i in (-n..=n).step_by(stride as usize) {
            for j in (-n..=n).step_by(stride as usize) {
                let z = c(i as f64 * h, j as f64 * h);
                if z.norm() > 0.8 {
                    continue;
                }
                let f = |p: Point| pot.omega(p).unwrap();
                let lap = f(z + h) + f(z - h) + f(z + c(0.0, h)) + f(z - c(0.0, h)) - 4.0 * f(z);
                m = m.max((lap / (h * h)).abs());
            }
        }
        m
    }

    #[test]
    fn harmonic_to_second_order() {
        let b = UnitCircleSet::from_intervals(&[(0.3, 2.0), (3.5, 4.1)]).unwrap();
        let pot = DiscPotential::new(&b);
        // The 5-point stencil of a harmonic function is O(h²); the lattice is
        // shared between the two spacings so the ratio isolates the order.
        let e1 = max_discrete_laplacian(&pot, 1.0 / 64.0);
        let e2 = max_discrete_laplacian(&pot, 1.0 / 128.0);
        let ratio = e1 / e2;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio} ({e1}, {e2})");
    }

    #[test]
    fn cauchy_riemann() {
        let b = UnitCircleSet::from_intervals(&[(0.3, 2.0), (3.5, 4.1)]).unwrap();
        let pot = DiscPotential::new(&b);
        let resid = |h: f64| {
            let mut m: f64 = 0.0;
            for k in 0..200 {
                let z = cis(k as f64 * 0.731) * (0.8 * ((k * 37 % 200) as f64 / 200.0));
                let w = |p: Point| pot.omega(p).unwrap();
                let v = |p: Point| pot.conjugate(p).unwrap();
                let wx = (w(z + h) - w(z - h)) / (2.0 * h);
                let wy = (w(z + c(0.0, h)) - w(z - c(0.0, h))) / (2.0 * h);
                let vx = (v(z + h) - v(z - h)) / (2.0 * h);
                let vy = (v(z + c(0.0, h)) - v(z - c(0.0, h))) / (2.0 * h);
                m = m.max((wx - vy).abs()).max((wy + vx).abs());
            }
            m
        };
        let r1 = resid(1e-2);
        let r2 = resid(5e-3);
        assert!(r1 < 1e-2, "{r1}");
        assert!((3.0..=5.0).contains(&(r1 / r2)), "ratio {}", r1 / r2);
    }
}
