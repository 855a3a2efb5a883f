//! Two-fold crosses `X(A, B; D, G) = (A × (G ∪ B)) ∪ ((D ∪ A) × B)` and
//! their envelopes `Ŵ = {(z, w) ∈ D × G : ω(z, A, D) + ω(w, B, G) < 1}`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::arcs::UnitCircleSet;
use crate::grid::{ScalarField, Shape};
use crate::math;
use crate::potential::DiscPotential;
use crate::{Error, Point, Result};

/// One factor `(D, A)` of a cross together with its extremal function.
pub trait Factor: Send + Sync {
    /// `z ∈ D` (open).
    fn in_domain(&self, z: Point) -> bool;
    /// `z ∈ A`.
    fn in_target(&self, z: Point) -> bool;
    /// `ω(z, A, D)` for `z ∈ D`.
    fn omega(&self, z: Point) -> Result<f64>;
    /// Box containing `D`.
    fn bbox(&self) -> (Point, Point);
}

/// The unit disc with a boundary arc set. The set is replaced by its
/// density points on construction.
#[derive(Debug, Clone)]
pub struct DiscFactor {
    potential: DiscPotential,
}

impl DiscFactor {
    pub fn new(target: &UnitCircleSet) -> Self {
        DiscFactor {
            potential: DiscPotential::new(&target.density_points()),
        }
    }

    pub fn potential(&self) -> &DiscPotential {
        &self.potential
    }
}

impl Factor for DiscFactor {
    fn in_domain(&self, z: Point) -> bool {
        z.norm() < 1.0
    }

    fn in_target(&self, z: Point) -> bool {
        math::abs(z.norm() - 1.0) <= 1e-12 && self.potential.set().contains_point(z)
    }

    fn omega(&self, z: Point) -> Result<f64> {
        self.potential.omega(z)
    }

    fn bbox(&self) -> (Point, Point) {
        (Point::new(-1.0, -1.0), Point::new(1.0, 1.0))
    }
}

/// A planar region with a compact target, evaluated from a solved grid
/// field.
pub struct GridFactor<S> {
    shape: S,
    field: ScalarField,
}

impl<S: Shape> GridFactor<S> {
    pub fn new(shape: S, field: ScalarField) -> Self {
        GridFactor { shape, field }
    }
}

impl<S: Shape + Send> Factor for GridFactor<S> {
    fn in_domain(&self, z: Point) -> bool {
        self.shape.in_domain(z)
    }

    fn in_target(&self, z: Point) -> bool {
        self.shape.in_target(z)
    }

    fn omega(&self, z: Point) -> Result<f64> {
        if !self.shape.in_domain(z) {
            return Err(Error::domain("point outside the factor domain"));
        }
        if self.shape.in_target(z) {
            return Ok(0.0);
        }
        self.field
            .sample(z)
            .ok_or_else(|| Error::domain("point outside the discretized domain"))
    }

    fn bbox(&self) -> (Point, Point) {
        self.shape.bbox()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossPart {
    /// `A × (G ∪ B)` only.
    First,
    /// `(D ∪ A) × B` only.
    Second,
    /// `A × B`.
    Both,
    None,
}

pub struct Cross2 {
    first: Box<dyn Factor>,
    second: Box<dyn Factor>,
}

impl Cross2 {
    pub fn new(first: Box<dyn Factor>, second: Box<dyn Factor>) -> Self {
        Cross2 { first, second }
    }

    /// The cross over `E × E` with boundary sets `A` and `B`.
    pub fn discs(a: &UnitCircleSet, b: &UnitCircleSet) -> Self {
        Self::new(Box::new(DiscFactor::new(a)), Box::new(DiscFactor::new(b)))
    }

    pub fn first(&self) -> &dyn Factor {
        self.first.as_ref()
    }

    pub fn second(&self) -> &dyn Factor {
        self.second.as_ref()
    }

    /// `ω(z, w) = ω(z, A, D) + ω(w, B, G)`.
    pub fn omega(&self, z: Point, w: Point) -> Result<f64> {
        Ok(self.first.omega(z)? + self.second.omega(w)?)
    }

    pub fn swapped(self) -> Self {
        Cross2 {
            first: self.second,
            second: self.first,
        }
    }
}

pub fn cross_part(c: &Cross2, z: Point, w: Point) -> CrossPart {
    let (f, s) = (c.first(), c.second());
    let za = f.in_target(z);
    let wb = s.in_target(w);
    let first = za && (s.in_domain(w) || wb);
    let second = (f.in_domain(z) || za) && wb;
    match (first, second) {
        (true, true) => CrossPart::Both,
        (true, false) => CrossPart::First,
        (false, true) => CrossPart::Second,
        (false, false) => CrossPart::None,
    }
}

/// `(z, w) ∈ Ŵ`, decided by exact comparison of the computed sum with 1.
pub fn envelope_contains(c: &Cross2, z: Point, w: Point) -> Result<bool> {
    if !c.first().in_domain(z) {
        return Err(Error::domain("z is not in D"));
    }
    if !c.second().in_domain(w) {
        return Err(Error::domain("w is not in G"));
    }
    Ok(c.omega(z, w)? < 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixed {
    Z(Point),
    W(Point),
}

/// Envelope membership over an `n × n` lattice of cell centres covering the
/// free factor's bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSlice {
    pub n: usize,
    pub lower: Point,
    pub upper: Point,
    /// Row-major, row 0 at the bottom.
    pub mask: Vec<bool>,
    /// `(point, ω_total)`; `ω_total` is NaN outside the free domain.
    pub rows: Vec<(Point, f64)>,
}

impl EnvelopeSlice {
    /// Area of the member cells.
    pub fn area(&self) -> f64 {
        let d = self.upper - self.lower;
        let cell = d.re * d.im / (self.n * self.n) as f64;
        self.mask.iter().filter(|&&m| m).count() as f64 * cell
    }
}

pub fn envelope_slice(c: &Cross2, fixed: Fixed, n: usize) -> Result<EnvelopeSlice> {
    if n == 0 {
        return Err(Error::input("slice resolution must be positive"));
    }
    let (base, free): (f64, &dyn Factor) = match fixed {
        Fixed::Z(z) => {
            if !c.first().in_domain(z) {
                return Err(Error::domain("fixed z is not in D"));
            }
            (c.first().omega(z)?, c.second())
        }
        Fixed::W(w) => {
            if !c.second().in_domain(w) {
                return Err(Error::domain("fixed w is not in G"));
            }
            (c.second().omega(w)?, c.first())
        }
    };
    let (lo, hi) = free.bbox();
    let d = hi - lo;
    let rows = crate::par::map_range(n * n, |k| {
        let (i, j) = (k % n, k / n);
        let p = lo + Point::new(d.re * (i as f64 + 0.5) / n as f64, d.im * (j as f64 + 0.5) / n as f64);
        let total = if free.in_domain(p) {
            free.omega(p).map(|v| v + base).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        (p, total)
    });
    let mask = rows.iter().map(|&(_, t)| t < 1.0).collect();
    Ok(EnvelopeSlice {
        n,
        lower: lo,
        upper: hi,
        mask,
        rows,
    })
}

/// `m^{1−ω} M^{ω}`.
pub fn two_constant_bound(omega_total: f64, m: f64, big_m: f64) -> Result<f64> {
    if !(m > 0.0 && big_m > 0.0) {
        return Err(Error::domain("two-constant bound needs positive m and M"));
    }
    if !omega_total.is_finite() {
        return Err(Error::input("ω must be finite"));
    }
    Ok(if m == big_m || omega_total == 1.0 {
        big_m
    } else if omega_total == 0.0 {
        m
    } else {
        math::exp((1.0 - omega_total) * math::ln(m) + omega_total * math::ln(big_m))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn arc(a: f64, b: f64) -> UnitCircleSet {
        UnitCircleSet::arc(a, b).unwrap()
    }

    #[test]
    fn parts_of_the_cross() {
        let c = Cross2::discs(&arc(0.0, PI), &arc(0.0, PI));
        let a = math::cis(1.0);
        let b = math::cis(2.0);
        assert_eq!(cross_part(&c, a, Point::new(0.1, 0.0)), CrossPart::First);
        assert_eq!(cross_part(&c, a, b), CrossPart::Both);
        assert_eq!(cross_part(&c, Point::new(0.2, 0.1), b), CrossPart::Second);
        assert_eq!(cross_part(&c, Point::new(0.2, 0.1), Point::new(0.0, 0.3)), CrossPart::None);
        assert_eq!(cross_part(&c, math::cis(-1.0), Point::new(0.0, 0.3)), CrossPart::None);
    }

    #[test]
    fn envelope_at_the_bicenter() {
        let three_q = arc(0.0, 1.5 * PI);
        let c = Cross2::discs(&three_q, &three_q);
        assert!(envelope_contains(&c, Point::new(0.0, 0.0), Point::new(0.0, 0.0)).unwrap());
        let q = arc(0.0, 0.5 * PI);
        let c = Cross2::discs(&q, &q);
        assert!(!envelope_contains(&c, Point::new(0.0, 0.0), Point::new(0.0, 0.0)).unwrap());
        let full = UnitCircleSet::full();
        let c = Cross2::discs(&full, &full);
        assert!(envelope_contains(&c, Point::new(0.9, 0.0), Point::new(-0.3, 0.9)).unwrap());
        assert!(envelope_contains(&c, Point::new(1.0, 0.0), Point::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn two_constant_exact_cases() {
        assert_eq!(two_constant_bound(0.0, 2.0, 5.0).unwrap(), 2.0);
        assert_eq!(two_constant_bound(1.0, 2.0, 5.0).unwrap(), 5.0);
        assert_eq!(two_constant_bound(0.37, 3.0, 3.0).unwrap(), 3.0);
        assert!(two_constant_bound(0.5, 0.0, 1.0).is_err());
        let v = two_constant_bound(0.25, 2.0, 5.0).unwrap();
        assert!((v.ln() - (0.75 * 2f64.ln() + 0.25 * 5f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn slice_with_zero_fixed_omega_is_the_whole_disc() {
        let c = Cross2::discs(&UnitCircleSet::full(), &arc(0.0, PI));
        let s = envelope_slice(&c, Fixed::Z(Point::new(0.1, 0.2)), 64).unwrap();
        for (m, &(p, _)) in s.mask.iter().zip(&s.rows) {
            assert_eq!(*m, p.norm() < 1.0);
        }
    }
}
