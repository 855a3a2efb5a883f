//! Relative extremal functions on planar grid domains.
//!
//! A [`GridDomain`] is a square lattice of nodes over a bounded open set.
//! Interior nodes carry, for each of their four lattice arms, either a link
//! to the neighbouring interior node or the fraction of the arm at which the
//! boundary is crossed together with the Dirichlet datum there. The discrete
//! Laplacian is the Shortley-Weller one built from those fractions, which is
//! second-order accurate for curved boundaries.
//!
//! Data that jump between 0 and 1 at isolated boundary points (arc
//! endpoints) are handled by subtracting, at each jump, the harmonic function
//! linear in the angle about the jump point; the grid solves only for the
//! continuous remainder.

mod contour;
mod level;
mod poletsky;
mod shape;
mod solve;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

pub use contour::BoundaryLoop;
pub use level::{level_set, verify_level_identity, verify_level_identity_with, LevelIdentityReport};
pub use poletsky::{poletsky_upper_check, PolyDisc, PoletskyReport};
pub use shape::{AnnulusShape, DiscShape, EllipseShape, FnShape, HalfDiscShape, Shape};
pub use solve::{solve_extremal, solve_extremal_with, ScalarField, SolveOptions};

use crate::arcs::UnitCircleSet;
use crate::math;
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellClass {
    Interior,
    BoundaryTarget,
    BoundaryOther,
    Exterior,
}

/// One lattice arm of an interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Link {
    /// The neighbour is interior.
    Node,
    /// The boundary is crossed at `frac · h` along the arm with datum `value`.
    Cut { frac: f64, value: f64 },
}

/// Arm directions, in `links` order: east, west, north, south.
pub const DIRECTIONS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// A boundary point where the data jump from `low` to `high`.
///
/// `low_dir` is the unit tangent pointing along the boundary into the `low`
/// side; rotating it by `turn · opening` (`turn = ±1`) sweeps through the
/// region to the `high` side. The associated singular function is
/// `low + (high − low) φ/opening`, `φ` the angle measured from `low_dir`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpPoint {
    pub at: Point,
    pub low_dir: Point,
    pub turn: f64,
    pub opening: f64,
    pub low: f64,
    pub high: f64,
    /// Unit vector bisecting the opening.
    mid: Point,
}

impl JumpPoint {
    pub fn new(at: Point, low_dir: Point, turn: f64, opening: f64, low: f64, high: f64) -> Self {
        let low_dir = low_dir / low_dir.norm();
        let mid = low_dir * math::cis(turn * 0.5 * opening);
        JumpPoint {
            at,
            low_dir,
            turn,
            opening,
            low,
            high,
            mid,
        }
    }

    /// Angle from `low_dir`, continuous away from the ray opposite `mid`.
    pub fn angle(&self, z: Point) -> f64 {
        let d = z - self.at;
        if d.norm() < 1e-12 {
            return 0.5 * self.opening;
        }
        let q = d / self.mid;
        0.5 * self.opening + self.turn * math::atan2(q.im, q.re)
    }

    pub fn value(&self, z: Point) -> f64 {
        self.low + (self.high - self.low) * self.angle(z) / self.opening
    }
}

/// The jump located at `p`, if any (to within `1e−9 h`).
pub(crate) fn jump_at(jumps: &[JumpPoint], p: Point, h: f64) -> Option<&JumpPoint> {
    jumps.iter().find(|j| (j.at - p).norm() <= 1e-9 * h)
}

/// Sum of the singular functions of `jumps` at `z`.
pub(crate) fn singular(jumps: &[JumpPoint], z: Point) -> f64 {
    jumps.iter().map(|j| j.value(z)).sum()
}

/// A set of lattice nodes, e.g. a target given cell by cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<bool>,
}

impl CellSet {
    pub fn new(nx: usize, ny: usize) -> Self {
        CellSet {
            nx,
            ny,
            cells: vec![false; nx * ny],
        }
    }

    pub fn from_indices(nx: usize, ny: usize, idx: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::new(nx, ny);
        for &(i, j) in idx {
            if i >= nx || j >= ny {
                return Err(Error::input("cell index outside the grid"));
            }
            s.cells[j * nx + i] = true;
        }
        Ok(s)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.nx && j < self.ny && self.cells[j * self.nx + i]
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keeps the cells with at least one 4-neighbour in the set.
    pub fn regularize(&self) -> Self {
        let mut out = Self::new(self.nx, self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                if !self.contains(i, j) {
                    continue;
                }
                let keep = DIRECTIONS.iter().any(|&(di, dj)| {
                    let (a, b) = (i as isize + di, j as isize + dj);
                    a >= 0 && b >= 0 && self.contains(a as usize, b as usize)
                });
                out.cells[j * self.nx + i] = keep;
            }
        }
        out
    }
}

/// A target set in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSet {
    Arcs(UnitCircleSet),
    Cells(CellSet),
}

/// `A ↦ A*`: density points of an arc set; cells that are 4-limit points of
/// a cell set.
pub fn regularize_set(s: &TargetSet) -> TargetSet {
    match s {
        TargetSet::Arcs(a) => TargetSet::Arcs(a.density_points()),
        TargetSet::Cells(c) => TargetSet::Cells(c.regularize()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    origin: Point,
    h: f64,
    nx: usize,
    ny: usize,
    class: Vec<CellClass>,
    links: Vec<[Link; 4]>,
    jumps: Vec<JumpPoint>,
}

impl GridDomain {
    /// Lattice of spacing `h` over `shape`, with nodes at integer multiples
    /// of `h` and at least two rows of non-interior padding.
    pub fn from_shape<S: Shape + ?Sized>(shape: &S, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::input("grid spacing h must be positive"));
        }
        let (lo, hi) = shape.bbox();
        let i0 = math::floor(lo.re / h) - 2.0;
        let j0 = math::floor(lo.im / h) - 2.0;
        let i1 = math::floor(hi.re / h) + 3.0;
        let j1 = math::floor(hi.im / h) + 3.0;
        let nx = (i1 - i0) as usize + 1;
        let ny = (j1 - j0) as usize + 1;
        if nx.saturating_mul(ny) > 1 << 26 {
            return Err(Error::input("grid too large for this spacing"));
        }
        let origin = Point::new(i0 * h, j0 * h);
        let at = |i: usize, j: usize| origin + Point::new(i as f64 * h, j as f64 * h);

        let interior: Vec<bool> = crate::par::map_range(nx * ny, |k| {
            let (i, j) = (k % nx, k / nx);
            i > 0 && j > 0 && i + 1 < nx && j + 1 < ny && shape.is_interior(at(i, j))
        });

        let jumps = shape.jumps();
        let links: Vec<[Link; 4]> = crate::par::map_range(nx * ny, |k| {
            let mut out = [Link::Node; 4];
            if !interior[k] {
                return out;
            }
            let (i, j) = (k % nx, k / nx);
            let p = at(i, j);
            for (d, &(di, dj)) in DIRECTIONS.iter().enumerate() {
                let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
                if interior[b * nx + a] {
                    continue;
                }
                let q = at(a, b);
                let frac = shape.exit_fraction(p, q).clamp(1e-9, 1.0);
                let at = p + (q - p) * frac;
                // At a jump the datum is its mean, which makes the datum of
                // the smooth remainder continuous there.
                let value = match jump_at(&jumps, at, h) {
                    Some(j) => 0.5 * (j.low + j.high),
                    None => shape.boundary_value(at),
                };
                out[d] = Link::Cut { frac, value };
            }
            out
        });

        let mut class = vec![CellClass::Exterior; nx * ny];
        for k in 0..nx * ny {
            if interior[k] {
                class[k] = CellClass::Interior;
                continue;
            }
            let (i, j) = (k % nx, k / nx);
            if shape.in_target(at(i, j)) {
                class[k] = CellClass::BoundaryTarget;
                continue;
            }
            // Datum seen from an interior neighbour, if there is one.
            for (d, &(di, dj)) in DIRECTIONS.iter().enumerate() {
                let (a, b) = (i as isize - di, j as isize - dj);
                if a < 0 || b < 0 || a as usize >= nx || b as usize >= ny {
                    continue;
                }
                let n = b as usize * nx + a as usize;
                if let (true, Link::Cut { value, .. }) = (interior[n], links[n][d]) {
                    class[k] = if value < 0.5 {
                        CellClass::BoundaryTarget
                    } else {
                        CellClass::BoundaryOther
                    };
                    break;
                }
            }
        }
        Ok(GridDomain {
            origin,
            h,
            nx,
            ny,
            class,
            links,
            jumps,
        })
    }

    pub(crate) fn from_parts(
        origin: Point,
        h: f64,
        nx: usize,
        ny: usize,
        class: Vec<CellClass>,
        links: Vec<[Link; 4]>,
        jumps: Vec<JumpPoint>,
    ) -> Self {
        GridDomain {
            origin,
            h,
            nx,
            ny,
            class,
            links,
            jumps,
        }
    }

    /// Turns the nodes of `cells` into fixed-value target cells (datum 0).
    pub fn mark_target_cells(&mut self, cells: &CellSet) -> Result<()> {
        if cells.nx != self.nx || cells.ny != self.ny {
            return Err(Error::input("cell set dimensions do not match the grid"));
        }
        for j in 0..self.ny {
            for i in 0..self.nx {
                if !cells.contains(i, j) {
                    continue;
                }
                let k = self.index(i, j);
                if self.class[k] == CellClass::Exterior {
                    continue;
                }
                self.class[k] = CellClass::BoundaryTarget;
                self.links[k] = [Link::Node; 4];
                for (d, &(di, dj)) in DIRECTIONS.iter().enumerate() {
                    let (a, b) = (i as isize - di, j as isize - dj);
                    if let Some(n) = self.checked_index(a, b) {
                        if self.class[n] == CellClass::Interior {
                            self.links[n][d] = Link::Cut {
                                frac: 1.0,
                                value: 0.0,
                            };
                        }
                    }
                }
            }
        }
        // Jumps no longer describe the modified data.
        self.jumps.clear();
        Ok(())
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn classes(&self) -> &[CellClass] {
        &self.class
    }

    pub fn class(&self, i: usize, j: usize) -> CellClass {
        self.class[self.index(i, j)]
    }

    pub fn links(&self, i: usize, j: usize) -> &[Link; 4] {
        &self.links[self.index(i, j)]
    }

    pub fn jumps(&self) -> &[JumpPoint] {
        &self.jumps
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub(crate) fn checked_index(&self, i: isize, j: isize) -> Option<usize> {
        (i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .then(|| self.index(i as usize, j as usize))
    }

    pub fn point(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn interior_count(&self) -> usize {
        self.class.iter().filter(|&&c| c == CellClass::Interior).count()
    }

    /// The lattice node closest to `p`, if it is interior.
    pub fn nearest_interior(&self, p: Point) -> Option<(usize, usize)> {
        let x = (p.re - self.origin.re) / self.h;
        let y = (p.im - self.origin.im) / self.h;
        let (i, j) = (math::round(x) as isize, math::round(y) as isize);
        let k = self.checked_index(i, j)?;
        (self.class[k] == CellClass::Interior).then_some((i as usize, j as usize))
    }

    /// Distance, in lattice steps, from each interior node to the nearest
    /// interior node with a cut arm (0 there). `u32::MAX` elsewhere.
    pub fn interior_depth(&self) -> Vec<u32> {
        let mut depth = vec![u32::MAX; self.nx * self.ny];
        let mut queue = VecDeque::new();
        for k in 0..self.nx * self.ny {
            if self.class[k] == CellClass::Interior
                && self.links[k].iter().any(|l| matches!(l, Link::Cut { .. }))
            {
                depth[k] = 0;
                queue.push_back(k);
            }
        }
        while let Some(k) = queue.pop_front() {
            let (i, j) = ((k % self.nx) as isize, (k / self.nx) as isize);
            for &(di, dj) in &DIRECTIONS {
                if let Some(n) = self.checked_index(i + di, j + dj) {
                    if self.class[n] == CellClass::Interior && depth[n] == u32::MAX {
                        depth[n] = depth[k] + 1;
                        queue.push_back(n);
                    }
                }
            }
        }
        depth
    }

    /// Labels of the 4-connected interior components (`u32::MAX` off the
    /// interior), and their count.
    pub fn component_labels(&self) -> (Vec<u32>, usize) {
        let mut label = vec![u32::MAX; self.nx * self.ny];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for start in 0..self.nx * self.ny {
            if self.class[start] != CellClass::Interior || label[start] != u32::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(k) = stack.pop() {
                let (i, j) = ((k % self.nx) as isize, (k / self.nx) as isize);
                for &(di, dj) in &DIRECTIONS {
                    if let Some(n) = self.checked_index(i + di, j + dj) {
                        if self.class[n] == CellClass::Interior && label[n] == u32::MAX {
                            label[n] = count;
                            stack.push(n);
                        }
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// One domain per 4-connected interior component, largest first.
    pub fn components(&self) -> Vec<GridDomain> {
        let (label, count) = self.component_labels();
        let mut sizes = vec![0usize; count];
        for &l in &label {
            if l != u32::MAX {
                sizes[l as usize] += 1;
            }
        }
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
        order
            .into_iter()
            .map(|c| {
                let mut d = self.clone();
                for k in 0..self.nx * self.ny {
                    if self.class[k] == CellClass::Interior && label[k] != c as u32 {
                        d.class[k] = CellClass::Exterior;
                        d.links[k] = [Link::Node; 4];
                    }
                }
                d
            })
            .collect()
    }

    /// The component containing the node nearest to `p`.
    pub fn component_containing(&self, p: Point) -> Result<GridDomain> {
        let (i, j) = self
            .nearest_interior(p)
            .ok_or_else(|| Error::domain("point is not at an interior node"))?;
        let (label, _) = self.component_labels();
        let c = label[self.index(i, j)];
        let mut d = self.clone();
        for k in 0..self.nx * self.ny {
            if self.class[k] == CellClass::Interior && label[k] != c {
                d.class[k] = CellClass::Exterior;
                d.links[k] = [Link::Node; 4];
            }
        }
        Ok(d)
    }

    /// True when the interior is one 4-component and the rest of its
    /// bounding box (padded by one node) is 8-connected.
    pub fn is_simply_connected(&self) -> bool {
        let (_, count) = self.component_labels();
        if count != 1 {
            return false;
        }
        let (mut i0, mut j0, mut i1, mut j1) = (usize::MAX, usize::MAX, 0, 0);
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.class(i, j) == CellClass::Interior {
                    i0 = i0.min(i);
                    j0 = j0.min(j);
                    i1 = i1.max(i);
                    j1 = j1.max(j);
                }
            }
        }
        // Interior nodes are never on the array border, so the padded box
        // stays in range.
        let (i0, j0, i1, j1) = (i0 - 1, j0 - 1, i1 + 1, j1 + 1);
        let w = i1 - i0 + 1;
        let hgt = j1 - j0 + 1;
        let outside = |a: usize, b: usize| self.class(i0 + a, j0 + b) != CellClass::Interior;
        let mut seen = vec![false; w * hgt];
        let mut stack = vec![(0usize, 0usize)];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some((a, b)) = stack.pop() {
            for da in -1isize..=1 {
                for db in -1isize..=1 {
                    let (x, y) = (a as isize + da, b as isize + db);
                    if x < 0 || y < 0 || x as usize >= w || y as usize >= hgt {
                        continue;
                    }
                    let (x, y) = (x as usize, y as usize);
                    if !seen[y * w + x] && outside(x, y) {
                        seen[y * w + x] = true;
                        reached += 1;
                        stack.push((x, y));
                    }
                }
            }
        }
        let total = (0..hgt)
            .flat_map(|b| (0..w).map(move |a| (a, b)))
            .filter(|&(a, b)| outside(a, b))
            .count();
        reached == total
    }
}
