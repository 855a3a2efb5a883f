//! Boundary polylines of a grid domain by marching squares over the cut
//! points.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{CellClass, GridDomain, Link};
use crate::{Error, Point, Result};

/// A closed polyline, interior on the left (counter-clockwise for the outer
/// boundary). The first vertex is not repeated at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub vertices: Vec<Point>,
}

impl BoundaryLoop {
    pub fn signed_area(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        (0..n)
            .map(|k| {
                let (a, b) = (v[k], v[(k + 1) % n]);
                a.re * b.im - a.im * b.re
            })
            .sum::<f64>()
            * 0.5
    }

    pub fn length(&self) -> f64 {
        let v = &self.vertices;
        (0..v.len()).map(|k| (v[(k + 1) % v.len()] - v[k]).norm()).sum()
    }

    /// `n` points equally spaced in arclength, starting at the first vertex.
    pub fn resample(&self, n: usize) -> BoundaryLoop {
        let v = &self.vertices;
        let m = v.len();
        let total = self.length();
        let mut out = Vec::with_capacity(n);
        let (mut seg, mut acc) = (0usize, 0.0f64);
        for k in 0..n {
            let target = total * k as f64 / n as f64;
            loop {
                let len = (v[(seg + 1) % m] - v[seg % m]).norm();
                if acc + len >= target || seg + 1 >= m {
                    let t = if len > 0.0 { ((target - acc) / len).clamp(0.0, 1.0) } else { 0.0 };
                    out.push(v[seg % m] + (v[(seg + 1) % m] - v[seg % m]) * t);
                    break;
                }
                acc += len;
                seg += 1;
            }
        }
        BoundaryLoop { vertices: out }
    }

    /// Even-odd point-in-polygon test.
    pub fn contains(&self, p: Point) -> bool {
        let v = &self.vertices;
        let n = v.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (v[i], v[j]);
            if (a.im > p.im) != (b.im > p.im)
                && p.re < (b.re - a.re) * (p.im - a.im) / (b.im - a.im) + a.re
            {
                inside = !inside;
            }
            j = i;
        }
        inside
    }
}

impl GridDomain {
    /// Crossing point on the lattice edge from node `(i, j)` towards
    /// direction `dir`, seen from whichever end is interior.
    fn crossing(&self, i: usize, j: usize, dir: usize) -> Point {
        let (di, dj) = super::DIRECTIONS[dir];
        let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
        let (from, to, d) = if self.class(i, j) == CellClass::Interior {
            ((i, j), (a, b), dir)
        } else {
            ((a, b), (i, j), dir ^ 1)
        };
        let frac = match self.links(from.0, from.1)[d] {
            Link::Cut { frac, .. } => frac,
            Link::Node => 0.5,
        };
        let p = self.point(from.0, from.1);
        p + (self.point(to.0, to.1) - p) * frac
    }

    /// All boundary loops of the interior, with interior on the left.
    pub fn boundary_loops(&self) -> Vec<BoundaryLoop> {
        let (nx, ny) = self.dims();
        let inside = |i: usize, j: usize| self.class(i, j) == CellClass::Interior;
        // Edge ids: 2·node for the east edge of a node, 2·node+1 for north.
        let edge_id = |i: usize, j: usize, horizontal: bool| 2 * (j * nx + i) + usize::from(!horizontal);
        // segment start edge → (end edge, start point)
        let mut segs: BTreeMap<usize, (usize, Point)> = BTreeMap::new();
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let ins = [inside(c[0].0, c[0].1), inside(c[1].0, c[1].1), inside(c[2].0, c[2].1), inside(c[3].0, c[3].1)];
                let count = ins.iter().filter(|&&b| b).count();
                if count == 0 || count == 4 {
                    continue;
                }
                // Edge k joins corner k to corner k+1 (counter-clockwise).
                let edges = [
                    (edge_id(i, j, true), self.crossing(i, j, 0)),
                    (edge_id(i + 1, j, false), self.crossing(i + 1, j, 2)),
                    (edge_id(i, j + 1, true), self.crossing(i, j + 1, 0)),
                    (edge_id(i, j, false), self.crossing(i, j, 2)),
                ];
                let saddle = count == 2 && ins[0] == ins[2];
                for k in 0..4 {
                    if !(ins[k] && !ins[(k + 1) % 4]) {
                        continue;
                    }
                    let end = if saddle {
                        (k + 3) % 4
                    } else {
                        (1..4).map(|s| (k + s) % 4).find(|&e| !ins[e] && ins[(e + 1) % 4]).unwrap()
                    };
                    segs.insert(edges[k].0, (edges[end].0, edges[k].1));
                }
            }
        }
        let mut loops = Vec::new();
        while let Some((&start, _)) = segs.iter().next() {
            let mut verts = Vec::new();
            let mut e = start;
            while let Some((next, p)) = segs.remove(&e) {
                if verts.last().is_none_or(|q: &Point| (*q - p).norm() > 1e-12 * self.spacing()) {
                    verts.push(p);
                }
                e = next;
            }
            if verts.len() > 1 && (verts[0] - *verts.last().unwrap()).norm() <= 1e-12 * self.spacing() {
                verts.pop();
            }
            if verts.len() >= 3 {
                loops.push(BoundaryLoop { vertices: verts });
            }
        }
        loops
    }

    /// The single boundary loop of a simply connected domain.
    pub fn outer_boundary(&self) -> Result<BoundaryLoop> {
        if !self.is_simply_connected() {
            return Err(Error::Topology("domain is not simply connected".into()));
        }
        let mut loops = self.boundary_loops();
        if loops.len() != 1 {
            return Err(Error::Topology("expected exactly one boundary loop".into()));
        }
        Ok(loops.pop().unwrap())
    }
}
