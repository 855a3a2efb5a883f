//! Red-black successive over-relaxation for the cut-cell Dirichlet problem.

use alloc::vec;
use alloc::vec::Vec;

use super::{singular, CellClass, GridDomain, Link, DIRECTIONS};
use crate::math;
use crate::{Error, Point, Result};

const NONE: u32 = u32::MAX;
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stop when the largest update of a full sweep is below this.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Relaxation factor; `None` uses the optimal factor of the enclosing
    /// rectangle (1.7 if that diverges).
    pub omega: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-11,
            max_sweeps: 1_000_000,
            omega: None,
        }
    }
}

/// Nodal values of a solved extremal problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    domain: GridDomain,
    /// Clamped to `[0, 1]`; NaN on exterior nodes.
    values: Vec<f64>,
    /// Unclamped solution on interior nodes, boundary data elsewhere.
    raw: Vec<f64>,
    sweeps: usize,
}

#[derive(Clone, Copy)]
struct Row {
    nb: [u32; 4],
    w: [f64; 4],
    b: f64,
}

pub fn solve_extremal(d: &GridDomain) -> Result<ScalarField> {
    solve_extremal_with(d, &SolveOptions::default())
}

pub fn solve_extremal_with(d: &GridDomain, opts: &SolveOptions) -> Result<ScalarField> {
    let (nx, ny) = d.dims();
    let h = d.spacing();
    let n = nx * ny;
    let jumps = d.jumps();

    // Position of each interior node inside its colour's vector.
    let mut slot = vec![NONE; n];
    let mut nodes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for j in 0..ny {
        for i in 0..nx {
            let k = d.index(i, j);
            if d.classes()[k] == CellClass::Interior {
                let c = (i + j) % 2;
                slot[k] = nodes[c].len() as u32;
                nodes[c].push(k);
            }
        }
    }
    if nodes[0].is_empty() && nodes[1].is_empty() {
        return Err(Error::domain("grid domain has no interior cells"));
    }

    let build = |c: usize| -> Vec<Row> {
        crate::par::map_range(nodes[c].len(), |s| {
            let k = nodes[c][s];
            let (i, j) = (k % nx, k / nx);
            let p = d.point(i, j);
            let links = d.links(i, j);
            let theta = |l: &Link| match *l {
                Link::Node => 1.0,
                Link::Cut { frac, .. } => frac,
            };
            let t: [f64; 4] = [theta(&links[0]), theta(&links[1]), theta(&links[2]), theta(&links[3])];
            let c = [
                2.0 / (t[0] * (t[0] + t[1])),
                2.0 / (t[1] * (t[0] + t[1])),
                2.0 / (t[2] * (t[2] + t[3])),
                2.0 / (t[3] * (t[2] + t[3])),
            ];
            let total: f64 = c.iter().sum();
            let mut row = Row {
                nb: [NONE; 4],
                w: [0.0; 4],
                b: 0.0,
            };
            for (dir, &(di, dj)) in DIRECTIONS.iter().enumerate() {
                match links[dir] {
                    Link::Node => {
                        let q = d.index((i as isize + di) as usize, (j as isize + dj) as usize);
                        row.nb[dir] = slot[q];
                        row.w[dir] = c[dir] / total;
                    }
                    Link::Cut { frac, value } => {
                        let at = p + Point::new(di as f64, dj as f64) * (frac * h);
                        row.b += c[dir] / total * (value - singular(jumps, at));
                    }
                }
            }
            row
        })
    };
    let rows = [build(0), build(1)];

    let rect = {
        let (mut i0, mut j0, mut i1, mut j1) = (usize::MAX, usize::MAX, 0usize, 0usize);
        for &k in nodes[0].iter().chain(nodes[1].iter()) {
            let (i, j) = (k % nx, k / nx);
            i0 = i0.min(i);
            j0 = j0.min(j);
            i1 = i1.max(i);
            j1 = j1.max(j);
        }
        (i1 - i0 + 2, j1 - j0 + 2)
    };
    let pi = core::f64::consts::PI;
    let rho = 0.5 * (math::cos(pi / rect.0 as f64) + math::cos(pi / rect.1 as f64));
    let optimal = 2.0 / (1.0 + math::sqrt((1.0 - rho * rho).max(0.0)));

    let attempt = |omega: f64| -> Result<([Vec<f64>; 2], usize)> {
        let mut v = [vec![0.0; nodes[0].len()], vec![0.0; nodes[1].len()]];
        let mut first = f64::NAN;
        let mut last = f64::NAN;
        for sweep in 1..=opts.max_sweeps {
            let mut upd = 0.0f64;
            for c in 0..2 {
                let (mine, other) = if c == 0 {
                    let (a, b) = v.split_at_mut(1);
                    (&mut a[0], &b[0])
                } else {
                    let (a, b) = v.split_at_mut(1);
                    (&mut b[0], &a[0])
                };
                let rows = &rows[c];
                let m = crate::par::max_over_chunks_mut(mine, CHUNK, |start, vals| {
                    let mut m = 0.0f64;
                    for (off, x) in vals.iter_mut().enumerate() {
                        let r = &rows[start + off];
                        let mut s = r.b;
                        for dir in 0..4 {
                            if r.nb[dir] != NONE {
                                s += r.w[dir] * other[r.nb[dir] as usize];
                            }
                        }
                        let delta = omega * (s - *x);
                        *x += delta;
                        let a = math::abs(delta);
                        m = if a.is_finite() { m.max(a) } else { f64::INFINITY };
                    }
                    m
                });
                upd = upd.max(m);
            }
            if sweep == 1 {
                first = upd;
            }
            if !upd.is_finite() || upd > 1e6 * first.max(1.0) {
                // Diverging: reported with an infinite residual.
                return Err(Error::SolverNonConvergence {
                    sweeps: sweep,
                    residual: f64::INFINITY,
                });
            }
            last = upd;
            if upd < opts.tol {
                return Ok((v, sweep));
            }
        }
        Err(Error::SolverNonConvergence {
            sweeps: opts.max_sweeps,
            residual: last,
        })
    };

    let (v, sweeps) = match opts.omega {
        Some(w) => attempt(w)?,
        None => match attempt(optimal) {
            Ok(r) => r,
            Err(Error::SolverNonConvergence { residual, .. }) if residual.is_infinite() => attempt(1.7)?,
            Err(e) => return Err(e),
        },
    };

    let mut raw = vec![f64::NAN; n];
    let mut values = vec![f64::NAN; n];
    for k in 0..n {
        match d.classes()[k] {
            CellClass::Interior => {
                let (i, j) = (k % nx, k / nx);
                let c = (i + j) % 2;
                let u = v[c][slot[k] as usize] + singular(jumps, d.point(i, j));
                raw[k] = u;
                values[k] = u.clamp(0.0, 1.0);
            }
            CellClass::BoundaryTarget => {
                raw[k] = 0.0;
                values[k] = 0.0;
            }
            CellClass::BoundaryOther => {
                raw[k] = 1.0;
                values[k] = 1.0;
            }
            CellClass::Exterior => {}
        }
    }
    Ok(ScalarField {
        domain: d.clone(),
        values,
        raw,
        sweeps,
    })
}

impl ScalarField {
    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    /// Per-node values in `[0, 1]`, NaN on exterior nodes.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.domain.index(i, j)]
    }

    /// The solution before clamping.
    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Smooth part `u − S` at an interior node.
    pub(crate) fn remainder(&self, k: usize) -> f64 {
        let d = &self.domain;
        let (nx, _) = d.dims();
        self.raw[k] - singular(d.jumps(), d.point(k % nx, k / nx))
    }

    /// Value at an arbitrary point: bilinear interpolation of the smooth part
    /// plus the exact singular part when the enclosing lattice square has
    /// four interior corners, otherwise bilinear over the non-exterior
    /// corners. `None` outside the discretized domain.
    pub fn sample(&self, p: Point) -> Option<f64> {
        let d = &self.domain;
        let (nx, ny) = d.dims();
        let h = d.spacing();
        let x = (p.re - d.origin().re) / h;
        let y = (p.im - d.origin().im) / h;
        let (fi, fj) = (math::floor(x), math::floor(y));
        if fi < 0.0 || fj < 0.0 || fi as usize + 1 >= nx || fj as usize + 1 >= ny {
            return None;
        }
        let (i, j) = (fi as usize, fj as usize);
        let (tx, ty) = (x - fi, y - fj);
        let corners = [
            (d.index(i, j), (1.0 - tx) * (1.0 - ty)),
            (d.index(i + 1, j), tx * (1.0 - ty)),
            (d.index(i, j + 1), (1.0 - tx) * ty),
            (d.index(i + 1, j + 1), tx * ty),
        ];
        let cls = d.classes();
        if corners.iter().all(|&(k, _)| cls[k] == CellClass::Interior) {
            let v: f64 = corners.iter().map(|&(k, w)| w * self.remainder(k)).sum();
            return Some((v + singular(d.jumps(), p)).clamp(0.0, 1.0));
        }
        let (mut acc, mut wsum) = (0.0, 0.0);
        let mut any_interior = false;
        for &(k, w) in &corners {
            if cls[k] != CellClass::Exterior {
                acc += w * self.raw[k];
                wsum += w;
                any_interior |= cls[k] == CellClass::Interior;
            }
        }
        (any_interior && wsum > 0.0).then(|| (acc / wsum).clamp(0.0, 1.0))
    }
}
