//! Sub-level sets `{ω < 1 − δ}` of a solved field and the identity
//! `ω(·, A, D_δ) = ω(·, A, D)/(1 − δ)`.

use alloc::vec;
use alloc::vec::Vec;

use super::solve::{solve_extremal_with, ScalarField, SolveOptions};
use super::{jump_at, singular, CellClass, GridDomain, JumpPoint, Link, DIRECTIONS};
use crate::{Error, Point, Result};

/// Root of `f` on `[0, hi]` given `f(0) < 0 ≤ f(hi)`.
fn bisect(mut f: impl FnMut(f64) -> f64, hi: f64) -> f64 {
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// The domain `{z ∈ D : ω(z) < 1 − δ}`, with data normalized so that its
/// own extremal function is `ω/(1 − δ)`: the target keeps its (rescaled)
/// data and the new level curve carries 1. Crossings of the level curve are
/// located on each lattice arm by interpolating the smooth part of the field
/// linearly and adding the exact singular part.
pub fn level_set(field: &ScalarField, delta: f64) -> Result<GridDomain> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::input("δ must lie in (0, 1)"));
    }
    let d = field.domain();
    let (nx, ny) = d.dims();
    let h = d.spacing();
    let level = 1.0 - delta;
    let raw = field.raw();
    let parent = d.jumps();
    let cls = d.classes();

    let inside: Vec<bool> = (0..nx * ny)
        .map(|k| cls[k] == CellClass::Interior && raw[k] < level)
        .collect();
    if !inside.iter().any(|&b| b) {
        return Err(Error::domain("level set is empty"));
    }

    let mut links = vec![[Link::Node; 4]; nx * ny];
    for k in 0..nx * ny {
        if !inside[k] {
            continue;
        }
        let (i, j) = (k % nx, k / nx);
        let p = d.point(i, j);
        let vp = field.remainder(k);
        for (dir, &(di, dj)) in DIRECTIONS.iter().enumerate() {
            let step = Point::new(di as f64, dj as f64) * h;
            let curve = |frac: f64, v_end: f64| {
                let t = bisect(
                    |t| vp + (v_end - vp) * (t / frac) + singular(parent, p + step * t) - level,
                    frac,
                );
                Link::Cut { frac: t.max(1e-9), value: 1.0 }
            };
            links[k][dir] = match d.links(i, j)[dir] {
                Link::Node => {
                    let q = d.index((i as isize + di) as usize, (j as isize + dj) as usize);
                    if inside[q] {
                        Link::Node
                    } else {
                        curve(1.0, field.remainder(q))
                    }
                }
                Link::Cut { frac, value } => {
                    if let Some(j) = jump_at(parent, p + step * frac, h) {
                        let low = j.low / level;
                        Link::Cut {
                            frac,
                            value: if j.low < level && level < j.high { 0.5 * (low + 1.0) } else { value / level },
                        }
                    } else if value < level {
                        Link::Cut {
                            frac,
                            value: value / level,
                        }
                    } else {
                        curve(frac, value - singular(parent, p + step * frac))
                    }
                }
            };
        }
    }

    let mut class = vec![CellClass::Exterior; nx * ny];
    for k in 0..nx * ny {
        if inside[k] {
            class[k] = CellClass::Interior;
        }
    }
    // Frontier nodes, classified by the datum their interior neighbour sees.
    for k in 0..nx * ny {
        if !inside[k] {
            continue;
        }
        let (i, j) = (k % nx, k / nx);
        for (dir, &(di, dj)) in DIRECTIONS.iter().enumerate() {
            if let Link::Cut { value, .. } = links[k][dir] {
                let q = d.index((i as isize + di) as usize, (j as isize + dj) as usize);
                let c = if value < 0.5 {
                    CellClass::BoundaryTarget
                } else {
                    CellClass::BoundaryOther
                };
                if class[q] != CellClass::BoundaryTarget {
                    class[q] = c;
                }
            }
        }
    }
    // Fixed-value target cells of the parent stay targets.
    for k in 0..nx * ny {
        if cls[k] == CellClass::BoundaryTarget && class[k] == CellClass::Exterior && raw[k] < level {
            class[k] = CellClass::BoundaryTarget;
        }
    }

    let jumps = parent
        .iter()
        .filter(|j| j.low < level && level < j.high)
        .map(|j| {
            let opening = j.opening * (level - j.low) / (j.high - j.low);
            JumpPoint::new(j.at, j.low_dir, j.turn, opening, j.low / level, 1.0)
        })
        .collect();

    Ok(GridDomain::from_parts(d.origin(), h, nx, ny, class, links, jumps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelIdentityReport {
    /// Largest `|(1 − δ) ω(z, A, D_δ) − ω(z, A, D)|` over compared nodes.
    pub max_deviation: f64,
    pub compared: usize,
    pub level_interior: usize,
}

/// Max deviation of the level-set identity over interior nodes of `D_δ`
/// at least `min_depth` lattice steps from its boundary.
pub fn verify_level_identity_with(
    d: &GridDomain,
    delta: f64,
    min_depth: u32,
    opts: &SolveOptions,
) -> Result<LevelIdentityReport> {
    let field = solve_extremal_with(d, opts)?;
    let sub = level_set(&field, delta)?;
    let sub_field = solve_extremal_with(&sub, opts)?;
    let depth = sub.interior_depth();
    let (mut max, mut compared) = (0.0f64, 0usize);
    for (k, &dk) in depth.iter().enumerate() {
        if dk == u32::MAX || dk < min_depth {
            continue;
        }
        let dev = ((1.0 - delta) * sub_field.raw()[k] - field.raw()[k]).abs();
        max = max.max(dev);
        compared += 1;
    }
    Ok(LevelIdentityReport {
        max_deviation: max,
        compared,
        level_interior: sub.interior_count(),
    })
}

/// [`verify_level_identity_with`] at depth 4 with default solver options.
pub fn verify_level_identity(d: &GridDomain, delta: f64) -> Result<f64> {
    Ok(verify_level_identity_with(d, delta, 4, &SolveOptions::default())?.max_deviation)
}
