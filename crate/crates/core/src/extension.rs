//! Holomorphic extension from crosses over the bidisc.
//!
//! For boundary sets `A, B ⊂ ∂E` let `g(z, w) = g_A(z) + g_B(w)` with
//! `g_A = ω(·, A, E) + iω̂(·, A, E)`. The Gonchar-Carleman operator
//!
//! ```text
//! K_N(z, w) = (2πi)^{-2} ∬_{A×B} e^{−N(g(a,b) − g(z,w))} f(a, b) da db / ((a − z)(b − w))
//! ```
//!
//! converges, as `N → ∞`, to the extension `f̂` on the envelope
//! `{ω(z, A, E) + ω(w, B, E) < 1}`. On `A × B`, `Re g = 0`, so the damping
//! factor is a pure phase and the size of `K_N` is carried by
//! `e^{N Re g(z, w)}`.
//!
//! The contour integrals use tanh-sinh nodes on each arc (see
//! [`crate::quadrature`]); near-boundary evaluation points split the arcs at
//! their radial projection.

use alloc::vec;
use alloc::vec::Vec;

use crate::arcs::UnitCircleSet;
use crate::math;
use crate::potential::DiscPotential;
use crate::quadrature::{cauchy_circle, tanh_sinh_arc_split, ArcNode};
use crate::{Complex64, Error, Point, Result};

/// Separately holomorphic data on the cross, sampled at `(a, b)`.
pub trait BoundarySampler: Sync {
    fn eval(&self, a: Point, b: Point) -> Complex64;
}

impl<F> BoundarySampler for F
where
    F: Fn(Point, Point) -> Complex64 + Sync,
{
    fn eval(&self, a: Point, b: Point) -> Complex64 {
        self(a, b)
    }
}

/// Functions holomorphic near the closed bidisc, used as exact oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Const1,
    Zw,
    ExpZw,
    ExpZPlusW,
    Cauchy2,
}

impl TestFunction {
    pub const ALL: [TestFunction; 5] = [
        TestFunction::Const1,
        TestFunction::Zw,
        TestFunction::ExpZw,
        TestFunction::ExpZPlusW,
        TestFunction::Cauchy2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Const1 => "const1",
            TestFunction::Zw => "zw",
            TestFunction::ExpZw => "exp_zw",
            TestFunction::ExpZPlusW => "exp_z_plus_w",
            TestFunction::Cauchy2 => "cauchy2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn eval(self, z: Point, w: Point) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            TestFunction::Const1 => one,
            TestFunction::Zw => z * w,
            TestFunction::ExpZw => (z * w).exp(),
            TestFunction::ExpZPlusW => (z + w).exp(),
            TestFunction::Cauchy2 => one / ((2.0 - z) * (2.0 - w)),
        }
    }
}

impl BoundarySampler for TestFunction {
    fn eval(&self, a: Point, b: Point) -> Complex64 {
        TestFunction::eval(*self, a, b)
    }
}

/// `g(z, w) = g_A(z) + g_B(w)`.
#[derive(Debug, Clone)]
pub struct GFunction {
    a: DiscPotential,
    b: DiscPotential,
}

/// Builds `g` for the density points of `A` and `B`.
pub fn build_g(a: &UnitCircleSet, b: &UnitCircleSet) -> Result<GFunction> {
    if a.measure() <= 0.0 || b.measure() <= 0.0 {
        return Err(Error::domain("boundary sets must have positive measure"));
    }
    Ok(GFunction {
        a: DiscPotential::new(&a.density_points()),
        b: DiscPotential::new(&b.density_points()),
    })
}

impl GFunction {
    pub fn eval(&self, z: Point, w: Point) -> Result<Complex64> {
        Ok(self.a.g(z)? + self.b.g(w)?)
    }

    /// `ω(z, A, E) + ω(w, B, E)`.
    pub fn omega_total(&self, z: Point, w: Point) -> Result<f64> {
        Ok(self.a.omega(z)? + self.b.omega(w)?)
    }

    pub fn first(&self) -> &DiscPotential {
        &self.a
    }

    pub fn second(&self) -> &DiscPotential {
        &self.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarlemanOptions {
    /// Strictly increasing values of `N`.
    pub schedule: Vec<u32>,
    /// Stop at the first pair of consecutive schedule entries closer than
    /// this.
    pub tol: f64,
    /// Required distance of `ω_total` below 1.
    pub margin: f64,
    /// Nodes per arc piece at the first quadrature level (at least 64).
    pub min_nodes: usize,
    /// Give up refining past this many nodes per arc piece.
    pub max_nodes: usize,
    /// Smallest allowed distance of `z` and `w` from the unit circle.
    pub boundary_guard: f64,
}

impl Default for CarlemanOptions {
    fn default() -> Self {
        CarlemanOptions {
            schedule: (0..=8).map(|k| 1u32 << k).collect(),
            tol: 1e-6,
            margin: 0.05,
            min_nodes: 64,
            max_nodes: 4096,
            boundary_guard: 1e-3,
        }
    }
}

impl CarlemanOptions {
    fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() || self.schedule.windows(2).any(|w| w[0] >= w[1]) || self.schedule[0] == 0 {
            return Err(Error::input("N schedule must be positive and strictly increasing"));
        }
        if !(self.tol > 0.0) || !(self.margin >= 0.0 && self.margin < 1.0) {
            return Err(Error::input("tolerance must be positive and margin in [0, 1)"));
        }
        if !(self.boundary_guard > 0.0 && self.boundary_guard < 1.0) {
            return Err(Error::input("boundary guard must lie in (0, 1)"));
        }
        if self.min_nodes < 64 || self.max_nodes < self.min_nodes {
            return Err(Error::input("node counts must be at least 64 per arc"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionResult {
    pub value: Complex64,
    pub n_used: u32,
    /// `|K_{N'} − K_N|` for the consecutive pair that met the tolerance.
    pub cauchy_gap: f64,
    pub omega_total: f64,
    /// Consecutive gaps up to the stopping pair.
    pub gaps: Vec<f64>,
    /// Nodes per arc piece at the accepted quadrature level.
    pub nodes: usize,
}

/// Quadrature data of one factor: `da/(a − z)` and `ω̂(a)` per node.
struct Panel {
    points: Vec<Point>,
    kernel: Vec<Complex64>,
    conj: Vec<f64>,
}

fn panel(pot: &DiscPotential, z: Point, n: usize) -> Result<Panel> {
    let set = pot.set();
    let splits: Vec<f64> = if z.norm() > 0.5 { vec![z.arg()] } else { Vec::new() };
    let nodes: Vec<ArcNode> = set
        .arcs()
        .iter()
        .flat_map(|arc| tanh_sinh_arc_split(arc.start, arc.end, &splits, n))
        .collect();
    let mut p = Panel {
        points: Vec::with_capacity(nodes.len()),
        kernel: Vec::with_capacity(nodes.len()),
        conj: Vec::with_capacity(nodes.len()),
    };
    for node in nodes {
        let a = node.point();
        let d = a - z;
        if d.norm() == 0.0 {
            return Err(Error::Quadrature("evaluation point sits on a quadrature node".into()));
        }
        p.points.push(a);
        p.kernel.push(node.dz() / d);
        p.conj.push(pot.boundary_conjugate(math::wrap_angle(node.base), node.offset));
    }
    Ok(p)
}

fn check_point(z: Point, name: &str, guard: f64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::input("non-finite evaluation point"));
    }
    if z.norm() > 1.0 - guard {
        return Err(Error::domain(alloc::format!(
            "{name} must be at distance ≥ {guard:e} from the unit circle"
        )));
    }
    Ok(())
}

/// `K_N(z, w)` for every `N` in `ns`, sharing one evaluation of `f` on the
/// node grid; `n` nodes per arc piece. `z` and `w` must be at distance
/// `≥ 1e−3` from the circle.
pub fn carleman_series<S: BoundarySampler + ?Sized>(
    f: &S,
    g: &GFunction,
    z: Point,
    w: Point,
    ns: &[u32],
    n: usize,
) -> Result<Vec<Complex64>> {
    carleman_series_guarded(f, g, z, w, ns, n, 1e-3)
}

fn carleman_series_guarded<S: BoundarySampler + ?Sized>(
    f: &S,
    g: &GFunction,
    z: Point,
    w: Point,
    ns: &[u32],
    n: usize,
    guard: f64,
) -> Result<Vec<Complex64>> {
    check_point(z, "z", guard)?;
    check_point(w, "w", guard)?;
    let pa = panel(&g.a, z, n)?;
    let pb = panel(&g.b, w, n)?;
    let gz = g.eval(z, w)?;
    let nb = pb.points.len();
    // f on the node grid, row-major in a.
    let fm: Vec<Complex64> = crate::par::map_range(pa.points.len(), |i| {
        let a = pa.points[i];
        pb.points.iter().map(|&b| f.eval(a, b)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let denom = Complex64::new(0.0, crate::TAU) * Complex64::new(0.0, crate::TAU);
    let mut out = Vec::with_capacity(ns.len());
    for &big_n in ns {
        let nf = big_n as f64;
        let v: Vec<Complex64> = (0..nb)
            .map(|j| pb.kernel[j] * math::cis(-nf * pb.conj[j]))
            .collect();
        let rows = crate::par::map_range(pa.points.len(), |i| {
            let row = &fm[i * nb..(i + 1) * nb];
            let s: Complex64 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            s * pa.kernel[i] * math::cis(-nf * pa.conj[i])
        });
        let s: Complex64 = rows.into_iter().sum();
        // e^{N g(z,w)} s, with the modulus formed in log space.
        let r = s.norm();
        let value = if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            math::cis(nf * gz.im + s.arg()) * math::exp(nf * gz.re + math::ln(r))
        };
        out.push(value / denom);
    }
    Ok(out)
}

/// `K_N(z, w)` with `n` nodes per arc piece.
pub fn carleman_k_n<S: BoundarySampler + ?Sized>(
    f: &S,
    g: &GFunction,
    z: Point,
    w: Point,
    big_n: u32,
    n: usize,
) -> Result<Complex64> {
    Ok(carleman_series(f, g, z, w, &[big_n], n)?[0])
}

/// Index of the first consecutive pair with gap below `tol`, and the gaps
/// up to it.
fn first_settled(values: &[Complex64], tol: f64) -> (Option<usize>, Vec<f64>) {
    let mut gaps = Vec::new();
    for k in 1..values.len() {
        let gap = (values[k] - values[k - 1]).norm();
        gaps.push(gap);
        if gap < tol {
            return (Some(k), gaps);
        }
    }
    (None, gaps)
}

/// `lim K_N(z, w)`: runs the `N` schedule at a quadrature level, stops at the
/// first consecutive gap below `tol`, and doubles the nodes until two levels
/// agree to `tol/2`.
pub fn carleman_limit<S: BoundarySampler + ?Sized>(
    f: &S,
    g: &GFunction,
    z: Point,
    w: Point,
    opts: &CarlemanOptions,
) -> Result<ExtensionResult> {
    opts.validate()?;
    let omega_total = g.omega_total(z, w)?;
    if omega_total > 1.0 - opts.margin {
        return Err(Error::domain(alloc::format!(
            "ω_total = {omega_total} exceeds 1 − margin"
        )));
    }
    let mut prev: Option<ExtensionResult> = None;
    let mut n = opts.min_nodes;
    while n <= opts.max_nodes {
        let series = carleman_series_guarded(f, g, z, w, &opts.schedule, n, opts.boundary_guard)?;
        let (stop, gaps) = first_settled(&series, opts.tol);
        let cur = match stop {
            Some(k) => ExtensionResult {
                value: series[k],
                n_used: opts.schedule[k],
                cauchy_gap: gaps[k - 1],
                omega_total,
                gaps,
                nodes: n,
            },
            None => {
                // Possibly quadrature-limited; refine before giving up.
                if n * 2 > opts.max_nodes {
                    return Err(Error::CarlemanNonConvergence { gaps });
                }
                n *= 2;
                continue;
            }
        };
        if let Some(p) = &prev {
            if (p.value - cur.value).norm() < 0.5 * opts.tol {
                return Ok(cur);
            }
        }
        prev = Some(cur);
        n *= 2;
    }
    Err(Error::Quadrature(alloc::format!(
        "Carleman estimates did not agree across quadrature levels up to {} nodes per arc",
        opts.max_nodes
    )))
}

/// Data on the 3-fold cross: `f(a, λ, b)` for `a ∈ A`, `|λ| = 1`, `b ∈ B`.
pub trait ThreefoldSampler: Sync {
    fn eval(&self, a: Point, lambda: Point, b: Point) -> Complex64;
}

impl<F> ThreefoldSampler for F
where
    F: Fn(Point, Point, Point) -> Complex64 + Sync,
{
    fn eval(&self, a: Point, lambda: Point, b: Point) -> Complex64 {
        self(a, lambda, b)
    }
}

/// Default number of `λ` nodes for the 3-fold reconstruction.
pub const THREEFOLD_NODES: usize = 512;

/// `f̂(z, t, w) = (2πi)^{-1} ∮_{∂E} K(z, λ, w)/(λ − t) dλ`, `K(·, λ, ·)` the
/// Carleman limit of `f(·, λ, ·)`.
pub fn reconstruct_threefold<S: ThreefoldSampler + ?Sized>(
    f: &S,
    g: &GFunction,
    z: Point,
    t: Point,
    w: Point,
    lambda_nodes: usize,
    opts: &CarlemanOptions,
) -> Result<Complex64> {
    if t.norm() >= 1.0 - 1e-3 {
        return Err(Error::domain("|t| must be below 1 − 1e-3"));
    }
    let omega = g.omega_total(z, w)?;
    if omega >= 1.0 - opts.margin {
        return Err(Error::domain("(z, w) is too close to the envelope boundary"));
    }
    let nodes = crate::quadrature::circle_nodes(lambda_nodes);
    let k = crate::par::map_range(nodes.len(), |i| {
        let lambda = nodes[i].point();
        let slice = |a: Point, b: Point| f.eval(a, lambda, b);
        carleman_limit(&slice, g, z, w, opts).map(|r| r.value)
    });
    let k: Vec<Complex64> = k.into_iter().collect::<Result<_>>()?;
    let mut idx = 0;
    Ok(cauchy_circle(1.0, t, lambda_nodes, |_| {
        let v = k[idx];
        idx += 1;
        v
    }))
}

/// Default number of nodes on the Hartogs contour.
pub const HARTOGS_NODES: usize = 4096;

/// Extends `F`, known on the Hartogs figure `H₂(r) = {|z₁| < r or |z₂| > 1 − r}`,
/// to `(z₁, z₂) ∈ E²` by the Cauchy integral in `z₂` over `|λ| = 1 − r/2`.
/// `F` is only called at points of `H₂(r)`.
pub fn hartogs_extend<F>(f: F, r: f64, z1: Point, z2: Point, nodes: usize) -> Result<Complex64>
where
    F: Fn(Point, Point) -> Complex64,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::input("r must lie in (0, 1)"));
    }
    if z1.norm() >= 1.0 {
        return Err(Error::domain("|z₁| must be below 1"));
    }
    let rho = 1.0 - 0.5 * r;
    if z2.norm() >= rho - 1e-3 {
        return Err(Error::domain("z₂ is too close to the Cauchy contour"));
    }
    Ok(cauchy_circle(rho, z2, nodes, |lambda| {
        debug_assert!(lambda.norm() > 1.0 - r);
        f(z1, lambda)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn three_quarter() -> UnitCircleSet {
        UnitCircleSet::arc(0.0, 1.5 * PI).unwrap()
    }

    #[test]
    fn g_center_values() {
        let half = UnitCircleSet::arc(0.0, PI).unwrap();
        let g = build_g(&half, &half).unwrap();
        let v = g.eval(Point::new(0.0, 0.0), Point::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let full = UnitCircleSet::full();
        let g = build_g(&full, &full).unwrap();
        assert_eq!(g.eval(Point::new(0.3, 0.1), Point::new(-0.2, 0.5)).unwrap(), Complex64::new(0.0, 0.0));
        assert!(build_g(&UnitCircleSet::empty(), &half).is_err());
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = build_g(&three_quarter(), &three_quarter()).unwrap();
        let zero = |_a: Point, _b: Point| Complex64::new(0.0, 0.0);
        let v = carleman_series(&zero, &g, Point::new(0.1, 0.0), Point::new(0.0, 0.2), &[1, 4, 16], 64).unwrap();
        assert!(v.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn limit_of_product() {
        let g = build_g(&three_quarter(), &three_quarter()).unwrap();
        let r = carleman_limit(&TestFunction::Zw, &g, Point::new(0.2, 0.0), Point::new(-0.1, 0.0), &CarlemanOptions::default())
            .unwrap();
        assert!((r.value - Complex64::new(-0.02, 0.0)).norm() < 1e-6, "{r:?}");
    }

    #[test]
    fn schedule_is_validated() {
        let g = build_g(&three_quarter(), &three_quarter()).unwrap();
        let opts = CarlemanOptions {
            schedule: vec![4, 2],
            ..Default::default()
        };
        let o = Point::new(0.0, 0.0);
        assert!(matches!(carleman_limit(&TestFunction::Const1, &g, o, o, &opts), Err(Error::Input(_))));
    }

    #[test]
    fn hartogs_polynomial() {
        let v = hartogs_extend(|a, b| a * b, 0.3, Point::new(0.5, 0.0), Point::new(0.25, 0.0), HARTOGS_NODES).unwrap();
        assert!((v - Complex64::new(0.125, 0.0)).norm() < 1e-14);
        assert!(hartogs_extend(|a, _b| a, 0.3, Point::new(0.5, 0.0), Point::new(0.85, 0.0), 64).is_err());
    }
}
