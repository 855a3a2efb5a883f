//! Argument and config-file types. Every subcommand's arguments double as
//! the body of a `run --config` file, so flags and JSON share one schema.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use pluri_core::arcs::UnitCircleSet;
use pluri_core::grid::{AnnulusShape, DiscShape, EllipseShape, GridDomain, HalfDiscShape, Shape, SolveOptions};
use pluri_core::Point;
use serde::Deserialize;

use crate::CliError;

/// Reads a JSON argument given inline or as `@path`.
fn json_arg<T: for<'de> Deserialize<'de>>(s: &str, what: &str) -> Result<T, String> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{what}: cannot read {path}: {e}"))?,
        None => s.to_owned(),
    };
    serde_json::from_str(&text).map_err(|e| format!("{what}: {e}"))
}

/// `{"arcs": [[a, b], ...]}`, each arc running counterclockwise from `a`
/// to `b` (radians).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub arcs: Vec<[f64; 2]>,
}

impl SetSpec {
    pub fn to_set(&self) -> Result<UnitCircleSet, CliError> {
        let iv: Vec<(f64, f64)> = self.arcs.iter().map(|a| (a[0], a[1])).collect();
        UnitCircleSet::from_intervals(&iv).map_err(|e| CliError::Config(format!("arcs: {e}")))
    }
}

impl FromStr for SetSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        json_arg(s, "set")
    }
}

/// A complex number, `re,im` on the command line and `[re, im]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(from = "[f64; 2]")]
pub struct PointArg(pub Point);

impl From<[f64; 2]> for PointArg {
    fn from(p: [f64; 2]) -> Self {
        PointArg(Point::new(p[0], p[1]))
    }
}

impl FromStr for PointArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s.split_once(',').ok_or_else(|| format!("expected re,im, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(PointArg(Point::new(parse(re)?, parse(im)?)))
    }
}

impl fmt::Display for PointArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

/// Planar domains with their boundary data.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    /// Disc (unit by default) whose boundary set is given by angles.
    Disc {
        #[serde(default)]
        center: Option<[f64; 2]>,
        #[serde(default)]
        radius: Option<f64>,
        #[serde(default)]
        arcs: Vec<[f64; 2]>,
    },
    /// Disc with a closed disc removed; the hole is the target.
    Annulus {
        #[serde(default)]
        outer_center: Option<[f64; 2]>,
        #[serde(default)]
        outer_radius: Option<f64>,
        inner_center: [f64; 2],
        inner_radius: f64,
    },
    /// Axis-aligned ellipse; arcs are in the angle of the parametrization.
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        arcs: Vec<[f64; 2]>,
    },
    HalfDisc,
}

impl FromStr for DomainSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        json_arg(s, "domain")
    }
}

fn pt(p: Option<[f64; 2]>) -> Point {
    p.map(|p| Point::new(p[0], p[1])).unwrap_or_default()
}

fn arcs(a: &[[f64; 2]]) -> Result<UnitCircleSet, CliError> {
    SetSpec { arcs: a.to_vec() }.to_set()
}

impl DomainSpec {
    pub fn shape(&self) -> Result<Box<dyn Shape>, CliError> {
        let cfg = |e: pluri_core::Error| CliError::Config(format!("domain: {e}"));
        Ok(match self {
            DomainSpec::Disc { center, radius, arcs: a } => {
                Box::new(DiscShape::new(pt(*center), radius.unwrap_or(1.0), arcs(a)?).map_err(cfg)?)
            }
            DomainSpec::Annulus {
                outer_center,
                outer_radius,
                inner_center,
                inner_radius,
            } => Box::new(
                AnnulusShape::new(
                    pt(*outer_center),
                    outer_radius.unwrap_or(1.0),
                    pt(Some(*inner_center)),
                    *inner_radius,
                )
                .map_err(cfg)?,
            ),
            DomainSpec::Ellipse { a, b, arcs: s } => Box::new(EllipseShape::new(*a, *b, arcs(s)?).map_err(cfg)?),
            DomainSpec::HalfDisc => Box::new(HalfDiscShape),
        })
    }

    pub fn grid(&self, h: f64) -> Result<GridDomain, CliError> {
        check_h(h)?;
        let shape = self.shape()?;
        GridDomain::from_shape(shape.as_ref(), h).map_err(|e| CliError::Config(format!("domain: {e}")))
    }
}

pub fn check_h(h: f64) -> Result<(), CliError> {
    if h > 0.0 && h <= 0.25 {
        Ok(())
    } else {
        Err(CliError::Config(format!("h: {h} is outside (0, 0.25]")))
    }
}

/// A simply connected piece of a domain: the whole domain, or the
/// component of `{ω < 1 − δ}` containing `point`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub domain: DomainSpec,
    #[serde(default = "defaults::map_h")]
    pub h: f64,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub point: Option<[f64; 2]>,
}

impl FromStr for ComponentSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        json_arg(s, "component")
    }
}

pub mod defaults {
    pub fn grid() -> usize {
        64
    }
    pub fn h() -> f64 {
        1.0 / 64.0
    }
    pub fn map_h() -> f64 {
        1.0 / 128.0
    }
    pub fn tol() -> f64 {
        1e-11
    }
    pub fn max_sweeps() -> usize {
        1_000_000
    }
    pub fn slice_n() -> usize {
        256
    }
    pub fn carleman_tol() -> f64 {
        1e-6
    }
    pub fn schedule() -> Vec<u32> {
        (0..=8).map(|k| 1u32 << k).collect()
    }
    pub fn min_nodes() -> usize {
        64
    }
    pub fn max_nodes() -> usize {
        4096
    }
    pub fn hartogs_r() -> f64 {
        0.3
    }
    pub fn hartogs_nodes() -> usize {
        4096
    }
    pub fn suite() -> String {
        "all".into()
    }
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaDiscArgs {
    /// Boundary set B: JSON `{"arcs": [[a, b], ...]}` or `@file`.
    #[arg(long)]
    pub set: SetSpec,
    /// Lattice points per unit length; the lattice is `k/grid`, `|k| ≤ grid`.
    #[arg(long, default_value_t = defaults::grid())]
    #[serde(default = "defaults::grid")]
    pub grid: usize,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaGridArgs {
    /// Domain: JSON with a `shape` of disc, annulus, ellipse or half_disc.
    #[arg(long)]
    pub domain: DomainSpec,
    #[arg(long, default_value_t = defaults::h())]
    #[serde(default = "defaults::h")]
    pub h: f64,
    /// Stop when the largest update falls below this.
    #[arg(long, default_value_t = defaults::tol())]
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[arg(long, default_value_t = defaults::max_sweeps())]
    #[serde(default = "defaults::max_sweeps")]
    pub max_sweeps: usize,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub pgm: Option<PathBuf>,
}

impl OmegaGridArgs {
    pub fn solve_options(&self) -> Result<SolveOptions, CliError> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol: {} is outside (0, 1)", self.tol)));
        }
        if self.max_sweeps == 0 {
            return Err(CliError::Config("max_sweeps: must be positive".into()));
        }
        Ok(SolveOptions {
            tol: self.tol,
            max_sweeps: self.max_sweeps,
            ..SolveOptions::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossEnvelopeArgs {
    /// Boundary set A of the first disc.
    #[arg(long)]
    pub a: SetSpec,
    /// Boundary set B of the second disc.
    #[arg(long)]
    pub b: SetSpec,
    /// Fix z and slice over w.
    #[arg(long, conflicts_with = "fix_w")]
    #[serde(default)]
    pub fix_z: Option<PointArg>,
    /// Fix w and slice over z.
    #[arg(long)]
    #[serde(default)]
    pub fix_w: Option<PointArg>,
    /// Slice resolution per side.
    #[arg(long, default_value_t = defaults::slice_n())]
    #[serde(default = "defaults::slice_n")]
    pub n: usize,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendArgs {
    /// const1, zw, exp_zw, exp_z_plus_w or cauchy2.
    #[arg(long)]
    pub function: String,
    #[arg(long)]
    pub a: SetSpec,
    #[arg(long)]
    pub b: SetSpec,
    #[arg(long, allow_hyphen_values = true)]
    pub z: PointArg,
    #[arg(long, allow_hyphen_values = true)]
    pub w: PointArg,
    /// Consecutive-gap tolerance of the N schedule.
    #[arg(long, default_value_t = defaults::carleman_tol())]
    #[serde(default = "defaults::carleman_tol")]
    pub tol: f64,
    /// Comma-separated, strictly increasing N values.
    #[arg(long, value_delimiter = ',', default_values_t = defaults::schedule())]
    #[serde(default = "defaults::schedule")]
    pub schedule: Vec<u32>,
    #[arg(long, default_value_t = defaults::min_nodes())]
    #[serde(default = "defaults::min_nodes")]
    pub min_nodes: usize,
    #[arg(long, default_value_t = defaults::max_nodes())]
    #[serde(default = "defaults::max_nodes")]
    pub max_nodes: usize,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HartogsArgs {
    /// Any name accepted by `extend`.
    #[arg(long)]
    pub function: String,
    /// Hartogs figure parameter.
    #[arg(long, default_value_t = defaults::hartogs_r())]
    #[serde(default = "defaults::hartogs_r")]
    pub r: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z1: PointArg,
    #[arg(long, allow_hyphen_values = true)]
    pub z2: PointArg,
    #[arg(long, default_value_t = defaults::hartogs_nodes())]
    #[serde(default = "defaults::hartogs_nodes")]
    pub nodes: usize,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiemannMapArgs {
    /// `{"domain": ..., "h": ..., "delta": ..., "point": [x, y]}` or `@file`.
    #[arg(long)]
    pub component: ComponentSpec,
    #[arg(long, allow_hyphen_values = true)]
    pub center: PointArg,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// `all` or comma-separated criterion numbers.
    #[arg(long, default_value_t = defaults::suite())]
    #[serde(default = "defaults::suite")]
    pub suite: String,
    /// JSON report file.
    #[arg(long)]
    #[serde(default)]
    pub report: Option<PathBuf>,
}

/// The body of a `run --config` file: `{"command": "<subcommand>", ...}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    OmegaDisc(OmegaDiscArgs),
    OmegaGrid(OmegaGridArgs),
    CrossEnvelope(CrossEnvelopeArgs),
    Extend(ExtendArgs),
    Hartogs(HartogsArgs),
    RiemannMap(RiemannMapArgs),
    Verify(VerifyArgs),
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config: {e}")))
    }
}
