//! Exact correlation functions `γ(r)` of the regular tetrahedron,
//! the regular octahedron and the ball, plus Monte-Carlo tabulated CFs for
//! shapes without a closed form.
//!
//! The closed forms are stated for unit edge (unit diameter for the ball).
//! A solid of edge `L` has `γ_L(r) = γ(r / L)`, which is how [`cf_for`]
//! rescales them.

mod helpers;
mod laurent;
mod octahedron;
mod tetrahedron;

use std::sync::{Arc, LazyLock};

pub use helpers::{eval_helper, HelperId, SQRT_CLAMP};

use crate::error::{Error, Result};
use crate::geometry::{SolidKind, SolidSpec};
use crate::mc::{self, CurvePoint, McConfig};

/// Half-width of the band around a branch endpoint where diverging
/// arctangent arguments are replaced by their one-sided limits.
pub const GUARD_BAND: f64 = 1e-9;

/// Angles and unit-edge metrics entering the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfConstants {
    /// `arccos(1/3)`
    pub alpha_t: f64,
    /// `arccos(−1/3)`
    pub alpha_o: f64,
    pub surface_t: f64,
    pub volume_t: f64,
    pub surface_o: f64,
    pub volume_o: f64,
}

impl CfConstants {
    pub fn get() -> &'static CfConstants {
        static CONSTANTS: LazyLock<CfConstants> = LazyLock::new(|| {
            let sqrt3 = 3f64.sqrt();
            let sqrt2 = std::f64::consts::SQRT_2;
            CfConstants {
                alpha_t: (1.0f64 / 3.0).acos(),
                alpha_o: (-1.0f64 / 3.0).acos(),
                surface_t: sqrt3,
                volume_t: 1.0 / (6.0 * sqrt2),
                surface_o: 2.0 * sqrt3,
                volume_o: sqrt2 / 3.0,
            }
        });
        &CONSTANTS
    }
}

fn check_abscissa(r: f64) -> Result<()> {
    if r >= 0.0 && !r.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "r",
            requirement: "non-negative",
            value: r,
        })
    }
}

/// Index `i` with `b[i] ≤ r < b[i+1]`; the last interval is closed.
fn locate(breakpoints: &[f64], r: f64) -> Option<usize> {
    let last = *breakpoints.last()?;
    if r > last || r < breakpoints[0] {
        return None;
    }
    let pieces = breakpoints.len() - 1;
    let upper = breakpoints.partition_point(|&b| b <= r);
    Some(upper.saturating_sub(1).min(pieces - 1))
}

fn sphere_unit(r: f64) -> f64 {
    1.0 - 1.5 * r + 0.5 * r * r * r
}

/// Unit-edge regular tetrahedron CF.
pub fn cf_tetrahedron(r: f64) -> Result<f64> {
    check_abscissa(r)?;
    Ok(Analytic::Tetrahedron.value(r))
}

/// Unit-edge regular octahedron CF.
pub fn cf_octahedron(r: f64) -> Result<f64> {
    check_abscissa(r)?;
    Ok(Analytic::Octahedron.value(r))
}

/// CF of the unit-diameter ball, `1 − 3r/2 + r³/2` on `[0, 1]`.
pub fn cf_sphere(r: f64) -> Result<f64> {
    check_abscissa(r)?;
    Ok(Analytic::Sphere.value(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Analytic {
    Tetrahedron,
    Octahedron,
    Sphere,
}

impl Analytic {
    fn breakpoints(self) -> &'static [f64] {
        match self {
            Analytic::Tetrahedron => &tetrahedron::BREAKPOINTS[..],
            Analytic::Octahedron => &octahedron::BREAKPOINTS[..],
            Analytic::Sphere => &[0.0, 1.0],
        }
    }

    fn inner_cubic(self) -> [f64; 4] {
        match self {
            Analytic::Tetrahedron => tetrahedron::inner_cubic(),
            Analytic::Octahedron => octahedron::inner_cubic(),
            Analytic::Sphere => [1.0, -1.5, 0.0, 0.5],
        }
    }

    fn eval_piece(self, piece: usize, r: f64) -> f64 {
        match self {
            Analytic::Tetrahedron => tetrahedron::eval_piece(piece, r),
            Analytic::Octahedron => octahedron::eval_piece(piece, r),
            Analytic::Sphere => sphere_unit(r),
        }
    }

    fn value(self, r: f64) -> f64 {
        match locate(self.breakpoints(), r) {
            Some(piece) => self.eval_piece(piece, r),
            None => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Model {
    Analytic(Analytic),
    /// Linear interpolation between raw Monte-Carlo estimates.
    Tabulated(Arc<[CurvePoint]>),
}

/// A solid's CF as ordered breakpoints plus one evaluator per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCf {
    kind: SolidKind,
    model: Model,
    /// Edge (or diameter) of the described solid; `r / scale` is the unit-solid argument.
    scale: f64,
    dmax: f64,
    breakpoints: Vec<f64>,
    piece_offset: Option<(usize, f64)>,
}

impl PiecewiseCf {
    fn analytic(kind: SolidKind, shape: Analytic, scale: f64, dmax: f64) -> Self {
        let mut breakpoints: Vec<f64> = shape.breakpoints().iter().map(|b| b * scale).collect();
        if let Some(last) = breakpoints.last_mut() {
            *last = dmax;
        }
        PiecewiseCf {
            kind,
            model: Model::Analytic(shape),
            scale,
            dmax,
            breakpoints,
            piece_offset: None,
        }
    }

    /// Wraps a Monte-Carlo table sorted by `r` and starting at `r = 0`.
    pub fn from_table(kind: SolidKind, table: Vec<CurvePoint>, dmax: f64) -> Result<Self> {
        if table.len() < 2 || table[0].x != 0.0 {
            return Err(Error::Contract(
                "a tabulated CF needs at least two points starting at r = 0".into(),
            ));
        }
        if table.windows(2).any(|w| w[1].x <= w[0].x) {
            return Err(Error::Contract("tabulated abscissae must increase".into()));
        }
        let mut breakpoints: Vec<f64> = table.iter().map(|p| p.x).collect();
        let mut points = table;
        let last = *breakpoints.last().expect("non-empty");
        if last < dmax {
            breakpoints.push(dmax);
            points.push(CurvePoint::new(dmax, 0.0));
        }
        Ok(PiecewiseCf {
            kind,
            model: Model::Tabulated(points.into()),
            scale: 1.0,
            dmax,
            breakpoints,
            piece_offset: None,
        })
    }

    pub fn kind(&self) -> SolidKind {
        self.kind
    }

    pub fn dmax(&self) -> f64 {
        self.dmax
    }

    /// Exact branch abscissae, `0` first and `dmax` last.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Interior breakpoints only.
    pub fn interior_breakpoints(&self) -> &[f64] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn piece_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.model, Model::Analytic(_))
    }

    /// Raw table behind a Monte-Carlo CF.
    pub fn table(&self) -> Option<&[CurvePoint]> {
        match &self.model {
            Model::Tabulated(points) => Some(points),
            Model::Analytic(_) => None,
        }
    }

    /// `γ′(0)` from the exact innermost cubic; `None` for tabulated CFs.
    pub fn initial_slope(&self) -> Option<f64> {
        match self.model {
            Model::Analytic(shape) => Some(shape.inner_cubic()[1] / self.scale),
            Model::Tabulated(_) => None,
        }
    }

    /// Copy with `offset` added to one branch; used to probe how sensitive
    /// the constraint checks are.
    pub fn with_piece_offset(mut self, piece: usize, offset: f64) -> Self {
        self.piece_offset = Some((piece, offset));
        self
    }

    /// Branch containing `r` under half-open interval selection.
    pub fn piece_index(&self, r: f64) -> Option<usize> {
        locate(&self.breakpoints, r)
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        check_abscissa(r)?;
        Ok(self.value(r))
    }

    /// `γ(r)` for `r ≥ 0`, zero beyond `dmax`.
    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        match locate(&self.breakpoints, r) {
            Some(piece) => self.piece_value(piece, r),
            None => 0.0,
        }
    }

    /// Evaluates branch `piece` anywhere on its closed interval, including
    /// the right endpoint owned by the next branch.
    pub fn eval_piece(&self, piece: usize, r: f64) -> Result<f64> {
        if piece >= self.piece_count() {
            return Err(Error::Contract(format!(
                "piece {piece} out of range for {} pieces",
                self.piece_count()
            )));
        }
        let (lo, hi) = (self.breakpoints[piece], self.breakpoints[piece + 1]);
        if !(lo..=hi).contains(&r) {
            return Err(Error::Domain {
                what: "r",
                requirement: "inside the branch interval",
                value: r,
            });
        }
        Ok(self.piece_value(piece, r))
    }

    #[inline]
    fn piece_value(&self, piece: usize, r: f64) -> f64 {
        let base = match &self.model {
            Model::Analytic(shape) => {
                let unit = if piece + 1 == self.piece_count() && r == self.dmax {
                    shape.breakpoints()[piece + 1]
                } else {
                    r / self.scale
                };
                shape.eval_piece(piece, unit)
            }
            Model::Tabulated(points) => {
                let (a, b) = (&points[piece], &points[piece + 1]);
                let t = (r - a.x) / (b.x - a.x);
                a.value + t * (b.value - a.value)
            }
        };
        match self.piece_offset {
            Some((p, offset)) if p == piece => base + offset,
            _ => base,
        }
    }
}

/// Settings for Monte-Carlo tabulation of CFs without a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TabulationConfig {
    pub points: usize,
    pub mc: McConfig,
}

impl Default for TabulationConfig {
    fn default() -> Self {
        TabulationConfig {
            points: 101,
            mc: McConfig::new(100_000, 0),
        }
    }
}

/// CF of `solid`, rescaled to its size; cube and cylinder are tabulated
/// by Monte Carlo with [`TabulationConfig::default`].
pub fn cf_for(solid: &SolidSpec) -> PiecewiseCf {
    cf_for_with(solid, &TabulationConfig::default()).expect("default tabulation settings are valid")
}

pub fn cf_for_with(solid: &SolidSpec, tabulation: &TabulationConfig) -> Result<PiecewiseCf> {
    let shape = match solid.kind {
        SolidKind::Tetrahedron => Analytic::Tetrahedron,
        SolidKind::Octahedron => Analytic::Octahedron,
        SolidKind::Sphere => Analytic::Sphere,
        SolidKind::Cube | SolidKind::Cylinder => {
            let n = tabulation.points.max(2);
            let grid: Vec<f64> = (0..n)
                .map(|i| solid.dmax * i as f64 / (n - 1) as f64)
                .collect();
            let table = mc::tabulate_cf(solid, &grid, &tabulation.mc)?;
            return PiecewiseCf::from_table(solid.kind, table, solid.dmax);
        }
    };
    Ok(PiecewiseCf::analytic(
        solid.kind, shape, solid.edge, solid.dmax,
    ))
}

/// Analytic CF only; errors for shapes that would need Monte Carlo.
pub fn analytic_cf(solid: &SolidSpec) -> Result<PiecewiseCf> {
    if solid.kind.has_analytic_cf() {
        cf_for_with(solid, &TabulationConfig::default())
    } else {
        Err(Error::NoAnalyticCf(solid.kind.name()))
    }
}
