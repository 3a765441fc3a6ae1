//! Finite-difference derivatives of CFs, radial moments and the constraint
//! suite every particle CF has to satisfy.

use std::f64::consts::PI;
use std::fmt;

use crate::cf::{analytic_cf, PiecewiseCf};
use crate::error::{Error, Result};
use crate::geometry::{Rg2Source, SolidSpec};
use crate::quadrature::{gauss_legendre, integrate_panels};

/// First-derivative step relative to `dmax`.
pub const FIRST_ORDER_STEP: f64 = 1e-5;
/// Second-derivative step relative to `dmax`; `ε/h²` roundoff rules out `1e-5`.
pub const SECOND_ORDER_STEP: f64 = 1e-4;
/// Central stencils are refused this close to an interior breakpoint.
pub const BREAKPOINT_EXCLUSION: f64 = 1e-7;
/// Within this many steps of a breakpoint the stencil turns one-sided.
pub const ONE_SIDED_REACH: f64 = 10.0;

pub const MOMENT_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Central stencil, one-sided away from a nearby breakpoint.
    Auto,
    Left,
    Right,
}

fn step(cf: &PiecewiseCf, order: Order) -> f64 {
    cf.dmax()
        * match order {
            Order::First => FIRST_ORDER_STEP,
            Order::Second => SECOND_ORDER_STEP,
        }
}

fn central(f: impl Fn(f64) -> f64, r: f64, h: f64, order: Order) -> f64 {
    let (m2, m1, p1, p2) = (f(r - 2.0 * h), f(r - h), f(r + h), f(r + 2.0 * h));
    match order {
        Order::First => (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
        Order::Second => (-m2 + 16.0 * m1 - 30.0 * f(r) + 16.0 * p1 - p2) / (12.0 * h * h),
    }
}

/// Four-point one-sided stencil; `dir = 1` looks right, `-1` looks left.
fn one_sided(f: impl Fn(f64) -> f64, r: f64, h: f64, dir: f64, order: Order) -> f64 {
    let s = dir * h;
    let (f0, f1, f2, f3) = (f(r), f(r + s), f(r + 2.0 * s), f(r + 3.0 * s));
    match order {
        Order::First => (-11.0 * f0 + 18.0 * f1 - 9.0 * f2 + 2.0 * f3) / (6.0 * s),
        Order::Second => (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h),
    }
}

/// `γ′(r)` or `γ″(r)` by finite differences.
///
/// One-sided stencils evaluate the branch on the requested side, so
/// `Side::Left` at a breakpoint returns the left limit even though `γ(b)`
/// itself belongs to the branch on the right.
pub fn cf_derivative(cf: &PiecewiseCf, r: f64, order: Order, side: Side) -> Result<f64> {
    let dmax = cf.dmax();
    let in_range = match side {
        Side::Auto => r > 0.0 && r < dmax,
        Side::Left => r > 0.0 && r <= dmax,
        Side::Right => r >= 0.0 && r < dmax,
    };
    if !in_range {
        return Err(Error::Domain {
            what: "r",
            requirement: "inside (0, dmax) or on the side requested",
            value: r,
        });
    }
    let h = step(cf, order);
    let piece_eval = |piece: usize| move |x: f64| piece_value(cf, piece, x);

    match side {
        Side::Left => {
            let piece = cf.piece_index(r - h).unwrap_or(0);
            Ok(one_sided(piece_eval(piece), r, h, -1.0, order))
        }
        Side::Right => {
            let piece = cf.piece_index(r + h).unwrap_or(0);
            Ok(one_sided(piece_eval(piece), r, h, 1.0, order))
        }
        Side::Auto => {
            let nearest = cf
                .breakpoints()
                .iter()
                .copied()
                .min_by(|a, b| (a - r).abs().total_cmp(&(b - r).abs()))
                .expect("at least two breakpoints");
            let distance = (r - nearest).abs();
            let interior = nearest > 0.0 && nearest < dmax;
            if interior && distance < BREAKPOINT_EXCLUSION {
                return Err(Error::NearBreakpoint {
                    r,
                    breakpoint: nearest,
                    band: BREAKPOINT_EXCLUSION,
                });
            }
            if distance <= ONE_SIDED_REACH * h {
                let dir = if r > nearest { 1.0 } else { -1.0 };
                let piece = cf.piece_index(r + dir * h).unwrap_or(0);
                Ok(one_sided(piece_eval(piece), r, h, dir, order))
            } else {
                Ok(central(|x| cf.value(x), r, h, order))
            }
        }
    }
}

fn piece_value(cf: &PiecewiseCf, piece: usize, x: f64) -> f64 {
    let bp = cf.breakpoints();
    // stay on the branch's closed interval; beyond dmax γ vanishes
    if x > cf.dmax() {
        return 0.0;
    }
    cf.eval_piece(piece, x.clamp(bp[piece], bp[piece + 1]))
        .unwrap_or_else(|_| cf.value(x))
}

/// `4π ∫₀^dmax r^power γ(r) dr`, one 64-point Gauss panel per branch.
pub fn moment_integral(cf: &PiecewiseCf, power: i32) -> f64 {
    let rule = gauss_legendre(MOMENT_NODES);
    let bp = cf.breakpoints();
    let mut total = 0.0;
    for piece in 0..cf.piece_count() {
        let mut f = |r: f64| r.powi(power) * piece_value(cf, piece, r);
        total += integrate_panels(&rule, bp[piece], bp[piece + 1], 1, &mut f);
    }
    4.0 * PI * total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    GammaAt0,
    SlopeAt0,
    GammaAtDmax,
    SlopeAtDmax,
    VolumeMoment,
    GyrationMoment,
}

impl Constraint {
    pub const ALL: [Constraint; 6] = [
        Constraint::GammaAt0,
        Constraint::SlopeAt0,
        Constraint::GammaAtDmax,
        Constraint::SlopeAtDmax,
        Constraint::VolumeMoment,
        Constraint::GyrationMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::GammaAt0 => "gamma_at_0",
            Constraint::SlopeAt0 => "slope_at_0",
            Constraint::GammaAtDmax => "gamma_at_dmax",
            Constraint::SlopeAtDmax => "slope_at_dmax",
            Constraint::VolumeMoment => "volume_moment",
            Constraint::GyrationMoment => "gyration_moment",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Absolute tolerances, except where marked relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub gamma_at_0: f64,
    pub slope_at_0: f64,
    pub gamma_at_dmax: f64,
    pub slope_at_dmax: f64,
    /// Relative to `V`.
    pub volume_moment: f64,
    /// Relative to `2 R_G² V`; widened to three propagated Monte-Carlo
    /// standard errors when those are larger.
    pub gyration_moment: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gamma_at_0: 0.0,
            slope_at_0: 1e-12,
            gamma_at_dmax: 1e-9,
            slope_at_dmax: 1e-5,
            volume_moment: 1e-8,
            gyration_moment: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintRecord {
    pub constraint: Constraint,
    pub expected: f64,
    pub actual: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ConstraintRecord {
    fn new(constraint: Constraint, expected: f64, actual: f64, tolerance: f64) -> Self {
        let abs_error = (actual - expected).abs();
        ConstraintRecord {
            constraint,
            expected,
            actual,
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub solid: SolidSpec,
    pub records: Vec<ConstraintRecord>,
}

impl ConstraintReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn get(&self, constraint: Constraint) -> Option<&ConstraintRecord> {
        self.records.iter().find(|r| r.constraint == constraint)
    }

    /// Seed and sample count behind the gyration radius, if stochastic.
    pub fn rg2_provenance(&self) -> Option<(u64, u64)> {
        match self.solid.rg2_source {
            Rg2Source::MonteCarlo(est) => Some((est.seed, est.n_samples)),
            Rg2Source::ClosedForm => None,
        }
    }
}

/// Checks the six moment and endpoint constraints for the solid's analytic CF.
pub fn validate_constraints(
    solid: &SolidSpec,
    tolerances: &Tolerances,
) -> Result<ConstraintReport> {
    let cf = analytic_cf(solid)?;
    validate_cf(solid, &cf, tolerances)
}

/// As [`validate_constraints`] for an arbitrary CF of `solid`.
pub fn validate_cf(
    solid: &SolidSpec,
    cf: &PiecewiseCf,
    tolerances: &Tolerances,
) -> Result<ConstraintReport> {
    let slope_0 = cf
        .initial_slope()
        .ok_or_else(|| Error::NoAnalyticCf(solid.kind.name()))?;
    let dmax = cf.dmax();
    let slope_dmax = cf_derivative(cf, dmax, Order::First, Side::Left)?;

    let volume = solid.volume;
    let gyration = 2.0 * solid.rg2 * volume;
    let gyration_tol =
        (tolerances.gyration_moment * gyration).max(3.0 * 2.0 * volume * solid.rg2_source.stderr());

    let records = vec![
        ConstraintRecord::new(
            Constraint::GammaAt0,
            1.0,
            cf.value(0.0),
            tolerances.gamma_at_0,
        ),
        ConstraintRecord::new(
            Constraint::SlopeAt0,
            -solid.surface / (4.0 * volume),
            slope_0,
            tolerances.slope_at_0,
        ),
        ConstraintRecord::new(
            Constraint::GammaAtDmax,
            0.0,
            cf.value(dmax),
            tolerances.gamma_at_dmax,
        ),
        ConstraintRecord::new(
            Constraint::SlopeAtDmax,
            0.0,
            slope_dmax,
            tolerances.slope_at_dmax,
        ),
        ConstraintRecord::new(
            Constraint::VolumeMoment,
            volume,
            moment_integral(cf, 2),
            tolerances.volume_moment * volume,
        ),
        ConstraintRecord::new(
            Constraint::GyrationMoment,
            gyration,
            moment_integral(cf, 4),
            gyration_tol,
        ),
    ];
    Ok(ConstraintReport {
        solid: *solid,
        records,
    })
}
