use std::error::Error as StdError;
use std::str::FromStr;

use platonic_cf::calculus::{self, Order, Side, Tolerances};
use platonic_cf::cf::{cf_for_with, TabulationConfig};
use platonic_cf::geometry::{scale_to_unit_dmax, Rg2Source};
use platonic_cf::mc::tabulate_cf;
use platonic_cf::scattering::{self, IntensityCurve, SizeDistribution};
use platonic_cf::{solid_metrics, McConfig, PiecewiseCf, SolidKind, SolidSpec};

use crate::args::{
    CfArgs, CompareArgs, CompareWhat, CurveFlags, IntensityArgs, McArgs, PolydisperseArgs,
    QGridArgs, ValidateArgs,
};
use crate::output::{emit, number, Csv};

pub type CmdResult = Result<Outcome, Box<dyn StdError>>;

pub enum Outcome {
    Success,
    ValidationFailed,
}

fn usage(msg: impl Into<String>) -> Box<dyn StdError> {
    msg.into().into()
}

fn linear_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>, Box<dyn StdError>> {
    if n < 2 {
        return Err(usage(format!("grid needs at least 2 points, got {n}")));
    }
    if !min.is_finite() || !max.is_finite() || min >= max {
        return Err(usage(format!("grid needs min < max, got [{min}, {max}]")));
    }
    let mut grid: Vec<f64> = (0..n)
        .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
        .collect();
    grid[n - 1] = max;
    Ok(grid)
}

fn q_grid(g: &QGridArgs) -> Result<Vec<f64>, Box<dyn StdError>> {
    if !g.log {
        return linear_grid(g.qmin, g.qmax, g.n);
    }
    if g.qmin.is_nan() || g.qmin <= 0.0 {
        return Err(usage("a logarithmic grid needs qmin > 0"));
    }
    let mut grid: Vec<f64> = linear_grid(g.qmin.ln(), g.qmax.ln(), g.n)?
        .into_iter()
        .map(f64::exp)
        .collect();
    grid[0] = g.qmin;
    grid[g.n - 1] = g.qmax;
    Ok(grid)
}

fn solid(kind: SolidKind, edge: f64, normalize_dmax: bool) -> Result<SolidSpec, Box<dyn StdError>> {
    let spec = solid_metrics(kind, edge)?;
    Ok(if normalize_dmax {
        scale_to_unit_dmax(&spec)
    } else {
        spec
    })
}

fn mc_config(args: &McArgs) -> Result<McConfig, Box<dyn StdError>> {
    let seed = args
        .seed
        .ok_or_else(|| usage("Monte-Carlo estimates need --seed"))?;
    Ok(McConfig::new(args.samples, seed).with_workers(args.workers))
}

/// Analytic CF, or a Monte-Carlo table for shapes without one.
fn cf_of(
    spec: &SolidSpec,
    mc: &McArgs,
    table_points: usize,
) -> Result<PiecewiseCf, Box<dyn StdError>> {
    let tabulation = if spec.kind.has_analytic_cf() {
        TabulationConfig::default()
    } else {
        TabulationConfig {
            points: table_points,
            mc: mc_config(mc)?,
        }
    };
    Ok(cf_for_with(spec, &tabulation)?)
}

fn describe(spec: &SolidSpec) -> String {
    format!(
        "{}: edge={} dmax={} volume={} surface={}",
        spec.kind, spec.edge, spec.dmax, spec.volume, spec.surface
    )
}

/// One-sided at the ends of the support; left limits at breakpoints.
fn derivative(cf: &PiecewiseCf, r: f64, order: Order) -> platonic_cf::Result<f64> {
    let dmax = cf.dmax();
    if r > dmax {
        return Ok(0.0);
    }
    let side = if r <= 0.0 {
        Side::Right
    } else if r >= dmax {
        Side::Left
    } else {
        Side::Auto
    };
    calculus::cf_derivative(cf, r, order, side)
        .or_else(|_| calculus::cf_derivative(cf, r, order, Side::Left))
}

pub fn cf(a: &CfArgs, invocation: &str) -> CmdResult {
    let kind = SolidKind::from(a.solid);
    if !kind.has_analytic_cf() && !a.mc {
        return Err(usage(format!(
            "{kind} has no closed-form CF; pass --mc and --seed"
        )));
    }
    if a.mc && a.derivatives {
        return Err(usage("--derivatives needs the analytic CF, not --mc"));
    }
    let spec = solid(kind, a.shape.edge, a.shape.normalize_dmax)?;
    let grid = linear_grid(a.rmin, a.rmax.unwrap_or(spec.dmax), a.n)?;

    if a.mc {
        let cfg = mc_config(&a.mc_args)?;
        let table = tabulate_cf(&spec, &grid, &cfg)?;
        let mut csv = Csv::new(invocation, Some(cfg.seed));
        csv.comment(&describe(&spec));
        csv.comment(&format!(
            "samples per point: {} workers: {}",
            cfg.samples, cfg.workers
        ));
        csv.columns(&["r", "gamma", "stderr"]);
        for p in &table {
            csv.row(&[p.x, p.value, p.stderr.unwrap_or(0.0)]);
        }
        csv.write_to(a.out.output.as_deref())?;
        return Ok(Outcome::Success);
    }

    let cf = cf_of(&spec, &a.mc_args, 0)?;
    let mut csv = Csv::new(invocation, None);
    csv.comment(&describe(&spec));
    if a.derivatives {
        csv.comment("derivatives at breakpoints are left limits");
        csv.columns(&["r", "gamma", "dgamma", "d2gamma"]);
    } else {
        csv.columns(&["r", "gamma"]);
    }
    for &r in &grid {
        let g = cf.eval(r)?;
        if a.derivatives {
            let d1 = derivative(&cf, r, Order::First)?;
            let d2 = derivative(&cf, r, Order::Second)?;
            csv.row(&[r, g, d1, d2]);
        } else {
            csv.row(&[r, g]);
        }
    }
    csv.write_to(a.out.output.as_deref())?;
    Ok(Outcome::Success)
}

pub fn validate(a: &ValidateArgs, invocation: &str) -> CmdResult {
    let spec = solid(a.solid.into(), a.edge, false)?;
    let d = Tolerances::default();
    let tol = Tolerances {
        gamma_at_0: a.tol_gamma0.unwrap_or(d.gamma_at_0),
        slope_at_0: a.tol_slope0.unwrap_or(d.slope_at_0),
        gamma_at_dmax: a.tol_gamma_dmax.unwrap_or(d.gamma_at_dmax),
        slope_at_dmax: a.tol_slope_dmax.unwrap_or(d.slope_at_dmax),
        volume_moment: a.tol_volume.unwrap_or(d.volume_moment),
        gyration_moment: a.tol_gyration.unwrap_or(d.gyration_moment),
    };
    let report = calculus::validate_constraints(&spec, &tol)?;

    let mut text = String::new();
    text.push_str(&format!("# command: {invocation}\n"));
    text.push_str(&format!("# version: {}\n", env!("CARGO_PKG_VERSION")));
    match spec.rg2_source {
        Rg2Source::MonteCarlo(est) => {
            text.push_str(&format!("# seed: {}\n", est.seed));
            text.push_str(&format!(
                "# rg2: monte-carlo seed={} samples={} stderr={}\n",
                est.seed,
                est.n_samples,
                number(est.stderr)
            ));
        }
        Rg2Source::ClosedForm => text.push_str("# seed: none\n# rg2: closed form\n"),
    }
    text.push_str(&format!("# {}\n", describe(&spec)));
    text.push_str("# name expected actual error tol status\n");
    for r in &report.records {
        text.push_str(&format!(
            "{} {} {} {} {} {}\n",
            r.constraint.name(),
            number(r.expected),
            number(r.actual),
            number(r.abs_error),
            number(r.tolerance),
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    emit(&text, a.out.output.as_deref())?;
    Ok(if report.all_pass() {
        Outcome::Success
    } else {
        Outcome::ValidationFailed
    })
}

/// `curve` divided by `I(0)`, evaluated separately when the grid starts
/// above zero.
fn scaled_to_q0(cf: &PiecewiseCf, curve: &IntensityCurve) -> platonic_cf::Result<Vec<f64>> {
    if curve.q.first().is_some_and(|&q| q < 1e-6) {
        return Ok(scattering::normalize_curve(curve)?.values);
    }
    let i0 = scattering::intensity(cf, 0.0)?;
    Ok(curve.values.iter().map(|v| v / i0).collect())
}

/// Value columns for one curve: `I[, q4I][, normalized]`.
fn curve_columns(
    cf: &PiecewiseCf,
    curve: &IntensityCurve,
    flags: &CurveFlags,
    label: &str,
    suffix: &str,
) -> platonic_cf::Result<Vec<(String, Vec<f64>)>> {
    let mut cols = vec![(format!("{label}{suffix}"), curve.values.clone())];
    if flags.porod {
        cols.push((
            format!("q4I{suffix}"),
            scattering::porod_curve(curve)?.values,
        ));
    }
    if flags.scale_q0 {
        cols.push((format!("normalized{suffix}"), scaled_to_q0(cf, curve)?));
    }
    Ok(cols)
}

fn write_columns(
    mut csv: Csv,
    axis: &str,
    grid: &[f64],
    cols: &[(String, Vec<f64>)],
    out: Option<&std::path::Path>,
) -> std::io::Result<()> {
    let mut names = vec![axis.to_string()];
    names.extend(cols.iter().map(|(n, _)| n.clone()));
    csv.columns(&names);
    for (i, &x) in grid.iter().enumerate() {
        let mut row = vec![x];
        row.extend(cols.iter().map(|(_, v)| v[i]));
        csv.row(&row);
    }
    csv.write_to(out)
}

pub fn intensity(a: &IntensityArgs, invocation: &str) -> CmdResult {
    let grid = q_grid(&a.grid)?;
    let kinds: Vec<SolidKind> = a.solid.iter().map(|&s| s.into()).collect();
    let uses_mc = kinds.iter().any(|k| !k.has_analytic_cf());
    let mut csv = Csv::new(invocation, if uses_mc { a.mc_args.seed } else { None });
    let multi = kinds.len() > 1;
    let mut cols = Vec::new();
    for &kind in &kinds {
        let spec = solid(kind, a.shape.edge, a.shape.normalize_dmax)?;
        let cf = cf_of(&spec, &a.mc_args, a.table_points)?;
        csv.comment(&describe(&spec));
        let curve = scattering::intensity_curve(&cf, &grid)?;
        let suffix = if multi {
            format!("_{kind}")
        } else {
            String::new()
        };
        cols.extend(curve_columns(&cf, &curve, &a.flags, "I", &suffix)?);
    }
    write_columns(csv, "q", &grid, &cols, a.out.output.as_deref())?;
    Ok(Outcome::Success)
}

pub fn polydisperse(a: &PolydisperseArgs, invocation: &str) -> CmdResult {
    let dist = SizeDistribution::from_str(&a.dist)?;
    let grid = q_grid(&a.grid)?;
    let spec = solid(a.solid.into(), a.edge, false)?;
    let cf = cf_of(
        &spec,
        &McArgs {
            samples: 0,
            seed: None,
            workers: 1,
        },
        0,
    )?;
    let curve = scattering::polydisperse_curve(&cf, &dist, &grid)?;

    let mut csv = Csv::new(invocation, None);
    csv.comment(&describe(&spec));
    csv.comment(&format!("distribution: {dist}"));
    let mut cols = vec![("I_poly".to_string(), curve.values.clone())];
    if a.flags.porod {
        cols.push(("q4I".into(), scattering::porod_curve(&curve)?.values));
    }
    if a.flags.scale_q0 {
        let i0 = scattering::polydisperse_intensity(&cf, &dist, 0.0)?;
        cols.push((
            "scaled".into(),
            curve.values.iter().map(|v| v / i0).collect(),
        ));
    }
    write_columns(csv, "q", &grid, &cols, a.out.output.as_deref())?;

    if let Some(path) = &a.emit_density {
        let mut d = Csv::new(invocation, None);
        d.comment(&format!("density of {dist} on [0, {}]", dist.truncation()));
        d.columns(&["d", "p"]);
        for (x, p) in dist.density_table(a.density_points) {
            d.row(&[x, p]);
        }
        d.write_to(Some(path))?;
    }
    Ok(Outcome::Success)
}

pub fn compare(a: &CompareArgs, invocation: &str) -> CmdResult {
    let cfg = mc_config(&a.mc_args)?;
    let mut csv = Csv::new(invocation, Some(cfg.seed));
    let specs = SolidKind::ALL
        .iter()
        .map(|&k| solid(k, 1.0, true))
        .collect::<Result<Vec<_>, _>>()?;
    for s in &specs {
        csv.comment(&describe(s));
    }
    let (axis, grid) = match a.what {
        CompareWhat::Cf => ("r", linear_grid(0.0, 1.0, a.n)?),
        CompareWhat::Intensity => ("q", linear_grid(0.0, a.qmax, a.n)?),
    };
    let mut cols = Vec::new();
    for spec in &specs {
        let name = spec.kind.name();
        match a.what {
            CompareWhat::Cf => {
                let values = if spec.kind.has_analytic_cf() {
                    let cf = cf_of(spec, &a.mc_args, 0)?;
                    grid.iter()
                        .map(|&r| cf.eval(r))
                        .collect::<Result<Vec<_>, _>>()?
                } else {
                    tabulate_cf(spec, &grid, &cfg)?
                        .iter()
                        .map(|p| p.value)
                        .collect()
                };
                cols.push((format!("gamma_{name}"), values));
            }
            CompareWhat::Intensity => {
                let cf = cf_of(spec, &a.mc_args, a.table_points)?;
                let curve = scattering::intensity_curve(&cf, &grid)?;
                let flags = CurveFlags {
                    porod: false,
                    scale_q0: a.scale_q0,
                };
                cols.extend(curve_columns(
                    &cf,
                    &curve,
                    &flags,
                    "I",
                    &format!("_{name}"),
                )?);
            }
        }
    }
    write_columns(csv, axis, &grid, &cols, a.out.output.as_deref())?;
    Ok(Outcome::Success)
}
