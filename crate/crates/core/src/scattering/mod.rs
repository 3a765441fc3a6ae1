//! Scattering intensities from CFs, Porod plots and size averaging.
//!
//! Normalisation: `I(q) = 4π ∫₀^dmax r² γ(r) sinc(qr) dr`, so `I(0) = V`.

mod size;

use rayon::prelude::*;

pub use size::{SizeDistribution, TAIL_FRACTION};

use crate::calculus::moment_integral;
use crate::cf::PiecewiseCf;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use size::sinc;

/// Negative quadrature output tolerated (and clamped) relative to `I(0)`.
pub const NEGATIVE_SLACK: f64 = 1e-12;
/// Fewest local maxima accepted by [`oscillation_spacing`].
pub const MIN_PEAKS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct IntensityCurve {
    pub q: Vec<f64>,
    pub values: Vec<f64>,
    /// Scaled to one at `q = 0`.
    pub normalized: bool,
}

impl IntensityCurve {
    pub fn new(q: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&q)?;
        if q.len() != values.len() {
            return Err(Error::Contract("q grid and values differ in length".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("intensity values must be finite".into()));
        }
        Ok(IntensityCurve {
            q,
            values,
            normalized: false,
        })
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Points with `lo ≤ q ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        self.q
            .iter()
            .zip(&self.values)
            .filter(|(q, _)| (lo..=hi).contains(*q))
            .map(|(q, v)| (*q, *v))
            .unzip()
    }
}

fn check_grid(q: &[f64]) -> Result<()> {
    if q.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::Contract(
            "q values must be finite and non-negative".into(),
        ));
    }
    if q.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract("q grid must be strictly increasing".into()));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if q >= 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "q",
            requirement: "finite and non-negative",
            value: q,
        })
    }
}

fn clamp_negative(cf: &PiecewiseCf, q: f64, value: f64, scale: f64) -> Result<f64> {
    if value >= 0.0 {
        return Ok(value);
    }
    let floor = -NEGATIVE_SLACK * moment_integral(cf, 2) * scale;
    if value >= floor {
        Ok(0.0)
    } else {
        Err(Error::NegativeIntensity { q, value })
    }
}

/// `I(q)` with the default panel layout.
pub fn intensity(cf: &PiecewiseCf, q: f64) -> Result<f64> {
    intensity_with(cf, q, &QuadratureSpec::default())
}

pub fn intensity_with(cf: &PiecewiseCf, q: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_q(q)?;
    let integral =
        spec.integrate_pieces(cf.breakpoints(), q, |r| r * r * cf.value(r) * sinc(q * r));
    clamp_negative(cf, q, 4.0 * std::f64::consts::PI * integral, 1.0)
}

/// Intensities on a grid, evaluated in parallel.
pub fn intensity_curve(cf: &PiecewiseCf, q_grid: &[f64]) -> Result<IntensityCurve> {
    check_grid(q_grid)?;
    let values = q_grid
        .par_iter()
        .map(|&q| intensity(cf, q))
        .collect::<Result<Vec<_>>>()?;
    IntensityCurve::new(q_grid.to_vec(), values)
}

/// Size-averaged intensity `∫ p(d) d⁶ I₁(qd) dd`, where `I₁` is the
/// intensity of `cf` itself.
pub fn polydisperse_intensity(cf: &PiecewiseCf, dist: &SizeDistribution, q: f64) -> Result<f64> {
    polydisperse_intensity_with(cf, dist, q, &QuadratureSpec::default())
}

pub fn polydisperse_intensity_with(
    cf: &PiecewiseCf,
    dist: &SizeDistribution,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_q(q)?;
    match dist {
        SizeDistribution::Mixture(parts) => parts.iter().try_fold(0.0, |acc, (w, p)| {
            Ok(acc + w * polydisperse_intensity_with(cf, p, q, spec)?)
        }),
        SizeDistribution::PointMass { size } => {
            Ok(size.powi(6) * intensity_with(cf, q * size, spec)?)
        }
        SizeDistribution::PoissonGamma { .. } => {
            let omega = q * dist.oscillation_scale();
            let integral = spec.integrate_pieces(cf.breakpoints(), omega, |r| {
                r * r * cf.value(r) * dist.smearing_kernel(q * r)
            });
            let value = 4.0 * std::f64::consts::PI * integral;
            clamp_negative(cf, q, value, dist.moment(6))
        }
    }
}

pub fn polydisperse_curve(
    cf: &PiecewiseCf,
    dist: &SizeDistribution,
    q_grid: &[f64],
) -> Result<IntensityCurve> {
    check_grid(q_grid)?;
    let values = q_grid
        .par_iter()
        .map(|&q| polydisperse_intensity(cf, dist, q))
        .collect::<Result<Vec<_>>>()?;
    IntensityCurve::new(q_grid.to_vec(), values)
}

/// Pointwise `q⁴ I(q)`; only defined for non-scaled intensities.
pub fn porod_curve(curve: &IntensityCurve) -> Result<IntensityCurve> {
    if curve.normalized {
        return Err(Error::Contract(
            "a Porod plot needs the non-scaled intensity".into(),
        ));
    }
    let values = curve
        .q
        .iter()
        .zip(&curve.values)
        .map(|(q, v)| q.powi(4) * v)
        .collect();
    Ok(IntensityCurve {
        q: curve.q.clone(),
        values,
        normalized: false,
    })
}

/// Divides by the value at the smallest `q`, which must be below `1e-6`.
pub fn normalize_curve(curve: &IntensityCurve) -> Result<IntensityCurve> {
    let (&q0, &v0) = match (curve.q.first(), curve.values.first()) {
        (Some(q), Some(v)) => (q, v),
        _ => return Err(Error::Contract("cannot normalise an empty curve".into())),
    };
    if q0 >= 1e-6 {
        return Err(Error::Contract(format!(
            "normalisation needs a point at q < 1e-6, smallest is {q0}"
        )));
    }
    if v0.is_nan() || v0 <= 0.0 {
        return Err(Error::Contract(format!("cannot normalise by I(q0) = {v0}")));
    }
    Ok(IntensityCurve {
        q: curve.q.clone(),
        values: curve.values.iter().map(|v| v / v0).collect(),
        normalized: true,
    })
}

/// Local maxima of `values`, refined by a parabola through each peak and
/// its neighbours.
pub fn peak_positions(q: &[f64], values: &[f64]) -> Vec<f64> {
    let mut peaks = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if b > a && b >= c {
            let denom = a - 2.0 * b + c;
            let h = 0.5 * (q[i + 1] - q[i - 1]);
            let shift = if denom != 0.0 {
                0.5 * (a - c) / denom
            } else {
                0.0
            };
            peaks.push(q[i] + shift.clamp(-0.5, 0.5) * h);
        }
    }
    peaks
}

/// Mean distance in `q` between successive maxima of a Porod curve.
pub fn oscillation_spacing(curve: &IntensityCurve) -> Result<f64> {
    let peaks = peak_positions(&curve.q, &curve.values);
    if peaks.len() < MIN_PEAKS {
        return Err(Error::Estimation(format!(
            "found {} maxima, need at least {MIN_PEAKS}",
            peaks.len()
        )));
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

fn trapezoid_mean(q: &[f64], v: &[f64]) -> f64 {
    let area: f64 = q
        .windows(2)
        .zip(v.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum();
    area / (q[q.len() - 1] - q[0])
}

/// Mean of a Porod curve over `[lo, hi]`, cut to the first and last grid
/// maximum inside the window so that whole oscillation periods are averaged.
/// Falls back to the full window when fewer than two maxima are found.
pub fn porod_window_mean(curve: &IntensityCurve, lo: f64, hi: f64) -> Result<f64> {
    let (q, v) = curve.window(lo, hi);
    if q.len() < 2 {
        return Err(Error::Estimation(format!(
            "fewer than two points in [{lo}, {hi}]"
        )));
    }
    let maxima: Vec<usize> = (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
        .collect();
    match (maxima.first(), maxima.last()) {
        (Some(&a), Some(&b)) if b > a => Ok(trapezoid_mean(&q[a..=b], &v[a..=b])),
        _ => Ok(trapezoid_mean(&q, &v)),
    }
}

/// Peak-to-peak spread of the curve about its least-squares line over
/// `[lo, hi]`, relative to the window mean.
pub fn oscillation_amplitude(curve: &IntensityCurve, lo: f64, hi: f64) -> Result<f64> {
    let (q, v) = curve.window(lo, hi);
    if q.len() < 3 {
        return Err(Error::Estimation(format!(
            "fewer than three points in [{lo}, {hi}]"
        )));
    }
    let n = q.len() as f64;
    let qm = q.iter().sum::<f64>() / n;
    let vm = v.iter().sum::<f64>() / n;
    let sxy: f64 = q.iter().zip(&v).map(|(x, y)| (x - qm) * (y - vm)).sum();
    let sxx: f64 = q.iter().map(|x| (x - qm).powi(2)).sum();
    let slope = sxy / sxx;
    let (mut lo_res, mut hi_res) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in q.iter().zip(&v) {
        let res = y - (vm + slope * (x - qm));
        lo_res = lo_res.min(res);
        hi_res = hi_res.max(res);
    }
    Ok((hi_res - lo_res) / vm.abs())
}
