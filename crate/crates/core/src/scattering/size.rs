//! Particle-size densities and the size-averaging kernel.
//!
//! A size-`d` copy of a particle has `γ_d(r) = γ(r/d)` and therefore
//! `I_d(q) = d⁶ I₁(qd)`. Averaging over a number density `p(d)` and swapping
//! the order of integration gives
//!
//! ```text
//! ⟨I⟩(q) = 4π ∫ r² γ(r) K(qr) dr,    K(x) = ∫ p(d) d⁶ sinc(xd) dd,
//! ```
//!
//! so the CF is sampled once per `q` instead of once per size node.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate_panels, QuadratureSpec};

/// Fraction of the `d⁶`-weighted mass allowed beyond the truncation size.
pub const TAIL_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum SizeDistribution {
    /// `p(d) = λ^{n+1} dⁿ e^{−λd} / n!`
    PoissonGamma { n: u32, lambda: f64 },
    /// Every particle has the same size.
    PointMass { size: f64 },
    /// Weighted sum of components; weights sum to one.
    Mixture(Vec<(f64, SizeDistribution)>),
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Regularised upper incomplete gamma `Q(k, y)` for integer `k ≥ 1`.
fn upper_gamma_q(k: u32, y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..k {
        term *= y / j as f64;
        sum += term;
    }
    (sum.ln() - y).exp()
}

impl SizeDistribution {
    pub fn poisson(n: u32, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain {
                what: "lambda",
                requirement: "finite and positive",
                value: lambda,
            });
        }
        Ok(SizeDistribution::PoissonGamma { n, lambda })
    }

    pub fn point_mass(size: f64) -> Result<Self> {
        if !(size > 0.0 && size.is_finite()) {
            return Err(Error::Domain {
                what: "size",
                requirement: "finite and positive",
                value: size,
            });
        }
        Ok(SizeDistribution::PointMass { size })
    }

    pub fn mixture(components: Vec<(f64, SizeDistribution)>) -> Result<Self> {
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.is_empty() || components.iter().any(|c| c.0 < 0.0) {
            return Err(Error::Contract(
                "mixture weights must be non-negative".into(),
            ));
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(SizeDistribution::Mixture(components))
    }

    /// Density at `d`; point masses contribute nothing to it.
    pub fn density(&self, d: f64) -> f64 {
        match *self {
            SizeDistribution::PoissonGamma { n, lambda } => {
                if d < 0.0 {
                    0.0
                } else if d == 0.0 {
                    if n == 0 {
                        lambda
                    } else {
                        0.0
                    }
                } else {
                    let ln = (n + 1) as f64 * lambda.ln() + n as f64 * d.ln()
                        - lambda * d
                        - ln_factorial(n);
                    ln.exp()
                }
            }
            SizeDistribution::PointMass { .. } => 0.0,
            SizeDistribution::Mixture(ref parts) => {
                parts.iter().map(|(w, p)| w * p.density(d)).sum()
            }
        }
    }

    /// `∫ dᵏ p(d) dd`.
    pub fn moment(&self, k: u32) -> f64 {
        match *self {
            SizeDistribution::PoissonGamma { n, lambda } => {
                (1..=k).map(|j| (n + j) as f64 / lambda).product()
            }
            SizeDistribution::PointMass { size } => size.powi(k as i32),
            SizeDistribution::Mixture(ref parts) => {
                parts.iter().map(|(w, p)| w * p.moment(k)).sum()
            }
        }
    }

    /// Size beyond which at most [`TAIL_FRACTION`] of `∫ p d⁶` remains.
    pub fn truncation(&self) -> f64 {
        match *self {
            SizeDistribution::PoissonGamma { n, lambda } => {
                // p·d⁶ is a Gamma(n + 7, λ) density up to normalisation
                let k = n + 7;
                let (mut lo, mut hi) = (0.0, k as f64);
                while upper_gamma_q(k, hi) > TAIL_FRACTION {
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if upper_gamma_q(k, mid) > TAIL_FRACTION {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi / lambda
            }
            SizeDistribution::PointMass { size } => size,
            SizeDistribution::Mixture(ref parts) => parts
                .iter()
                .map(|(_, p)| p.truncation())
                .fold(0.0, f64::max),
        }
    }

    /// Fastest angular rate, per unit of `x`, at which `K(x)` oscillates.
    pub fn oscillation_scale(&self) -> f64 {
        match *self {
            // the phase of (λ − ix)^{−(n+6)} turns at most (n+6)/λ per unit x
            SizeDistribution::PoissonGamma { n, lambda } => (n + 6) as f64 / lambda,
            SizeDistribution::PointMass { size } => size,
            SizeDistribution::Mixture(ref parts) => parts
                .iter()
                .map(|(_, p)| p.oscillation_scale())
                .fold(0.0, f64::max),
        }
    }

    /// `K(x) = ∫ p(d) d⁶ sinc(xd) dd` in closed form.
    pub fn smearing_kernel(&self, x: f64) -> f64 {
        match *self {
            SizeDistribution::PoissonGamma { n, lambda } => {
                if x == 0.0 {
                    return self.moment(6);
                }
                // λ^{n+1} Γ(n+6) / n! · Im[(λ − ix)^{−(n+6)}] / x
                let k = (n + 6) as f64;
                let modulus = lambda.hypot(x);
                let phase = x.atan2(lambda);
                let ln_scale = (n + 1) as f64 * lambda.ln() + ln_factorial(n + 5)
                    - ln_factorial(n)
                    - k * modulus.ln();
                ln_scale.exp() * (k * phase).sin() / x
            }
            SizeDistribution::PointMass { size } => size.powi(6) * sinc(x * size),
            SizeDistribution::Mixture(ref parts) => {
                parts.iter().map(|(w, p)| w * p.smearing_kernel(x)).sum()
            }
        }
    }

    /// `K(x)` by Gauss panels over `[0, truncation]`, independent of the
    /// closed form.
    pub fn smearing_kernel_by_quadrature(&self, x: f64, spec: &QuadratureSpec) -> f64 {
        match *self {
            SizeDistribution::PoissonGamma { .. } => {
                let rule = gauss_legendre(spec.nodes_per_panel);
                let mut f = |d: f64| self.density(d) * d.powi(6) * sinc(x * d);
                integrate_panels(&rule, 0.0, self.truncation(), spec.size_panels, &mut f)
            }
            SizeDistribution::PointMass { size } => size.powi(6) * sinc(x * size),
            SizeDistribution::Mixture(ref parts) => parts
                .iter()
                .map(|(w, p)| w * p.smearing_kernel_by_quadrature(x, spec))
                .sum(),
        }
    }

    /// `(d, p(d))` on an even grid over `[0, truncation]`.
    pub fn density_table(&self, points: usize) -> Vec<(f64, f64)> {
        let points = points.max(2);
        let top = self.truncation();
        (0..points)
            .map(|i| {
                let d = top * i as f64 / (points - 1) as f64;
                (d, self.density(d))
            })
            .collect()
    }
}

impl fmt::Display for SizeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeDistribution::PoissonGamma { n, lambda } => write!(f, "poisson:{n},{lambda}"),
            SizeDistribution::PointMass { size } => write!(f, "point:{size}"),
            SizeDistribution::Mixture(parts) => {
                f.write_str("mixture(")?;
                for (i, (w, p)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{w}*{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for SizeDistribution {
    type Err = Error;

    /// Parses `poisson:n,lambda` or `point:size`.
    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            what: "size distribution",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (family, params) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| fail("missing ':'"))?;
        match family.trim().to_ascii_lowercase().as_str() {
            "poisson" => {
                let (n, lambda) = params
                    .split_once(',')
                    .ok_or_else(|| fail("expected poisson:n,lambda"))?;
                let n: u32 = n
                    .trim()
                    .parse()
                    .map_err(|_| fail("n must be a non-negative integer"))?;
                let lambda: f64 = lambda
                    .trim()
                    .parse()
                    .map_err(|_| fail("lambda must be a number"))?;
                SizeDistribution::poisson(n, lambda).map_err(|e| fail(&e.to_string()))
            }
            "point" => {
                let size: f64 = params
                    .trim()
                    .parse()
                    .map_err(|_| fail("size must be a number"))?;
                SizeDistribution::point_mass(size).map_err(|e| fail(&e.to_string()))
            }
            _ => Err(fail("unknown family; expected poisson or point")),
        }
    }
}

/// `∫_from^∞ p d⁶` by brute-force panels.
#[cfg(test)]
fn tail_by_quadrature(dist: &SizeDistribution, from: f64) -> f64 {
    let rule = gauss_legendre(64);
    let mut f = |d: f64| dist.density(d) * d.powi(6);
    integrate_panels(&rule, from, from + 200.0, 400, &mut f)
}
