//! Monte-Carlo ground truth for the closed forms.
//!
//! `γ(r)` is the probability that `x + r·u` stays inside the solid when `x`
//! is uniform in the solid and `u` uniform on the unit sphere, so a plain
//! hit fraction estimates it without bias.
//!
//! Reproducibility: every draw is fixed by `(seed, stream, position)`.
//! A run is split into `workers` chunks of consecutive trials and chunk `w`
//! reads ChaCha8 stream `purpose | point | w` of the seed. Results depend on
//! `(seed, workers)` only, never on how many threads rayon happens to use.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{contains, sample_direction, sample_point, Point3, SolidSpec};

pub const MIN_CF_SAMPLES: u64 = 1_000;
pub const MIN_RG2_SAMPLES: u64 = 10_000;

const STREAM_CF: u64 = 1 << 56;
const STREAM_RG2: u64 = 2 << 56;

/// An `(abscissa, value, optional stderr)` record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub value: f64,
    pub stderr: Option<f64>,
}

impl CurvePoint {
    pub const fn new(x: f64, value: f64) -> Self {
        CurvePoint {
            x,
            value,
            stderr: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Standard error of `mean`.
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Number of independently seeded chunks.
    pub workers: u32,
}

impl McConfig {
    pub const DEFAULT_WORKERS: u32 = 8;

    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            workers: Self::DEFAULT_WORKERS,
        }
    }

    pub fn with_workers(mut self, workers: u32) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn chunk(&self, worker: u32) -> u64 {
        let k = u64::from(self.workers.max(1));
        self.samples / k + u64::from(u64::from(worker) < self.samples % k)
    }

    fn rng(&self, purpose: u64, point: u64, worker: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(purpose | (point << 24) | u64::from(worker));
        rng
    }
}

fn require_samples(n: u64, min: u64) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "sample count",
            requirement: "at least the documented minimum",
            value: n as f64,
        })
    }
}

fn cf_hits(solid: &SolidSpec, r: f64, cfg: &McConfig, point: u64) -> u64 {
    (0..cfg.workers.max(1))
        .into_par_iter()
        .map(|w| {
            let mut rng = cfg.rng(STREAM_CF, point, w);
            let mut hits = 0u64;
            for _ in 0..cfg.chunk(w) {
                let x = sample_point(solid, &mut rng);
                let u = sample_direction(&mut rng);
                if contains(solid, x + u * r) {
                    hits += 1;
                }
            }
            hits
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

fn binomial(hits: u64, cfg: &McConfig) -> McEstimate {
    let n = cfg.samples as f64;
    let p = hits as f64 / n;
    McEstimate {
        mean: p,
        stderr: (p * (1.0 - p) / n).max(0.0).sqrt(),
        n_samples: cfg.samples,
        seed: cfg.seed,
    }
}

/// Hit-fraction estimate of `γ(r)` with its binomial standard error.
pub fn estimate_cf(solid: &SolidSpec, r: f64, cfg: &McConfig) -> Result<McEstimate> {
    estimate_cf_at(solid, r, cfg, 0)
}

fn estimate_cf_at(solid: &SolidSpec, r: f64, cfg: &McConfig, point: u64) -> Result<McEstimate> {
    require_samples(cfg.samples, MIN_CF_SAMPLES)?;
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain {
            what: "r",
            requirement: "non-negative",
            value: r,
        });
    }
    Ok(binomial(cf_hits(solid, r, cfg, point), cfg))
}

/// Raw CF estimates on a sorted grid in `[0, dmax]`; grid point `i` uses its
/// own family of streams so tables can be extended without reshuffling.
pub fn tabulate_cf(solid: &SolidSpec, grid: &[f64], cfg: &McConfig) -> Result<Vec<CurvePoint>> {
    require_samples(cfg.samples, MIN_CF_SAMPLES)?;
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Contract("tabulation grid must be sorted".into()));
    }
    if let Some(&r) = grid.iter().find(|&&r| !(0.0..=solid.dmax).contains(&r)) {
        return Err(Error::Domain {
            what: "grid abscissa",
            requirement: "inside [0, dmax]",
            value: r,
        });
    }
    grid.par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let est = estimate_cf_at(solid, r, cfg, i as u64)?;
            Ok(CurvePoint {
                x: r,
                value: est.mean,
                stderr: Some(est.stderr),
            })
        })
        .collect()
}

/// Squared gyration radius `⟨|x − x̄|²⟩`, the centroid taken from the same
/// sample in a first pass.
pub fn estimate_rg2(solid: &SolidSpec, cfg: &McConfig) -> Result<McEstimate> {
    require_samples(cfg.samples, MIN_RG2_SAMPLES)?;
    let workers = cfg.workers.max(1);

    let sum = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = cfg.rng(STREAM_RG2, 0, w);
            let mut acc = Point3::ORIGIN;
            for _ in 0..cfg.chunk(w) {
                acc = acc + sample_point(solid, &mut rng);
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Point3::ORIGIN, |a, b| a + b);
    let n = cfg.samples as f64;
    let centroid = sum * (1.0 / n);

    let (s2, s4) = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = cfg.rng(STREAM_RG2, 0, w);
            let (mut s2, mut s4) = (0.0, 0.0);
            for _ in 0..cfg.chunk(w) {
                let d2 = (sample_point(solid, &mut rng) - centroid).norm_squared();
                s2 += d2;
                s4 += d2 * d2;
            }
            (s2, s4)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));

    let mean = s2 / n;
    let var = ((s4 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(McEstimate {
        mean,
        stderr: (var / n).sqrt(),
        n_samples: cfg.samples,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{unit_solid_without_rg2, SolidKind};

    fn unit(kind: SolidKind) -> SolidSpec {
        unit_solid_without_rg2(kind)
    }

    #[test]
    fn zero_distance_always_hits() {
        for kind in SolidKind::ALL {
            let est = estimate_cf(&unit(kind), 0.0, &McConfig::new(20_000, 5)).unwrap();
            assert_eq!(est.mean, 1.0, "{kind}");
            assert_eq!(est.stderr, 0.0);
        }
    }

    #[test]
    fn beyond_dmax_never_hits() {
        for kind in SolidKind::ALL {
            let s = unit(kind);
            let est = estimate_cf(&s, 2.0 * s.dmax, &McConfig::new(20_000, 5)).unwrap();
            assert_eq!(est.mean, 0.0);
        }
    }

    #[test]
    fn too_few_samples() {
        let s = unit(SolidKind::Cube);
        assert!(estimate_cf(&s, 0.1, &McConfig::new(999, 1)).is_err());
        assert!(estimate_rg2(&s, &McConfig::new(9_999, 1)).is_err());
        assert!(estimate_cf(&s, -0.1, &McConfig::new(1000, 1)).is_err());
    }

    #[test]
    fn deterministic_per_seed_and_workers() {
        let s = unit(SolidKind::Octahedron);
        let cfg = McConfig::new(50_000, 42);
        let a = estimate_cf(&s, 0.4, &cfg).unwrap();
        let b = estimate_cf(&s, 0.4, &cfg).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = estimate_cf(&s, 0.4, &cfg.with_workers(3)).unwrap();
        assert_ne!(a.mean, c.mean);
        assert_eq!(c, estimate_cf(&s, 0.4, &cfg.with_workers(3)).unwrap());
    }

    #[test]
    fn chunks_cover_every_trial() {
        let cfg = McConfig::new(1_000_003, 0).with_workers(7);
        let total: u64 = (0..7).map(|w| cfg.chunk(w)).sum();
        assert_eq!(total, 1_000_003);
    }

    #[test]
    fn sphere_rg2() {
        let est = estimate_rg2(&unit(SolidKind::Sphere), &McConfig::new(1_000_000, 9)).unwrap();
        assert!((est.mean - 0.15).abs() < 3.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn cube_rg2_matches_grid_integration() {
        // midpoint rule on a 60³ grid for ∫|x|² dV over the unit cube
        let n = 60;
        let h = 1.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = |m: usize| (m as f64 + 0.5) * h - 0.5;
                    acc += c(i).powi(2) + c(j).powi(2) + c(k).powi(2);
                }
            }
        }
        let grid = acc * h * h * h;
        assert!((grid - 0.25).abs() < 1e-4);
        let est = estimate_rg2(&unit(SolidKind::Cube), &McConfig::new(1_000_000, 9)).unwrap();
        assert!(
            (est.mean - grid).abs() < 3.0 * est.stderr + 1e-4,
            "{est:?} vs {grid}"
        );
    }

    #[test]
    fn tetrahedron_rg2_is_seed_consistent() {
        let s = unit(SolidKind::Tetrahedron);
        let a = estimate_rg2(&s, &McConfig::new(1_000_000, 1)).unwrap();
        let b = estimate_rg2(&s, &McConfig::new(1_000_000, 2)).unwrap();
        let combined = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 3.0 * combined);
    }

    #[test]
    fn tabulation_contract() {
        let s = unit(SolidKind::Cube);
        let cfg = McConfig::new(10_000, 3);
        let t = tabulate_cf(&s, &[0.0], &cfg).unwrap();
        assert_eq!(
            t,
            vec![CurvePoint {
                x: 0.0,
                value: 1.0,
                stderr: Some(0.0)
            }]
        );
        assert!(tabulate_cf(&s, &[0.5, 0.1], &cfg).is_err());
        assert!(tabulate_cf(&s, &[0.0, 2.0], &cfg).is_err());
    }
}
