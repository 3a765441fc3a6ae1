//! Composite Gauss–Legendre rules on breakpoint-aligned panels.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;

/// Sorted `(node, weight)` pairs on `[-1, 1]`.
pub type Rule = Arc<[(f64, f64)]>;

/// The `n`-point rule, computed once per `n`.
pub fn gauss_legendre(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let rule = GaussLegendre::new(n.max(2)).expect("at least two nodes");
            let mut pairs = rule.as_node_weight_pairs().to_vec();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            pairs.into()
        })
        .clone()
}

/// Panel layout for oscillatory integrals over piecewise integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    /// Lower bound on panels per branch.
    pub min_panels: usize,
    /// Panels per period `2π / q` of `sin(qr)`.
    pub panels_per_period: f64,
    /// Panels used for integrals over particle size.
    pub size_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 64,
            min_panels: 4,
            panels_per_period: 4.0,
            size_panels: 200,
        }
    }
}

impl QuadratureSpec {
    /// Panels for a branch of width `width` when the integrand oscillates
    /// at angular frequency `omega`; keeps each panel `≤ π / (2ω)` wide.
    pub fn panels(&self, omega: f64, width: f64) -> usize {
        let oscillations = omega.abs() * width * self.panels_per_period / (2.0 * PI);
        self.min_panels.max(oscillations.ceil() as usize)
    }

    /// `∫ f` over consecutive breakpoint intervals; no panel straddles a
    /// breakpoint.
    pub fn integrate_pieces<F>(&self, breakpoints: &[f64], omega: f64, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let rule = gauss_legendre(self.nodes_per_panel);
        breakpoints
            .windows(2)
            .map(|w| {
                let panels = self.panels(omega, w[1] - w[0]);
                integrate_panels(&rule, w[0], w[1], panels, &mut f)
            })
            .sum()
    }
}

/// `∫_a^b f` with `panels` equal panels of the given rule.
pub fn integrate_panels<F>(rule: &[(f64, f64)], a: f64, b: f64, panels: usize, f: &mut F) -> f64
where
    F: FnMut(f64) -> f64,
{
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let hi = if p + 1 == panels { b } else { lo + width };
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for &(x, w) in rule {
            acc += w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}
