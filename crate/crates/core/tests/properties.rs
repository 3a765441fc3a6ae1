use approx::assert_relative_eq;
use proptest::prelude::*;

use platonic_cf::calculus::{cf_derivative, Order, Side};
use platonic_cf::scattering::{intensity, polydisperse_intensity, SizeDistribution};
use platonic_cf::{cf_for, solid_metrics, SolidKind};

fn analytic_kind() -> impl Strategy<Value = SolidKind> {
    prop_oneof![
        Just(SolidKind::Tetrahedron),
        Just(SolidKind::Octahedron),
        Just(SolidKind::Sphere),
    ]
}

fn any_kind() -> impl Strategy<Value = SolidKind> {
    prop::sample::select(SolidKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn metrics_scale_with_edge(kind in any_kind(), edge in 0.05f64..20.0) {
        let one = solid_metrics(kind, 1.0).unwrap();
        let s = solid_metrics(kind, edge).unwrap();
        assert_relative_eq!(s.edge, edge, max_relative = 1e-12);
        assert_relative_eq!(s.surface, one.surface * edge * edge, max_relative = 1e-12);
        assert_relative_eq!(s.volume, one.volume * edge.powi(3), max_relative = 1e-12);
        assert_relative_eq!(s.dmax, one.dmax * edge, max_relative = 1e-12);
        assert_relative_eq!(s.rg2, one.rg2 * edge * edge, max_relative = 1e-12);
    }

    #[test]
    fn cf_depends_on_r_over_edge(kind in analytic_kind(), edge in 0.05f64..20.0, t in 0.0f64..1.0) {
        let unit = cf_for(&solid_metrics(kind, 1.0).unwrap());
        let scaled = cf_for(&solid_metrics(kind, edge).unwrap());
        let r = t * unit.dmax();
        let a = unit.eval(r).unwrap();
        let b = scaled.eval(r * edge).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn cf_is_bounded(kind in analytic_kind(), t in 0.0f64..=1.0) {
        let cf = cf_for(&solid_metrics(kind, 1.0).unwrap());
        let g = cf.eval(t * cf.dmax()).unwrap();
        prop_assert!((-1e-12..=1.0).contains(&g), "γ = {}", g);
    }

    #[test]
    fn cf_vanishes_beyond_dmax(kind in analytic_kind(), extra in 1e-9f64..10.0) {
        let cf = cf_for(&solid_metrics(kind, 1.0).unwrap());
        prop_assert_eq!(cf.eval(cf.dmax() + extra).unwrap(), 0.0);
    }

    #[test]
    fn second_derivative_is_finite_off_breakpoints(kind in analytic_kind(), t in 0.01f64..0.99) {
        let cf = cf_for(&solid_metrics(kind, 1.0).unwrap());
        let r = t * cf.dmax();
        prop_assume!(cf.interior_breakpoints().iter().all(|b| (b - r).abs() > 1e-3));
        let d2 = cf_derivative(&cf, r, Order::Second, Side::Auto).unwrap();
        prop_assert!(d2.is_finite());
    }

    #[test]
    fn intensity_is_non_negative(kind in analytic_kind(), q in 0.0f64..150.0) {
        let cf = cf_for(&solid_metrics(kind, 1.0).unwrap());
        prop_assert!(intensity(&cf, q).unwrap() >= 0.0);
    }

    #[test]
    fn mixture_is_linear(w in 0.01f64..0.99, a in 0.2f64..3.0, b in 0.2f64..3.0, q in 0.0f64..40.0) {
        let cf = cf_for(&solid_metrics(SolidKind::Octahedron, 1.0).unwrap());
        let pa = SizeDistribution::point_mass(a).unwrap();
        let pb = SizeDistribution::point_mass(b).unwrap();
        let mix = SizeDistribution::mixture(vec![(w, pa.clone()), (1.0 - w, pb.clone())]).unwrap();
        let got = polydisperse_intensity(&cf, &mix, q).unwrap();
        let want = w * polydisperse_intensity(&cf, &pa, q).unwrap()
            + (1.0 - w) * polydisperse_intensity(&cf, &pb, q).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-300), "{} vs {}", got, want);
    }

    #[test]
    fn distribution_round_trips_through_text(n in 0u32..12, lambda in 0.1f64..10.0) {
        let d = SizeDistribution::poisson(n, lambda).unwrap();
        let back: SizeDistribution = d.to_string().parse().unwrap();
        prop_assert_eq!(back, d);
    }
}
