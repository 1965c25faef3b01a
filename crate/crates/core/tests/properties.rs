//! Property tests: group axioms, scaling laws and symmetries of the kernels.

use htk_core::fundsol::{fundamental_conformal, ConformalMethod};
use htk_core::group::{GroupPoint, HTypeGroup};
use htk_core::kernels::{
    bg_kernel, composite_kernel_radial, heat_kernel, modified_kernel, thick_radial, SignedOrder,
};
use htk_core::quadrature::QuadratureConfig;
use htk_core::specfun::{gamma, hyp2f1};
use proptest::prelude::*;

fn groups() -> impl Strategy<Value = HTypeGroup> {
    prop_oneof![Just(HTypeGroup::heisenberg(1)), Just(HTypeGroup::heisenberg(2)), Just(HTypeGroup::quaternionic())]
}

fn point_in(g: &HTypeGroup, scale: f64) -> impl Strategy<Value = GroupPoint> {
    (
        prop::collection::vec(-scale..scale, g.m()),
        prop::collection::vec(-scale..scale, g.k()),
    )
        .prop_map(|(z, s)| GroupPoint::new(z, s))
}

fn group_with_points(n: usize) -> impl Strategy<Value = (HTypeGroup, Vec<GroupPoint>)> {
    groups().prop_flat_map(move |g| {
        let pts = prop::collection::vec(point_in(&g, 2.0), n);
        (Just(g), pts)
    })
}

fn max_dev(a: &GroupPoint, b: &GroupPoint) -> f64 {
    a.z.iter().chain(&a.sigma).zip(b.z.iter().chain(&b.sigma)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default().with_rel_tol(1e-12).with_abs_tol(1e-300)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #[test]
    fn multiplication_is_associative((g, p) in group_with_points(3)) {
        let left = g.multiply(&g.multiply(&p[0], &p[1]).unwrap(), &p[2]).unwrap();
        let right = g.multiply(&p[0], &g.multiply(&p[1], &p[2]).unwrap()).unwrap();
        prop_assert!(max_dev(&left, &right) < 1e-14);
    }

    #[test]
    fn inverse_cancels((g, p) in group_with_points(1)) {
        let inv = g.inverse(&p[0]).unwrap();
        prop_assert!(max_dev(&g.multiply(&p[0], &inv).unwrap(), &g.identity()) < 1e-15);
        prop_assert!(max_dev(&g.multiply(&inv, &p[0]).unwrap(), &g.identity()) < 1e-15);
        prop_assert_eq!(g.inverse(&inv).unwrap(), p[0].clone());
    }

    #[test]
    fn dilations_are_automorphisms((g, p) in group_with_points(2), lam in 0.1f64..5.0) {
        let d = |x: &GroupPoint| g.dilate(lam, x).unwrap();
        let lhs = d(&g.multiply(&p[0], &p[1]).unwrap());
        let rhs = g.multiply(&d(&p[0]), &d(&p[1])).unwrap();
        prop_assert!(max_dev(&lhs, &rhs) < 1e-14 * lam * lam * 50.0);
        prop_assert!(rel(g.gauge(&d(&p[0])), lam * g.gauge(&p[0])) < 1e-14);
    }

    #[test]
    fn gauge_is_inversion_invariant((g, p) in group_with_points(1)) {
        prop_assert_eq!(g.gauge(&g.inverse(&p[0]).unwrap()), g.gauge(&p[0]));
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        prop_assert!(rel(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap()) < 1e-13);
    }

    #[test]
    fn pfaff_transformation(a in 0.1f64..2.0, b in 0.1f64..2.0, c in 0.6f64..3.0, u in -5.0f64..0.5) {
        let lhs = hyp2f1(a, b, c, u).unwrap();
        let rhs = (1.0 - u).powf(-a) * hyp2f1(a, c - b, c, u / (u - 1.0)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
    }

    #[test]
    fn signed_order_domain(s in -2.0f64..2.0) {
        let ok = SignedOrder::new(s).is_ok();
        prop_assert_eq!(ok, s > -1.0 && s <= 1.0 && s != 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn heat_kernel_scaling((g, p) in group_with_points(1), t in 0.2f64..3.0) {
        let lam = 2.0;
        let q = g.q() as f64;
        let a = heat_kernel(&g, &g.dilate(lam, &p[0]).unwrap(), lam * lam * t, &cfg()).unwrap().value;
        let b = heat_kernel(&g, &p[0], t, &cfg()).unwrap().value;
        prop_assert!(a > 0.0);
        prop_assert!(rel(a, lam.powf(-q) * b) < 1e-10);
    }

    #[test]
    fn kernels_are_even_under_inversion((g, p) in group_with_points(1), s in 0.1f64..0.9, t in 0.3f64..2.0) {
        let inv = g.inverse(&p[0]).unwrap();
        let order = SignedOrder::new(-s).unwrap();
        let a = modified_kernel(&g, order, &p[0], t, &cfg()).unwrap().value;
        let b = modified_kernel(&g, order, &inv, t, &cfg()).unwrap().value;
        prop_assert!(rel(a, b) < 1e-13);
    }

    #[test]
    fn order_one_is_the_heat_kernel((g, p) in group_with_points(1), t in 0.3f64..2.0) {
        let one = SignedOrder::new(1.0).unwrap();
        let a = modified_kernel(&g, one, &p[0], t, &cfg()).unwrap().value;
        let b = heat_kernel(&g, &p[0], t, &cfg()).unwrap().value;
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn thick_kernel_sees_only_z_and_y_together(
        zn in 0.0f64..2.0, y in 0.0f64..2.0, sn in 0.0f64..1.5, t in 0.3f64..2.0, s in 0.1f64..0.9, frac in 0.0f64..1.0,
    ) {
        // move part of |z|² into y² and back
        let r2 = zn * zn + y * y;
        let (z2, y2) = ((frac * r2).sqrt(), ((1.0 - frac) * r2).sqrt());
        let a = thick_radial(2.0, 1, s, zn, sn, t, y).evaluate(&cfg()).unwrap().value;
        let b = thick_radial(2.0, 1, s, z2, sn, t, y2).evaluate(&cfg()).unwrap().value;
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn composite_kernel_swaps_orders(zn in 0.0f64..2.0, sn in 0.0f64..1.5, s in 0.1f64..0.9, tau in 0.2f64..2.0, t in 0.2f64..2.0) {
        let a = composite_kernel_radial(2.0, 1, s, zn, sn, tau, t, &cfg()).unwrap().value;
        let b = composite_kernel_radial(2.0, 1, -s, zn, sn, t, tau, &cfg()).unwrap().value;
        prop_assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn bg_kernel_exchanges_points(
        w in prop::collection::vec(-1.5f64..1.5, 2), w2 in prop::collection::vec(-1.5f64..1.5, 2),
        sg in -1.0f64..1.0, sg2 in -1.0f64..1.0, n in 1.0f64..5.0, t in 0.3f64..2.0,
    ) {
        let a = bg_kernel(n, 1, &w, &[sg], &w2, &[sg2], t, &cfg()).unwrap().value;
        let b = bg_kernel(n, 1, &w2, &[sg2], &w, &[sg], t, &cfg()).unwrap().value;
        prop_assert!(rel(a, b) < 1e-13);
    }

    #[test]
    fn conformal_solution_is_homogeneous((g, p) in group_with_points(1), s in 0.1f64..1.0, lam in 0.3f64..3.0) {
        prop_assume!(g.gauge(&p[0]) > 0.05);
        let q = g.q() as f64;
        let e = |x: &GroupPoint| fundamental_conformal(&g, s, x, ConformalMethod::ClosedForm, &cfg()).unwrap().value;
        let scaled = e(&g.dilate(lam, &p[0]).unwrap());
        prop_assert!(rel(scaled, lam.powf(2.0 * s - q) * e(&p[0])) < 1e-12);
    }
}
