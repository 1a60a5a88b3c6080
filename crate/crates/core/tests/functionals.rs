use std::f64::consts::PI;
use std::sync::Arc;

use aniso::functionals::{
    a2_cartoon, a_p_delta, e_p, hessian_asymptotics_probe, jump_length, mollify_field, s_p, total_variation,
    FunctionalConfig, MollifiedValue, Order, Smoothed, TubeChart,
};
use aniso::geometry::{gallery, AffineMap, CartoonFunction, ConvexPolygon, Poly2};
use aniso::linalg::{tau_of, vec2, Mat2};
use aniso::mollifier::by_name;
use proptest::prelude::*;

fn smooth(q: Poly2, domain: ConvexPolygon) -> CartoonFunction {
    CartoonFunction::smooth("q", Arc::new(q), domain)
}

fn unit_square() -> ConvexPolygon {
    ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).unwrap()
}

#[test]
fn s_p_oracles() {
    assert_eq!(s_p(&gallery::disc(0.3).unwrap(), 1.0).unwrap(), 0.0);
    let affine = smooth(Poly2::from_coeffs(1.0, 2.0, -3.0, 0.0, 0.0, 0.0), unit_square());
    assert_eq!(s_p(&affine, 2.0).unwrap(), 0.0);
    let s1 = s_p(&gallery::quadratic_bump_in_disc(0.3).unwrap(), 1.0).unwrap();
    assert!((s1 - 0.159888).abs() < 1e-6, "{s1}");
    assert!((s1 - 2.0 * PI * PI * 0.3f64.powi(4)).abs() < 1e-6 * s1);
}

#[test]
fn e_p_oracles() {
    let e2 = e_p(&gallery::disc(0.3).unwrap(), 2.0).unwrap();
    assert!((e2 - 4.72489).abs() < 1e-5, "{e2}");
    assert!((e2 - (2.0 * PI).powf(1.5) * 0.3).abs() < 1e-9);
    assert_eq!(e_p(&gallery::half_plane().unwrap(), 2.0).unwrap(), 0.0);
    // identical pieces on both sides of the circle
    let q = Poly2::from_coeffs(0.0, 0.0, 0.0, 1.0, 0.0, 1.0);
    let base = gallery::quadratic_bump_in_disc(0.3).unwrap();
    let same = CartoonFunction::new("same", base.regions.clone(), vec![Arc::new(q), Arc::new(q)], base.curves.clone(), base.domain.clone())
        .unwrap();
    assert_eq!(e_p(&same, 2.0).unwrap(), 0.0);
}

#[test]
fn cartoon_a2_is_the_product_of_constants() {
    let a2 = a2_cartoon(&gallery::disc(0.3).unwrap(), &by_name("disc").unwrap()).unwrap();
    assert!((a2 - 5.525964).abs() < 1e-6, "{a2}");
}

#[test]
fn total_variation_and_jump_length() {
    let disc = gallery::disc(0.3).unwrap();
    assert!((total_variation(&disc).unwrap() - 2.0 * PI * 0.3).abs() < 1e-9);
    assert!((jump_length(&disc).unwrap() - 1.88496).abs() < 1e-5);
    let ramp = smooth(Poly2::from_coeffs(0.0, 1.0, 0.0, 0.0, 0.0, 0.0), unit_square());
    assert!((total_variation(&ramp).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn mollifier_preserves_constants_and_constant_hessians() {
    let m = by_name("biweight").unwrap();
    let c = smooth(Poly2::constant(2.5), unit_square());
    let MollifiedValue::Hessian(h) = mollify_field(&c, &m, 0.05, &vec2(0.5, 0.5), Order::Hessian).unwrap() else {
        panic!("wrong order")
    };
    assert!(h.norm() < 1e-12);
    let q = Poly2::from_coeffs(0.3, -1.0, 0.5, 1.5, -0.7, 2.0);
    let f = smooth(q, unit_square());
    let MollifiedValue::Hessian(h) = mollify_field(&f, &m, 0.05, &vec2(0.4, 0.6), Order::Hessian).unwrap() else {
        panic!("wrong order")
    };
    assert!((h - q.h).norm() < 1e-10);
    let inside = Smoothed::new(&gallery::disc(0.3).unwrap(), &m, 0.05).unwrap().value(&vec2(0.05, 0.0)).unwrap();
    assert!((inside - 1.0).abs() < 1e-12);
}

#[test]
fn flat_edge_normal_derivative() {
    let f = gallery::half_plane().unwrap();
    let m = by_name("biweight").unwrap();
    let delta = 0.01;
    let t = 1.0;
    for u in [-0.5, 0.0, 0.5] {
        let fr = f.curves[0].frame(t).unwrap();
        let z = fr.point + fr.normal * (delta * u);
        let MollifiedValue::Hessian(h) = mollify_field(&f, &m, delta, &z, Order::Hessian).unwrap() else {
            panic!("wrong order")
        };
        let (_, dphi) = m.marginal(u).unwrap();
        let d_nn = fr.normal.dot(&(h * fr.normal));
        let predicted = f.jump(0, t).unwrap() * dphi / (delta * delta);
        assert!(delta * (d_nn - predicted).abs() < 1e-6, "u={u}: {d_nn} vs {predicted}");
        let r = hessian_asymptotics_probe(&f, &m, delta, 0, t, u).unwrap();
        assert!(r.r_nn.max(r.r_nt).max(r.r_tt).max(r.r_k) < 1e-6);
    }
}

#[test]
fn circle_tangential_probe() {
    let f = gallery::disc(0.3).unwrap();
    let r = hessian_asymptotics_probe(&f, &by_name("biweight").unwrap(), 0.005, 0, 1.0, 0.0).unwrap();
    assert!((r.d_tt - r.tt_predicted).abs() <= 0.1 * r.tt_predicted.abs());
}

#[test]
fn a_p_delta_of_a_global_quadratic() {
    // det = 4, K = 2: A_1 = (sqrt 2 |Omega^delta|)^2 = 2 (1 - 2 delta)^4
    let f = smooth(Poly2::from_coeffs(0.0, 0.0, 0.0, 1.0, 0.0, 1.0), unit_square());
    let m = by_name("disc").unwrap();
    let cfg = FunctionalConfig::new(1.0).unwrap();
    for delta in [0.1, 0.01] {
        let r = a_p_delta(&f, &m, delta, &cfg).unwrap();
        assert!((r.value - 2.0 * (1.0 - 2.0 * delta).powi(4)).abs() < 1e-6, "{}", r.value);
        assert_eq!(r.edge_part, 0.0);
    }
}

#[test]
fn a_p_delta_of_the_disc_near_its_limit() {
    let f = gallery::disc(0.3).unwrap();
    let m = by_name("disc").unwrap();
    let r = a_p_delta(&f, &m, 0.02, &FunctionalConfig::new(2.0).unwrap()).unwrap();
    assert!((r.value - 5.525964).abs() <= 0.05 * 5.525964, "{}", r.value);
    assert!(r.smooth_part.abs() < 1e-12);
    assert!(a_p_delta(&f, &m, 2.0, &FunctionalConfig::new(2.0).unwrap()).is_err());
}

#[test]
fn config_rejects_p_below_one() {
    assert!(FunctionalConfig::new(0.5).is_err());
    let c = FunctionalConfig::new(f64::INFINITY).unwrap();
    assert_eq!(c.tau, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn e_p_of_circles(r in 0.05f64..0.45, p in 1.0f64..50.0) {
        let tau = tau_of(p);
        let expected = (2.0 * PI * r * r.powf(-0.5 * tau)).powf(1.0 / tau);
        let e = e_p(&gallery::disc(r).unwrap(), p).unwrap();
        prop_assert!((e - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn e2_affine_invariance(l in prop::array::uniform4(-1.0f64..1.0)) {
        let lin = Mat2::new(l[0], l[1], l[2], l[3]);
        prop_assume!(lin.determinant().abs() > 0.2);
        let t = AffineMap::new(lin, vec2(0.0, 0.0)).unwrap();
        let f = gallery::ellipse(0.35, 0.2).unwrap();
        let g = f.pushforward(&t);
        let ratio = e_p(&g, 2.0).unwrap() / e_p(&f, 2.0).unwrap();
        prop_assert!((ratio - lin.determinant().abs().sqrt()).abs() < 1e-7);
    }

    #[test]
    fn tube_jacobian_positive(t in 0.0f64..(2.0 * PI), u in -1.0f64..1.0) {
        let f = gallery::ellipse(0.35, 0.2).unwrap();
        let delta = 0.02;
        let chart = TubeChart::new(&f, 0, delta);
        let fr = f.curves[0].frame(t).unwrap();
        let jac = chart.jacobian(&f, t, u).unwrap();
        prop_assert!(jac > 0.0);
        prop_assert!((jac - delta * (1.0 - delta * u * fr.curvature) * fr.speed).abs() < 1e-15);
        let z = chart.point(&f, t, u).unwrap();
        prop_assert!(((z - fr.point).norm() - delta * u.abs()).abs() < 1e-14);
    }

    #[test]
    fn mollified_gradient_matches_finite_differences(x in -0.4f64..0.4, y in -0.4f64..0.4) {
        let f = gallery::disc(0.3).unwrap();
        let m = by_name("biweight").unwrap();
        let s = Smoothed::new(&f, &m, 0.05).unwrap().with_tol(1e-12);
        let z = vec2(x, y);
        let g = s.gradient(&z).unwrap();
        let h = 1e-5;
        let dx = (s.value(&(z + vec2(h, 0.0))).unwrap() - s.value(&(z - vec2(h, 0.0))).unwrap()) / (2.0 * h);
        let dy = (s.value(&(z + vec2(0.0, h))).unwrap() - s.value(&(z - vec2(0.0, h))).unwrap()) / (2.0 * h);
        prop_assert!((g - vec2(dx, dy)).norm() < 1e-5 * (1.0 + g.norm()), "{g:?} vs ({dx}, {dy})");
    }
}
