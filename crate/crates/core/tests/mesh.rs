use std::sync::Arc;

use aniso::geometry::{gallery, AffineMap, CartoonFunction, ConvexPolygon, Poly2};
use aniso::linalg::{vec2, Mat2};
use aniso::mesh::{build_adapted_mesh, interp_error_global, rate_fit, Tag, Triangulation};
use proptest::prelude::*;

fn square() -> ConvexPolygon {
    ConvexPolygon::rectangle(-0.5, 0.5, -0.5, 0.5).unwrap()
}

fn quadratic(c: [f64; 6]) -> CartoonFunction {
    CartoonFunction::smooth("q", Arc::new(Poly2::from_coeffs(c[0], c[1], c[2], c[3], c[4], c[5])), square())
}

fn positively_oriented(t: &Triangulation) -> bool {
    (0..t.len()).all(|i| t.signed_area(i) > 0.0)
}

#[test]
fn smooth_functions_get_a_regular_mesh() {
    let f = gallery::smooth_exp();
    for n in [32, 100, 128, 1000, 4096] {
        let t = build_adapted_mesh(&f, n, 2.0).unwrap();
        assert_eq!(t.count(Tag::Edgy), 0);
        assert!(t.len() >= n / 2 && t.len() <= n, "N={n}: {}", t.len());
        assert!(positively_oriented(&t));
    }
    assert!(build_adapted_mesh(&f, 31, 2.0).is_err());
}

#[test]
fn quadrupling_the_budget_halves_regular_diameter() {
    for f in [gallery::smooth_exp(), gallery::disc(0.3).unwrap()] {
        let a = build_adapted_mesh(&f, 512, 2.0).unwrap().max_diameter(Tag::Regular);
        let b = build_adapted_mesh(&f, 2048, 2.0).unwrap().max_diameter(Tag::Regular);
        let ratio = a / b;
        assert!((2.0 / 1.5..=2.0 * 1.5).contains(&ratio), "{}: {ratio}", f.name);
    }
}

#[test]
fn edge_layer_covers_the_curve_and_shrinks_quadratically() {
    let f = gallery::disc(0.3).unwrap();
    let mut scaled = Vec::new();
    for n in [512usize, 2048] {
        let t = build_adapted_mesh(&f, n, 2.0).unwrap();
        assert!(t.len() <= n && positively_oriented(&t));
        for k in 0..200 {
            let z = f.curves[0].gamma(k as f64 * 0.0314159);
            assert!(t.locate(&z, Some(Tag::Edgy)).is_some(), "N={n} point {k} not in the layer");
        }
        let length = 2.0 * std::f64::consts::PI * 0.3;
        scaled.push(t.area(Tag::Edgy) * (n * n) as f64 / length);
        // the layer plus the fill tile the domain
        assert!((t.area(Tag::Edgy) + t.area(Tag::Regular) - 1.0).abs() < 1e-9);
    }
    // |Omega^e| <= C N^{-2} length with the same C
    assert!(scaled[1] <= 1.5 * scaled[0], "{scaled:?}");
}

#[test]
fn affine_functions_are_interpolated_exactly() {
    let f = quadratic([0.3, 1.0, -2.0, 0.0, 0.0, 0.0]);
    let t = Triangulation::uniform(&square(), 8).unwrap();
    for p in [1.0, 2.0, f64::INFINITY] {
        assert!(interp_error_global(&f, &t, p).unwrap() < 1e-14);
    }
}

#[test]
fn uniform_refinement_has_second_order_sup_error() {
    let f = quadratic([0.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    let coarse = interp_error_global(&f, &Triangulation::uniform(&square(), 8).unwrap(), f64::INFINITY).unwrap();
    let fine = interp_error_global(&f, &Triangulation::uniform(&square(), 16).unwrap(), f64::INFINITY).unwrap();
    let ratio = coarse / fine;
    assert!((ratio - 4.0).abs() <= 0.4, "{ratio}");
}

#[test]
fn rate_fit_of_exact_power_laws() {
    let ns = [128.0, 256.0, 512.0, 1024.0];
    let one: Vec<(f64, f64)> = ns.iter().map(|&n| (n, 3.0 / n)).collect();
    assert!((rate_fit(&one).unwrap() + 1.0).abs() < 1e-12);
    let half: Vec<(f64, f64)> = ns.iter().map(|&n: &f64| (n, n.powf(-0.5))).collect();
    assert!((rate_fit(&half).unwrap() + 0.5).abs() < 1e-12);
    assert!(rate_fit(&one[..1]).is_err());
    assert!(rate_fit(&[(1.0, 0.0), (2.0, 1.0)]).is_err());
}

#[test]
fn disc_l2_error_decays_like_one_over_n() {
    let f = gallery::disc(0.3).unwrap();
    let pairs: Vec<(f64, f64)> = [128usize, 256, 512, 1024]
        .iter()
        .map(|&n| (n as f64, interp_error_global(&f, &build_adapted_mesh(&f, n, 2.0).unwrap(), 2.0).unwrap()))
        .collect();
    let slope = rate_fit(&pairs).unwrap();
    assert!((slope + 1.0).abs() <= 0.15, "{slope}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn budget_and_orientation(n in 32usize..3000, r in 0.1f64..0.45) {
        let t = build_adapted_mesh(&gallery::disc(r).unwrap(), n, 2.0).unwrap();
        prop_assert!(t.len() <= n);
        prop_assert!(positively_oriented(&t));
        prop_assert_eq!(t.tags.len(), t.len());
    }

    #[test]
    fn error_commutes_with_affine_maps(
        c in prop::array::uniform6(-1.0f64..1.0),
        l in prop::array::uniform4(-1.5f64..1.5),
        p in prop::sample::select(vec![1.0, 2.0, 4.0, f64::INFINITY]),
    ) {
        let lin = Mat2::new(l[0], l[1], l[2], l[3]);
        prop_assume!(lin.determinant().abs() > 0.2);
        let t = AffineMap::new(lin, vec2(0.1, -0.2)).unwrap();
        let f = quadratic(c);
        let mesh = Triangulation::uniform(&square(), 6).unwrap();
        let a = interp_error_global(&f, &mesh, p).unwrap();
        let b = interp_error_global(&f.pushforward(&t), &mesh.transform(&t), p).unwrap();
        let scale = if p.is_infinite() { 1.0 } else { lin.determinant().abs().powf(1.0 / p) };
        prop_assert!((b - scale * a).abs() <= 1e-8 * (scale * a).max(1e-12), "{b} vs {}", scale * a);
    }
}
