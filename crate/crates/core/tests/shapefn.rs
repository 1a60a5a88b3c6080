use std::f64::consts::PI;
use std::sync::Arc;

use aniso::geometry::{CartoonFunction, ConvexPolygon, Poly2};
use aniso::linalg::{vec2, Mat2};
use aniso::mesh::{interp_error_global, Tag, Triangulation};
use aniso::shapefn::{
    disc_cubic, k3_p, k_p, k_p_with, p1_interp_error, p2_interp_equivalence, p2_interp_error, scaled_k, CubicForm,
    KpOptions, QuadraticForm, Triangle,
};
use proptest::prelude::*;

fn reference() -> Triangle {
    Triangle::new(vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0)).unwrap()
}

fn rotation(th: f64) -> Mat2 {
    let (s, c) = th.sin_cos();
    Mat2::new(c, -s, s, c)
}

#[test]
fn reference_triangle_errors_of_x_squared() {
    let t = reference();
    assert_eq!(p1_interp_error(&QuadraticForm::new(0.0, 0.0, 0.0), &t, 2.0).unwrap(), 0.0);
    let q = QuadraticForm::new(1.0, 0.0, 0.0);
    assert!((p1_interp_error(&q, &t, f64::INFINITY).unwrap() - 0.25).abs() < 1e-12);
    assert!((p1_interp_error(&q, &t, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-12);
    // int_0^1 x^2 (1 - x)^3 dx = 1/60
    assert!((p1_interp_error(&q, &t, 2.0).unwrap() - (1.0f64 / 60.0).sqrt()).abs() < 1e-13);
}

#[test]
fn thin_sign_change_sliver_in_every_vertex_order() {
    // nearly rank-one form: the two roots on a sweep line merge at x ~ 1e-3;
    // reference value from 30-digit adaptive quadrature
    let q = QuadraticForm::new(0.9551731109204146, 0.0, -0.0041129610497807195);
    let (a, b, c) = (vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0));
    for v in [[a, b, c], [b, c, a], [c, a, b]] {
        let e = p1_interp_error(&q, &Triangle::new(v[0], v[1], v[2]).unwrap(), 1.0).unwrap();
        assert!((e - 0.0792556031978343).abs() < 1e-12, "{e}");
    }
}

#[test]
fn isotropic_form_is_optimal_on_equilateral_triangles() {
    // unit-area equilateral with circumradius R: e = R^2 - |x - c|^2
    let q = QuadraticForm::new(1.0, 0.0, 1.0);
    let k_inf = k_p(&q, f64::INFINITY).unwrap().value;
    assert!((k_inf - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-6, "{k_inf}");
    let k1 = k_p(&q, 1.0).unwrap().value;
    assert!((k1 - 1.0 / 3f64.sqrt()).abs() < 1e-6, "{k1}");
    let k2 = k_p(&q, 2.0).unwrap().value;
    assert!((k2 - 0.5962847940).abs() < 1e-6, "{k2}");
    let s = (4.0 / 3f64.sqrt()).sqrt();
    let eq = Triangle::new(vec2(0.0, 0.0), vec2(s, 0.0), vec2(0.5 * s, 0.5 * s * 3f64.sqrt())).unwrap();
    assert!((p1_interp_error(&q, &eq, 2.0).unwrap() - 0.5962847940).abs() < 1e-9);
}

#[test]
fn degenerate_forms_have_zero_shape_function() {
    let r = k_p(&QuadraticForm::new(0.0, 0.0, 0.0), 2.0).unwrap();
    assert_eq!(r.value, 0.0);
    assert_eq!(k_p(&QuadraticForm::new(1.0, 2.0, 1.0), 2.0).unwrap().value, 0.0);
}

#[test]
fn scaled_shape_function_exponents() {
    let q = QuadraticForm::new(1.0, 0.3, -0.5);
    for p in [1.0, f64::INFINITY] {
        let k = k_p(&q, p).unwrap().value;
        assert!((scaled_k(&q, 1.0, p).unwrap() - k).abs() < 1e-12);
        let factor = if p == 1.0 { 16.0 } else { 4.0 };
        assert!((scaled_k(&q, 4.0, p).unwrap() - factor * k).abs() < 1e-12 * factor * k.max(1.0));
    }
    assert!(scaled_k(&q, 0.0, 2.0).is_err());
}

#[test]
fn cubic_discriminants() {
    assert_eq!(disc_cubic(&CubicForm::new(1.0, 0.0, 0.0, 0.0)), 0.0);
    assert_eq!(disc_cubic(&CubicForm::new(1.0, 0.0, -3.0, 0.0)), 108.0);
    assert_eq!(disc_cubic(&CubicForm::new(0.0, 1.0, 1.0, 0.0)), 1.0);
}

#[test]
fn quadratic_interpolation_reproduces_quadratics_only() {
    let t = Triangle::new(vec2(0.1, 0.2), vec2(0.9, 0.0), vec2(0.3, 0.8)).unwrap();
    assert_eq!(p2_interp_error(&CubicForm::new(0.0, 0.0, 0.0, 0.0), &t, 2.0).unwrap(), 0.0);
    assert!(p2_interp_error(&CubicForm::new(1.0, 0.0, 0.0, 0.0), &t, 2.0).unwrap() > 0.0);
}

#[test]
fn equivalence_ratios_cluster_per_sign() {
    let samples = [
        CubicForm::new(1.0, 0.0, -3.0, 0.0),
        CubicForm::new(0.7, 0.2, -2.0, 0.1),
        CubicForm::new(0.0, 1.0, 1.0, 0.0),
        CubicForm::new(1.0, 0.0, 1.0, 0.0),
        CubicForm::new(1.0, 0.0, 0.0, 0.0),
    ];
    let s = p2_interp_equivalence(&samples, 2.0, &KpOptions::default()).unwrap();
    assert_eq!(s.excluded, 1);
    assert_eq!(s.positive.count + s.negative.count, 4);
    assert!(s.positive.spread() <= 0.1 && s.negative.spread() <= 0.1, "{:?} {:?}", s.positive, s.negative);
}

#[test]
fn degenerate_triangle_is_rejected_and_orientation_fixed() {
    assert!(Triangle::new(vec2(0.0, 0.0), vec2(1.0, 1.0), vec2(2.0, 2.0)).is_err());
    let t = Triangle::new(vec2(0.0, 0.0), vec2(0.0, 1.0), vec2(1.0, 0.0)).unwrap();
    assert!((t.area() - 0.5).abs() < 1e-15);
}

fn form() -> impl Strategy<Value = QuadraticForm> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, c)| QuadraticForm::new(a, b, c))
}

fn triangle() -> impl Strategy<Value = Triangle> {
    prop::array::uniform6(-1.0f64..1.0)
        .prop_filter_map("degenerate", |v| Triangle::new(vec2(v[0], v[1]), vec2(v[2], v[3]), vec2(v[4], v[5])).ok())
        .prop_filter("thin", |t| t.area() > 0.05)
}

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn error_is_translation_invariant(q in form(), t in triangle(), d in prop::array::uniform2(-3.0f64..3.0), p in exponent()) {
        let a = p1_interp_error(&q, &t, p).unwrap();
        let b = p1_interp_error(&q, &t.translate(&vec2(d[0], d[1])), p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }

    #[test]
    fn error_ignores_affine_terms(q in form(), t in triangle(), l in prop::array::uniform3(-2.0f64..2.0), p in exponent()) {
        // one-triangle mesh of a smooth quadratic with affine part
        let f = CartoonFunction::smooth(
            "q",
            Arc::new(Poly2::from_coeffs(l[0], l[1], l[2], q.a, q.b, q.c)),
            ConvexPolygon::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(),
        );
        let tri = Triangulation { vertices: t.v.to_vec(), triangles: vec![[0, 1, 2]], tags: vec![Tag::Regular], strip_width: 0.0 };
        let mesh = interp_error_global(&f, &tri, p).unwrap();
        let shape = p1_interp_error(&q, &t, p).unwrap();
        // two adaptive rules on |e|^p, which has a kink where e changes sign
        prop_assert!((mesh - shape).abs() <= 1e-6 * shape.max(1e-10), "{mesh} vs {shape}");
    }

    #[test]
    fn error_transforms_with_the_form(q in form(), t in triangle(), th in 0.0f64..PI, s in 0.3f64..3.0, p in exponent()) {
        // e_{phi T}(q o phi^{-1}) = |det phi|^{1/p} e_T(q)
        let phi = rotation(th) * Mat2::new(s, 0.0, 0.0, 1.0 / s) * 1.5;
        let inv = phi.try_inverse().unwrap();
        let a = p1_interp_error(&q, &t, p).unwrap();
        let b = p1_interp_error(&q.compose(&inv), &t.map(&phi).unwrap(), p).unwrap();
        let scale = if p.is_infinite() { 1.0 } else { phi.determinant().abs().powf(1.0 / p) };
        prop_assert!((b - scale * a).abs() <= 1e-8 * (scale * a).max(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn shape_function_covariance(q in form(), l in prop::array::uniform4(-1.0f64..1.0)) {
        let phi = Mat2::new(l[0], l[1], l[2], l[3]);
        prop_assume!(phi.determinant().abs() > 0.2 && q.det().abs() > 0.05);
        let k = k_p(&q, 2.0).unwrap().value;
        let kphi = k_p(&q.compose(&phi), 2.0).unwrap().value;
        let expected = phi.determinant().abs() * k;
        prop_assert!((kphi - expected).abs() <= 0.02 * expected, "{kphi} vs {expected}");
    }

    #[test]
    fn larger_start_budget_never_hurts(q in form()) {
        prop_assume!(q.det().abs() > 0.05);
        let small = k_p_with(&q, 2.0, &KpOptions { budget: 3, ..KpOptions::default() }).unwrap().value;
        let large = k_p_with(&q, 2.0, &KpOptions { budget: 9, ..KpOptions::default() }).unwrap().value;
        prop_assert!(large <= small + 1e-12);
    }

    #[test]
    fn cubic_shape_function_is_rotation_invariant(c in prop::array::uniform4(-1.0f64..1.0), th in 0.0f64..PI) {
        let q = CubicForm::new(c[0], c[1], c[2], c[3]);
        prop_assume!(disc_cubic(&q).abs() > 1e-3);
        let opts = KpOptions::default();
        let a = k3_p(&q, 2.0, &opts).unwrap().value;
        let b = k3_p(&q.compose(&rotation(th)), 2.0, &opts).unwrap().value;
        prop_assert!((a - b).abs() <= 0.02 * a, "{a} vs {b}");
    }
}
