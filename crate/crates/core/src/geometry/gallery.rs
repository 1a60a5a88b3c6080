//! Built-in cartoon functions, addressable by name (`disc`, `disc:0.25`, ...).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{vec2, Mat2, Vec2};

use super::{CartoonFunction, ConvexPolygon, FnField, ParamCurve, Poly2, Region, ScalarField};

/// Name, parameter syntax and description of every gallery case.
pub const CASES: &[(&str, &str, &str)] = &[
    ("disc", "disc[:R]", "indicator of the disc of radius R (0.3) centred in (-0.5, 0.5)^2"),
    ("ellipse", "ellipse[:a,b]", "indicator of the ellipse with semi-axes a, b (0.35, 0.2)"),
    ("half-plane", "half-plane", "indicator of y > 0.2 x + 0.05 on (-0.5, 0.5)^2, a straight edge"),
    ("quadratic-bump-in-disc", "quadratic-bump-in-disc[:R]", "x^2 + y^2 inside the disc of radius R (0.3), 0 outside"),
    ("two-region-quadratics", "two-region-quadratics", "x^2 for y > 0 and -x^2 for y < 0 on (-1, 1)^2"),
    ("smooth-exp", "smooth-exp", "exp(x) + exp(y) on (-0.5, 0.5)^2, no edges"),
];

fn unit_box() -> ConvexPolygon {
    ConvexPolygon::rectangle(-0.5, 0.5, -0.5, 0.5).expect("valid box")
}

fn constant(c: f64) -> Arc<dyn ScalarField> {
    Arc::new(Poly2::constant(c))
}

/// Disc of radius `r` at the origin: regions `[inside, outside]`.
fn disc_regions(r: f64) -> Vec<Region> {
    vec![
        Region::new(move |z: &Vec2| z.norm_squared() < r * r, vec![(0, true)]),
        Region::new(move |z: &Vec2| z.norm_squared() >= r * r, vec![(0, false)]),
    ]
}

pub fn disc(r: f64) -> Result<CartoonFunction> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::domain(format!("disc radius {r} must lie in (0, 0.5)")));
    }
    CartoonFunction::new(
        format!("disc:{r}"),
        disc_regions(r),
        vec![constant(1.0), constant(0.0)],
        vec![ParamCurve::circle(Vec2::zeros(), r)],
        unit_box(),
    )
}

pub fn ellipse(a: f64, b: f64) -> Result<CartoonFunction> {
    if !(a > 0.0 && b > 0.0 && a < 0.5 && b < 0.5) {
        return Err(Error::domain(format!("ellipse axes ({a}, {b}) must lie in (0, 0.5)")));
    }
    let inside = move |z: &Vec2| (z.x / a).powi(2) + (z.y / b).powi(2) < 1.0;
    CartoonFunction::new(
        format!("ellipse:{a},{b}"),
        vec![Region::new(inside, vec![(0, true)]), Region::new(move |z: &Vec2| !inside(z), vec![(0, false)])],
        vec![constant(1.0), constant(0.0)],
        vec![ParamCurve::ellipse(Vec2::zeros(), a, b, 0.0)],
        unit_box(),
    )
}

pub fn half_plane() -> Result<CartoonFunction> {
    let above = |z: &Vec2| z.y > 0.2 * z.x + 0.05;
    CartoonFunction::new(
        "half-plane",
        vec![Region::new(above, vec![(0, true)]), Region::new(move |z: &Vec2| !above(z), vec![(0, false)])],
        vec![constant(1.0), constant(0.0)],
        // extends past the domain on both sides
        vec![ParamCurve::line(vec2(-1.0, -0.15), vec2(1.0, 0.2), 0.0, 2.0)],
        unit_box(),
    )
}

pub fn quadratic_bump_in_disc(r: f64) -> Result<CartoonFunction> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::domain(format!("disc radius {r} must lie in (0, 0.5)")));
    }
    CartoonFunction::new(
        format!("quadratic-bump-in-disc:{r}"),
        disc_regions(r),
        vec![Arc::new(Poly2::from_coeffs(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)), constant(0.0)],
        vec![ParamCurve::circle(Vec2::zeros(), r)],
        unit_box(),
    )
}

pub fn two_region_quadratics() -> Result<CartoonFunction> {
    CartoonFunction::new(
        "two-region-quadratics",
        vec![
            Region::new(|z: &Vec2| z.y > 0.0, vec![(0, true)]),
            Region::new(|z: &Vec2| z.y <= 0.0, vec![(0, false)]),
        ],
        vec![
            Arc::new(Poly2::from_coeffs(0.0, 0.0, 0.0, 1.0, 0.0, 0.0)),
            Arc::new(Poly2::from_coeffs(0.0, 0.0, 0.0, -1.0, 0.0, 0.0)),
        ],
        vec![ParamCurve::line(vec2(-2.0, 0.0), vec2(1.0, 0.0), 0.0, 4.0)],
        ConvexPolygon::rectangle(-1.0, 1.0, -1.0, 1.0)?,
    )
}

pub fn smooth_exp() -> CartoonFunction {
    let f = FnField::new(|z: &Vec2| {
        let (ex, ey) = (z.x.exp(), z.y.exp());
        (ex + ey, vec2(ex, ey), Mat2::new(ex, 0.0, 0.0, ey))
    });
    CartoonFunction::smooth("smooth-exp", Arc::new(f), unit_box())
}

fn parse_args(spec: &str, args: Option<&str>, n: usize) -> Result<Vec<f64>> {
    let Some(args) = args else { return Ok(Vec::new()) };
    let vals = args
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{spec}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != n {
        return Err(Error::Parse(format!("{spec}: expected {n} parameter(s)")));
    }
    Ok(vals)
}

/// Looks up a case by `name[:params]`.
pub fn by_name(spec: &str) -> Result<CartoonFunction> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a)),
        None => (spec.trim(), None),
    };
    match name {
        "disc" => {
            let v = parse_args(spec, args, 1)?;
            disc(v.first().copied().unwrap_or(0.3))
        }
        "ellipse" => {
            let v = parse_args(spec, args, 2)?;
            if v.is_empty() {
                ellipse(0.35, 0.2)
            } else {
                ellipse(v[0], v[1])
            }
        }
        "quadratic-bump-in-disc" => {
            let v = parse_args(spec, args, 1)?;
            quadratic_bump_in_disc(v.first().copied().unwrap_or(0.3))
        }
        "half-plane" | "two-region-quadratics" | "smooth-exp" if args.is_some() => {
            Err(Error::Parse(format!("{name} takes no parameters")))
        }
        "half-plane" => half_plane(),
        "two-region-quadratics" => two_region_quadratics(),
        "smooth-exp" => Ok(smooth_exp()),
        _ => Err(Error::Parse(format!("unknown gallery case '{name}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_validates() {
        for (name, _, _) in CASES {
            let f = by_name(name).unwrap();
            f.validate(40).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn parameters_parse() {
        let f = by_name("disc:0.25").unwrap();
        assert_eq!(f.name, "disc:0.25");
        assert!(by_name("disc:abc").is_err());
        assert!(by_name("ellipse:0.3").is_err());
        assert!(by_name("half-plane:1").is_err());
        assert!(by_name("nope").is_err());
    }
}
