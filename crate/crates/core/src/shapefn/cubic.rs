use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};
use crate::quad::TriangleRule;

use super::optimize::{k3_p, KpOptions};
use super::{sample_sup, sweep_abs_power, Triangle};

/// `a x^3 + b x^2 y + c x y^2 + d y^3`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CubicForm {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        CubicForm { a, b, c, d }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        ((self.a * x + self.b * y) * x + self.c * y * y) * x + self.d * y * y * y
    }

    /// `q o phi` for a linear map `phi`.
    pub fn compose(&self, phi: &Mat2) -> CubicForm {
        let g = |x: f64, y: f64| {
            let v = phi * Vec2::new(x, y);
            self.eval(v.x, v.y)
        };
        let a = g(1.0, 0.0);
        let d = g(0.0, 1.0);
        let s = g(1.0, 1.0) - a - d;
        let t = g(1.0, -1.0) - a + d;
        CubicForm { a, b: 0.5 * (s - t), c: 0.5 * (s + t), d }
    }

    pub fn coefficient_norm(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }
}

/// Discriminant `b^2 c^2 - 4 a c^3 - 4 b^3 d + 18 a b c d - 27 a^2 d^2`.
pub fn disc_cubic(q: &CubicForm) -> f64 {
    let CubicForm { a, b, c, d } = *q;
    b * b * c * c - 4.0 * a * c * c * c - 4.0 * b * b * b * d + 18.0 * a * b * c * d - 27.0 * a * a * d * d
}

const NODES: [[f64; 2]; 6] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]];

fn p2_basis(x: f64, y: f64) -> [f64; 6] {
    let l = [1.0 - x - y, x, y];
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[0] * l[1],
        4.0 * l[1] * l[2],
        4.0 * l[0] * l[2],
    ]
}

/// Error `q - I_2 q` of a cubic on the reference triangle.
fn reference_error(q: &CubicForm, nodal: &[f64; 6], x: f64, y: f64) -> f64 {
    let b = p2_basis(x, y);
    q.eval(x, y) - (0..6).map(|i| nodal[i] * b[i]).sum::<f64>()
}

/// `||q - I_T q||_{L^p(T)}` for quadratic Lagrange interpolation at the
/// vertices and edge midpoints.
pub fn p2_interp_error(q: &CubicForm, t: &Triangle, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    let area = t.area();
    if !(area > 0.0) {
        return Err(Error::domain("degenerate triangle"));
    }
    let r = q.compose(&t.edge_matrix());
    let nodal: [f64; 6] = std::array::from_fn(|i| r.eval(NODES[i][0], NODES[i][1]));
    if p.is_infinite() {
        return Ok(sample_sup(|x, y| reference_error(&r, &nodal, x, y)));
    }
    let v = if p.fract() == 0.0 && (p as u64) % 2 == 0 && p <= 40.0 {
        let rule = TriangleRule::of_degree(3 * p as usize);
        rule.integrate(|x| reference_error(&r, &nodal, x[0], x[1]).powi(p as i32)).max(0.0)
    } else {
        sweep_abs_power(|x, y| reference_error(&r, &nodal, x, y), 3, p)?
    };
    Ok((2.0 * area * v).powf(1.0 / p))
}

/// Ratio spread of one discriminant sign class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassStats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl ClassStats {
    /// `max / min - 1`
    pub fn spread(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.max / self.min - 1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceStats {
    pub p: f64,
    pub positive: ClassStats,
    pub negative: ClassStats,
    pub excluded: usize,
    /// `(form, disc, K_{3,p}, K_{3,p} / |disc|^{1/4})` per retained sample.
    pub samples: Vec<(CubicForm, f64, f64, f64)>,
}

/// `K_{3,p}(q) / |disc q|^{1/4}` over `samples`, split by the sign of the
/// discriminant; near-degenerate forms are excluded.
pub fn p2_interp_equivalence(samples: &[CubicForm], p: f64, opts: &KpOptions) -> Result<EquivalenceStats> {
    let empty = ClassStats { count: 0, min: f64::INFINITY, max: 0.0 };
    let mut stats = EquivalenceStats { p, positive: empty, negative: empty, excluded: 0, samples: Vec::new() };
    for q in samples {
        let disc = disc_cubic(q);
        if disc.abs() < 1e-8 * q.coefficient_norm().powi(4) {
            stats.excluded += 1;
            continue;
        }
        let k = k3_p(q, p, opts)?.value;
        let ratio = k / disc.abs().powf(0.25);
        let class = if disc > 0.0 { &mut stats.positive } else { &mut stats.negative };
        class.count += 1;
        class.min = class.min.min(ratio);
        class.max = class.max.max(ratio);
        stats.samples.push((*q, disc, k, ratio));
    }
    Ok(stats)
}
