//! Floating-point Cauchy integral reconstruction for (1,3)-regular maps over
//! 2-spheres inside a slice `span(1, i, J)`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::quat13::{Evaluator, Quat13};

/// Points closer than this fraction of the radius to the sphere are flagged.
pub const BOUNDARY_MARGIN: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct Node {
    pub point: Element<f64>,
    /// Outward unit normal `(y - y_0)/R`.
    pub normal: Element<f64>,
    pub weight: f64,
}

/// Product rule on `∂B_J(y_0, R)`: Gauss–Legendre in the polar cosine (polar
/// axis `J`) times the trapezoid rule in azimuth.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub center: Element<f64>,
    pub radius: f64,
    pub order: usize,
    pub unit: Element<f64>,
    pub nodes: Vec<Node>,
}

impl QuadratureGrid {
    pub fn total_weight(&self) -> f64 {
        pairwise(
            &self.nodes.iter().map(|n| n.weight).collect::<Vec<_>>(),
            |a, b| a + b,
        )
    }

    /// `Σ w · g(y)`.
    pub fn integrate(&self, g: impl Fn(&Node) -> Element<f64>) -> Element<f64> {
        let terms: Vec<Element<f64>> = self
            .nodes
            .iter()
            .map(|n| g(n).scale_by(&n.weight))
            .collect();
        pairwise(&terms, |a, b| a + b)
    }
}

/// Fixed-shape pairwise reduction, reproducible across runs.
fn pairwise<T: Clone>(xs: &[T], add: impl Fn(T, T) -> T + Copy) -> T {
    match xs.len() {
        0 => panic!("pairwise reduction of an empty slice"),
        1 => xs[0].clone(),
        n => add(pairwise(&xs[..n / 2], add), pairwise(&xs[n / 2..], add)),
    }
}

fn check_unit(ctx: &Quat13<f64>, unit: &Element<f64>) -> Result<()> {
    ctx.circle_point(unit).map(|_| ())
}

/// Components of `x` along the frame `(1, i, J)`, or `OutsideSubspace`.
fn frame_coords(x: &Element<f64>, unit: &Element<f64>) -> Result<[f64; 3]> {
    let c = x.coeffs();
    let beta = c[2] * unit.coeff(2) + c[3] * unit.coeff(3);
    let off = c[3] * unit.coeff(2) - c[2] * unit.coeff(3);
    if off.abs() > 1e-12 * (1.0 + beta.abs()) {
        return Err(Error::OutsideSubspace);
    }
    Ok([c[0], c[1], beta])
}

/// `conj(y - x) / (4π |y - x|³)`.
pub fn cauchy_kernel(y: &Element<f64>, x: &Element<f64>) -> Result<Element<f64>> {
    let d = y.try_sub(x)?;
    let r2 = d.norm_sq();
    if r2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(d.conj().scale_by(&(1.0 / (4.0 * PI * r2 * r2.sqrt()))))
}

pub fn make_grid(
    unit: &Element<f64>,
    center: &Element<f64>,
    radius: f64,
    order: usize,
) -> Result<QuadratureGrid> {
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {radius}")));
    }
    let ctx = Quat13::<f64>::new();
    check_unit(&ctx, unit)?;
    frame_coords(center, unit)?;
    let alg = ctx.algebra();
    let (one, i) = (Element::one(alg), ctx.unit("i"));
    let gl = GaussLegendre::new(NonZeroUsize::new(order).expect("order ≥ 2"));
    let azimuths = 2 * order;
    let dphi = 2.0 * PI / azimuths as f64;
    let mut nodes = Vec::with_capacity(order * azimuths);
    for &(t, w) in gl.as_node_weight_pairs() {
        let s = (1.0 - t * t).sqrt();
        for a in 0..azimuths {
            let phi = a as f64 * dphi;
            let mut normal = one.scale_by(&(s * phi.cos()));
            normal.add_scaled(&(s * phi.sin()), &i);
            normal.add_scaled(&t, unit);
            nodes.push(Node {
                point: center + &normal.scale_by(&radius),
                normal,
                weight: radius * radius * w * dphi,
            });
        }
    }
    Ok(QuadratureGrid {
        center: center.clone(),
        radius,
        order,
        unit: unit.clone(),
        nodes,
    })
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub value: Element<f64>,
    /// `x` lies within `BOUNDARY_MARGIN · R` of the sphere.
    pub ill_conditioned: bool,
}

/// `Σ w · K(y, x) · n(y) · f(y)` over the grid nodes.
pub fn cauchy_reconstruct(
    f: &Evaluator<'_, f64>,
    grid: &QuadratureGrid,
    x: &Element<f64>,
) -> Result<Reconstruction> {
    let rel = frame_coords(&x.try_sub(&grid.center)?, &grid.unit)?;
    let dist = rel.iter().map(|c| c * c).sum::<f64>().sqrt();
    if dist >= grid.radius {
        return Err(Error::OutsideBall);
    }
    let values = grid
        .nodes
        .iter()
        .map(|n| Ok(cauchy_kernel(&n.point, x)? * &n.normal * f(&n.point)?))
        .collect::<Result<Vec<_>>>()?;
    let weighted: Vec<Element<f64>> = values
        .iter()
        .zip(&grid.nodes)
        .map(|(v, n)| v.scale_by(&n.weight))
        .collect();
    Ok(Reconstruction {
        value: pairwise(&weighted, |a, b| a + b),
        ill_conditioned: grid.radius - dist < BOUNDARY_MARGIN * grid.radius,
    })
}

/// One row of a reconstruction error table.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub order: usize,
    pub x: Element<f64>,
    pub abs_error: f64,
    pub rel_error: f64,
}

/// Reconstruction errors against direct evaluation, one row per
/// `(order, point)`.
pub fn error_table(
    f: &Evaluator<'_, f64>,
    unit: &Element<f64>,
    center: &Element<f64>,
    radius: f64,
    points: &[Element<f64>],
    orders: &[usize],
) -> Result<Vec<ErrorRow>> {
    let mut rows = Vec::new();
    for &order in orders {
        let grid = make_grid(unit, center, radius, order)?;
        for x in points {
            let exact = f(x)?;
            let got = cauchy_reconstruct(f, &grid, x)?.value;
            let abs_error = got.try_sub(&exact)?.norm_sq().sqrt();
            let scale = exact.norm_sq().sqrt();
            rows.push(ErrorRow {
                order,
                x: x.clone(),
                abs_error,
                rel_error: if scale > 0.0 {
                    abs_error / scale
                } else {
                    abs_error
                },
            });
        }
    }
    Ok(rows)
}

/// Points `x_0 + x_1 i + β J` with `|x - y_0| ≤ max_radius`, spread by a
/// fixed seed.
pub fn interior_points(
    unit: &Element<f64>,
    center: &Element<f64>,
    max_radius: f64,
    count: usize,
    seed: u64,
) -> Vec<Element<f64>> {
    use rand::Rng;
    let mut rng = crate::sampling::rng(seed);
    let alg = unit.algebra().clone();
    let i = Element::basis(&alg, 1);
    (0..count)
        .map(|_| loop {
            let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
            let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if r <= 1.0 && r > 0.0 {
                let mut x = center.clone();
                x.add_scaled(&(max_radius * v[0]), &Element::one(&alg));
                x.add_scaled(&(max_radius * v[1]), &i);
                x.add_scaled(&(max_radius * v[2]), unit);
                break x;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::TorusPoint;
    use crate::poly::numeric_cr;

    fn ctx() -> Quat13<f64> {
        Quat13::new()
    }

    fn h(c: [f64; 4]) -> Element<f64> {
        Element::new(ctx().algebra(), c.to_vec()).unwrap()
    }

    #[test]
    fn kernel_values() {
        let k = cauchy_kernel(&h([1.0, 0.0, 0.0, 0.0]), &h([0.0; 4])).unwrap();
        assert!((k.coeff(0) - 1.0 / (4.0 * PI)).abs() < 1e-15);
        let k = cauchy_kernel(&h([0.0, 2.0, 0.0, 0.0]), &h([0.0; 4])).unwrap();
        assert!(k.approx_eq(&h([0.0, -1.0 / (16.0 * PI), 0.0, 0.0])));
        assert_eq!(
            cauchy_kernel(&h([1.0; 4]), &h([1.0; 4])).unwrap_err(),
            Error::CoincidentPoints
        );
    }

    #[test]
    fn kernel_is_monogenic_in_x() {
        let q = ctx();
        let torus: TorusPoint<f64> = q.circle_point(&q.unit("j")).unwrap();
        let y = h([0.3, -0.2, 0.9, 0.0]);
        let kernel = |x: &Element<f64>| cauchy_kernel(&y, x);
        for point in [[0.1, 0.2, -0.3], [-0.5, 0.4, 0.1], [0.0, 0.0, 0.2]] {
            let r = numeric_cr(q.fan(), &torus, &kernel, &point, Some(1e-5)).unwrap();
            assert!(r.norm_sq().sqrt() < 1e-6, "{r}");
        }
    }

    #[test]
    fn grid_weights_and_symmetry() {
        let j = ctx().unit("j");
        let grid = make_grid(&j, &h([0.5, 0.0, 0.0, 0.0]), 2.0, 16).unwrap();
        assert!((grid.total_weight() - 16.0 * PI).abs() < 1e-12 * 16.0 * PI);
        let c = h([3.0, 0.0, 1.0, 0.0]);
        let integral = grid.integrate(|_| c.clone());
        assert!(
            integral
                .try_sub(&c.scale_by(&(16.0 * PI)))
                .unwrap()
                .norm_sq()
                .sqrt()
                < 1e-10
        );
        let first = grid.integrate(|n| n.point.try_sub(&grid.center).unwrap());
        assert!(first.norm_sq().sqrt() < 1e-12);
        assert_eq!(
            make_grid(&j, &grid.center, 1.0, 1).unwrap_err(),
            Error::OrderTooSmall(1)
        );
    }

    #[test]
    fn constants_are_reproduced() {
        let j = ctx().unit("j");
        let grid = make_grid(&j, &h([0.0; 4]), 1.0, 16).unwrap();
        let one = |_: &Element<f64>| Ok(h([1.0, 0.0, 0.0, 0.0]));
        let r = cauchy_reconstruct(&one, &grid, &grid.center).unwrap();
        assert!(r.value.approx_eq(&h([1.0, 0.0, 0.0, 0.0])));
        assert!(!r.ill_conditioned);
    }

    #[test]
    fn regular_polynomial_is_reproduced() {
        let q = ctx();
        let j = q.unit("j");
        let f = q.tk((1, 1));
        let eval = |x: &Element<f64>| f.evaluate_at(x);
        let grid = make_grid(&j, &h([0.0; 4]), 1.0, 32).unwrap();
        let x = h([0.3, 0.1, 0.2, 0.0]);
        let got = cauchy_reconstruct(&eval, &grid, &x).unwrap().value;
        let exact = eval(&x).unwrap();
        let err = got.try_sub(&exact).unwrap().norm_sq().sqrt();
        assert!(err <= 1e-8 * exact.norm_sq().sqrt(), "{err}");
    }

    #[test]
    fn identity_map_is_not_reproduced() {
        let j = ctx().unit("j");
        let id = |x: &Element<f64>| Ok(x.clone());
        let points = interior_points(&j, &h([0.0; 4]), 0.7, 5, 3);
        let rows = error_table(&id, &j, &h([0.0; 4]), 1.0, &points, &[16]).unwrap();
        assert!(rows.iter().any(|r| r.abs_error > 1e-3));
    }

    #[test]
    fn domain_errors() {
        let j = ctx().unit("j");
        let grid = make_grid(&j, &h([0.0; 4]), 1.0, 4).unwrap();
        let one = |_: &Element<f64>| Ok(h([1.0, 0.0, 0.0, 0.0]));
        assert_eq!(
            cauchy_reconstruct(&one, &grid, &h([2.0, 0.0, 0.0, 0.0])).unwrap_err(),
            Error::OutsideBall
        );
        assert_eq!(
            cauchy_reconstruct(&one, &grid, &h([0.0, 0.0, 0.0, 0.1])).unwrap_err(),
            Error::OutsideSubspace
        );
        assert!(
            cauchy_reconstruct(&one, &grid, &h([0.97, 0.0, 0.0, 0.0]))
                .unwrap()
                .ill_conditioned
        );
    }
}
