//! Cauchy integral reconstruction on balls of a slice.

use std::f64::consts::PI;

use tregular::cauchy::{
    cauchy_kernel, cauchy_reconstruct, error_table, interior_points, make_grid,
};
use tregular::quat13::Quat13;
use tregular::{Element, Error, PolyMap};

fn ctx() -> Quat13<f64> {
    Quat13::new()
}

fn slice_unit(q: &Quat13<f64>) -> Element<f64> {
    Element::new(q.algebra(), vec![0.0, 0.0, 0.6, 0.8]).unwrap()
}

fn sample_map(q: &Quat13<f64>) -> PolyMap<f64> {
    q.tk((2, 1))
        .add(&q.tk((1, 0)).right_mul(&q.unit("k")))
        .add(&q.tk((0, 3)).scale(&0.5))
}

fn point(q: &Quat13<f64>, unit: &Element<f64>, c: [f64; 3]) -> Element<f64> {
    let mut x = Element::real(q.algebra(), c[0]);
    x.add_scaled(&c[1], &q.unit("i"));
    x.add_scaled(&c[2], unit);
    x
}

fn distance(a: &Element<f64>, b: &Element<f64>) -> f64 {
    (a - b).norm_sq().sqrt()
}

#[test]
fn sphere_weights_sum_to_the_area() {
    let q = ctx();
    let j = slice_unit(&q);
    for radius in [0.5, 1.0, 2.5] {
        let grid = make_grid(&j, &Element::zero(q.algebra()), radius, 12).unwrap();
        let area = 4.0 * PI * radius * radius;
        assert!((grid.total_weight() - area).abs() < 1e-12 * area);
    }
}

#[test]
fn constants_are_reproduced() {
    let q = ctx();
    let j = slice_unit(&q);
    let c = Element::new(q.algebra(), vec![1.5, -2.0, 0.25, 3.0]).unwrap();
    let eval = |_: &Element<f64>| Ok(c.clone());
    let grid = make_grid(&j, &Element::zero(q.algebra()), 1.0, 32).unwrap();
    for x in interior_points(&j, &Element::zero(q.algebra()), 0.6, 5, 3) {
        let got = cauchy_reconstruct(&eval, &grid, &x).unwrap().value;
        assert!(distance(&got, &c) < 1e-11, "{got}");
    }
}

#[test]
fn reconstruction_does_not_depend_on_the_radius() {
    let q = ctx();
    let j = slice_unit(&q);
    let f = sample_map(&q);
    let eval = |x: &Element<f64>| f.evaluate_at(x);
    let center = point(&q, &j, [0.2, -0.1, 0.3]);
    let x = point(&q, &j, [0.4, 0.1, 0.2]);
    let exact = f.evaluate_at(&x).unwrap();
    let small = make_grid(&j, &center, 0.8, 32).unwrap();
    let large = make_grid(&j, &center, 1.6, 32).unwrap();
    let a = cauchy_reconstruct(&eval, &small, &x).unwrap().value;
    let b = cauchy_reconstruct(&eval, &large, &x).unwrap().value;
    let scale = exact.norm_sq().sqrt();
    assert!(distance(&a, &exact) < 1e-9 * scale);
    assert!(distance(&b, &exact) < 1e-9 * scale);
}

#[test]
fn reversing_the_orientation_negates_the_integral() {
    let q = ctx();
    let j = slice_unit(&q);
    let f = sample_map(&q);
    let eval = |x: &Element<f64>| f.evaluate_at(x);
    let grid = make_grid(&j, &Element::zero(q.algebra()), 1.0, 16).unwrap();
    let mut inward = grid.clone();
    for node in &mut inward.nodes {
        node.normal = -node.normal.clone();
    }
    let x = point(&q, &j, [0.1, 0.3, -0.2]);
    let out = cauchy_reconstruct(&eval, &grid, &x).unwrap().value;
    let inn = cauchy_reconstruct(&eval, &inward, &x).unwrap().value;
    assert!(distance(&out, &-inn) < 1e-14);
}

#[test]
fn errors_shrink_as_the_order_grows() {
    let q = ctx();
    let j = slice_unit(&q);
    let f = sample_map(&q);
    let eval = |x: &Element<f64>| f.evaluate_at(x);
    let zero = Element::zero(q.algebra());
    let points = interior_points(&j, &zero, 0.7, 6, 9);
    let orders = [4, 8, 16, 32];
    let rows = error_table(&eval, &j, &zero, 1.0, &points, &orders).unwrap();
    let worst: Vec<f64> = orders
        .iter()
        .map(|&o| {
            rows.iter()
                .filter(|r| r.order == o)
                .map(|r| r.rel_error)
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(
        worst.windows(2).all(|w| w[1] < w[0] || w[1] < 1e-10),
        "{worst:?}"
    );
    assert!(worst[3] < 1e-9, "{worst:?}");
}

#[test]
fn invalid_inputs_are_reported() {
    let q = ctx();
    let j = slice_unit(&q);
    let zero = Element::zero(q.algebra());
    let f = sample_map(&q);
    let eval = |x: &Element<f64>| f.evaluate_at(x);
    assert!(matches!(
        make_grid(&j, &zero, 1.0, 1),
        Err(Error::OrderTooSmall(1))
    ));
    let grid = make_grid(&j, &zero, 1.0, 8).unwrap();
    let outside = point(&q, &j, [0.9, 0.5, 0.0]);
    assert!(matches!(
        cauchy_reconstruct(&eval, &grid, &outside),
        Err(Error::OutsideBall)
    ));
    let off_slice = Element::new(q.algebra(), vec![0.0, 0.0, 0.8, -0.6])
        .unwrap()
        .scale_by(&0.1);
    assert!(matches!(
        cauchy_reconstruct(&eval, &grid, &off_slice),
        Err(Error::OutsideSubspace)
    ));
    assert!(matches!(
        cauchy_kernel(&j, &j),
        Err(Error::CoincidentPoints)
    ));
    let near = point(&q, &j, [0.0, 0.0, 0.98]);
    assert!(
        cauchy_reconstruct(&eval, &grid, &near)
            .unwrap()
            .ill_conditioned
    );
}
