//! Worked examples for the quaternionic (1,3) fan.

use tregular::quat13::{classify_slice_preserving, Coefficients, IdentityOutcome, Quat13};
use tregular::scalar::rat;
use tregular::tregular::{check_regular, check_slice_preserving, induce, CheckOptions};
use tregular::{Element, Error, PolyMap, Rational, Sampler};

type Q = Rational;

fn ctx() -> Quat13<Q> {
    Quat13::new()
}

fn linear(q: &Quat13<Q>, labels: [&str; 4], signs: [i64; 4]) -> PolyMap<Q> {
    let coeffs: Vec<Element<Q>> = labels
        .iter()
        .zip(signs)
        .map(|(l, s)| q.unit(l).scale_by(&rat(s, 1)))
        .collect();
    PolyMap::linear(q.algebra(), &coeffs)
}

#[test]
fn degree_one_members_match_their_closed_forms() {
    let q = ctx();
    // T_(1,0) = x_1 - i x_0 and T_(0,1) = x_0 + j x_2 + k x_3.
    assert_eq!(
        q.tk((1, 0)),
        linear(&q, ["i", "1", "1", "1"], [-1, 1, 0, 0])
    );
    assert_eq!(q.tk((0, 1)), linear(&q, ["1", "1", "j", "k"], [1, 0, 1, 1]));
    assert_eq!(
        q.tk((0, 0)),
        PolyMap::constant(Element::one(q.algebra()), 4)
    );
}

#[test]
fn each_degree_spans_four_times_k_plus_one_real_dimensions() {
    let q = ctx();
    for k in 0..=4 {
        let (rank, size) = q.family_rank(k);
        assert_eq!(size, 4 * (k as usize + 1));
        assert_eq!(rank, size, "degree {k}");
    }
}

#[test]
fn t_k_pass_the_regularity_check_and_plain_variables_do_not() {
    let q = ctx();
    let sampler = Sampler::RationalGrid { density: 4 };
    let opts = CheckOptions::default();
    for k in [(2, 0), (1, 1), (0, 3), (2, 2)] {
        let report = check_regular(&q.tk(k), q.fan(), &sampler, &opts).unwrap();
        assert!(report.is_regular(), "{k:?}");
    }
    let x2 = PolyMap::var(Element::one(q.algebra()), 4, 2);
    assert!(!check_regular(&x2, q.fan(), &sampler, &opts)
        .unwrap()
        .is_regular());
}

#[test]
fn stems_are_the_a_and_b_maps_on_the_slice() {
    let q = ctx();
    let torus = q.circle_grid(3).pop().unwrap();
    for deg in 0..=4 {
        for k in Quat13::<Q>::family_indices(deg) {
            let stem = q.extract_stem(&q.tk(k), &torus).unwrap();
            let (a, b) = q.akbk_on_slice(&q.akbk(k)).unwrap();
            assert_eq!(stem.f_empty, a, "{k:?}");
            assert_eq!(stem.f_one, b, "{k:?}");
            assert!(q.stem_is_harmonic(&stem));
        }
    }
}

#[test]
fn induced_function_of_the_stem_gives_back_the_map() {
    let q = ctx();
    let f = q.tk((2, 1)).add(&q.tk((0, 2)).right_mul(&q.unit("j")));
    let torus = q.circle_grid(2).remove(1);
    let induced = induce(
        q.stem_function(&q.extract_stem(&f, &torus).unwrap())
            .unwrap(),
    )
    .unwrap();
    let x = Element::new(
        q.algebra(),
        vec![rat(1, 2), rat(-2, 3), rat(3, 5), rat(4, 5)],
    )
    .unwrap();
    assert_eq!(induced.eval(&x).unwrap(), f.evaluate_at(&x).unwrap());
}

#[test]
fn a_and_b_rebuild_t_k() {
    let q = ctx();
    for deg in 0..=4 {
        for k in Quat13::<Q>::family_indices(deg) {
            let ab = q.akbk(k);
            assert!(q.akbk_identity(&ab).unwrap(), "{k:?}");
            assert!(q.akbk_homogeneous(&ab).unwrap(), "{k:?}");
        }
    }
}

#[test]
fn expansion_about_an_off_origin_center_reconstructs_exactly() {
    let q = ctx();
    let f = q
        .tk((1, 1))
        .right_mul(&q.unit("k"))
        .add(&q.tk((0, 2)))
        .add(&q.tk((2, 0)).scale(&rat(3, 2)));
    let e = q.series_expand(&f, (rat(1, 3), rat(-1, 2)), 2).unwrap();
    assert_eq!(q.reconstruct(&e).unwrap(), f);
}

#[test]
fn non_regular_inputs_are_rejected() {
    let q = ctx();
    let x2 = PolyMap::var(Element::one(q.algebra()), 4, 2);
    assert!(matches!(
        q.expand_homogeneous(&x2, 1),
        Err(Error::NotInUk { degree: 1 })
    ));
    let identity = linear(&q, ["1", "i", "j", "k"], [1, 1, 1, 1]);
    assert!(matches!(
        q.series_expand(&identity, (rat(0, 1), rat(0, 1)), 1),
        Err(Error::NotRegular)
    ));
}

#[test]
fn identity_test_names_the_first_differing_coefficient() {
    let q = ctx();
    let torus = q.circle_grid(1).remove(0);
    let f = q.tk((0, 1));
    assert_eq!(
        q.identity_test(&f, &f, &torus).unwrap(),
        IdentityOutcome::Equal
    );
    let g = f.add(&q.tk((1, 1)).right_mul(&q.unit("i")));
    match q.identity_test(&f, &g, &torus).unwrap() {
        IdentityOutcome::Differ {
            witness,
            coeff,
            slices_differ,
        } => {
            assert_eq!(witness, (1, 1));
            assert_eq!(coeff, -q.unit("i"));
            assert!(slices_differ);
        }
        IdentityOutcome::Equal => panic!("maps differ"),
    }
}

#[test]
fn slice_restriction_is_injective_on_low_degrees() {
    let q = ctx();
    let torus = q.circle_grid(1).remove(0);
    let (rank, dim) = q.slice_restriction_rank(3, &torus).unwrap();
    assert_eq!(rank, dim);
}

#[test]
fn modulus_is_constant_on_orbits() {
    let q = ctx();
    let mut rng = tregular::sampling::rng(11);
    for _ in 0..10 {
        let (x, y) = q.random_orbit_pair(&mut rng);
        for k in [(1, 0), (1, 2), (3, 1)] {
            assert!(q.modulus_invariance_check(k, &x, &y).unwrap());
        }
    }
}

#[test]
fn general_representation_needs_distinct_units() {
    let q = ctx();
    let f = q.tk((1, 1));
    let eval = |x: &Element<Q>| f.evaluate_at(x);
    let j = q.unit("j");
    let z = q.unit("i");
    assert!(matches!(
        q.represent_general(&eval, &j, &j, &j, &z, &rat(1, 2)),
        Err(Error::SingularPair)
    ));
}

fn coeffs(entries: &[((u32, u32), Element<Q>)]) -> Coefficients<Q> {
    entries.iter().cloned().collect()
}

#[test]
fn classification_of_slice_preserving_expansions() {
    let q = ctx();
    let (one, i, j) = (Element::one(q.algebra()), q.unit("i"), q.unit("j"));
    let sampler = Sampler::RationalGrid { density: 4 };
    let preserving = coeffs(&[
        ((1, 0), i.clone()),
        ((0, 2), one.clone()),
        ((2, 2), one.scale_by(&rat(3, 1))),
    ]);
    assert!(classify_slice_preserving(&preserving));
    let f = q.combine(&preserving);
    assert!(check_slice_preserving(&f, q.fan(), &sampler)
        .unwrap()
        .is_preserving());

    for bad in [
        coeffs(&[((1, 1), one.clone())]),
        coeffs(&[((0, 2), j.clone())]),
        coeffs(&[((0, 1), i.clone())]),
    ] {
        assert!(!classify_slice_preserving(&bad));
        let f = q.combine(&bad);
        assert!(!check_slice_preserving(&f, q.fan(), &sampler)
            .unwrap()
            .is_preserving());
    }
}
