//! Property tests over exact rationals for the algebraic invariants of the
//! crate. Float comparisons appear only where a finite difference is involved.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use proptest::sample::select;
use tregular::algebra::laws;
use tregular::fan::stereographic;
use tregular::hypercomplex::{hat_extension, make_paravectors, make_vh, verify_basis};
use tregular::poly::{
    apply_conj_cr, apply_cr, apply_laplacian, apply_nabla, numeric_cr, restrict_to_slice,
};
use tregular::quat13::{Coefficients, Quat13};
use tregular::scalar::rat;
use tregular::tregular::{induce, StemFunction};
use tregular::{
    algebra_by_name, AlgebraSpec, Element, HypercomplexBasis, PolyMap, Preset, Rational, Sampler,
    TFan, TorusPoint,
};

type Q = Rational;

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn nonneg_rational() -> impl Strategy<Value = Q> {
    (0i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn element(alg: Arc<AlgebraSpec>) -> impl Strategy<Value = Element<Q>> {
    prop::collection::vec(rational(), alg.dim())
        .prop_map(move |c| Element::new(&alg, c).expect("right length"))
}

fn in_span(basis: Arc<HypercomplexBasis<Q>>) -> impl Strategy<Value = Element<Q>> {
    prop::collection::vec(rational(), basis.m() + 1)
        .prop_map(move |c| basis.combine(&c).expect("right length"))
}

/// Random polynomial map of `vars` variables with at most `terms` monomials
/// of degree at most `maxdeg`.
fn poly_map(
    alg: Arc<AlgebraSpec>,
    vars: usize,
    maxdeg: usize,
    terms: usize,
) -> impl Strategy<Value = PolyMap<Q>> {
    let term = (
        prop::collection::vec(0..vars, 0..=maxdeg),
        element(alg.clone()),
    );
    prop::collection::vec(term, 1..=terms).prop_map(move |ts| {
        let mut f = PolyMap::zero(&alg, vars);
        for (factors, c) in ts {
            let mut m = vec![0u32; vars];
            for v in factors {
                m[v] += 1;
            }
            f.add_term(m, c);
        }
        f
    })
}

fn preset_algebra() -> impl Strategy<Value = Arc<AlgebraSpec>> {
    select(vec!["C", "H", "O", "Cl01", "Cl02", "Cl03", "Cl04"])
        .prop_map(|name| algebra_by_name(name).expect("preset"))
}

fn fan(name: &str) -> TFan<Q> {
    TFan::parse(name).expect("valid fan")
}

const FANS: [&str; 5] = [
    "H:(1,3)",
    "H:(0,3)",
    "Cl03:(0,1,3)",
    "Cl04:(0,2,4)",
    "Cl04:(1,4)",
];

fn fan_name() -> impl Strategy<Value = &'static str> {
    select(FANS.to_vec())
}

fn torus_point(fan: &TFan<Q>, seed: u64) -> TorusPoint<Q> {
    fan.torus_sample(&Sampler::Random { seed, count: 1 })
        .expect("sample")
        .remove(0)
}

/// A unit imaginary `stereographic(u)` spread over the labels `1..dim`.
fn unit_imaginary(alg: &Arc<AlgebraSpec>, u: &[Q]) -> Element<Q> {
    let mut coeffs = vec![rat(0, 1)];
    coeffs.extend(stereographic(u));
    coeffs.resize(alg.dim(), rat(0, 1));
    Element::new(alg, coeffs).expect("right length")
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn preset_tables_satisfy_star_algebra_laws(
        (x, y) in preset_algebra().prop_flat_map(|a| (element(a.clone()), element(a)))
    ) {
        prop_assert!(laws::antiautomorphism(&x, &y));
        prop_assert!(laws::involutive(&x));
        prop_assert!(laws::alternative(&x, &y));
    }

    #[test]
    fn associative_presets_are_associative(
        (x, y, z) in select(vec!["C", "H", "Cl02", "Cl03"])
            .prop_map(|n| algebra_by_name(n).unwrap())
            .prop_flat_map(|a| (element(a.clone()), element(a.clone()), element(a)))
    ) {
        prop_assert!(laws::associative(&x, &y, &z));
    }

    #[test]
    fn cone_inverse_is_two_sided(
        x in select(vec!["C", "H", "O"])
            .prop_map(|n| algebra_by_name(n).unwrap())
            .prop_flat_map(element)
    ) {
        prop_assume!(!x.is_zero());
        let inv = x.cone_inverse().unwrap();
        let one = Element::one(x.algebra());
        prop_assert_eq!(&x * &inv, one.clone());
        prop_assert_eq!(&inv * &x, one);
    }

    #[test]
    fn paravector_cone_inverse_is_two_sided(
        x in (1usize..=4)
            .prop_map(|n| Arc::new(make_paravectors::<Q>(n).unwrap()))
            .prop_flat_map(in_span)
    ) {
        prop_assume!(!x.is_zero());
        prop_assert!(x.in_quadratic_cone());
        let inv = x.cone_inverse().unwrap();
        let one = Element::one(x.algebra());
        prop_assert_eq!(&x * &inv, one.clone());
        prop_assert_eq!(&inv * &x, one);
    }

    #[test]
    fn complex_like_elements_have_expected_trace_norm_and_conjugate(
        (name, u) in select(vec![("H", 2usize), ("O", 6)])
            .prop_flat_map(|(n, d)| (Just(n), prop::collection::vec(rational(), d))),
        alpha in rational(),
        beta in rational(),
    ) {
        let alg = algebra_by_name(name).unwrap();
        let j = unit_imaginary(&alg, &u);
        prop_assert!(j.in_sphere());
        let x = &Element::real(&alg, alpha.clone()) + &j.scale_by(&beta);
        let two = rat(2, 1);
        prop_assert_eq!(x.trace(), Element::real(&alg, two * alpha.clone()));
        prop_assert_eq!(
            x.norm_form(),
            Element::real(&alg, alpha.clone() * alpha.clone() + beta.clone() * beta.clone())
        );
        prop_assert_eq!(x.conj(), &Element::real(&alg, alpha) - &j.scale_by(&beta));
        prop_assert!(x.in_quadratic_cone());
    }

    #[test]
    fn hypercomplex_subspaces_have_trace_form_and_cone(
        (x, y) in prop_oneof![
            (1usize..=4).prop_map(|n| Arc::new(make_paravectors::<Q>(n).unwrap())),
            Just(Arc::new(make_vh::<Q>(5, 5).unwrap())),
        ].prop_flat_map(|b| (in_span(b.clone()), in_span(b)))
    ) {
        let lhs = (&x * &y.conj()).trace();
        let rhs = Element::real(x.algebra(), rat(2, 1) * x.dot(&y));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(x.in_quadratic_cone());
    }

    #[test]
    fn hat_extension_succeeds_exactly_for_m_congruent_two(
        (n, mask) in (1usize..=6).prop_flat_map(|n| (Just(n), 1u32..(1 << n)))
    ) {
        let alg = tregular::make_algebra(Preset::Clifford0n(n)).unwrap();
        let mut vectors = vec![Element::<Q>::one(&alg)];
        vectors.extend(
            (0..n)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| Element::labelled(&alg, &format!("e{}", b + 1)).unwrap()),
        );
        let m = vectors.len() - 1;
        let basis = HypercomplexBasis::new("sub", vectors.clone()).unwrap();
        let hat: Element<Q> = vectors[1..].iter().fold(Element::one(&alg), |acc, v| &acc * v);
        let mut extended = vectors;
        extended.push(hat);
        let direct = verify_basis(&extended).is_ok();
        prop_assert_eq!(hat_extension(&basis).is_ok(), direct);
        prop_assert_eq!(direct, m % 4 == 2);
    }

    #[test]
    fn torus_dimension_counts_sphere_dimensions(
        (n, mask) in (1usize..=6).prop_flat_map(|n| (Just(n), 0u32..(1 << n)))
    ) {
        let mut steps: Vec<usize> = (0..n).filter(|t| mask & (1 << t) != 0).collect();
        if steps.is_empty() {
            steps.push(0);
        }
        steps.push(n);
        let basis = Arc::new(make_paravectors::<Q>(n).unwrap());
        let fan = TFan::new(basis, &steps).unwrap();
        prop_assert_eq!(fan.torus_dim(), n - fan.t0() - fan.tau());
        let blocks: usize = (1..=fan.tau()).map(|h| fan.block_size(h) - 1).sum();
        prop_assert_eq!(fan.torus_dim(), blocks);
    }

    #[test]
    fn decompose_inverts_recompose(
        name in fan_name(),
        seed in any::<u64>(),
        coords in prop::collection::vec(rational(), 8),
        betas in prop::collection::vec(nonneg_rational(), 4),
    ) {
        let fan = fan(name);
        let torus = torus_point(&fan, seed);
        let mirror = &coords[..fan.mirror_dim()];
        let betas = &betas[..fan.tau()];
        let x = fan.slice_point(mirror, betas, &torus).unwrap();
        let p = fan.decompose(&x).unwrap();
        prop_assert_eq!(&p.mirror[..], mirror);
        prop_assert_eq!(&p.betas[..], betas);
        prop_assert_eq!(fan.recompose(&p).unwrap(), x.clone());
        prop_assert!(fan.slice_membership(&p.torus, &x));
        for h in 1..=fan.tau() {
            if !betas[h - 1].is_zero() {
                prop_assert_eq!(p.torus.unit(h), torus.unit(h));
            }
        }
    }

    #[test]
    fn slice_membership_ignores_unit_signs(
        name in fan_name(),
        seed in any::<u64>(),
        other in any::<u64>(),
        coords in prop::collection::vec(rational(), 8),
        betas in prop::collection::vec(rational(), 4),
    ) {
        let fan = fan(name);
        let torus = torus_point(&fan, seed);
        let x = fan
            .slice_point(&coords[..fan.mirror_dim()], &betas[..fan.tau()], &torus)
            .unwrap();
        let y = fan.slice_point(&coords[..fan.mirror_dim()], &betas[..fan.tau()], &torus_point(&fan, other)).unwrap();
        for h in 1..=fan.tau() {
            let flipped = torus.flipped(h);
            prop_assert!(fan.slice_membership(&flipped, &x));
            prop_assert_eq!(fan.slice_membership(&flipped, &y), fan.slice_membership(&torus, &y));
        }
    }

    #[test]
    fn grid_torus_points_lie_exactly_on_the_spheres(
        name in fan_name(),
        density in 1usize..=5,
    ) {
        let fan = fan(name);
        for torus in fan.torus_sample(&Sampler::RationalGrid { density }).unwrap() {
            for h in 1..=fan.tau() {
                prop_assert!(torus.unit(h).in_sphere());
                let sq = torus
                    .block_coords(h)
                    .iter()
                    .fold(rat(0, 1), |acc, c| acc + c * c);
                prop_assert_eq!(sq, rat(1, 1));
            }
        }
    }

    #[test]
    fn slice_operators_factor_the_laplacian(
        (name, f) in fan_name().prop_flat_map(|name| {
            let fan = fan(name);
            (Just(name), poly_map(fan.basis().algebra().clone(), fan.slice_vars(), 4, 4))
        }),
        seed in any::<u64>(),
    ) {
        let fan = fan(name);
        let torus = torus_point(&fan, seed);
        let lap = apply_laplacian(&fan, &f).unwrap();
        let cr_conj = apply_cr(&fan, &torus, &apply_conj_cr(&fan, &torus, &f).unwrap()).unwrap();
        let conj_cr = apply_conj_cr(&fan, &torus, &apply_cr(&fan, &torus, &f).unwrap()).unwrap();
        prop_assert_eq!(&cr_conj, &lap);
        prop_assert_eq!(&conj_cr, &lap);
    }

    #[test]
    fn restriction_commutes_with_flipping_the_unit(
        f in poly_map(algebra_by_name("H").unwrap(), 4, 3, 5),
        seed in any::<u64>(),
    ) {
        let fan = fan("H:(1,3)");
        let torus = torus_point(&fan, seed);
        let direct = restrict_to_slice(&f, &fan, &torus).unwrap();
        let flipped = restrict_to_slice(&f, &fan, &torus.flipped(1)).unwrap();
        prop_assert_eq!(flipped, direct.reflect(2));
    }

    #[test]
    fn every_map_is_a_t_function_when_tau_is_zero(
        (name, f) in select(vec!["H:(3)", "Cl03:(3)", "C:(1)"]).prop_flat_map(|name| {
            let fan = fan(name);
            (Just(name), poly_map(fan.basis().algebra().clone(), fan.n() + 1, 3, 4))
        }),
        coords in prop::collection::vec(rational(), 4),
    ) {
        let fan = fan(name);
        prop_assert_eq!(fan.tau(), 0);
        let n = fan.n();
        let x = fan.basis().combine(&coords[..=n]).unwrap();
        let stem = StemFunction::new(fan, BTreeMap::from([(0, f.clone())])).unwrap();
        let induced = induce(stem).unwrap();
        prop_assert_eq!(induced.eval(&x).unwrap(), f.evaluate(&coords[..=n]).unwrap());
    }

    #[test]
    fn json_round_trips(
        x in preset_algebra().prop_flat_map(element),
        f in poly_map(algebra_by_name("H").unwrap(), 4, 3, 4),
        name in fan_name(),
        seed in any::<u64>(),
    ) {
        prop_assert_eq!(Element::from_json(&x.to_json()).unwrap(), x.clone());
        let alg = x.algebra();
        prop_assert_eq!(&AlgebraSpec::from_json(&alg.to_json()).unwrap(), alg.as_ref());
        prop_assert_eq!(PolyMap::from_json(&f.to_json(), None).unwrap(), f);
        let fan = fan(name);
        prop_assert_eq!(TFan::<Q>::from_json(&fan.to_json()).unwrap(), fan.clone());
        let basis = fan.basis();
        prop_assert_eq!(&HypercomplexBasis::<Q>::from_json(&basis.to_json()).unwrap(), basis);
        let torus = torus_point(&fan, seed);
        prop_assert_eq!(TorusPoint::from_json(&fan, &torus.to_json()).unwrap(), torus);
    }
}

// The (1,3) theory: fewer cases, since every case builds several T_k.
proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn t_k_is_homogeneous(k1 in 0u32..=5, k2 in 0u32..=5) {
        let q = Quat13::<Q>::new();
        prop_assert!(q.tk((k1, k2)).is_homogeneous(k1 + k2));
    }

    #[test]
    fn delta_equals_unit_power_times_nabla_on_fueter_polynomials(
        k1 in 0u32..=3,
        k2 in 0u32..=3,
        h in prop::array::uniform3(0u32..=3),
        seed in any::<u64>(),
    ) {
        let q = Quat13::<Q>::new();
        let torus = torus_point(q.fan(), seed);
        let phi = q.fueter_poly((k1, k2), &torus);
        let inv_j = -torus.unit(1).clone();
        let lhs = q.delta(h, &phi).unwrap();
        let rhs = apply_nabla(h, &phi).unwrap().left_mul(&inv_j.powi(h[2]));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_recovers_coefficients(coeffs in coefficients(3)) {
        let q = Quat13::<Q>::new();
        let f = q.combine(&coeffs);
        for k in 0..=3 {
            let got = q.expand_homogeneous(&f.homogeneous_part(k), k).unwrap();
            for (idx, c) in got {
                let want = coeffs
                    .get(&idx)
                    .cloned()
                    .unwrap_or_else(|| Element::zero(q.algebra()));
                prop_assert_eq!(c, want);
            }
        }
    }

    #[test]
    fn stems_do_not_depend_on_the_slice(
        coeffs in coefficients(3),
        a in any::<u64>(),
        b in any::<u64>(),
    ) {
        let q = Quat13::<Q>::new();
        let f = q.combine(&coeffs);
        let s = q.extract_stem(&f, &torus_point(q.fan(), a)).unwrap();
        let t = q.extract_stem(&f, &torus_point(q.fan(), b)).unwrap();
        prop_assert_eq!(&s, &t);
        let (r1, r2) = q.stem_system(&s);
        prop_assert!(r1.is_zero() && r2.is_zero());
    }

    #[test]
    fn representation_formulas_reproduce_regular_maps(
        coeffs in coefficients(2),
        seeds in prop::array::uniform3(any::<u64>()),
        z in prop::array::uniform2(rational()),
        beta in rational(),
    ) {
        let q = Quat13::<Q>::new();
        let f = q.combine(&coeffs);
        let eval = |x: &Element<Q>| f.evaluate_at(x);
        let [i, j, k] = seeds.map(|s| torus_point(q.fan(), s).unit(1).clone());
        let z = &Element::real(q.algebra(), z[0].clone()) + &q.unit("i").scale_by(&z[1]);
        let exact = f.evaluate_at(&(&z + &i.scale_by(&beta))).unwrap();
        prop_assert_eq!(q.represent_two_point(&eval, &i, &j, &z, &beta).unwrap(), exact.clone());
        if j != k {
            prop_assert_eq!(q.represent_general(&eval, &i, &j, &k, &z, &beta).unwrap(), exact);
        }
    }

    #[test]
    fn regular_maps_pass_the_symbolic_check(coeffs in coefficients(3)) {
        let q = Quat13::<Q>::new();
        let f = q.combine(&coeffs);
        let report = tregular::tregular::check_regular(
            &f,
            q.fan(),
            &Sampler::RationalGrid { density: 3 },
            &Default::default(),
        )
        .unwrap();
        prop_assert!(report.is_regular());
    }
}

fn coefficients(maxdeg: u32) -> impl Strategy<Value = Coefficients<Q>> {
    let alg = algebra_by_name("H").unwrap();
    let keys: Vec<(u32, u32)> = (0..=maxdeg)
        .flat_map(|k| (0..=k).map(move |k2| (k - k2, k2)))
        .collect();
    prop::collection::vec(prop::option::weighted(0.6, element(alg)), keys.len()).prop_map(
        move |cs| {
            keys.iter()
                .zip(cs)
                .filter_map(|(&k, c)| c.map(|c| (k, c)))
                .collect()
        },
    )
}

// Float check of the exact slice operator against central differences.
proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn symbolic_cr_matches_finite_differences(
        f in poly_map(algebra_by_name("H").unwrap(), 4, 3, 5),
        seed in any::<u64>(),
        y in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let f: PolyMap<f64> = f.convert();
        let fan: TFan<f64> = TFan::parse("H:(1,3)").unwrap();
        let torus = fan.torus_sample(&Sampler::Random { seed, count: 1 }).unwrap().remove(0);
        let slice = restrict_to_slice(&f, &fan, &torus).unwrap();
        let exact = apply_cr(&fan, &torus, &slice).unwrap().evaluate(&y).unwrap();
        let eval = |x: &Element<f64>| f.evaluate_at(x);
        let approx = numeric_cr(&fan, &torus, &eval, &y, None).unwrap();
        let err = (&exact - &approx).norm_sq().sqrt();
        let scale = 1.0 + f.max_abs();
        prop_assert!(err <= 1e-6 * scale * 50.0, "err {err} scale {scale}");
    }
}
