//! The acceptance suite: twelve end-to-end checks of the library, shared by
//! the `acceptance` test target and the `selftest` command.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::algebra::{laws, make_algebra, AlgebraSpec, Element, Preset};
use crate::cauchy::{cauchy_reconstruct, error_table, interior_points, make_grid};
use crate::error::Error;
use crate::fan::{Sampler, TFan};
use crate::hypercomplex::{
    hat_extension, make_paravectors, make_vh, BasisCondition, HypercomplexBasis,
};
use crate::poly::{apply_delta, apply_nabla, PolyMap};
use crate::quat13::{Coefficients, IdentityOutcome, KIndex, Quat13, SeriesExpansion};
use crate::sampling::{self, SampleRng};
use crate::scalar::Scalar;
use crate::tregular::{check_regular, induce, symbolic_residual, CheckOptions};
use crate::Rational;

/// Tolerance used by float backends wherever the rational run is exact.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float64,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float64 => "float64",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub backend: Backend,
    /// Criteria to run; empty means all.
    pub only: Vec<u8>,
    /// Additional algebras subjected to the law checks of criterion 1.
    pub extra_algebras: Vec<Arc<AlgebraSpec>>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            backend: Backend::Rational,
            only: Vec::new(),
            extra_algebras: Vec::new(),
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    /// Set when the verdict depends on a float tolerance.
    pub tolerance: Option<f64>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(tol) = self.tolerance {
            write!(f, " tol={tol:e}")?;
        }
        Ok(())
    }
}

/// `(id, name, runtime budget)` for each criterion.
pub const CRITERIA: [(u8, &str, Option<u64>); 12] = [
    (1, "algebra-laws", Some(10)),
    (2, "hypercomplex-subspaces", None),
    (3, "hat-extension", None),
    (4, "tk-regularity", Some(60)),
    (5, "restriction-and-delta", None),
    (6, "basis-and-expansion", None),
    (7, "negative-controls", None),
    (8, "representation-formulas", None),
    (9, "stems", None),
    (10, "ak-bk", None),
    (11, "cauchy-integral", Some(30)),
    (12, "identity-principle", None),
];

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

pub fn run_suite(config: &SuiteConfig) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .filter(|(id, _, _)| config.only.is_empty() || config.only.contains(id))
        .map(|&(id, _, _)| run_criterion(id, config))
        .collect()
}

pub fn run_criterion(id: u8, config: &SuiteConfig) -> Outcome {
    let &(_, name, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .expect("criterion id in 1..=12");
    let start = Instant::now();
    let result = match config.backend {
        Backend::Rational => dispatch::<Rational>(id, config),
        Backend::Float64 => dispatch::<f64>(id, config),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = budget {
        if passed && elapsed > Duration::from_secs(limit) {
            passed = false;
            detail = format!("{detail}; exceeded the {limit} s budget");
        }
    }
    let tolerance = match (id, config.backend) {
        (11, _) => Some(1e-7),
        (_, Backend::Float64) => Some(FLOAT_TOL),
        _ => None,
    };
    Outcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        tolerance,
    }
}

fn dispatch<S: Scalar>(id: u8, config: &SuiteConfig) -> Check {
    let mut rng = sampling::rng(config.seed.wrapping_add(u64::from(id)));
    match id {
        1 => algebra_laws::<S>(&mut rng, &config.extra_algebras),
        2 => subspaces::<S>(&mut rng),
        3 => hat::<S>(),
        4 => tk_regularity::<S>(),
        5 => restriction_and_delta::<S>(),
        6 => basis_and_expansion::<S>(&mut rng),
        7 => negative_controls::<S>(&mut rng),
        8 => representation::<S>(&mut rng),
        9 => stems::<S>(&mut rng),
        10 => ak_bk::<S>(&mut rng),
        11 => cauchy(config.seed),
        12 => identity_principle::<S>(&mut rng),
        _ => Err(format!("unknown criterion {id}")),
    }
}

fn vanishes<S: Scalar>(p: &PolyMap<S>, reference: &PolyMap<S>) -> bool {
    if S::EXACT {
        p.is_zero()
    } else {
        p.max_abs() <= FLOAT_TOL * reference.max_abs().max(1.0)
    }
}

fn coeffs_match<S: Scalar>(a: &Coefficients<S>, b: &Coefficients<S>) -> bool {
    let keys = |c: &Coefficients<S>| {
        c.iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| *k)
            .collect::<Vec<_>>()
    };
    if S::EXACT {
        return keys(a) == keys(b) && a.iter().all(|(k, v)| v.is_zero() || b.get(k) == Some(v));
    }
    a.keys()
        .chain(b.keys())
        .all(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.approx_eq(y),
            (Some(x), None) | (None, Some(x)) => x.approx_eq(&Element::zero(x.algebra())),
            (None, None) => true,
        })
}

fn nonzero_element<S: Scalar>(rng: &mut SampleRng, alg: &Arc<AlgebraSpec>) -> Element<S> {
    loop {
        let e = sampling::element(rng, alg);
        if !e.is_zero() {
            return e;
        }
    }
}

fn random_coeffs<S: Scalar>(
    rng: &mut SampleRng,
    q: &Quat13<S>,
    degrees: impl IntoIterator<Item = u32>,
) -> Coefficients<S> {
    degrees
        .into_iter()
        .flat_map(Quat13::<S>::family_indices)
        .map(|k| (k, nonzero_element(rng, q.algebra())))
        .collect()
}

fn indices_up_to(maxdeg: u32) -> Vec<KIndex> {
    (0..=maxdeg)
        .flat_map(Quat13::<Rational>::family_indices)
        .collect()
}

fn algebra_laws<S: Scalar>(rng: &mut SampleRng, extra: &[Arc<AlgebraSpec>]) -> Check {
    let mut algebras: Vec<Arc<AlgebraSpec>> =
        [Preset::Complex, Preset::Quaternions, Preset::Octonions]
            .into_iter()
            .chain((1..=5).map(Preset::Clifford0n))
            .map(|p| make_algebra(p).map_err(err))
            .collect::<std::result::Result<_, _>>()?;
    algebras.extend(extra.iter().cloned());
    // One seeded stream per algebra keeps the threaded run deterministic.
    let base: u64 = rng.random();
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = algebras
            .iter()
            .enumerate()
            .map(|(a, alg)| scope.spawn(move || broken_laws::<S>(alg, base.wrapping_add(a as u64))))
            .collect();
        handles
            .into_iter()
            .zip(&algebras)
            .filter_map(|(h, alg)| {
                let broken = h.join().expect("law worker");
                (!broken.is_empty())
                    .then(|| format!("{} violates {}", alg.name(), broken.join(", ")))
            })
            .collect()
    });
    ensure(failures.is_empty(), || failures.join("; "))?;
    let names: Vec<&str> = algebras.iter().map(|a| a.name()).collect();
    Ok(format!("200 samples each in {}", names.join(", ")))
}

fn broken_laws<S: Scalar>(alg: &Arc<AlgebraSpec>, seed: u64) -> Vec<&'static str> {
    let mut rng = sampling::rng(seed);
    let mut broken: Vec<&'static str> = Vec::new();
    let mut note = |law: &'static str, ok: bool| {
        if !ok && !broken.contains(&law) {
            broken.push(law);
        }
    };
    for _ in 0..200 {
        let x: Element<S> = sampling::element(&mut rng, alg);
        let y = sampling::element(&mut rng, alg);
        let z = sampling::element(&mut rng, alg);
        note("antiautomorphism", laws::antiautomorphism(&x, &y));
        note("involution", laws::involutive(&x));
        note("alternativity", laws::alternative(&x, &y));
        if alg.is_associative() {
            note("associativity", laws::associative(&x, &y, &z));
        }
    }
    broken
}

fn subspaces<S: Scalar>(rng: &mut SampleRng) -> Check {
    let bases: Vec<HypercomplexBasis<S>> = vec![
        make_paravectors(4).map_err(err)?,
        HypercomplexBasis::standard(&make_algebra(Preset::Quaternions).map_err(err)?)
            .map_err(err)?,
        HypercomplexBasis::standard(&make_algebra(Preset::Octonions).map_err(err)?).map_err(err)?,
        make_vh(5, 5).map_err(err)?,
    ];
    let mut cone_checks = 0;
    for basis in &bases {
        let alg = basis.algebra();
        for trial in 0..100 {
            let x = sampling::in_span(rng, basis);
            let y = sampling::in_span(rng, basis);
            let two_dot = Element::real(alg, S::from_int(2) * x.dot(&y));
            ensure((&x * &y.conj()).trace().approx_eq(&two_dot), || {
                format!("{}: t(xy^c) != 2<x,y> at trial {trial}", basis.name())
            })?;
            ensure(
                x.norm_form().approx_eq(&Element::real(alg, x.norm_sq())),
                || format!("{}: n(x) != |x|^2 at trial {trial}", basis.name()),
            )?;
            if !x.is_real() {
                cone_checks += 1;
                ensure(x.in_quadratic_cone(), || {
                    format!("{}: {x} outside the cone", basis.name())
                })?;
            }
        }
    }
    Ok(format!(
        "4 subspaces x 100 pairs, {cone_checks} cone memberships"
    ))
}

fn hat<S: Scalar>() -> Check {
    let h = make_algebra(Preset::Quaternions).map_err(err)?;
    let ij = HypercomplexBasis::<S>::from_labels(&h, "H:(1,i,j)", &["1", "i", "j"]).map_err(err)?;
    let ext = hat_extension(&ij).map_err(err)?;
    ensure(
        ext.vectors() == HypercomplexBasis::<S>::standard(&h).map_err(err)?.vectors(),
        || "m=2 in H does not produce (1,i,j,k)".into(),
    )?;
    hat_extension(&make_paravectors::<S>(6).map_err(err)?).map_err(|e| format!("m=6: {e}"))?;
    for (m, expected) in [
        (3, BasisCondition::TraceZero),
        (4, BasisCondition::TraceZero),
        (5, BasisCondition::Orthogonal),
    ] {
        match hat_extension(&make_paravectors::<S>(m).map_err(err)?) {
            Err(Error::NotExtendable { failed, .. }) if failed == expected => {}
            other => return Err(format!("m={m}: expected {expected} failure, got {other:?}")),
        }
    }
    Ok("m=2,6 extend; m=3,4 fail trace, m=5 fails orthogonality".into())
}

fn tk_regularity<S: Scalar>() -> Check {
    let q = Quat13::<S>::new();
    let ks = indices_up_to(8);
    for &k in &ks {
        let t = q.tk(k);
        let r = symbolic_residual(&t, q.fan()).map_err(err)?;
        ensure(vanishes(&r, &t), || {
            format!("residual of T{k:?} does not vanish")
        })?;
    }
    Ok(format!(
        "{} polynomials proven regular for every J",
        ks.len()
    ))
}

fn restriction_and_delta<S: Scalar>() -> Check {
    let q = Quat13::<S>::new();
    let circle = q.circle_grid(8);
    let i = q.unit("i");
    let hs: Vec<[u32; 3]> = (0..=4u32)
        .flat_map(|d| (0..=d).flat_map(move |a| (0..=d - a).map(move |b| [a, b, d - a - b])))
        .collect();
    let ks = indices_up_to(6);
    for torus in &circle {
        let j = torus.unit(1);
        let j_inv = -j.clone();
        for &k in &ks {
            ensure(q.restriction_identity(k, torus).map_err(err)?, || {
                format!("(T{k:?})_J != P_k J^k2 at J = {j}")
            })?;
            let phi = q.restrict(&q.tk(k), torus).map_err(err)?;
            for &h in &hs {
                let lhs = apply_delta(h, &i, &phi).map_err(err)?;
                let rhs = apply_nabla(h, &phi)
                    .map_err(err)?
                    .left_mul(&j_inv.powi(h[2]));
                ensure(lhs.approx_eq(&rhs), || {
                    format!("delta != J^-h2 nabla for h={h:?}, k={k:?}, J={j}")
                })?;
            }
        }
    }
    Ok(format!(
        "{} indices x {} circle points, {} operators each",
        ks.len(),
        circle.len(),
        hs.len()
    ))
}

fn basis_and_expansion<S: Scalar>(rng: &mut SampleRng) -> Check {
    let q = Quat13::<S>::new();
    for k in 0..=6 {
        let coeffs = random_coeffs(rng, &q, [k]);
        let p = q.combine(&coeffs);
        let back = q.expand_homogeneous(&p, k).map_err(err)?;
        ensure(coeffs_match(&back, &coeffs), || {
            format!("round trip fails in degree {k}")
        })?;
        let (r, dim) = q.family_rank(k);
        ensure(r == dim, || format!("F_{k} has rank {r} < {dim}"))?;
    }
    let centers = [(1, 1, 0, 1), (-1, 2, 2, 1), (3, 1, -1, 3)];
    for (a, da, b, db) in centers {
        let center = (S::from_ratio(a, da), S::from_ratio(b, db));
        let coeffs = random_coeffs(rng, &q, 0..=5);
        let f = q
            .reconstruct(&SeriesExpansion {
                center: center.clone(),
                maxdeg: 5,
                coeffs: coeffs.clone(),
            })
            .map_err(err)?;
        let e = q.series_expand(&f, center, 5).map_err(err)?;
        ensure(coeffs_match(&e.coeffs, &coeffs), || {
            format!("series round trip fails at center {a}/{da} + {b}/{db} i")
        })?;
    }
    Ok("degrees 0..=6 round-trip with full rank; 3 centers up to degree 5".into())
}

fn negative_control_corpus<S: Scalar>(
    rng: &mut SampleRng,
    q: &Quat13<S>,
) -> Vec<(String, PolyMap<S>)> {
    let alg = q.algebra();
    let mut corpus: Vec<(String, PolyMap<S>)> = indices_up_to(3)
        .into_iter()
        .map(|k| (format!("T{k:?}"), q.tk(k)))
        .collect();
    let x = |l: usize, label: &str| PolyMap::var(q.unit(label), 4, l);
    let zeta: Vec<PolyMap<S>> = [(1, "i"), (2, "j"), (3, "k")]
        .iter()
        .map(|&(l, u)| x(l, "1").sub(&x(0, u)))
        .collect();
    for (a, z) in zeta.iter().enumerate() {
        corpus.push((format!("zeta{}", a + 1), z.clone()));
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let sym = zeta[a].product(&zeta[b]).add(&zeta[b].product(&zeta[a]));
        corpus.push((format!("zeta{}zeta{}", a + 1, b + 1), sym));
    }
    let id = x(0, "1").add(&x(1, "i")).add(&x(2, "j")).add(&x(3, "k"));
    corpus.push(("x".into(), id.clone()));
    corpus.push(("x^2".into(), id.product(&id)));
    corpus.push(("x^3".into(), id.product(&id).product(&id)));
    for (k, u) in [((0, 1), "j"), ((1, 1), "k"), ((0, 2), "j"), ((2, 0), "i")] {
        corpus.push((format!("T{k:?}{u}"), q.tk(k).right_mul(&q.unit(u))));
    }
    let monomials: Vec<Vec<u32>> = (0..4)
        .flat_map(|a| (a..4).map(move |b| (a, b)))
        .map(|(a, b)| {
            let mut m = vec![0; 4];
            m[a] += 1;
            m[b] += 1;
            m
        })
        .chain((0..4).map(|a| {
            let mut m = vec![0; 4];
            m[a] = 1;
            m
        }))
        .collect();
    for r in 0..7 {
        let mut p = PolyMap::zero(alg, 4);
        for m in &monomials {
            if rng.random_bool(0.4) {
                p.add_term(m.clone(), sampling::element(rng, alg));
            }
        }
        corpus.push((format!("random{r}"), p));
    }
    corpus
}

fn negative_controls<S: Scalar>(rng: &mut SampleRng) -> Check {
    let q = Quat13::<S>::new();
    let opts = CheckOptions {
        tol: FLOAT_TOL,
        symbolic: true,
    };
    let sampler = Sampler::RationalGrid { density: 6 };
    let fan = |name: &str| TFan::<S>::parse(name).map_err(err);
    let regular = |f: &PolyMap<S>, fan: &TFan<S>| -> std::result::Result<bool, String> {
        Ok(check_regular(f, fan, &sampler, &opts)
            .map_err(err)?
            .is_regular())
    };
    let fueter = fan("H:(3)")?;
    for k in [(0, 1), (0, 2), (1, 1)] {
        ensure(!regular(&q.tk(k), &fueter)?, || {
            format!("T{k:?} passed the (3) check")
        })?;
    }
    let slice = fan("H:(0,3)")?;
    for k in indices_up_to(2).into_iter().filter(|k| k.0 + k.1 > 0) {
        ensure(!regular(&q.tk(k), &slice)?, || {
            format!("T{k:?} passed the (0,3) check")
        })?;
    }
    let corpus = negative_control_corpus(rng, &q);
    let groups = [
        vec!["H:(3)", "H:(2,3)", "H:(1,2,3)", "H:(0,1,2,3)"],
        vec!["H:(1,3)", "H:(0,1,3)"],
    ];
    let mut regular_counts = Vec::new();
    for group in &groups {
        let fans = group
            .iter()
            .map(|n| fan(n))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut count = 0;
        for (name, f) in &corpus {
            let verdicts = fans
                .iter()
                .map(|fan| regular(f, fan))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            ensure(verdicts.iter().all(|&v| v == verdicts[0]), || {
                format!("{name}: verdicts {verdicts:?} differ across {group:?}")
            })?;
            count += usize::from(verdicts[0]);
        }
        regular_counts.push(count);
    }
    Ok(format!(
        "negatives rejected; {} polynomials agree across equivalent fans ({} Fueter-regular, {} (1,3)-regular)",
        corpus.len(),
        regular_counts[0],
        regular_counts[1]
    ))
}

fn representation<S: Scalar>(rng: &mut SampleRng) -> Check {
    let q = Quat13::<S>::new();
    let polys: Vec<(KIndex, PolyMap<S>)> =
        indices_up_to(5).into_iter().map(|k| (k, q.tk(k))).collect();
    let alg = q.algebra().clone();
    let c = nonzero_element::<S>(rng, &alg);
    let wild = move |x: &Element<S>| -> crate::Result<Element<S>> { Ok(&(x * &c) * x + x.conj()) };
    for tuple in 0..20 {
        let i = q.random_circle_point(rng).unit(1).clone();
        let j = q.random_circle_point(rng).unit(1).clone();
        let k = loop {
            let k = q.random_circle_point(rng).unit(1).clone();
            if k != j {
                break k;
            }
        };
        let z = q.random_mirror_point(rng);
        let beta: S = sampling::nonzero_scalar(rng);
        for (idx, f) in &polys {
            let eval = |x: &Element<S>| f.evaluate_at(x);
            let direct = eval(&(&z + &i.scale_by(&beta))).map_err(err)?;
            let general = q
                .represent_general(&eval, &i, &j, &k, &z, &beta)
                .map_err(err)?;
            ensure(general.approx_eq(&direct), || {
                format!("general formula fails for T{idx:?} at tuple {tuple}")
            })?;
            let two = q
                .represent_two_point(&eval, &i, &j, &z, &beta)
                .map_err(err)?;
            ensure(two.approx_eq(&direct), || {
                format!("two-point formula fails for T{idx:?} at tuple {tuple}")
            })?;
        }
        let at_j = wild(&(&z + &j.scale_by(&beta))).map_err(err)?;
        let same = q
            .represent_general(&wild, &j, &j, &k, &z, &beta)
            .map_err(err)?;
        ensure(same.approx_eq(&at_j), || {
            format!("I = J does not reproduce the evaluator at tuple {tuple}")
        })?;
    }
    Ok(format!(
        "{} polynomials x 20 tuples, both formulas",
        polys.len()
    ))
}

fn stems<S: Scalar>(rng: &mut SampleRng) -> Check {
    let q = Quat13::<S>::new();
    let circle = q.circle_grid(4);
    let (j1, j2) = (&circle[2], &circle[3]);
    let points: Vec<Element<S>> = (0..5).map(|_| q.random_orbit_pair(rng).0).collect();
    let ks = indices_up_to(6);
    for &k in &ks {
        let f = q.tk(k);
        let s1 = q.extract_stem(&f, j1).map_err(err)?;
        let s2 = q.extract_stem(&f, j2).map_err(err)?;
        let stem = q
            .stem_function(&s1)
            .map_err(|e| format!("T{k:?}: parity: {e}"))?;
        let (a, b) = q.stem_system(&s1);
        ensure(vanishes(&a, &s1.f_empty) && vanishes(&b, &s1.f_one), || {
            format!("T{k:?}: the stem system does not vanish")
        })?;
        ensure(q.stem_is_harmonic(&s1), || {
            format!("T{k:?}: stems are not harmonic")
        })?;
        ensure(
            s1.f_empty.approx_eq(&s2.f_empty) && s1.f_one.approx_eq(&s2.f_one),
            || format!("T{k:?}: stems depend on J"),
        )?;
        let induced = induce(stem).map_err(err)?;
        for x in &points {
            let got = induced.eval(x).map_err(err)?;
            ensure(got.approx_eq(&f.evaluate_at(x).map_err(err)?), || {
                format!("T{k:?}: induced value differs at {x}")
            })?;
        }
    }
    Ok(format!(
        "{} polynomials, 2 circle points, {} induced samples",
        ks.len(),
        points.len()
    ))
}

fn ak_bk<S: Scalar>(rng: &mut SampleRng) -> Check {
    let q = Quat13::<S>::new();
    let ks = indices_up_to(8);
    for &k in &ks {
        let ab = q.akbk(k);
        ensure(q.akbk_identity(&ab).map_err(err)?, || {
            format!("decomposition fails for {k:?}")
        })?;
        ensure(q.akbk_homogeneous(&ab).map_err(err)?, || {
            format!("homogeneity fails for {k:?}")
        })?;
    }
    for pair in 0..50 {
        let (x, y) = q.random_orbit_pair(rng);
        for &k in &ks {
            ensure(q.modulus_invariance_check(k, &x, &y).map_err(err)?, || {
                format!("|T{k:?}|^2 differs on orbit pair {pair}: {x}, {y}")
            })?;
        }
    }
    Ok(format!("{} indices; 50 orbit pairs", ks.len()))
}

fn cauchy(seed: u64) -> Check {
    let q = Quat13::<f64>::new();
    let j = q.unit("j");
    let center = Element::zero(q.algebra());
    let points = interior_points(&j, &center, 0.7, 10, seed);
    let mut rng = sampling::rng(seed ^ 0x11);
    let combos = [
        random_coeffs(&mut rng, &q, 0..=4),
        random_coeffs(&mut rng, &q, [0, 2, 4]),
        random_coeffs(&mut rng, &q, [1, 3]),
    ];
    let mut worst = 0.0f64;
    for (c, coeffs) in combos.iter().enumerate() {
        let f = q.combine(coeffs);
        let eval = |x: &Element<f64>| f.evaluate_at(x);
        let rows = error_table(&eval, &j, &center, 1.0, &points, &[8, 16, 32]).map_err(err)?;
        let max_at = |order: usize| {
            rows.iter()
                .filter(|r| r.order == order)
                .map(|r| r.rel_error)
                .fold(0.0, f64::max)
        };
        let (e8, e16, e32) = (max_at(8), max_at(16), max_at(32));
        ensure(e32 <= 1e-7, || {
            format!("combo {c}: relative error {e32:e} at order 32")
        })?;
        let decreasing = |a: f64, b: f64| b < a || a < 1e-10;
        ensure(decreasing(e8, e16) && decreasing(e16, e32), || {
            format!("combo {c}: errors {e8:e}, {e16:e}, {e32:e} do not decrease")
        })?;
        worst = worst.max(e32);
    }
    let grid = make_grid(&j, &center, 1.0, 32).map_err(err)?;
    let one = Element::one(q.algebra());
    let constant = |_: &Element<f64>| Ok(one.clone());
    for x in points.iter().chain([&center]) {
        let got = cauchy_reconstruct(&constant, &grid, x).map_err(err)?.value;
        let e = got.try_sub(&one).map_err(err)?.norm_sq().sqrt();
        ensure(e <= 1e-10, || {
            format!("f = 1 reconstructed with error {e:e} at {x}")
        })?;
    }
    Ok(format!(
        "3 combinations, 10 points, worst relative error {worst:.1e} at order 32"
    ))
}

fn identity_principle<S: Scalar>(rng: &mut SampleRng) -> Check {
    let q = Quat13::<S>::new();
    let torus = q.random_circle_point(rng);
    let (r, dim) = q.slice_restriction_rank(4, &torus).map_err(err)?;
    ensure(r == dim, || format!("restriction has rank {r} < {dim}"))?;
    let f = q.combine(&random_coeffs(rng, &q, 0..=4));
    ensure(
        q.identity_test(&f, &f, &torus).map_err(err)? == IdentityOutcome::Equal,
        || "f differs from itself".into(),
    )?;
    for k in indices_up_to(4) {
        let c = nonzero_element(rng, q.algebra());
        let g = f.add(&q.tk(k).right_mul(&c));
        match q.identity_test(&f, &g, &torus).map_err(err)? {
            IdentityOutcome::Differ { witness, .. } if witness == k => {}
            other => return Err(format!("perturbation at {k:?} reported as {other:?}")),
        }
    }
    Ok(format!(
        "restriction rank {r} = {dim}; 15 perturbations flagged"
    ))
}
