//! The (1,3)-regular quaternionic toolkit: the fan `ℂ ⊊ ℍ`, whose slices are
//! `span(1, i, J)` with `J` on the unit circle of `jℝ + kℝ`.
//!
//! Ambient maps use the variables `(x_0, x_1, x_2, x_3)`; slice maps use
//! `(x_0, x_1, β)`; the `A_𝐤, B_𝐤` maps use `(x_0, x_1, γ)` with
//! `γ = x_2² + x_3²`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::algebra::{make_algebra, AlgebraSpec, Element, Preset};
use crate::error::{Error, Result};
use crate::fan::{stereographic, Sampler, TFan, TorusPoint};
use crate::hypercomplex::HypercomplexBasis;
use crate::linalg::{coefficient_rows, rank};
use crate::poly::{apply_delta, laplacian, restrict_to_slice, PolyMap, ScalarPoly};
use crate::sampling::{self, SampleRng};
use crate::scalar::{factorial, Scalar};
use crate::tregular::StemFunction;

/// `𝐤 = (k_1, k_2)`.
pub type KIndex = (u32, u32);

/// Expansion coefficients `𝐤 ↦ c_𝐤`.
pub type Coefficients<S> = BTreeMap<KIndex, Element<S>>;

/// An evaluator `ℍ → ℍ`.
pub type Evaluator<'a, S> = dyn Fn(&Element<S>) -> Result<Element<S>> + 'a;

/// `A_𝐤, B_𝐤` with `𝒯_𝐤 = A_𝐤(x_0+ix_1, γ) + (jx_2 + kx_3) B_𝐤(x_0+ix_1, γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AkBk<S: Scalar> {
    pub k: KIndex,
    pub a: PolyMap<S>,
    pub b: PolyMap<S>,
}

/// The two stem components of a (1,3)-regular map, on `(x_0, x_1, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StemPair<S: Scalar> {
    pub f_empty: PolyMap<S>,
    pub f_one: PolyMap<S>,
}

/// Taylor coefficients of a (1,3)-regular polynomial at a point `z_0 ∈ ℂ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion<S: Scalar> {
    pub center: (S, S),
    pub maxdeg: u32,
    pub coeffs: Coefficients<S>,
}

/// Result of the identity-principle comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum IdentityOutcome<S: Scalar> {
    Equal,
    Differ {
        witness: KIndex,
        coeff: Element<S>,
        /// Whether the two maps already differ on the chosen slice.
        slices_differ: bool,
    },
}

/// Context holding the algebra, the `(1,3)` fan and memoized families.
#[derive(Debug)]
pub struct Quat13<S: Scalar> {
    alg: Arc<AlgebraSpec>,
    fan: TFan<S>,
    tk: Mutex<HashMap<KIndex, PolyMap<S>>>,
    ab: Mutex<HashMap<KIndex, (PolyMap<S>, PolyMap<S>)>>,
}

impl<S: Scalar> Default for Quat13<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Quat13<S> {
    pub fn new() -> Self {
        let alg = make_algebra(Preset::Quaternions).expect("quaternions");
        let basis = HypercomplexBasis::standard(&alg).expect("standard basis");
        let fan = crate::fan::make_fan(basis, &[1, 3]).expect("(1,3) fan");
        Self {
            alg,
            fan,
            tk: Mutex::new(HashMap::new()),
            ab: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn fan(&self) -> &TFan<S> {
        &self.fan
    }

    pub fn unit(&self, label: &str) -> Element<S> {
        Element::labelled(&self.alg, label).expect("quaternion label")
    }

    fn one(&self) -> Element<S> {
        Element::one(&self.alg)
    }

    fn var(&self, c: Element<S>, vars: usize, l: usize) -> PolyMap<S> {
        PolyMap::var(c, vars, l)
    }

    /// `x_1 - (-1)^{k_2} i x_0` over `vars` variables.
    fn rotated_zeta1(&self, k2: u32, vars: usize) -> PolyMap<S> {
        let i = self.unit("i");
        let i = if k2 % 2 == 0 { -i } else { i };
        self.var(self.one(), vars, 1).add(&self.var(i, vars, 0))
    }

    /// `𝒯_𝐤`, memoized. Negative indices never occur here; `𝒯_{(0,0)} = 1`.
    pub fn tk(&self, k: KIndex) -> PolyMap<S> {
        let mut cache = self.tk.lock().expect("tk cache");
        if let Some(p) = cache.get(&k) {
            return p.clone();
        }
        let x0jk = PolyMap::linear(
            &self.alg,
            &[
                self.one(),
                Element::zero(&self.alg),
                self.unit("j"),
                self.unit("k"),
            ],
        );
        for deg in 0..=k.0 + k.1 {
            for k2 in 0..=deg.min(k.1) {
                let k1 = deg - k2;
                if k1 > k.0 || cache.contains_key(&(k1, k2)) {
                    continue;
                }
                let value = if deg == 0 {
                    PolyMap::constant(self.one(), 4)
                } else {
                    let mut acc = PolyMap::zero(&self.alg, 4);
                    if k1 > 0 {
                        let prev = &cache[&(k1 - 1, k2)];
                        acc = acc.add(
                            &prev
                                .product(&self.rotated_zeta1(k2, 4))
                                .scale(&S::from_int(i64::from(k1))),
                        );
                    }
                    if k2 > 0 {
                        let prev = &cache[&(k1, k2 - 1)];
                        acc = acc.add(&prev.product(&x0jk).scale(&S::from_int(i64::from(k2))));
                    }
                    acc.scale(&(S::one() / S::from_int(i64::from(deg))))
                };
                cache.insert((k1, k2), value);
            }
        }
        cache[&k].clone()
    }

    /// The indices of `ℱ_k`: `(k, 0), (k-1, 1), …, (0, k)`.
    pub fn family_indices(k: u32) -> Vec<KIndex> {
        (0..=k).map(|k2| (k - k2, k2)).collect()
    }

    /// Checks that `j` is an exact unit of `jℝ + kℝ` and wraps it.
    pub fn circle_point(&self, j: &Element<S>) -> Result<TorusPoint<S>> {
        self.fan.torus_point(vec![j.clone()])
    }

    /// `count` exact circle points from the stereographic grid.
    pub fn circle_grid(&self, count: usize) -> Vec<TorusPoint<S>> {
        self.fan
            .torus_sample(&Sampler::RationalGrid { density: count })
            .expect("grid")
    }

    /// A random exact circle point.
    pub fn random_circle_point(&self, rng: &mut SampleRng) -> TorusPoint<S> {
        let t = S::from_ratio(rng.random_range(-12..=12), rng.random_range(1..=7));
        self.fan
            .torus_point_from_coords(vec![stereographic(&[t])])
            .expect("unit")
    }

    /// `f_J` on `(x_0, x_1, β)`.
    pub fn restrict(&self, f: &PolyMap<S>, torus: &TorusPoint<S>) -> Result<PolyMap<S>> {
        restrict_to_slice(f, &self.fan, torus)
    }

    /// All `𝒫^J_𝐤` with `|𝐤| ≤ maxdeg`, from
    /// `|𝐤| 𝒫_𝐤 = k_1 𝒫_{(k_1-1,k_2)} ζ_1 + k_2 𝒫_{(k_1,k_2-1)} ζ_{2,J}`.
    pub fn fueter_family(
        &self,
        torus: &TorusPoint<S>,
        maxdeg: u32,
    ) -> BTreeMap<KIndex, PolyMap<S>> {
        let zeta1 = self.rotated_zeta1(0, 3);
        let zeta2 = self
            .var(self.one(), 3, 2)
            .add(&self.var(-torus.unit(1).clone(), 3, 0));
        let mut out: BTreeMap<KIndex, PolyMap<S>> = BTreeMap::new();
        out.insert((0, 0), PolyMap::constant(self.one(), 3));
        for deg in 1..=maxdeg {
            for (k1, k2) in Self::family_indices(deg) {
                let mut acc = PolyMap::zero(&self.alg, 3);
                if k1 > 0 {
                    acc = acc.add(
                        &out[&(k1 - 1, k2)]
                            .product(&zeta1)
                            .scale(&S::from_int(i64::from(k1))),
                    );
                }
                if k2 > 0 {
                    acc = acc.add(
                        &out[&(k1, k2 - 1)]
                            .product(&zeta2)
                            .scale(&S::from_int(i64::from(k2))),
                    );
                }
                out.insert(
                    (k1, k2),
                    acc.scale(&(S::one() / S::from_int(i64::from(deg)))),
                );
            }
        }
        out
    }

    pub fn fueter_poly(&self, k: KIndex, torus: &TorusPoint<S>) -> PolyMap<S> {
        self.fueter_family(torus, k.0 + k.1)
            .remove(&k)
            .expect("computed")
    }

    /// `(𝒯_𝐤)_J = 𝒫^J_𝐤 J^{k_2}`.
    pub fn restriction_identity(&self, k: KIndex, torus: &TorusPoint<S>) -> Result<bool> {
        let lhs = self.restrict(&self.tk(k), torus)?;
        let rhs = self
            .fueter_poly(k, torus)
            .right_mul(&torus.unit(1).powi(k.1));
        Ok(lhs.approx_eq(&rhs))
    }

    /// `δ^𝐡` with `i` acting on the left.
    pub fn delta(&self, h: [u32; 3], f: &PolyMap<S>) -> Result<PolyMap<S>> {
        apply_delta(h, &self.unit("i"), f)
    }

    /// `Σ 𝒯_𝐤 c_𝐤`.
    pub fn combine(&self, coeffs: &Coefficients<S>) -> PolyMap<S> {
        coeffs
            .iter()
            .fold(PolyMap::zero(&self.alg, 4), |acc, (&k, c)| {
                acc.add(&self.tk(k).right_mul(c))
            })
    }

    /// Coefficients `c_𝐤 = δ^{(0,𝐤)} P(0) / 𝐤!` of a `k`-homogeneous
    /// (1,3)-regular `P`, verified by reconstruction.
    pub fn expand_homogeneous(&self, p: &PolyMap<S>, k: u32) -> Result<Coefficients<S>> {
        if p.vars() != 4 {
            return Err(Error::VarCountMismatch {
                expected: 4,
                found: p.vars(),
            });
        }
        if !p.is_homogeneous(k) {
            return Err(Error::NotInUk { degree: k });
        }
        let origin = vec![0u32; 4];
        let mut coeffs = Coefficients::new();
        for (k1, k2) in Self::family_indices(k) {
            let d = self.delta([0, k1, k2], p)?;
            if let Some(c) = d.coeff(&origin) {
                let norm = factorial::<S>(k1) * factorial::<S>(k2);
                coeffs.insert((k1, k2), c.scale_by(&(S::one() / norm)));
            }
        }
        if !self.combine_as(&coeffs, 4).approx_eq(p) {
            return Err(Error::NotInUk { degree: k });
        }
        Ok(coeffs)
    }

    fn combine_as(&self, coeffs: &Coefficients<S>, vars: usize) -> PolyMap<S> {
        if coeffs.is_empty() {
            PolyMap::zero(&self.alg, vars)
        } else {
            self.combine(coeffs)
        }
    }

    /// Expansion `f(x) = Σ 𝒯_𝐤(x - z_0) c_𝐤` of a (1,3)-regular polynomial
    /// about `z_0 = a + ib`, up to degree `maxdeg`. When `deg f ≤ maxdeg` the
    /// reconstruction must be exact, otherwise `NotRegular`.
    pub fn series_expand(
        &self,
        f: &PolyMap<S>,
        z0: (S, S),
        maxdeg: u32,
    ) -> Result<SeriesExpansion<S>> {
        let (a, b) = z0.clone();
        let moved = f.translate(&[-a.clone(), -b.clone(), S::zero(), S::zero()])?;
        let mut coeffs = Coefficients::new();
        for k in 0..=maxdeg {
            let part = moved.homogeneous_part(k);
            let c = self
                .expand_homogeneous(&part, k)
                .map_err(|_| Error::NotRegular)?;
            coeffs.extend(c);
        }
        let expansion = SeriesExpansion {
            center: z0,
            maxdeg,
            coeffs,
        };
        if f.degree().unwrap_or(0) <= maxdeg && !self.reconstruct(&expansion)?.approx_eq(f) {
            return Err(Error::NotRegular);
        }
        Ok(expansion)
    }

    /// `Σ 𝒯_𝐤(x - z_0) c_𝐤`.
    pub fn reconstruct(&self, e: &SeriesExpansion<S>) -> Result<PolyMap<S>> {
        let (a, b) = e.center.clone();
        let shift = [a, b, S::zero(), S::zero()];
        e.coeffs
            .iter()
            .try_fold(PolyMap::zero(&self.alg, 4), |acc, (&k, c)| {
                Ok(acc.add(&self.tk(k).translate(&shift)?.right_mul(c)))
            })
    }

    /// `A_𝐤, B_𝐤` from their recursion, memoized.
    pub fn akbk(&self, k: KIndex) -> AkBk<S> {
        let mut cache = self.ab.lock().expect("ab cache");
        if let Some((a, b)) = cache.get(&k) {
            return AkBk {
                k,
                a: a.clone(),
                b: b.clone(),
            };
        }
        let x0 = self.var(self.one(), 3, 0);
        let gamma = self.var(self.one(), 3, 2);
        for deg in 0..=k.0 + k.1 {
            for k2 in 0..=deg.min(k.1) {
                let k1 = deg - k2;
                if k1 > k.0 || cache.contains_key(&(k1, k2)) {
                    continue;
                }
                let value = if deg == 0 {
                    (
                        PolyMap::constant(self.one(), 3),
                        PolyMap::zero(&self.alg, 3),
                    )
                } else {
                    let mut a = PolyMap::zero(&self.alg, 3);
                    let mut b = PolyMap::zero(&self.alg, 3);
                    if k1 > 0 {
                        let (pa, pb) = &cache[&(k1 - 1, k2)];
                        let z = self.rotated_zeta1(k2, 3);
                        let w = S::from_int(i64::from(k1));
                        a = a.add(&pa.product(&z).scale(&w));
                        b = b.add(&pb.product(&z).scale(&w));
                    }
                    if k2 > 0 {
                        let (pa, pb) = &cache[&(k1, k2 - 1)];
                        let w = S::from_int(i64::from(k2));
                        a = a
                            .add(&pa.product(&x0).scale(&w))
                            .sub(&pb.conj().product(&gamma).scale(&w));
                        b = b.add(&pa.conj().scale(&w)).add(&pb.product(&x0).scale(&w));
                    }
                    let inv = S::one() / S::from_int(i64::from(deg));
                    (a.scale(&inv), b.scale(&inv))
                };
                cache.insert((k1, k2), value);
            }
        }
        let (a, b) = cache[&k].clone();
        AkBk { k, a, b }
    }

    /// `𝒯_𝐤 = A_𝐤 + (jx_2 + kx_3) B_𝐤` after `γ := x_2² + x_3²`.
    pub fn akbk_identity(&self, ab: &AkBk<S>) -> Result<bool> {
        let x = |l| ScalarPoly::var(4, l);
        let gamma = x(2).mul(&x(2)).add(&x(3).mul(&x(3)));
        let subs = [x(0), x(1), gamma];
        let a4 = ab.a.substitute(&subs)?;
        let b4 = ab.b.substitute(&subs)?;
        let jk = PolyMap::linear(
            &self.alg,
            &[
                Element::zero(&self.alg),
                Element::zero(&self.alg),
                self.unit("j"),
                self.unit("k"),
            ],
        );
        Ok(a4.add(&jk.product(&b4)).approx_eq(&self.tk(ab.k)))
    }

    /// `(x_0, x_1, β) ↦ A_𝐤(x_0+ix_1, β²)` and `β B_𝐤(x_0+ix_1, β²)`.
    pub fn akbk_on_slice(&self, ab: &AkBk<S>) -> Result<(PolyMap<S>, PolyMap<S>)> {
        let y = |l| ScalarPoly::var(3, l);
        let subs = [y(0), y(1), y(2).mul(&y(2))];
        let a = ab.a.substitute(&subs)?;
        let b = ab.b.substitute(&subs)?.product(&self.var(self.one(), 3, 2));
        Ok((a, b))
    }

    /// Both slice forms of `A_𝐤, B_𝐤` are `|𝐤|`-homogeneous, and both have
    /// coefficients in `ℂ = span(1, i)`.
    pub fn akbk_homogeneous(&self, ab: &AkBk<S>) -> Result<bool> {
        let (a, b) = self.akbk_on_slice(ab)?;
        let deg = ab.k.0 + ab.k.1;
        let complex = |p: &PolyMap<S>| {
            p.terms()
                .all(|(_, c)| c.coeff(2).is_zero() && c.coeff(3).is_zero())
        };
        Ok(a.is_homogeneous(deg) && b.is_homogeneous(deg) && complex(&ab.a) && complex(&ab.b))
    }

    /// `|𝒯_𝐤(x)|² = |𝒯_𝐤(y)|²` for two points sharing `x_0, x_1` and
    /// `x_2² + x_3²`.
    pub fn modulus_invariance_check(
        &self,
        k: KIndex,
        x: &Element<S>,
        y: &Element<S>,
    ) -> Result<bool> {
        let c = |e: &Element<S>, s: usize| e.coeff(s).clone();
        let rad = |e: &Element<S>| c(e, 2) * c(e, 2) + c(e, 3) * c(e, 3);
        let same =
            |a: S, b: S| (a.clone() - b.clone()).is_negligible(&(a.abs() + b.abs() + S::one()));
        if !same(c(x, 0), c(y, 0)) || !same(c(x, 1), c(y, 1)) || !same(rad(x), rad(y)) {
            return Err(Error::InvalidParameter(
                "points lie on different orbits".into(),
            ));
        }
        let t = self.tk(k);
        let a = t.evaluate_at(x)?.norm_sq();
        let b = t.evaluate_at(y)?.norm_sq();
        Ok(same(a, b))
    }

    /// A random pair `(z + βJ, z + βJ')` with exact circle points.
    pub fn random_orbit_pair(&self, rng: &mut SampleRng) -> (Element<S>, Element<S>) {
        let z = self.random_mirror_point(rng);
        let beta: S = sampling::scalar(rng);
        let j1 = self.random_circle_point(rng);
        let j2 = self.random_circle_point(rng);
        (
            &z + &j1.unit(1).scale_by(&beta),
            &z + &j2.unit(1).scale_by(&beta),
        )
    }

    /// A random `z = x_0 + i x_1`.
    pub fn random_mirror_point(&self, rng: &mut SampleRng) -> Element<S> {
        let mut z = Element::zero(&self.alg);
        z.add_scaled(&sampling::scalar(rng), &self.one());
        z.add_scaled(&sampling::scalar(rng), &self.unit("i"));
        z
    }

    fn check_circle(&self, units: &[&Element<S>]) -> Result<()> {
        for u in units {
            self.circle_point(u)?;
        }
        Ok(())
    }

    /// `(J-K)^{-1}(J f(z+βJ) - K f(z+βK)) + I (J-K)^{-1}(f(z+βJ) - f(z+βK))`.
    pub fn represent_general(
        &self,
        f: &Evaluator<'_, S>,
        i: &Element<S>,
        j: &Element<S>,
        k: &Element<S>,
        z: &Element<S>,
        beta: &S,
    ) -> Result<Element<S>> {
        self.check_circle(&[i, j, k])?;
        let diff = j - k;
        if diff.is_zero() {
            return Err(Error::SingularPair);
        }
        let inv = diff.cone_inverse()?;
        let fj = f(&(z + &j.scale_by(beta)))?;
        let fk = f(&(z + &k.scale_by(beta)))?;
        let first = &inv * &(j * &fj - k * &fk);
        let second = i * &(&inv * &(&fj - &fk));
        Ok(first + second)
    }

    /// `(1 - IJ)/2 · f(z+βJ) + (1 + IJ)/2 · f(z-βJ)`.
    pub fn represent_two_point(
        &self,
        f: &Evaluator<'_, S>,
        i: &Element<S>,
        j: &Element<S>,
        z: &Element<S>,
        beta: &S,
    ) -> Result<Element<S>> {
        self.check_circle(&[i, j])?;
        let half = S::one() / S::from_int(2);
        let ij = i * j;
        let one = self.one();
        let plus = f(&(z + &j.scale_by(beta)))?;
        let minus = f(&(z - &j.scale_by(beta)))?;
        Ok((&one - &ij).scale_by(&half) * plus + (&one + &ij).scale_by(&half) * minus)
    }

    /// `F_∅ = ½(f_J(β) + f_J(-β))` and `F_1 = (J/2)(f_J(-β) - f_J(β))`.
    pub fn extract_stem(&self, f: &PolyMap<S>, torus: &TorusPoint<S>) -> Result<StemPair<S>> {
        let fj = self.restrict(f, torus)?;
        let reflected = fj.reflect(2);
        let half = S::one() / S::from_int(2);
        let f_empty = fj.add(&reflected).scale(&half);
        let f_one = reflected.sub(&fj).left_mul(&torus.unit(1).scale_by(&half));
        Ok(StemPair { f_empty, f_one })
    }

    pub fn stem_function(&self, stem: &StemPair<S>) -> Result<StemFunction<S>> {
        StemFunction::new(
            self.fan.clone(),
            BTreeMap::from([(0, stem.f_empty.clone()), (1, stem.f_one.clone())]),
        )
    }

    /// Residuals of `(∂_0 + i∂_1)F_∅ - ∂_β F_1` and `∂_β F_∅ + (∂_0 - i∂_1)F_1`.
    pub fn stem_system(&self, stem: &StemPair<S>) -> (PolyMap<S>, PolyMap<S>) {
        let i = self.unit("i");
        let (f0, f1) = (&stem.f_empty, &stem.f_one);
        let first = f0
            .derivative(0)
            .add(&f0.derivative(1).left_mul(&i))
            .sub(&f1.derivative(2));
        let second = f0
            .derivative(2)
            .add(&f1.derivative(0))
            .sub(&f1.derivative(1).left_mul(&i));
        (first, second)
    }

    pub fn stem_is_harmonic(&self, stem: &StemPair<S>) -> bool {
        let zero = |p: &PolyMap<S>| p.approx_eq(&PolyMap::zero(&self.alg, 3));
        zero(&laplacian(&stem.f_empty)) && zero(&laplacian(&stem.f_one))
    }

    /// Compares two (1,3)-regular polynomials through their expansion
    /// coefficients at the origin, reporting the first difference.
    pub fn identity_test(
        &self,
        f: &PolyMap<S>,
        g: &PolyMap<S>,
        torus: &TorusPoint<S>,
    ) -> Result<IdentityOutcome<S>> {
        let slices_differ = !self
            .restrict(f, torus)?
            .approx_eq(&self.restrict(g, torus)?);
        let d = f.try_sub(g)?;
        let deg = d.degree().unwrap_or(0);
        let expansion = self.series_expand(&d, (S::zero(), S::zero()), deg)?;
        let witness = expansion
            .coeffs
            .iter()
            .find(|(_, c)| !c.approx_eq(&Element::zero(&self.alg)))
            .map(|(&k, c)| (k, c.clone()));
        Ok(match witness {
            None => IdentityOutcome::Equal,
            Some((witness, coeff)) => IdentityOutcome::Differ {
                witness,
                coeff,
                slices_differ,
            },
        })
    }

    /// `𝒯_𝐤 e_s` for all `|𝐤| ≤ maxdeg` and the four quaternion units: a real
    /// basis candidate of the regular polynomials of degree `≤ maxdeg`.
    pub fn real_family(&self, degrees: impl IntoIterator<Item = u32>) -> Vec<PolyMap<S>> {
        let units: Vec<Element<S>> = (0..4).map(|s| Element::basis(&self.alg, s)).collect();
        degrees
            .into_iter()
            .flat_map(|k| Self::family_indices(k))
            .flat_map(|k| {
                let t = self.tk(k);
                units
                    .iter()
                    .map(move |u| t.right_mul(u))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// `(rank, 4(k+1))` for the real span of `ℱ_k`.
    pub fn family_rank(&self, k: u32) -> (usize, usize) {
        let maps = self.real_family([k]);
        (rank(coefficient_rows(&maps)), maps.len())
    }

    /// `(rank, dim)` of restriction to the `J_0`-slice on regular polynomials
    /// of degree `≤ maxdeg`; equal values mean a trivial kernel.
    pub fn slice_restriction_rank(
        &self,
        maxdeg: u32,
        torus: &TorusPoint<S>,
    ) -> Result<(usize, usize)> {
        let maps = self
            .real_family(0..=maxdeg)
            .iter()
            .map(|f| self.restrict(f, torus))
            .collect::<Result<Vec<_>>>()?;
        Ok((rank(coefficient_rows(&maps)), maps.len()))
    }
}

/// The sufficient conditions for slice preservation: `c_𝐤 ∈ ℂ` when
/// `k_2 = 0`; `c_𝐤 ∈ ℝ` when `k_1 = 0 ≠ k_2` or `k_1 ≠ 0` with `k_2` even and
/// positive; `c_𝐤 = 0` when `k_1 ≠ 0` and `k_2` is odd.
pub fn classify_slice_preserving<S: Scalar>(coeffs: &Coefficients<S>) -> bool {
    coeffs.iter().all(|(&(k1, k2), c)| {
        let complex = c.coeff(2).is_zero() && c.coeff(3).is_zero();
        let real = complex && c.coeff(1).is_zero();
        match (k1, k2) {
            (_, 0) => complex,
            (0, _) => real,
            (_, k2) if k2 % 2 == 0 => real,
            _ => c.is_zero(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    type Q = Rational;

    fn ctx() -> Quat13<Q> {
        Quat13::new()
    }

    fn h(c: &[i64]) -> Element<Q> {
        Element::from_ints(ctx().algebra(), c).unwrap()
    }

    #[test]
    fn first_members() {
        let q = ctx();
        assert_eq!(q.tk((0, 0)), PolyMap::constant(h(&[1, 0, 0, 0]), 4));
        let t10 = PolyMap::linear(
            q.algebra(),
            &[h(&[0, -1, 0, 0]), h(&[1, 0, 0, 0]), h(&[0; 4]), h(&[0; 4])],
        );
        assert_eq!(q.tk((1, 0)), t10);
        let t01 = PolyMap::linear(
            q.algebra(),
            &[
                h(&[1, 0, 0, 0]),
                h(&[0; 4]),
                h(&[0, 0, 1, 0]),
                h(&[0, 0, 0, 1]),
            ],
        );
        assert_eq!(q.tk((0, 1)), t01);
        assert_eq!(q.tk((2, 0)), t10.product(&t10));
        // 2𝒯_{(1,1)} = (x_0 + jx_2 + kx_3)(x_1 + ix_0) + (x_1 - ix_0)(x_0 + jx_2 + kx_3)
        let plus = PolyMap::linear(
            q.algebra(),
            &[h(&[0, 1, 0, 0]), h(&[1, 0, 0, 0]), h(&[0; 4]), h(&[0; 4])],
        );
        let expected = t01.product(&plus).add(&t10.product(&t01)).scale(&rat(1, 2));
        assert_eq!(q.tk((1, 1)), expected);
    }

    #[test]
    fn tk_is_homogeneous() {
        let q = ctx();
        for k in [(3, 0), (2, 2), (0, 4), (1, 3)] {
            assert!(q.tk(k).is_homogeneous(k.0 + k.1));
        }
    }

    #[test]
    fn fueter_polys() {
        let q = ctx();
        let j = q.circle_grid(1).remove(0);
        assert_eq!(q.fueter_poly((1, 0), &j), q.rotated_zeta1(0, 3));
        let zeta2 = q
            .var(h(&[1, 0, 0, 0]), 3, 2)
            .add(&q.var(h(&[0, 0, -1, 0]), 3, 0));
        assert_eq!(q.fueter_poly((0, 1), &j), zeta2);
        for torus in q.circle_grid(3) {
            for k in [(0, 1), (1, 1), (2, 3), (0, 0)] {
                assert!(q.restriction_identity(k, &torus).unwrap(), "{k:?}");
            }
        }
    }

    #[test]
    fn delta_of_tk_at_origin_is_factorial() {
        let q = ctx();
        for k in [(0, 1), (1, 1), (2, 1), (0, 3), (3, 2)] {
            let d = q.delta([0, k.0, k.1], &q.tk(k)).unwrap();
            let expected = factorial::<Q>(k.0) * factorial::<Q>(k.1);
            assert_eq!(
                d,
                PolyMap::constant(Element::real(q.algebra(), expected), 4)
            );
        }
    }

    #[test]
    fn expansion_of_scaled_member() {
        let q = ctx();
        let c = h(&[1, 0, 0, 1]);
        let p = q.tk((2, 0)).right_mul(&c);
        let coeffs = q.expand_homogeneous(&p, 2).unwrap();
        assert_eq!(coeffs, Coefficients::from([((2, 0), c)]));
        let zero = PolyMap::zero(q.algebra(), 4);
        assert!(q.expand_homogeneous(&zero, 3).unwrap().is_empty());
    }

    #[test]
    fn identity_map_is_not_in_u1() {
        let q = ctx();
        let id = PolyMap::linear(
            q.algebra(),
            &[
                h(&[1, 0, 0, 0]),
                h(&[0, 1, 0, 0]),
                h(&[0, 0, 1, 0]),
                h(&[0, 0, 0, 1]),
            ],
        );
        assert_eq!(
            q.expand_homogeneous(&id, 1),
            Err(Error::NotInUk { degree: 1 })
        );
        assert_eq!(
            q.series_expand(&id, (rat(0, 1), rat(0, 1)), 1),
            Err(Error::NotRegular)
        );
    }

    #[test]
    fn shifted_series() {
        let q = ctx();
        let f = q.tk((0, 2));
        let e = q.series_expand(&f, (rat(1, 1), rat(0, 1)), 2).unwrap();
        assert_eq!(q.reconstruct(&e).unwrap(), f);
        let e = q
            .series_expand(&q.tk((1, 1)), (rat(0, 1), rat(0, 1)), 2)
            .unwrap();
        assert_eq!(e.coeffs, Coefficients::from([((1, 1), h(&[1, 0, 0, 0]))]));
    }

    #[test]
    fn akbk_small_cases() {
        let q = ctx();
        let x = |l| q.var(h(&[1, 0, 0, 0]), 3, l);
        let ab = q.akbk((0, 1));
        assert_eq!(ab.a, x(0));
        assert_eq!(ab.b, PolyMap::constant(h(&[1, 0, 0, 0]), 3));
        let ab = q.akbk((0, 2));
        assert_eq!(ab.a, x(0).product(&x(0)).sub(&x(2)));
        assert_eq!(ab.b, x(0).scale(&rat(2, 1)));
        let ab = q.akbk((2, 0));
        let z = q.rotated_zeta1(0, 3);
        assert_eq!(ab.a, z.product(&z));
        assert!(ab.b.is_zero());
        for k in [(1, 1), (2, 1), (1, 2), (0, 3)] {
            let ab = q.akbk(k);
            assert!(q.akbk_identity(&ab).unwrap(), "{k:?}");
            assert!(q.akbk_homogeneous(&ab).unwrap(), "{k:?}");
        }
    }

    #[test]
    fn modulus_on_orbit() {
        let q = ctx();
        assert!(q
            .modulus_invariance_check((1, 1), &h(&[1, 0, 3, 0]), &h(&[1, 0, 0, 3]))
            .unwrap());
        assert!(q
            .modulus_invariance_check((1, 1), &h(&[1, 0, 3, 0]), &h(&[1, 0, 0, 2]))
            .is_err());
    }

    #[test]
    fn representation_formulas() {
        let q = ctx();
        let f = q.tk((1, 1));
        let eval = |x: &Element<Q>| f.evaluate_at(x);
        let pts = q.circle_grid(4);
        let (i, j, k) = (pts[1].unit(1), pts[2].unit(1), pts[3].unit(1));
        let z = h(&[1, -2, 0, 0]);
        let beta = rat(3, 2);
        let direct = f.evaluate_at(&(&z + &i.scale_by(&beta))).unwrap();
        assert_eq!(
            q.represent_general(&eval, i, j, k, &z, &beta).unwrap(),
            direct
        );
        assert_eq!(
            q.represent_two_point(&eval, i, j, &z, &beta).unwrap(),
            direct
        );
        assert_eq!(
            q.represent_general(&eval, i, j, j, &z, &beta),
            Err(Error::SingularPair)
        );
        // I = J reproduces f(z + βJ) for any evaluator
        let wild = |x: &Element<Q>| Ok(x * x * h(&[0, 0, 1, 0]) + h(&[3, 0, 0, 1]));
        let at_j = wild(&(&z + &j.scale_by(&beta))).unwrap();
        assert_eq!(
            q.represent_general(&wild, j, j, k, &z, &beta).unwrap(),
            at_j
        );
    }

    #[test]
    fn stems_of_t01() {
        let q = ctx();
        let torus = q.circle_grid(2).remove(1);
        let stem = q.extract_stem(&q.tk((0, 1)), &torus).unwrap();
        assert_eq!(stem.f_empty, q.var(h(&[1, 0, 0, 0]), 3, 0));
        assert_eq!(stem.f_one, q.var(h(&[1, 0, 0, 0]), 3, 2));
        let c = PolyMap::constant(h(&[2, 0, 1, 0]), 4);
        let stem = q.extract_stem(&c, &torus).unwrap();
        assert_eq!(stem.f_empty, PolyMap::constant(h(&[2, 0, 1, 0]), 3));
        assert!(stem.f_one.is_zero());
    }

    #[test]
    fn stems_of_t11_solve_the_system() {
        let q = ctx();
        let torus = q.circle_grid(3).remove(2);
        let stem = q.extract_stem(&q.tk((1, 1)), &torus).unwrap();
        let (a, b) = q.stem_system(&stem);
        assert!(a.is_zero() && b.is_zero());
        assert!(q.stem_is_harmonic(&stem));
        assert!(q.stem_function(&stem).is_ok());
    }

    #[test]
    fn slice_preserving_classes() {
        let c = |v: &[i64]| h(v);
        assert!(classify_slice_preserving(&Coefficients::from([(
            (2, 0),
            c(&[1, 1, 0, 0])
        )])));
        assert!(!classify_slice_preserving(&Coefficients::from([(
            (1, 1),
            c(&[1, 0, 0, 0])
        )])));
        assert!(classify_slice_preserving(&Coefficients::from([(
            (0, 2),
            c(&[3, 0, 0, 0])
        )])));
    }

    #[test]
    fn identity_principle() {
        let q = ctx();
        let torus = q.circle_grid(1).remove(0);
        let f = q.tk((2, 0));
        assert_eq!(
            q.identity_test(&f, &f, &torus).unwrap(),
            IdentityOutcome::Equal
        );
        let g = q.tk((1, 1)).add(&q.tk((2, 0)));
        match q.identity_test(&q.tk((1, 1)), &g, &torus).unwrap() {
            IdentityOutcome::Differ { witness, .. } => assert_eq!(witness, (2, 0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn family_ranks() {
        let q = ctx();
        for k in 0..=3 {
            let (r, dim) = q.family_rank(k);
            assert_eq!((r, dim), (4 * (k as usize + 1), 4 * (k as usize + 1)));
        }
        let torus = q.circle_grid(2).remove(1);
        let (r, dim) = q.slice_restriction_rank(2, &torus).unwrap();
        assert_eq!(r, dim);
    }
}
