//! T-regularity and T-slice-preservation of polynomial maps, T-stem functions
//! and the T-functions they induce.
//!
//! Regularity is checked two ways. Every sampled torus point gives an exact
//! residual `∂̄_J f_J`. Independently, each block sphere is parametrized by
//! inverse stereographic projection, `J_h = (N_h(u) ⋅ v) / D_h(u)`, and the
//! residual with denominators cleared must be the zero polynomial in the slice
//! variables and `u`. That covers every `J` except the antipodes of the
//! projection, whose slices coincide with those of `v_first` up to `β_h ↦ -β_h`.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::fan::{Sampler, TFan, TorusPoint};
use crate::poly::{apply_cr, restrict_to_slice, MultiIndex, PolyMap, ScalarPoly};
use crate::sampling;
use crate::scalar::Scalar;

/// Tolerance settings for float backends; exact backends ignore them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Residual coefficients below `tol · max|coeff of f|` count as zero.
    pub tol: f64,
    /// Also run the stereographic proof.
    pub symbolic: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            symbolic: true,
        }
    }
}

fn negligible<S: Scalar>(p: &PolyMap<S>, reference: &PolyMap<S>, opts: &CheckOptions) -> bool {
    if S::EXACT {
        p.is_zero()
    } else {
        p.max_abs() <= opts.tol * reference.max_abs().max(1.0)
    }
}

/// Outcome of the stereographic proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolicVerdict {
    /// The cleared residual is identically zero: regular on every slice.
    Proven,
    /// The cleared residual is a nonzero polynomial.
    Refuted,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S: Scalar> {
    RegularOnSamples,
    Counterexample {
        torus: TorusPoint<S>,
        residual: PolyMap<S>,
    },
}

/// Residual `∂̄_J f_J` at one torus point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResidual<S: Scalar> {
    pub torus: TorusPoint<S>,
    pub residual: PolyMap<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport<S: Scalar> {
    pub fan: String,
    pub samples: Vec<PointResidual<S>>,
    pub symbolic: Option<SymbolicVerdict>,
    pub verdict: Verdict<S>,
}

impl<S: Scalar> RegularityReport<S> {
    pub fn is_regular(&self) -> bool {
        matches!(self.verdict, Verdict::RegularOnSamples)
            && self.symbolic != Some(SymbolicVerdict::Refuted)
    }

    /// `regular_on_samples`, `regular_on_samples+symbolic` or `counterexample`.
    pub fn verdict_tag(&self) -> &'static str {
        match (&self.verdict, self.symbolic) {
            (Verdict::Counterexample { .. }, _) => "counterexample",
            (Verdict::RegularOnSamples, Some(SymbolicVerdict::Proven)) => {
                "regular_on_samples+symbolic"
            }
            (Verdict::RegularOnSamples, _) => "regular_on_samples",
        }
    }

    pub fn to_json(&self) -> Value {
        let names = slice_names(self.samples.first().map(|s| s.residual.vars()));
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let samples: Vec<Value> = self
            .samples
            .iter()
            .map(|s| {
                json!({
                    "torus": s.torus.to_json(),
                    "residual_zero": s.residual.is_zero(),
                    "residual_max_abs": s.residual.max_abs(),
                    "residual": s.residual.display_with(&names),
                })
            })
            .collect();
        let mut out = json!({
            "fan": self.fan,
            "backend": S::BACKEND,
            "verdict": self.verdict_tag(),
            "symbolic": match self.symbolic {
                Some(SymbolicVerdict::Proven) => "proven",
                Some(SymbolicVerdict::Refuted) => "refuted",
                None => "skipped",
            },
            "sample_count": self.samples.len(),
            "samples": samples,
        });
        if let Verdict::Counterexample { torus, residual } = &self.verdict {
            out["counterexample"] = json!({
                "torus": torus.to_json(),
                "residual": residual.to_json(),
                "residual_text": residual.display_with(&names),
            });
        }
        out
    }
}

fn slice_names(vars: Option<usize>) -> Vec<String> {
    (0..vars.unwrap_or(0)).map(|l| format!("y{l}")).collect()
}

/// Checks `∂̄_J f_J = 0` on the sampled torus points and, when requested,
/// for all `J` through the stereographic parametrization.
pub fn check_regular<S: Scalar>(
    f: &PolyMap<S>,
    fan: &TFan<S>,
    sampler: &Sampler,
    opts: &CheckOptions,
) -> Result<RegularityReport<S>> {
    let points = fan.torus_sample(sampler)?;
    let mut samples = Vec::with_capacity(points.len());
    for torus in points {
        let slice = restrict_to_slice(f, fan, &torus)?;
        let residual = apply_cr(fan, &torus, &slice)?;
        samples.push(PointResidual { torus, residual });
    }
    let symbolic = if opts.symbolic {
        let r = symbolic_residual(f, fan)?;
        Some(if negligible(&r, f, opts) {
            SymbolicVerdict::Proven
        } else {
            SymbolicVerdict::Refuted
        })
    } else {
        None
    };
    let mut witness = samples
        .iter()
        .find(|s| !negligible(&s.residual, f, opts))
        .cloned();
    if witness.is_none() && symbolic == Some(SymbolicVerdict::Refuted) {
        // The samples missed the failure; search seeded points until one shows it.
        for seed in 0..64 {
            let extra = fan.torus_sample(&Sampler::Random { seed, count: 4 })?;
            for torus in extra {
                let residual = apply_cr(fan, &torus, &restrict_to_slice(f, fan, &torus)?)?;
                if !negligible(&residual, f, opts) {
                    let found = PointResidual { torus, residual };
                    samples.push(found.clone());
                    witness = Some(found);
                    break;
                }
            }
            if witness.is_some() {
                break;
            }
        }
    }
    let verdict = match witness {
        Some(PointResidual { torus, residual }) => Verdict::Counterexample { torus, residual },
        None => Verdict::RegularOnSamples,
    };
    Ok(RegularityReport {
        fan: fan.name(),
        samples,
        symbolic,
        verdict,
    })
}

/// The cleared residual `R(y, u)` of the stereographic proof.
///
/// Variables are the slice coordinates `(x_0, …, x_{t_0}, β_1, …, β_τ)`
/// followed by the projection parameters of every block of size `m ≥ 2`
/// (`m - 1` each). Size-one blocks use `J_h = v` directly.
pub fn symbolic_residual<S: Scalar>(f: &PolyMap<S>, fan: &TFan<S>) -> Result<PolyMap<S>> {
    let n1 = fan.n() + 1;
    if f.vars() != n1 {
        return Err(Error::VarCountMismatch {
            expected: n1,
            found: f.vars(),
        });
    }
    let t0 = fan.t0();
    let tau = fan.tau();
    let sv = fan.slice_vars();
    let param_counts: Vec<usize> = (1..=tau).map(|h| fan.block_size(h) - 1).collect();
    let total = sv + param_counts.iter().sum::<usize>();

    // N_{h,a} and D_h as real polynomials in all variables.
    let mut numerators: Vec<Vec<ScalarPoly<S>>> = Vec::with_capacity(tau);
    let mut denominators: Vec<ScalarPoly<S>> = Vec::with_capacity(tau);
    let mut offset = sv;
    for &p in &param_counts {
        let u: Vec<ScalarPoly<S>> = (0..p).map(|a| ScalarPoly::var(total, offset + a)).collect();
        let sq = u
            .iter()
            .fold(ScalarPoly::zero(total), |acc, x| acc.add(&x.mul(x)));
        let one = ScalarPoly::one(total);
        let mut nums = vec![one.sub(&sq)];
        nums.extend(u.iter().map(|x| x.scale(&S::from_int(2))));
        numerators.push(nums);
        denominators.push(one.add(&sq));
        offset += p;
    }

    // Block degrees d_h and power caches.
    let block_deg = |m: &MultiIndex, h: usize| -> u32 { fan.block(h).map(|l| m[l]).sum() };
    let d: Vec<u32> = (1..=tau)
        .map(|h| f.terms().map(|(m, _)| block_deg(m, h)).max().unwrap_or(0))
        .collect();
    let d_powers: Vec<Vec<ScalarPoly<S>>> = denominators
        .iter()
        .zip(&d)
        .map(|(den, &dh)| {
            let mut row = vec![ScalarPoly::one(total)];
            for k in 1..=dh as usize {
                row.push(row[k - 1].mul(den));
            }
            row
        })
        .collect();
    let mut n_powers: BTreeMap<(usize, usize, u32), ScalarPoly<S>> = BTreeMap::new();

    let alg = f.algebra();
    let mut g = PolyMap::zero(alg, total);
    for (m, c) in f.terms() {
        let mut factor = ScalarPoly::one(total);
        let mut mono = vec![0u32; total];
        mono[..=t0].copy_from_slice(&m[..=t0]);
        for h in 1..=tau {
            let e = block_deg(m, h);
            mono[t0 + h] = e;
            for (a, l) in fan.block(h).enumerate() {
                if m[l] > 0 {
                    let key = (h, a, m[l]);
                    if !n_powers.contains_key(&key) {
                        n_powers.insert(key, numerators[h - 1][a].pow(m[l]));
                    }
                    factor = factor.mul(&n_powers[&key]);
                }
            }
            factor = factor.mul(&d_powers[h - 1][(d[h - 1] - e) as usize]);
        }
        let base = PolyMap::from_terms(alg, total, [(mono, c.clone())])?;
        g = g.add(&base.mul_scalar_poly(&factor));
    }

    let basis = fan.basis();
    let all_d = denominators
        .iter()
        .fold(ScalarPoly::one(total), |acc, den| acc.mul(den));
    let mut mirror_part = g.derivative(0);
    for l in 1..=t0 {
        mirror_part = mirror_part.add(&g.derivative(l).left_mul(basis.vector(l)));
    }
    let mut r = mirror_part.mul_scalar_poly(&all_d);
    for h in 1..=tau {
        let dg = g.derivative(t0 + h);
        let others = denominators
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != h - 1)
            .fold(ScalarPoly::one(total), |acc, (_, den)| acc.mul(den));
        for (a, l) in fan.block(h).enumerate() {
            let term = dg
                .left_mul(basis.vector(l))
                .mul_scalar_poly(&numerators[h - 1][a].mul(&others));
            r = r.add(&term);
        }
    }
    Ok(r)
}

/// Where a slice-preservation check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct PreservationViolation<S: Scalar> {
    pub torus: TorusPoint<S>,
    pub monomial: MultiIndex,
    pub coeff: Element<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport<S: Scalar> {
    pub fan: String,
    pub sample_count: usize,
    pub violation: Option<PreservationViolation<S>>,
}

impl<S: Scalar> PreservationReport<S> {
    pub fn is_preserving(&self) -> bool {
        self.violation.is_none()
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "fan": self.fan,
            "sample_count": self.sample_count,
            "verdict": if self.is_preserving() { "preserving_on_samples" } else { "violation" },
        });
        if let Some(v) = &self.violation {
            out["violation"] = json!({
                "torus": v.torus.to_json(),
                "monomial": v.monomial,
                "coeff": v.coeff.to_json(),
            });
        }
        out
    }
}

/// Checks `f(ℝ_J) ⊆ ℝ_J` on sampled `J`: every coefficient of `f_J` must lie
/// in `span(1, v_1, …, v_{t_0}, J_1, …, J_τ)`.
pub fn check_slice_preserving<S: Scalar>(
    f: &PolyMap<S>,
    fan: &TFan<S>,
    sampler: &Sampler,
) -> Result<PreservationReport<S>> {
    let points = fan.torus_sample(sampler)?;
    let sample_count = points.len();
    for torus in points {
        let slice = restrict_to_slice(f, fan, &torus)?;
        for (m, c) in slice.terms() {
            if !fan.slice_membership(&torus, c) {
                return Ok(PreservationReport {
                    fan: fan.name(),
                    sample_count,
                    violation: Some(PreservationViolation {
                        torus,
                        monomial: m.clone(),
                        coeff: c.clone(),
                    }),
                });
            }
        }
    }
    Ok(PreservationReport {
        fan: fan.name(),
        sample_count,
        violation: None,
    })
}

/// A T-stem function: components `F_K` indexed by bitmasks `K ⊆ {1..τ}` (bit
/// `h-1` stands for `h`), each a map of `(x_0, …, x_{t_0}, β_1, …, β_τ)`.
#[derive(Debug, Clone)]
pub struct StemFunction<S: Scalar> {
    fan: TFan<S>,
    components: BTreeMap<usize, PolyMap<S>>,
}

impl<S: Scalar> StemFunction<S> {
    /// Builds a stem, rejecting components that break the β-parities.
    pub fn new(fan: TFan<S>, components: BTreeMap<usize, PolyMap<S>>) -> Result<Self> {
        let stem = Self::new_unchecked(fan, components)?;
        stem.verify_parity()?;
        Ok(stem)
    }

    /// Builds without the parity check (shape is still validated).
    pub fn new_unchecked(fan: TFan<S>, components: BTreeMap<usize, PolyMap<S>>) -> Result<Self> {
        let tau = fan.tau();
        for (&k, f) in &components {
            if k >> tau != 0 {
                return Err(Error::InvalidParameter(format!(
                    "component {k:#b} outside P({tau})"
                )));
            }
            if f.vars() != fan.slice_vars() {
                return Err(Error::VarCountMismatch {
                    expected: fan.slice_vars(),
                    found: f.vars(),
                });
            }
        }
        Ok(Self { fan, components })
    }

    pub fn fan(&self) -> &TFan<S> {
        &self.fan
    }

    pub fn components(&self) -> &BTreeMap<usize, PolyMap<S>> {
        &self.components
    }

    pub fn component(&self, k: usize) -> Option<&PolyMap<S>> {
        self.components.get(&k)
    }

    /// `F_K(x^0, β̄^h) = ±F_K(x^0, β)`, sign `-` exactly when `h ∈ K`: every
    /// monomial's `β_h` exponent has the parity of `[h ∈ K]`.
    pub fn verify_parity(&self) -> Result<()> {
        let t0 = self.fan.t0();
        for (&k, f) in &self.components {
            for h in 1..=self.fan.tau() {
                let odd = k & (1 << (h - 1)) != 0;
                if f.terms().any(|(m, _)| (m[t0 + h] % 2 == 1) != odd) {
                    return Err(Error::InvalidStem { component: k, h });
                }
            }
        }
        Ok(())
    }

    /// Value of the induced function at `x^0 + Σ β_h J_h`:
    /// `Σ_K J_{k_1}(J_{k_2}(⋯(J_{k_p} F_K)⋯))` with `k_1 < ⋯ < k_p`.
    pub fn eval(&self, mirror: &[S], betas: &[S], torus: &TorusPoint<S>) -> Result<Element<S>> {
        let y: Vec<S> = mirror.iter().chain(betas).cloned().collect();
        let mut out = Element::zero(self.fan.basis().algebra());
        for (&k, f) in &self.components {
            let mut value = f.evaluate(&y)?;
            for h in (1..=self.fan.tau()).rev() {
                if k & (1 << (h - 1)) != 0 {
                    value = torus.unit(h) * &value;
                }
            }
            out.add_assign_ref(&value);
        }
        Ok(out)
    }
}

/// The T-function induced by a stem.
#[derive(Debug, Clone)]
pub struct InducedFunction<S: Scalar> {
    stem: StemFunction<S>,
}

/// Wraps a stem as an evaluator after checking its parities.
pub fn induce<S: Scalar>(stem: StemFunction<S>) -> Result<InducedFunction<S>> {
    stem.verify_parity()?;
    Ok(InducedFunction { stem })
}

impl<S: Scalar> InducedFunction<S> {
    pub fn stem(&self) -> &StemFunction<S> {
        &self.stem
    }

    pub fn eval_slice(
        &self,
        mirror: &[S],
        betas: &[S],
        torus: &TorusPoint<S>,
    ) -> Result<Element<S>> {
        self.stem.eval(mirror, betas, torus)
    }

    /// Value at an element of the fan's span (decomposed with `β_h ≥ 0`).
    pub fn eval(&self, x: &Element<S>) -> Result<Element<S>> {
        let p = self.stem.fan.decompose(x)?;
        self.stem.eval(&p.mirror, &p.betas, &p.torus)
    }
}

/// Compares the induced value at `(x^0, β, J)` with the value at the
/// reflected representative `(x^0, β̄^h, J with J_h ↦ -J_h)`.
pub fn representative_invariance<S: Scalar>(
    stem: &StemFunction<S>,
    mirror: &[S],
    betas: &[S],
    torus: &TorusPoint<S>,
    h: usize,
) -> Result<bool> {
    let a = stem.eval(mirror, betas, torus)?;
    let mut reflected = betas.to_vec();
    reflected[h - 1] = -reflected[h - 1].clone();
    let b = stem.eval(mirror, &reflected, &torus.flipped(h))?;
    Ok(a.approx_eq(&b))
}

/// Checks invariance under every single-block reflection at `count` random
/// slice points.
pub fn representative_invariance_sampled<S: Scalar>(
    stem: &StemFunction<S>,
    seed: u64,
    count: usize,
) -> Result<bool> {
    let fan = stem.fan();
    let mut rng = sampling::rng(seed);
    let tori = fan.torus_sample(&Sampler::Random {
        seed: rng.random(),
        count,
    })?;
    for torus in tori {
        let mirror = sampling::scalars(&mut rng, fan.mirror_dim());
        let betas = sampling::scalars(&mut rng, fan.tau());
        for h in 1..=fan.tau() {
            if !representative_invariance(stem, &mirror, &betas, &torus, h)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
