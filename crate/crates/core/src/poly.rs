//! Polynomial maps `ℝ^N → A` stored as `Σ x^m · c_m` with algebra coefficients,
//! real polynomials for substitutions, and the slice differential operators.
//!
//! Real monomials are central, so the side of `c_m` only matters for products
//! built from algebra factors: [`PolyMap::left_mul`] multiplies coefficients on
//! the left, [`PolyMap::right_mul`] on the right, and [`PolyMap::product`]
//! pairs coefficients as `f_m · g_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{algebra_by_name, AlgebraSpec, Element};
use crate::error::{Error, Result};
use crate::fan::{TFan, TorusPoint};
use crate::scalar::Scalar;

/// Exponent vector over the variables in play.
pub type MultiIndex = Vec<u32>;

fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn add_exp(a: &[u32], b: &[u32]) -> MultiIndex {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_exact_zero<S: Scalar>(c: &Element<S>) -> bool {
    c.coeffs().iter().all(|s| s.is_zero())
}

/// Integer powers of `values`, cached per variable.
fn power_table<T: Clone>(
    values: &[T],
    max_exp: &[u32],
    one: T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<Vec<T>> {
    values
        .iter()
        .zip(max_exp)
        .map(|(v, &e)| {
            let mut row = Vec::with_capacity(e as usize + 1);
            row.push(one.clone());
            for k in 1..=e as usize {
                row.push(mul(&row[k - 1], v));
            }
            row
        })
        .collect()
}

/// A real polynomial in `vars` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly<S> {
    vars: usize,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> ScalarPoly<S> {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: S) -> Self {
        let mut out = Self::zero(vars);
        out.add_term(vec![0; vars], c);
        out
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, S::one())
    }

    /// The coordinate function `x_var`.
    pub fn var(vars: usize, var: usize) -> Self {
        Self::monomial(vars, var, 1, S::one())
    }

    /// `c · x_var^exp`.
    pub fn monomial(vars: usize, var: usize, exp: u32, c: S) -> Self {
        let mut m = vec![0; vars];
        m[var] = exp;
        let mut out = Self::zero(vars);
        out.add_term(m, c);
        out
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| degree(m)).max()
    }

    pub fn add_term(&mut self, m: MultiIndex, c: S) {
        debug_assert_eq!(m.len(), self.vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * factor.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(add_exp(m, n), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(self.vars), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m[var] > 0 {
                let mut d = m.clone();
                d[var] -= 1;
                out.add_term(d, c.clone() * S::from_int(i64::from(m[var])));
            }
        }
        out
    }

    pub fn evaluate(&self, x: &[S]) -> S {
        let max = max_exponents(self.terms.keys(), self.vars);
        let powers = power_table(x, &max, S::one(), |a, b| a.clone() * b.clone());
        self.terms.iter().fold(S::zero(), |acc, (m, c)| {
            let mono = m
                .iter()
                .enumerate()
                .fold(c.clone(), |p, (l, &e)| p * powers[l][e as usize].clone());
            acc + mono
        })
    }
}

fn max_exponents<'a>(keys: impl Iterator<Item = &'a MultiIndex>, vars: usize) -> Vec<u32> {
    let mut max = vec![0u32; vars];
    for m in keys {
        for (a, &b) in max.iter_mut().zip(m) {
            *a = (*a).max(b);
        }
    }
    max
}

/// A polynomial map `ℝ^vars → A`.
#[derive(Clone)]
pub struct PolyMap<S: Scalar> {
    alg: Arc<AlgebraSpec>,
    vars: usize,
    terms: BTreeMap<MultiIndex, Element<S>>,
}

impl<S: Scalar> PartialEq for PolyMap<S> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.alg.name() == other.alg.name() && self.terms == other.terms
    }
}

impl<S: Scalar> PolyMap<S> {
    pub fn zero(alg: &Arc<AlgebraSpec>, vars: usize) -> Self {
        Self {
            alg: Arc::clone(alg),
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Element<S>, vars: usize) -> Self {
        let mut out = Self::zero(c.algebra(), vars);
        out.add_term(vec![0; vars], c);
        out
    }

    /// `x_var · c`.
    pub fn var(c: Element<S>, vars: usize, var: usize) -> Self {
        let mut m = vec![0; vars];
        m[var] = 1;
        let mut out = Self::zero(c.algebra(), vars);
        out.add_term(m, c);
        out
    }

    /// `Σ_ℓ x_ℓ c_ℓ`.
    pub fn linear(alg: &Arc<AlgebraSpec>, coeffs: &[Element<S>]) -> Self {
        let vars = coeffs.len();
        let mut out = Self::zero(alg, vars);
        for (l, c) in coeffs.iter().enumerate() {
            let mut m = vec![0; vars];
            m[l] = 1;
            out.add_term(m, c.clone());
        }
        out
    }

    /// A real polynomial viewed as an `A`-valued map.
    pub fn from_scalar(alg: &Arc<AlgebraSpec>, p: &ScalarPoly<S>) -> Self {
        let mut out = Self::zero(alg, p.vars);
        for (m, c) in &p.terms {
            out.add_term(m.clone(), Element::real(alg, c.clone()));
        }
        out
    }

    pub fn from_terms(
        alg: &Arc<AlgebraSpec>,
        vars: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Element<S>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(alg, vars);
        for (m, c) in terms {
            if m.len() != vars {
                return Err(Error::VarCountMismatch {
                    expected: vars,
                    found: m.len(),
                });
            }
            if !c.algebra().name().eq(alg.name()) {
                return Err(Error::AlgebraMismatch {
                    left: alg.name().to_string(),
                    right: c.algebra().name().to_string(),
                });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Element<S>)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Option<&Element<S>> {
        self.terms.get(m)
    }

    /// Table emptiness; coefficients that cancel exactly are pruned eagerly.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero up to the backend tolerance relative to `scale`.
    pub fn is_negligible(&self, scale: &S) -> bool {
        self.terms
            .values()
            .all(|c| c.coeffs().iter().all(|s| s.is_negligible(scale)))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| degree(m)).max()
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|m| degree(m) == k)
    }

    /// Largest absolute coefficient, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|c| c.coeffs().iter().map(|s| s.to_f64().abs()))
            .fold(0.0, f64::max)
    }

    pub fn add_term(&mut self, m: MultiIndex, c: Element<S>) {
        debug_assert_eq!(m.len(), self.vars);
        if is_exact_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if is_exact_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarCountMismatch {
                expected: self.vars,
                found: other.vars,
            });
        }
        if self.alg.name() != other.alg.name() {
            return Err(Error::AlgebraMismatch {
                left: self.alg.name().to_string(),
                right: other.alg.name().to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Panicking variant of [`PolyMap::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("compatible polynomial maps")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("compatible polynomial maps")
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        self.map_coeffs(|c| c.scale_by(factor))
    }

    fn map_coeffs(&self, f: impl Fn(&Element<S>) -> Element<S>) -> Self {
        let mut out = Self::zero(&self.alg, self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// `a · f`.
    pub fn left_mul(&self, a: &Element<S>) -> Self {
        self.map_coeffs(|c| a * c)
    }

    /// `f · a`.
    pub fn right_mul(&self, a: &Element<S>) -> Self {
        self.map_coeffs(|c| c * a)
    }

    /// Pointwise product `f · g`, pairing coefficients as `f_m g_n`. For a
    /// nonassociative algebra longer products should be folded left to right.
    pub fn try_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alg, self.vars);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(add_exp(m, n), a * b);
            }
        }
        Ok(out)
    }

    pub fn product(&self, other: &Self) -> Self {
        self.try_product(other).expect("compatible polynomial maps")
    }

    /// Left-to-right product of a nonempty list.
    pub fn product_all(factors: &[Self]) -> Self {
        let (first, rest) = factors.split_first().expect("nonempty product");
        rest.iter().fold(first.clone(), |acc, f| acc.product(f))
    }

    pub fn mul_scalar_poly(&self, p: &ScalarPoly<S>) -> Self {
        assert_eq!(self.vars, p.vars, "variable count");
        let mut out = Self::zero(&self.alg, self.vars);
        for (m, c) in &self.terms {
            for (n, s) in &p.terms {
                out.add_term(add_exp(m, n), c.scale_by(s));
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.alg, self.vars);
        for (m, c) in &self.terms {
            if m[var] > 0 {
                let mut d = m.clone();
                d[var] -= 1;
                out.add_term(d, c.scale_by(&S::from_int(i64::from(m[var]))));
            }
        }
        out
    }

    /// `∂_var^order`.
    pub fn derivative_n(&self, var: usize, order: u32) -> Self {
        (0..order).fold(self.clone(), |acc, _| acc.derivative(var))
    }

    pub fn evaluate(&self, x: &[S]) -> Result<Element<S>> {
        if x.len() != self.vars {
            return Err(Error::VarCountMismatch {
                expected: self.vars,
                found: x.len(),
            });
        }
        let max = max_exponents(self.terms.keys(), self.vars);
        let powers = power_table(x, &max, S::one(), |a, b| a.clone() * b.clone());
        let mut out = Element::zero(&self.alg);
        for (m, c) in &self.terms {
            let mono = m
                .iter()
                .enumerate()
                .fold(S::one(), |p, (l, &e)| p * powers[l][e as usize].clone());
            out.add_scaled(&mono, c);
        }
        Ok(out)
    }

    /// Value at an algebra point, read in the standard coordinates of the
    /// algebra (the variables must match its dimension).
    pub fn evaluate_at(&self, x: &Element<S>) -> Result<Element<S>> {
        self.evaluate(x.coeffs())
    }

    /// Composition with real polynomials `x_ℓ := subs[ℓ]`.
    pub fn substitute(&self, subs: &[ScalarPoly<S>]) -> Result<Self> {
        if subs.len() != self.vars {
            return Err(Error::VarCountMismatch {
                expected: self.vars,
                found: subs.len(),
            });
        }
        let new_vars = subs.first().map_or(0, |p| p.vars);
        if subs.iter().any(|p| p.vars != new_vars) {
            return Err(Error::InvalidParameter(
                "substitutions must share a variable count".into(),
            ));
        }
        let max = max_exponents(self.terms.keys(), self.vars);
        let powers = power_table(subs, &max, ScalarPoly::one(new_vars), |a, b| a.mul(b));
        let mut out = Self::zero(&self.alg, new_vars);
        for (m, c) in &self.terms {
            let mono = m
                .iter()
                .enumerate()
                .fold(ScalarPoly::one(new_vars), |p, (l, &e)| {
                    p.mul(&powers[l][e as usize])
                });
            for (n, s) in &mono.terms {
                out.add_term(n.clone(), c.scale_by(s));
            }
        }
        Ok(out)
    }

    /// `x ↦ f(x - shift)`.
    pub fn translate(&self, shift: &[S]) -> Result<Self> {
        let subs: Vec<ScalarPoly<S>> = (0..self.vars)
            .map(|l| {
                let mut p = ScalarPoly::var(self.vars, l);
                p.add_term(
                    vec![0; self.vars],
                    -shift.get(l).cloned().unwrap_or_else(S::zero),
                );
                p
            })
            .collect();
        if shift.len() != self.vars {
            return Err(Error::VarCountMismatch {
                expected: self.vars,
                found: shift.len(),
            });
        }
        self.substitute(&subs)
    }

    /// Coefficientwise conjugation `Σ x^m c_m^c`.
    pub fn conj(&self) -> Self {
        self.map_coeffs(Element::conj)
    }

    /// Equality for exact backends; for floats the difference must stay below
    /// `1e-9` relative to the larger operand.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if S::EXACT {
            return self == other;
        }
        match self.try_sub(other) {
            Ok(d) => d.max_abs() <= 1e-9 * self.max_abs().max(other.max_abs()).max(1.0),
            Err(_) => false,
        }
    }

    /// `x ↦ f(…, -x_var, …)`.
    pub fn reflect(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.alg, self.vars);
        for (m, c) in &self.terms {
            out.add_term(
                m.clone(),
                if m[var] % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                },
            );
        }
        out
    }

    /// Terms of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.alg, self.vars);
        for (m, c) in &self.terms {
            if degree(m) == k {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Converts coefficients to another scalar field.
    pub fn convert<T: Scalar>(&self) -> PolyMap<T> {
        let mut out = PolyMap::zero(&self.alg, self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.convert());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "exp": m,
                    "coeff": c.coeffs().iter().map(Scalar::to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "vars": self.vars,
            "algebra": self.alg.name(),
            "terms": terms,
        })
    }

    /// Parses `{"vars", "algebra"?, "terms": [{"exp", "coeff"}]}`; the
    /// algebra defaults to `default_alg` when absent.
    pub fn from_json(value: &Value, default_alg: Option<&Arc<AlgebraSpec>>) -> Result<Self> {
        let vars = value
            .get("vars")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("polynomial needs integer \"vars\"".into()))?
            as usize;
        let alg = match value.get("algebra").and_then(Value::as_str) {
            Some(name) => algebra_by_name(name)?,
            None => default_alg
                .cloned()
                .ok_or_else(|| Error::Parse("polynomial needs an \"algebra\"".into()))?,
        };
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial needs a \"terms\" array".into()))?;
        let mut out = Self::zero(&alg, vars);
        for (idx, term) in terms.iter().enumerate() {
            let exp: MultiIndex = term
                .get("exp")
                .cloned()
                .ok_or_else(|| Error::Parse(format!("term {idx} needs \"exp\"")))
                .and_then(|e| {
                    serde_json::from_value(e).map_err(|e| Error::Parse(format!("term {idx}: {e}")))
                })?;
            if exp.len() != vars {
                return Err(Error::VarCountMismatch {
                    expected: vars,
                    found: exp.len(),
                });
            }
            let coeff = term
                .get("coeff")
                .ok_or_else(|| Error::Parse(format!("term {idx} needs \"coeff\"")))?;
            out.add_term(exp, Element::from_json_in(&alg, coeff)?);
        }
        Ok(out)
    }

    /// Renders with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(l, &e)| {
                        let name = names
                            .get(l)
                            .map_or_else(|| format!("x{l}"), |s| s.to_string());
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("{}*({c})", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<S: Scalar> fmt::Debug for PolyMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap<{}>[{}]", self.alg.name(), self)
    }
}

impl<S: Scalar> fmt::Display for PolyMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

/// The left-multiplying units `(1, v_1, …, v_{t_0}, J_1, …, J_τ)` of the slice
/// operators, one per slice variable.
pub fn slice_units<S: Scalar>(fan: &TFan<S>, torus: &TorusPoint<S>) -> Vec<Element<S>> {
    let basis = fan.basis();
    fan.mirror_range()
        .map(|l| basis.vector(l).clone())
        .chain(torus.units().iter().cloned())
        .collect()
}

/// `f_J`: substitutes `x_ℓ := β_h (J_h)_ℓ` on each block, keeping the mirror
/// coordinates. The result lives on `(x_0, …, x_{t_0}, β_1, …, β_τ)`.
pub fn restrict_to_slice<S: Scalar>(
    f: &PolyMap<S>,
    fan: &TFan<S>,
    torus: &TorusPoint<S>,
) -> Result<PolyMap<S>> {
    let n1 = fan.n() + 1;
    if f.vars() != n1 {
        return Err(Error::VarCountMismatch {
            expected: n1,
            found: f.vars(),
        });
    }
    let slice_vars = fan.slice_vars();
    let mut subs = vec![ScalarPoly::zero(slice_vars); n1];
    for l in fan.mirror_range() {
        subs[l] = ScalarPoly::var(slice_vars, l);
    }
    for h in 1..=fan.tau() {
        let beta = fan.t0() + h;
        for (c, l) in torus.block_coords(h).iter().zip(fan.block(h)) {
            subs[l] = ScalarPoly::monomial(slice_vars, beta, 1, c.clone());
        }
    }
    f.substitute(&subs)
}

fn check_slice_vars<S: Scalar>(fan: &TFan<S>, f: &PolyMap<S>) -> Result<()> {
    if f.vars() != fan.slice_vars() {
        return Err(Error::VarCountMismatch {
            expected: fan.slice_vars(),
            found: f.vars(),
        });
    }
    Ok(())
}

/// `Σ_ℓ s_ℓ u_ℓ ∂_ℓ f` with `s_0 = 1` and `s_ℓ = sign` otherwise.
fn dirac<S: Scalar>(units: &[Element<S>], f: &PolyMap<S>, sign: bool) -> PolyMap<S> {
    let mut out = f.derivative(0);
    for (l, u) in units.iter().enumerate().skip(1) {
        let term = f.derivative(l).left_mul(u);
        out = if sign { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// `∂̄_J f = ∂_{x_0} f + Σ v_ℓ ∂_{x_ℓ} f + Σ J_h ∂_{β_h} f`.
pub fn apply_cr<S: Scalar>(
    fan: &TFan<S>,
    torus: &TorusPoint<S>,
    f: &PolyMap<S>,
) -> Result<PolyMap<S>> {
    check_slice_vars(fan, f)?;
    Ok(dirac(&slice_units(fan, torus), f, true))
}

/// `∂_J f = ∂_{x_0} f - Σ v_ℓ ∂_{x_ℓ} f - Σ J_h ∂_{β_h} f`.
pub fn apply_conj_cr<S: Scalar>(
    fan: &TFan<S>,
    torus: &TorusPoint<S>,
    f: &PolyMap<S>,
) -> Result<PolyMap<S>> {
    check_slice_vars(fan, f)?;
    Ok(dirac(&slice_units(fan, torus), f, false))
}

/// `Δ_J f`, the sum of all second derivatives in the slice variables.
pub fn apply_laplacian<S: Scalar>(fan: &TFan<S>, f: &PolyMap<S>) -> Result<PolyMap<S>> {
    check_slice_vars(fan, f)?;
    Ok(laplacian(f))
}

/// Sum of all pure second derivatives.
pub fn laplacian<S: Scalar>(f: &PolyMap<S>) -> PolyMap<S> {
    (0..f.vars()).fold(PolyMap::zero(f.algebra(), f.vars()), |acc, l| {
        acc.add(&f.derivative_n(l, 2))
    })
}

/// `∇^𝐡 = ∂_0^{h_0} ∂_1^{h_1} ∂_β^{h_2}` on maps of `(x_0, x_1, β)`.
pub fn apply_nabla<S: Scalar>(h: [u32; 3], f: &PolyMap<S>) -> Result<PolyMap<S>> {
    if f.vars() != 3 {
        return Err(Error::VarCountMismatch {
            expected: 3,
            found: f.vars(),
        });
    }
    Ok(f.derivative_n(0, h[0])
        .derivative_n(1, h[1])
        .derivative_n(2, h[2]))
}

/// `δ^{(h_0,h_1,h_2)} = ∂_0^{h_0} ∂_1^{h_1} (∂_0² + ∂_1²)^t`, followed by
/// `∂_0 + i ∂_1` when `h_2 = 2t + 1`; `i` multiplies on the left.
pub fn apply_delta<S: Scalar>(h: [u32; 3], i: &Element<S>, f: &PolyMap<S>) -> Result<PolyMap<S>> {
    if f.vars() < 2 {
        return Err(Error::VarCountMismatch {
            expected: 2,
            found: f.vars(),
        });
    }
    let mut out = f.derivative_n(0, h[0]).derivative_n(1, h[1]);
    for _ in 0..h[2] / 2 {
        out = out.derivative_n(0, 2).add(&out.derivative_n(1, 2));
    }
    if h[2] % 2 == 1 {
        out = out.derivative(0).add(&out.derivative(1).left_mul(i));
    }
    Ok(out)
}

/// Finite-difference `∂̄_J` residual of a black-box map at slice coordinates
/// `y = (x_0, …, x_{t_0}, β_1, …, β_τ)`. The default step is
/// `ε^{1/3} · max(1, ‖y‖)`.
pub fn numeric_cr(
    fan: &TFan<f64>,
    torus: &TorusPoint<f64>,
    f: &dyn Fn(&Element<f64>) -> Result<Element<f64>>,
    y: &[f64],
    step: Option<f64>,
) -> Result<Element<f64>> {
    let nv = fan.slice_vars();
    if y.len() != nv {
        return Err(Error::VarCountMismatch {
            expected: nv,
            found: y.len(),
        });
    }
    let norm = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let h = step.unwrap_or_else(|| f64::EPSILON.cbrt() * norm.max(1.0));
    let units = slice_units(fan, torus);
    let t0 = fan.t0();
    let point = |coords: &[f64]| fan.slice_point(&coords[..=t0], &coords[t0 + 1..], torus);
    let mut out = Element::zero(fan.basis().algebra());
    for (l, unit) in units.iter().enumerate() {
        let mut plus = y.to_vec();
        let mut minus = y.to_vec();
        plus[l] += h;
        minus[l] -= h;
        let diff = f(&point(&plus)?)? - f(&point(&minus)?)?;
        out.add_assign_ref(&(unit * &diff).scale_by(&(0.5 / h)));
    }
    Ok(out)
}
