//! Hypercomplex bases `(1, v_1, …, v_m)` of subspaces of an algebra: anticommuting
//! imaginary units that are pairwise trace-orthogonal.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{algebra_by_name, make_algebra, AlgebraSpec, Element, Preset};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The defining conditions of a hypercomplex basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisCondition {
    /// At least two vectors from one algebra.
    WellFormed,
    /// `v_0 = 1`.
    FirstIsOne,
    /// `t(v_s) = 0`.
    TraceZero,
    /// `n(v_s) = 1`.
    NormOne,
    /// `t(v_s v_t^c) = 0`.
    Orthogonal,
    /// `v_s v_t = -v_t v_s`.
    Anticommuting,
}

impl fmt::Display for BasisCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Self::WellFormed => "well-formed list",
            Self::FirstIsOne => "v_0 = 1",
            Self::TraceZero => "t(v) = 0",
            Self::NormOne => "n(v) = 1",
            Self::Orthogonal => "t(v_s v_t^c) = 0",
            Self::Anticommuting => "v_s v_t = -v_t v_s",
        };
        f.write_str(text)
    }
}

/// A failed condition together with the offending vector indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisViolation {
    pub condition: BasisCondition,
    pub indices: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for BasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {:?}: {}",
            self.condition, self.indices, self.detail
        )
    }
}

fn violation(condition: BasisCondition, indices: Vec<usize>, detail: String) -> BasisViolation {
    BasisViolation {
        condition,
        indices,
        detail,
    }
}

/// Checks the hypercomplex basis conditions in a fixed order: shape, `v_0`,
/// sphere membership of each `v_s`, pairwise orthogonality, anticommutation.
pub fn verify_basis<S: Scalar>(vectors: &[Element<S>]) -> std::result::Result<(), BasisViolation> {
    use BasisCondition::*;
    let Some(first) = vectors.first() else {
        return Err(violation(WellFormed, vec![], "empty list".into()));
    };
    if vectors.len() < 2 {
        return Err(violation(WellFormed, vec![0], "need m >= 1".into()));
    }
    if let Some(s) = vectors.iter().position(|v| !v.same_algebra(first)) {
        return Err(violation(WellFormed, vec![s], "mixed algebras".into()));
    }
    let one = Element::one(first.algebra());
    if !first.approx_eq(&one) {
        return Err(violation(FirstIsOne, vec![0], format!("v_0 = {first}")));
    }
    for (s, v) in vectors.iter().enumerate().skip(1) {
        let t = v.trace();
        if !t.approx_eq(&Element::zero(v.algebra())) {
            return Err(violation(TraceZero, vec![s], format!("t(v_{s}) = {t}")));
        }
        let n = v.norm_form();
        if !n.approx_eq(&one) {
            return Err(violation(NormOne, vec![s], format!("n(v_{s}) = {n}")));
        }
    }
    for s in 1..vectors.len() {
        for t in s + 1..vectors.len() {
            let tr = (&vectors[s] * &vectors[t].conj()).trace();
            if !tr.approx_eq(&Element::zero(first.algebra())) {
                return Err(violation(
                    Orthogonal,
                    vec![s, t],
                    format!("t(v_{s} v_{t}^c) = {tr}"),
                ));
            }
            let sum = &vectors[s] * &vectors[t] + &vectors[t] * &vectors[s];
            if !sum.approx_eq(&Element::zero(first.algebra())) {
                return Err(violation(
                    Anticommuting,
                    vec![s, t],
                    format!("v_{s} v_{t} + v_{t} v_{s} = {sum}"),
                ));
            }
        }
    }
    Ok(())
}

/// A verified hypercomplex basis `(v_0 = 1, v_1, …, v_m)`.
#[derive(Debug, Clone)]
pub struct HypercomplexBasis<S: Scalar> {
    name: String,
    vectors: Vec<Element<S>>,
}

impl<S: Scalar> PartialEq for HypercomplexBasis<S> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.vectors == other.vectors
    }
}

impl<S: Scalar> HypercomplexBasis<S> {
    /// Verifies and wraps a list of vectors.
    pub fn new(name: impl Into<String>, vectors: Vec<Element<S>>) -> Result<Self> {
        verify_basis(&vectors).map_err(|v| Error::InvalidBasis(v.to_string()))?;
        Ok(Self {
            name: name.into(),
            vectors,
        })
    }

    /// Basis given by labels of the algebra's standard basis; a leading `-`
    /// negates, e.g. `["1", "-k", "j", "i"]`.
    pub fn from_labels(alg: &Arc<AlgebraSpec>, name: &str, labels: &[&str]) -> Result<Self> {
        let vectors = labels
            .iter()
            .map(|label| match label.strip_prefix('-') {
                Some(rest) => Element::labelled(alg, rest).map(|v| -v),
                None => Element::labelled(alg, label),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, vectors)
    }

    /// The standard basis of the whole algebra, which is hypercomplex for
    /// ℂ, ℍ and 𝕆.
    pub fn standard(alg: &Arc<AlgebraSpec>) -> Result<Self> {
        let vectors = (0..alg.dim()).map(|s| Element::basis(alg, s)).collect();
        Self::new(alg.name(), vectors)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.vectors[0].algebra()
    }

    pub fn vectors(&self) -> &[Element<S>] {
        &self.vectors
    }

    pub fn vector(&self, s: usize) -> &Element<S> {
        &self.vectors[s]
    }

    /// `m`, the number of imaginary units.
    pub fn m(&self) -> usize {
        self.vectors.len() - 1
    }

    /// `x_0 v_0 + … + x_m v_m`.
    pub fn combine(&self, coords: &[S]) -> Result<Element<S>> {
        if coords.len() != self.vectors.len() {
            return Err(Error::VarCountMismatch {
                expected: self.vectors.len(),
                found: coords.len(),
            });
        }
        let mut out = Element::zero(self.algebra());
        for (c, v) in coords.iter().zip(&self.vectors) {
            out.add_scaled(c, v);
        }
        Ok(out)
    }

    /// Coordinates of `x` in this basis. The basis vectors are orthonormal for
    /// the standard inner product of every preset, so projection suffices.
    pub fn coordinates(&self, x: &Element<S>) -> Result<Vec<S>> {
        if !x.same_algebra(&self.vectors[0]) {
            return Err(Error::AlgebraMismatch {
                left: self.algebra().name().to_string(),
                right: x.algebra().name().to_string(),
            });
        }
        let coords: Vec<S> = self
            .vectors
            .iter()
            .map(|v| x.dot(v) / v.norm_sq())
            .collect();
        if !self.combine(&coords)?.approx_eq(x) {
            return Err(Error::OutsideSubspace);
        }
        Ok(coords)
    }

    pub fn contains(&self, x: &Element<S>) -> bool {
        self.coordinates(x).is_ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "algebra": self.algebra().name(),
            "vectors": self
                .vectors
                .iter()
                .map(|v| v.coeffs().iter().map(Scalar::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let alg_name = value
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("basis needs an \"algebra\" name".into()))?;
        let alg = algebra_by_name(alg_name)?;
        let vectors = value
            .get("vectors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("basis needs a \"vectors\" array".into()))?
            .iter()
            .map(|v| Element::from_json_in(&alg, v))
            .collect::<Result<Vec<_>>>()?;
        let name = value
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or(alg_name);
        Self::new(name, vectors)
    }
}

/// Appends `v̂ = v_1 ⋯ v_m` (left to right). The result is again a hypercomplex
/// basis exactly when `m ≡ 2 (mod 4)`; otherwise the first failed condition is
/// reported.
pub fn hat_extension<S: Scalar>(basis: &HypercomplexBasis<S>) -> Result<HypercomplexBasis<S>> {
    let alg = basis.algebra();
    if !alg.is_associative() {
        return Err(Error::Unsupported(format!(
            "hat extension needs an associative algebra, {} is not",
            alg.name()
        )));
    }
    let hat = basis.vectors[1..]
        .iter()
        .fold(Element::one(alg), |acc, v| &acc * v);
    let mut vectors = basis.vectors.clone();
    vectors.push(hat);
    match verify_basis(&vectors) {
        Ok(()) => Ok(HypercomplexBasis {
            name: format!("{}^", basis.name),
            vectors,
        }),
        Err(v) => Err(Error::NotExtendable {
            m: basis.m(),
            failed: v.condition,
        }),
    }
}

/// `(e_∅, e_1, …, e_n)` in Cℓ(0,n).
pub fn make_paravectors<S: Scalar>(n: usize) -> Result<HypercomplexBasis<S>> {
    let alg = make_algebra(Preset::Clifford0n(n))?;
    let vectors = (0..=n).map(|s| Element::basis(&alg, s)).collect();
    HypercomplexBasis::new(format!("{}:paravectors", alg.name()), vectors)
}

/// `(e_∅, all degree-h blades)` in Cℓ(0,n), for `h ≡ 1 (mod 4)`.
pub fn make_vh<S: Scalar>(n: usize, h: usize) -> Result<HypercomplexBasis<S>> {
    if h == 0 || h > n || h % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "V_h needs 1 <= h <= n and h = 1 mod 4, got n={n}, h={h}"
        )));
    }
    let alg = make_algebra(Preset::Clifford0n(n))?;
    let blades = crate::algebra::clifford_blades(n);
    let mut vectors = vec![Element::one(&alg)];
    vectors.extend(
        blades
            .iter()
            .enumerate()
            .filter(|(_, m)| m.count_ones() as usize == h)
            .map(|(s, _)| Element::basis(&alg, s)),
    );
    HypercomplexBasis::new(format!("{}:V{h}", alg.name()), vectors)
}

/// `h(n) = 4⌊(n+2)/8⌋ + 1`.
pub fn h_of_n(n: usize) -> usize {
    4 * ((n + 2) / 8) + 1
}
