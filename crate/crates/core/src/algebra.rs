//! Finite-dimensional alternative real *-algebras with monomial structure
//! constants, and their elements.
//!
//! Every preset (ℂ, ℍ, 𝕆, Cℓ(0,n)) has products of basis vectors equal to a
//! signed basis vector, so the multiplication table is stored as a dense
//! `dim × dim` table of [`SignedIndex`] entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `sign · v_index`; `sign == 0` encodes a zero product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedIndex {
    pub index: usize,
    pub sign: i8,
}

impl SignedIndex {
    pub const fn new(index: usize, sign: i8) -> Self {
        Self { index, sign }
    }
}

/// Named algebras with the standard bases used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Complex,
    Quaternions,
    Octonions,
    Clifford0n(usize),
}

/// Structure constants and *-involution of an algebra with a distinguished
/// ordered basis whose element 0 is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<SignedIndex>>,
    conj_signs: Vec<i8>,
    associative: bool,
}

impl AlgebraSpec {
    /// Builds an algebra from raw data. Only the shape and the identity row
    /// and column are validated; algebraic laws are checked separately
    /// (see [`laws`]).
    pub fn from_parts(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<SignedIndex>>,
        conj_signs: Vec<i8>,
    ) -> Result<Self> {
        Self::build(name.into(), labels, table, conj_signs, None)
    }

    fn build(
        name: String,
        labels: Vec<String>,
        table: Vec<Vec<SignedIndex>>,
        conj_signs: Vec<i8>,
        known_associative: Option<bool>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("empty basis".into()));
        }
        if table.len() != dim || table.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidParameter(format!(
                "structure table must be {dim}x{dim}"
            )));
        }
        if conj_signs.len() != dim || conj_signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidParameter(
                "conjugation signs must be ±1, one per basis element".into(),
            ));
        }
        for (s, row) in table.iter().enumerate() {
            for entry in row {
                if entry.index >= dim || entry.sign.abs() > 1 {
                    return Err(Error::InvalidParameter(format!(
                        "bad table entry {entry:?} in row {s}"
                    )));
                }
            }
            let unit = SignedIndex::new(s, 1);
            if table[0][s] != unit || table[s][0] != unit {
                return Err(Error::InvalidParameter(
                    "basis element 0 must be the multiplicative identity".into(),
                ));
            }
        }
        if conj_signs[0] != 1 {
            return Err(Error::InvalidParameter("conj(1) must be 1".into()));
        }
        let associative = known_associative.unwrap_or_else(|| table_is_associative(&table));
        Ok(Self {
            name,
            labels,
            table,
            conj_signs,
            associative,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    /// Product of basis vectors `v_s · v_t`.
    pub fn product(&self, s: usize, t: usize) -> SignedIndex {
        self.table[s][t]
    }

    pub fn conj_sign(&self, s: usize) -> i8 {
        self.conj_signs[s]
    }

    pub fn is_associative(&self) -> bool {
        self.associative
    }

    /// Index of the basis vector with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn to_json(&self) -> Value {
        let table: Vec<Vec<[i64; 2]>> = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| [e.index as i64, i64::from(e.sign)])
                    .collect()
            })
            .collect();
        json!({
            "name": self.name,
            "dim": self.dim(),
            "labels": self.labels,
            "table": table,
            "conj": self.conj_signs,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            dim: usize,
            labels: Vec<String>,
            table: Vec<Vec<(usize, i8)>>,
            conj: Vec<i8>,
        }
        let raw: Raw =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.dim != raw.labels.len() {
            return Err(Error::Parse(format!(
                "dim {} does not match {} labels",
                raw.dim,
                raw.labels.len()
            )));
        }
        let table = raw
            .table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(index, sign)| SignedIndex::new(index, sign))
                    .collect()
            })
            .collect();
        Self::from_parts(raw.name, raw.labels, table, raw.conj)
    }
}

fn table_is_associative(table: &[Vec<SignedIndex>]) -> bool {
    let dim = table.len();
    for a in 0..dim {
        for b in 0..dim {
            let ab = table[a][b];
            for c in 0..dim {
                let bc = table[b][c];
                let left = table[ab.index][c];
                let right = table[a][bc.index];
                let ls = ab.sign * left.sign;
                let rs = bc.sign * right.sign;
                if ls != rs || (ls != 0 && left.index != right.index) {
                    return false;
                }
            }
        }
    }
    true
}

/// Sign of `e_a e_b` for blades encoded as bitmasks, with `e_s² = -1`.
pub(crate) fn blade_sign(a: u32, b: u32) -> i8 {
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    let squares = (a & b).count_ones();
    if (swaps + squares) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Blade bitmasks of Cℓ(0,n) ordered by grade, then lexicographically.
pub(crate) fn clifford_blades(n: usize) -> Vec<u32> {
    let mut blades: Vec<u32> = (0..(1u32 << n)).collect();
    blades.sort_by_key(|&m| {
        let gens: Vec<u32> = (0..n as u32).filter(|g| m & (1 << g) != 0).collect();
        (gens.len(), gens)
    });
    blades
}

fn blade_label(mask: u32, n: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    let gens: Vec<String> = (0..n)
        .filter(|g| mask & (1 << g) != 0)
        .map(|g| (g + 1).to_string())
        .collect();
    if n < 10 {
        format!("e{}", gens.concat())
    } else {
        format!("e{}", gens.join("_"))
    }
}

fn clifford(n: usize, name: String, labels: Option<Vec<String>>) -> Result<AlgebraSpec> {
    let blades = clifford_blades(n);
    let mut position = vec![0usize; blades.len()];
    for (idx, &mask) in blades.iter().enumerate() {
        position[mask as usize] = idx;
    }
    let table = blades
        .iter()
        .map(|&a| {
            blades
                .iter()
                .map(|&b| SignedIndex::new(position[(a ^ b) as usize], blade_sign(a, b)))
                .collect()
        })
        .collect();
    // Clifford conjugation: reversion composed with grade involution.
    let conj = blades
        .iter()
        .map(|&m| {
            let g = m.count_ones();
            if (g * (g + 1) / 2) % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let labels = labels.unwrap_or_else(|| blades.iter().map(|&m| blade_label(m, n)).collect());
    AlgebraSpec::build(name, labels, table, conj, Some(true))
}

fn octonions() -> Result<AlgebraSpec> {
    let quat = clifford(2, "H".into(), None)?;
    type Quat = [i64; 4];
    type Oct = (Quat, Quat);
    let qmul = |a: &Quat, b: &Quat| -> Quat {
        let mut out = [0i64; 4];
        for s in 0..4 {
            for t in 0..4 {
                let p = quat.product(s, t);
                out[p.index] += i64::from(p.sign) * a[s] * b[t];
            }
        }
        out
    };
    let qconj = |a: &Quat| -> Quat { [a[0], -a[1], -a[2], -a[3]] };
    let qadd = |a: Quat, b: Quat| -> Quat { std::array::from_fn(|s| a[s] + b[s]) };
    let qsub = |a: Quat, b: Quat| -> Quat { std::array::from_fn(|s| a[s] - b[s]) };
    // (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))
    let omul = |(a, b): &Oct, (c, d): &Oct| -> Oct {
        (
            qsub(qmul(a, c), qmul(&qconj(d), b)),
            qadd(qmul(d, a), qmul(b, &qconj(c))),
        )
    };
    let unit = |s: usize| -> Quat { std::array::from_fn(|t| i64::from(t == s)) };
    let zero = [0i64; 4];
    let l: Oct = (zero, unit(0));
    let mut basis: Vec<Oct> = (0..4).map(|s| (unit(s), zero)).collect();
    basis.push(l);
    for s in 1..4 {
        basis.push(omul(&l, &(unit(s), zero)));
    }
    let flat =
        |o: &Oct| -> [i64; 8] { std::array::from_fn(|s| if s < 4 { o.0[s] } else { o.1[s - 4] }) };
    let flats: Vec<[i64; 8]> = basis.iter().map(flat).collect();
    let locate = |v: [i64; 8]| -> SignedIndex {
        for (idx, b) in flats.iter().enumerate() {
            if v == *b {
                return SignedIndex::new(idx, 1);
            }
            if v.iter().zip(b).all(|(x, y)| *x == -*y) {
                return SignedIndex::new(idx, -1);
            }
        }
        unreachable!("Cayley-Dickson product of basis vectors is a signed basis vector")
    };
    let table = basis
        .iter()
        .map(|x| basis.iter().map(|y| locate(flat(&omul(x, y)))).collect())
        .collect();
    let labels = ["1", "i", "j", "k", "l", "li", "lj", "lk"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let conj = (0..8).map(|s| if s == 0 { 1 } else { -1 }).collect();
    AlgebraSpec::from_parts("O", labels, table, conj)
}

/// Builds a preset algebra with its standard basis: `(1,i)` for ℂ,
/// `(1,i,j,k)` for ℍ, `(1,i,j,k,l,li,lj,lk)` for 𝕆 (Cayley–Dickson doubling
/// of ℍ) and `(e_K)` ordered by grade for Cℓ(0,n).
pub fn make_algebra(preset: Preset) -> Result<Arc<AlgebraSpec>> {
    let spec = match preset {
        Preset::Complex => clifford(1, "C".into(), Some(vec!["1".into(), "i".into()]))?,
        Preset::Quaternions => clifford(
            2,
            "H".into(),
            Some(["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect()),
        )?,
        Preset::Octonions => octonions()?,
        Preset::Clifford0n(n) => {
            if n < 1 {
                return Err(Error::InvalidParameter("Cl(0,n) needs n >= 1".into()));
            }
            if n > 16 {
                return Err(Error::InvalidParameter(format!("Cl(0,{n}) is too large")));
            }
            clifford(n, format!("Cl0{n}"), None)?
        }
    };
    Ok(Arc::new(spec))
}

/// Resolves a preset by name: `C`, `H`, `O`, or `Cl0n` (also `Cl(0,n)`).
pub fn algebra_by_name(name: &str) -> Result<Arc<AlgebraSpec>> {
    let preset = match name {
        "C" | "Complex" => Preset::Complex,
        "H" | "Quaternions" => Preset::Quaternions,
        "O" | "Octonions" => Preset::Octonions,
        other => {
            let digits = other
                .strip_prefix("Cl(0,")
                .and_then(|s| s.strip_suffix(')'))
                .or_else(|| other.strip_prefix("Cl0"));
            match digits.and_then(|d| d.parse::<usize>().ok()) {
                Some(n) => Preset::Clifford0n(n),
                None => return Err(Error::UnknownAlgebra(other.to_string())),
            }
        }
    };
    make_algebra(preset)
}

/// An element of an algebra, as coefficients over its distinguished basis.
#[derive(Clone)]
pub struct Element<S> {
    alg: Arc<AlgebraSpec>,
    coeffs: Vec<S>,
}

fn same_algebra(a: &Arc<AlgebraSpec>, b: &Arc<AlgebraSpec>) -> bool {
    Arc::ptr_eq(a, b) || (a.name == b.name && a.dim() == b.dim())
}

impl<S: Scalar> Element<S> {
    pub fn new(alg: &Arc<AlgebraSpec>, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != alg.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for an algebra of dimension {}",
                coeffs.len(),
                alg.dim()
            )));
        }
        Ok(Self {
            alg: Arc::clone(alg),
            coeffs,
        })
    }

    pub fn zero(alg: &Arc<AlgebraSpec>) -> Self {
        Self {
            alg: Arc::clone(alg),
            coeffs: vec![S::zero(); alg.dim()],
        }
    }

    pub fn one(alg: &Arc<AlgebraSpec>) -> Self {
        Self::real(alg, S::one())
    }

    pub fn real(alg: &Arc<AlgebraSpec>, value: S) -> Self {
        let mut out = Self::zero(alg);
        out.coeffs[0] = value;
        out
    }

    /// The basis vector `v_s`.
    pub fn basis(alg: &Arc<AlgebraSpec>, s: usize) -> Self {
        let mut out = Self::zero(alg);
        out.coeffs[s] = S::one();
        out
    }

    /// Basis vector looked up by label, e.g. `"j"` or `"e12"`.
    pub fn labelled(alg: &Arc<AlgebraSpec>, label: &str) -> Result<Self> {
        alg.index_of(label)
            .map(|s| Self::basis(alg, s))
            .ok_or_else(|| Error::InvalidParameter(format!("no basis vector {label:?}")))
    }

    pub fn from_ints(alg: &Arc<AlgebraSpec>, coeffs: &[i64]) -> Result<Self> {
        Self::new(alg, coeffs.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> &S {
        &self.coeffs[s]
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.alg.name.clone(),
                right: other.alg.name.clone(),
            })
        }
    }

    /// Magnitude used as the scale of float zero tests; exact fields skip it.
    fn scale(&self) -> S {
        if S::EXACT {
            return S::one();
        }
        let sq = self.norm_sq();
        sq.sqrt_exact().unwrap_or(sq)
    }

    pub fn is_zero(&self) -> bool {
        let scale = self.scale();
        self.coeffs.iter().all(|c| c.is_negligible(&scale))
    }

    /// Componentwise reality test: every non-identity coefficient vanishes.
    pub fn is_real(&self) -> bool {
        let scale = self.scale();
        self.coeffs[1..].iter().all(|c| c.is_negligible(&scale))
    }

    pub fn real_part(&self) -> &S {
        &self.coeffs[0]
    }

    /// Approximate equality for float backends, exact equality otherwise.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.sub_ref(other).is_zero_relative_to(self, other)
    }

    fn is_zero_relative_to(&self, a: &Self, b: &Self) -> bool {
        if S::EXACT {
            return self.coeffs.iter().all(|c| c.is_zero());
        }
        let scale = a.scale() + b.scale() + S::one();
        self.coeffs.iter().all(|c| c.is_negligible(&scale))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_ref(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.sub_ref(other))
    }

    fn add_ref(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Self {
            alg: Arc::clone(&self.alg),
            coeffs,
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Self {
            alg: Arc::clone(&self.alg),
            coeffs,
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        assert!(self.same_algebra(other), "algebra mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.clone() + b.clone();
        }
    }

    /// `self += factor · other` with a real factor.
    pub fn add_scaled(&mut self, factor: &S, other: &Self) {
        assert!(self.same_algebra(other), "algebra mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a = a.clone() + factor.clone() * b.clone();
            }
        }
    }

    pub fn scale_by(&self, factor: &S) -> Self {
        Self {
            alg: Arc::clone(&self.alg),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    /// Bilinear product through the structure constants.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_ref(other))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let dim = self.alg.dim();
        let mut out = vec![S::zero(); dim];
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let row = &self.alg.table[s];
            for (t, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = row[t];
                match p.sign {
                    1 => out[p.index] += a.clone() * b.clone(),
                    -1 => out[p.index] -= a.clone() * b.clone(),
                    _ => {}
                }
            }
        }
        Self {
            alg: Arc::clone(&self.alg),
            coeffs: out,
        }
    }

    /// The *-involution `x ↦ x^c`.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| {
                if self.alg.conj_signs[s] < 0 {
                    -c.clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        Self {
            alg: Arc::clone(&self.alg),
            coeffs,
        }
    }

    /// `t(x) = x + x^c`.
    pub fn trace(&self) -> Self {
        self.add_ref(&self.conj())
    }

    /// `n(x) = x x^c`.
    pub fn norm_form(&self) -> Self {
        self.mul_ref(&self.conj())
    }

    /// Sum of squared coefficients (the standard Euclidean norm squared).
    pub fn norm_sq(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    /// Standard Euclidean inner product of coefficient vectors.
    pub fn dot(&self, other: &Self) -> S {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Membership in the quadratic cone `Q_A`.
    pub fn in_quadratic_cone(&self) -> bool {
        if self.is_real() {
            return true;
        }
        let t = self.trace();
        let n = self.norm_form();
        if !t.is_real() || !n.is_real() {
            return false;
        }
        let t0 = t.coeffs[0].clone();
        let gap = S::from_int(4) * n.coeffs[0].clone() - t0.clone() * t0.clone();
        let scale = n.coeffs[0].abs() + t0.clone() * t0;
        gap > S::zero() && !gap.is_negligible(&scale)
    }

    /// Membership in `𝕊_A = {t(x) = 0, n(x) = 1}`.
    pub fn in_sphere(&self) -> bool {
        let t = self.trace();
        if !t.is_zero_relative_to(self, self) {
            return false;
        }
        let n = self.norm_form();
        let one = Self::one(&self.alg);
        n.sub_ref(&one).is_zero_relative_to(&n, &one)
    }

    /// Inverse of a nonzero cone element: `n(x)^{-1} x^c`.
    pub fn cone_inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !self.in_quadratic_cone() {
            return Err(Error::OutsideCone);
        }
        let n = self.norm_form();
        let inv = S::one() / n.coeffs[0].clone();
        Ok(self.conj().scale_by(&inv))
    }

    /// Integer power with strict left-to-right association.
    pub fn powi(&self, exp: u32) -> Self {
        let mut out = Self::one(&self.alg);
        for _ in 0..exp {
            out = out.mul_ref(self);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.alg.name,
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    /// Parses `{"algebra": name, "coeffs": [...]}` resolving the algebra by
    /// preset name.
    pub fn from_json(value: &Value) -> Result<Self> {
        let name = value
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("element needs an \"algebra\" name".into()))?;
        let alg = algebra_by_name(name)?;
        Self::from_json_in(&alg, value)
    }

    /// Parses an element, checking it belongs to `alg`. Accepts either the
    /// object form or a bare coefficient array.
    pub fn from_json_in(alg: &Arc<AlgebraSpec>, value: &Value) -> Result<Self> {
        let coeffs = match value {
            Value::Array(items) => items,
            Value::Object(map) => {
                if let Some(name) = map.get("algebra").and_then(Value::as_str) {
                    if name != alg.name() {
                        return Err(Error::AlgebraMismatch {
                            left: alg.name().to_string(),
                            right: name.to_string(),
                        });
                    }
                }
                map.get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("element needs a \"coeffs\" array".into()))?
            }
            other => return Err(Error::Parse(format!("not an element: {other}"))),
        };
        let coeffs = coeffs
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(alg, coeffs)
    }

    /// Re-expresses the element over another scalar field.
    pub fn convert<T: Scalar>(&self) -> Element<T> {
        Element {
            alg: Arc::clone(&self.alg),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| T::from_f64(c.to_f64()))
                .collect(),
        }
    }
}

impl<S: Scalar> PartialEq for Element<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.alg.name, self)
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let label = self.alg.label(s);
            if s == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        /// Panics when the operands live in different algebras; use the
        /// `try_*` methods for a checked variant.
        impl<S: Scalar> $trait<&Element<S>> for &Element<S> {
            type Output = Element<S>;
            fn $method(self, rhs: &Element<S>) -> Element<S> {
                assert!(self.same_algebra(rhs), "algebra mismatch");
                self.$inner(rhs)
            }
        }
        impl<S: Scalar> $trait<Element<S>> for Element<S> {
            type Output = Element<S>;
            fn $method(self, rhs: Element<S>) -> Element<S> {
                (&self).$method(&rhs)
            }
        }
        impl<S: Scalar> $trait<&Element<S>> for Element<S> {
            type Output = Element<S>;
            fn $method(self, rhs: &Element<S>) -> Element<S> {
                (&self).$method(rhs)
            }
        }
        impl<S: Scalar> $trait<Element<S>> for &Element<S> {
            type Output = Element<S>;
            fn $method(self, rhs: Element<S>) -> Element<S> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        Element {
            alg: Arc::clone(&self.alg),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        -&self
    }
}

/// Law checks used by property tests, the acceptance suite and `selftest`.
pub mod laws {
    use super::Element;
    use crate::scalar::Scalar;

    /// `conj(xy) = conj(y) conj(x)`.
    pub fn antiautomorphism<S: Scalar>(x: &Element<S>, y: &Element<S>) -> bool {
        (x * y).conj().approx_eq(&(&y.conj() * &x.conj()))
    }

    /// `conj(conj(x)) = x`.
    pub fn involutive<S: Scalar>(x: &Element<S>) -> bool {
        x.conj().conj().approx_eq(x)
    }

    /// `x(xy) = x²y` and `(xy)y = xy²`.
    pub fn alternative<S: Scalar>(x: &Element<S>, y: &Element<S>) -> bool {
        let xx = x * x;
        let yy = y * y;
        let xy = x * y;
        (x * &xy).approx_eq(&(&xx * y)) && (&xy * y).approx_eq(&(x * &yy))
    }

    /// `(xy)z = x(yz)`.
    pub fn associative<S: Scalar>(x: &Element<S>, y: &Element<S>, z: &Element<S>) -> bool {
        (&(x * y) * z).approx_eq(&(x * &(y * z)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    fn quat() -> Arc<AlgebraSpec> {
        make_algebra(Preset::Quaternions).unwrap()
    }

    fn el(alg: &Arc<AlgebraSpec>, c: &[i64]) -> Element<Rational> {
        Element::from_ints(alg, c).unwrap()
    }

    #[test]
    fn quaternion_units() {
        let h = quat();
        let i = Element::<Rational>::labelled(&h, "i").unwrap();
        let j = Element::<Rational>::labelled(&h, "j").unwrap();
        let k = Element::<Rational>::labelled(&h, "k").unwrap();
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&i * &i, -Element::one(&h));
    }

    #[test]
    fn identity_is_neutral() {
        for preset in [
            Preset::Complex,
            Preset::Quaternions,
            Preset::Octonions,
            Preset::Clifford0n(3),
        ] {
            let alg = make_algebra(preset).unwrap();
            let one = Element::<Rational>::one(&alg);
            for s in 0..alg.dim() {
                let v = Element::basis(&alg, s);
                assert_eq!(&one * &v, v);
                assert_eq!(&v * &one, v);
            }
        }
    }

    #[test]
    fn clifford_relations() {
        let cl2 = make_algebra(Preset::Clifford0n(2)).unwrap();
        let e1 = Element::<Rational>::labelled(&cl2, "e1").unwrap();
        assert_eq!(&e1 * &e1, -Element::one(&cl2));

        let cl3 = make_algebra(Preset::Clifford0n(3)).unwrap();
        let e1 = Element::<Rational>::labelled(&cl3, "e1").unwrap();
        let e23 = Element::<Rational>::labelled(&cl3, "e23").unwrap();
        let e123 = Element::<Rational>::labelled(&cl3, "e123").unwrap();
        // e2 e3 e1: moving e1 past two generators gives +e1 e2 e3
        assert_eq!(&e23 * &e1, e123);
        assert_eq!(e23.conj(), -e23.clone());
        assert_eq!(e123.conj(), e123);
        assert_eq!(e123.trace(), e123.scale_by(&rat(2, 1)));
    }

    #[test]
    fn clifford_product_matches_generator_words() {
        // Independent oracle: multiply words of generators, sorting with
        // sign flips and cancelling squares.
        fn word_product(a: &[u32], b: &[u32]) -> (Vec<u32>, i8) {
            let mut word: Vec<u32> = a.iter().chain(b).copied().collect();
            let mut sign = 1i8;
            let mut changed = true;
            while changed {
                changed = false;
                let mut k = 0;
                while k + 1 < word.len() {
                    if word[k] > word[k + 1] {
                        word.swap(k, k + 1);
                        sign = -sign;
                        changed = true;
                    } else if word[k] == word[k + 1] {
                        word.drain(k..k + 2);
                        sign = -sign;
                        changed = true;
                        continue;
                    }
                    k += 1;
                }
            }
            (word, sign)
        }
        let n = 4;
        let alg = make_algebra(Preset::Clifford0n(n)).unwrap();
        let blades = clifford_blades(n);
        let gens = |m: u32| -> Vec<u32> { (0..n as u32).filter(|g| m & (1 << g) != 0).collect() };
        for (s, &a) in blades.iter().enumerate() {
            for (t, &b) in blades.iter().enumerate() {
                let (word, sign) = word_product(&gens(a), &gens(b));
                let mask = word.iter().fold(0u32, |m, g| m | (1 << g));
                let p = alg.product(s, t);
                assert_eq!(blades[p.index], mask);
                assert_eq!(p.sign, sign, "e{a:b} * e{b:b}");
            }
        }
    }

    #[test]
    fn octonions_are_alternative_not_associative() {
        let o = make_algebra(Preset::Octonions).unwrap();
        assert!(!o.is_associative());
        assert_eq!(
            o.labels(),
            ["1", "i", "j", "k", "l", "li", "lj", "lk"].map(String::from)
        );
        for s in 0..8 {
            for t in 0..8 {
                let x = Element::<Rational>::basis(&o, s);
                let y = Element::<Rational>::basis(&o, t);
                assert!(laws::alternative(&x, &y));
                assert!(laws::antiautomorphism(&x, &y));
            }
        }
    }

    #[test]
    fn trace_and_norm_on_sphere_points() {
        let h = quat();
        // J = (3j + 4k)/5, x = 2 + 3J
        let j_unit = Element::new(&h, vec![rat(0, 1), rat(0, 1), rat(3, 5), rat(4, 5)]).unwrap();
        assert!(j_unit.in_sphere());
        let x = Element::real(&h, rat(2, 1)) + j_unit.scale_by(&rat(3, 1));
        assert_eq!(x.trace(), Element::real(&h, rat(4, 1)));
        assert_eq!(x.norm_form(), Element::real(&h, rat(13, 1)));
        assert_eq!(
            x.conj(),
            Element::real(&h, rat(2, 1)) - j_unit.scale_by(&rat(3, 1))
        );
        assert!(x.conj().in_quadratic_cone());
        assert!(!Element::<Rational>::one(&h).in_sphere());
    }

    #[test]
    fn cone_inverse_cases() {
        let h = quat();
        let i = el(&h, &[0, 1, 0, 0]);
        assert_eq!(i.cone_inverse().unwrap(), -i.clone());
        let x = el(&h, &[1, 1, 0, 0]);
        let inv = x.cone_inverse().unwrap();
        assert_eq!(
            inv,
            Element::new(&h, vec![rat(1, 2), rat(-1, 2), rat(0, 1), rat(0, 1)]).unwrap()
        );
        assert_eq!(&inv * &x, Element::one(&h));
        assert_eq!(&x * &inv, Element::one(&h));
        assert_eq!(
            Element::<Rational>::zero(&h).cone_inverse(),
            Err(Error::ZeroInput)
        );

        let cl3 = make_algebra(Preset::Clifford0n(3)).unwrap();
        let y = Element::<Rational>::labelled(&cl3, "e1").unwrap()
            + Element::labelled(&cl3, "e23").unwrap();
        assert_eq!(
            y.norm_form(),
            Element::real(&cl3, rat(2, 1))
                - Element::labelled(&cl3, "e123")
                    .unwrap()
                    .scale_by(&rat(2, 1))
        );
        assert!(!y.in_quadratic_cone());
        assert_eq!(y.cone_inverse(), Err(Error::OutsideCone));
        assert!(!Element::<Rational>::labelled(&cl3, "e123")
            .unwrap()
            .in_sphere());
    }

    #[test]
    fn mismatched_algebras_error() {
        let h = quat();
        let c = make_algebra(Preset::Complex).unwrap();
        let a = Element::<Rational>::one(&h);
        let b = Element::<Rational>::one(&c);
        assert!(matches!(a.try_mul(&b), Err(Error::AlgebraMismatch { .. })));
    }

    #[test]
    fn zero_clifford_rejected() {
        assert!(matches!(
            make_algebra(Preset::Clifford0n(0)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        for preset in [
            Preset::Quaternions,
            Preset::Octonions,
            Preset::Clifford0n(3),
        ] {
            let alg = make_algebra(preset).unwrap();
            let back = AlgebraSpec::from_json(&alg.to_json()).unwrap();
            assert_eq!(*alg, back);
        }
    }

    #[test]
    fn element_json_is_bit_exact() {
        let h = quat();
        let x = Element::new(&h, vec![rat(1, 3), rat(-7, 2), rat(0, 1), rat(5, 1)]).unwrap();
        let json = x.to_json();
        assert_eq!(json["coeffs"][1], "-7/2");
        assert_eq!(Element::<Rational>::from_json(&json).unwrap(), x);
    }

    #[test]
    fn display_is_readable() {
        let h = quat();
        let x = Element::new(&h, vec![rat(1, 1), rat(-1, 1), rat(0, 1), rat(3, 2)]).unwrap();
        assert_eq!(x.to_string(), "1 - i + 3/2k");
    }

    #[test]
    fn corrupted_table_breaks_laws() {
        let h = quat();
        let mut json = h.to_json();
        // flip the sign of i*j
        json["table"][1][2] = serde_json::json!([3, -1]);
        json["name"] = "H-corrupt".into();
        let bad = Arc::new(AlgebraSpec::from_json(&json).unwrap());
        let i = Element::<Rational>::basis(&bad, 1);
        let j = Element::<Rational>::basis(&bad, 2);
        let x = &i + &j;
        assert!(!laws::alternative(&x, &j) || !laws::antiautomorphism(&i, &j));
    }
}
