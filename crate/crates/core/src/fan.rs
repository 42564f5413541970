//! T-fans over a hypercomplex basis, slice decomposition of points, symmetric
//! orbits and sampling of the T-torus.
//!
//! Coordinates are always taken in the fan's basis `(v_0, …, v_n)`. Block `h`
//! (1-based) covers indices `t_{h-1}+1 ..= t_h`; the mirror covers `0 ..= t_0`.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{algebra_by_name, Element};
use crate::error::{Error, Result};
use crate::hypercomplex::{make_paravectors, make_vh, HypercomplexBasis};
use crate::sampling::{self, SampleRng};
use crate::scalar::Scalar;

/// The quaternionic step lists, from the Fueter fan `(3)` to the fully split `(0,1,2,3)`.
pub const QUATERNION_FANS: [&[usize]; 8] = [
    &[3],
    &[2, 3],
    &[1, 3],
    &[0, 3],
    &[1, 2, 3],
    &[0, 2, 3],
    &[0, 1, 3],
    &[0, 1, 2, 3],
];

/// A step list `0 ≤ t_0 < … < t_τ = n` over a hypercomplex basis.
#[derive(Debug, Clone)]
pub struct TFan<S: Scalar> {
    basis: Arc<HypercomplexBasis<S>>,
    steps: Vec<usize>,
}

impl<S: Scalar> PartialEq for TFan<S> {
    fn eq(&self, other: &Self) -> bool {
        self.steps == other.steps && self.basis == other.basis
    }
}

pub fn make_fan<S: Scalar>(basis: HypercomplexBasis<S>, steps: &[usize]) -> Result<TFan<S>> {
    TFan::new(Arc::new(basis), steps)
}

impl<S: Scalar> TFan<S> {
    pub fn new(basis: Arc<HypercomplexBasis<S>>, steps: &[usize]) -> Result<Self> {
        let n = basis.m();
        let Some(&last) = steps.last() else {
            return Err(Error::InvalidFan("empty step list".into()));
        };
        if steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFan(format!(
                "steps {steps:?} are not strictly increasing"
            )));
        }
        if last != n {
            return Err(Error::InvalidFan(format!(
                "last step {last} must equal n = {n}"
            )));
        }
        Ok(Self {
            basis,
            steps: steps.to_vec(),
        })
    }

    /// Parses `ALG[:SUBSPACE]:(t_0,…,t_τ)`.
    ///
    /// `ALG` is `C`, `H`, `O`, `H-MT` (basis `(1,-k,j,i)`) or `Cl0n`; Clifford
    /// algebras default to paravectors, or take `paravectors` / `V<h>` as the
    /// subspace.
    pub fn parse(name: &str) -> Result<Self> {
        let (head, steps) = name
            .rsplit_once(':')
            .ok_or_else(|| Error::InvalidFan(format!("{name:?}: expected ALG:(t0,...)")))?;
        let steps = steps
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidFan(format!("{name:?}: steps need parentheses")))?
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidFan(format!("{name:?}: {e}")))?;
        let (alg_name, subspace) = match head.split_once(':') {
            Some((a, s)) => (a, Some(s)),
            None => (head, None),
        };
        let basis = match (alg_name, subspace) {
            ("H-MT", None) => {
                let h = algebra_by_name("H")?;
                HypercomplexBasis::from_labels(&h, "H-MT", &["1", "-k", "j", "i"])?
            }
            (a, sub) if a.starts_with("Cl") => {
                let alg = algebra_by_name(a)?;
                let n = alg.dim().trailing_zeros() as usize;
                match sub {
                    None | Some("paravectors") => make_paravectors(n)?,
                    Some(v) => {
                        let h = v
                            .strip_prefix('V')
                            .and_then(|h| h.parse::<usize>().ok())
                            .ok_or_else(|| Error::InvalidFan(format!("unknown subspace {v:?}")))?;
                        make_vh(n, h)?
                    }
                }
            }
            (a, None) => HypercomplexBasis::standard(&algebra_by_name(a)?)?,
            (a, Some(s)) => {
                return Err(Error::InvalidFan(format!("unknown subspace {s:?} of {a}")));
            }
        };
        Self::new(Arc::new(basis), &steps)
    }

    pub fn basis(&self) -> &HypercomplexBasis<S> {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<HypercomplexBasis<S>> {
        &self.basis
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn name(&self) -> String {
        let steps: Vec<String> = self.steps.iter().map(|t| t.to_string()).collect();
        format!("{}:({})", self.basis.name(), steps.join(","))
    }

    /// `n`, so the basis has `n + 1` vectors.
    pub fn n(&self) -> usize {
        self.basis.m()
    }

    pub fn tau(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn t0(&self) -> usize {
        self.steps[0]
    }

    pub fn mirror_dim(&self) -> usize {
        self.t0() + 1
    }

    pub fn torus_dim(&self) -> usize {
        self.n() - self.t0() - self.tau()
    }

    /// Number of real variables of slice maps: `t_0 + τ + 1`.
    pub fn slice_vars(&self) -> usize {
        self.t0() + self.tau() + 1
    }

    pub fn mirror_range(&self) -> RangeInclusive<usize> {
        0..=self.t0()
    }

    /// Basis indices of block `h ∈ 1..=τ`.
    pub fn block(&self, h: usize) -> RangeInclusive<usize> {
        assert!((1..=self.tau()).contains(&h), "block {h} out of range");
        self.steps[h - 1] + 1..=self.steps[h]
    }

    pub fn block_size(&self, h: usize) -> usize {
        self.steps[h] - self.steps[h - 1]
    }

    /// Validates and wraps a list of units `J_1, …, J_τ`.
    pub fn torus_point(&self, units: Vec<Element<S>>) -> Result<TorusPoint<S>> {
        if units.len() != self.tau() {
            return Err(Error::InvalidTorusPoint(format!(
                "{} units for tau = {}",
                units.len(),
                self.tau()
            )));
        }
        let mut coords = Vec::with_capacity(units.len());
        for (h, unit) in units.iter().enumerate() {
            let h = h + 1;
            let all = self
                .basis
                .coordinates(unit)
                .map_err(|_| Error::InvalidTorusPoint(format!("J_{h} outside the basis span")))?;
            let block = self.block(h);
            let scale = S::one();
            if all
                .iter()
                .enumerate()
                .any(|(l, c)| !block.contains(&l) && !c.is_negligible(&scale))
            {
                return Err(Error::InvalidTorusPoint(format!(
                    "J_{h} has support outside block {block:?}"
                )));
            }
            if !unit.in_sphere() {
                return Err(Error::InvalidTorusPoint(format!(
                    "J_{h} = {unit} is not a unit"
                )));
            }
            coords.push(all[block].to_vec());
        }
        Ok(TorusPoint { units, coords })
    }

    /// Torus point from block coordinates (one vector per block).
    pub fn torus_point_from_coords(&self, coords: Vec<Vec<S>>) -> Result<TorusPoint<S>> {
        if coords.len() != self.tau() {
            return Err(Error::InvalidTorusPoint(format!(
                "{} blocks for tau = {}",
                coords.len(),
                self.tau()
            )));
        }
        let mut units = Vec::with_capacity(coords.len());
        for (h, c) in coords.iter().enumerate() {
            let block = self.block(h + 1);
            if c.len() != block.clone().count() {
                return Err(Error::InvalidTorusPoint(format!(
                    "block {} needs {} coordinates",
                    h + 1,
                    block.count()
                )));
            }
            let mut unit = Element::zero(self.basis.algebra());
            for (value, l) in c.iter().zip(block) {
                unit.add_scaled(value, self.basis.vector(l));
            }
            units.push(unit);
        }
        self.torus_point(units)
    }

    /// Canonical torus point: the first vector of every block.
    pub fn canonical_torus_point(&self) -> TorusPoint<S> {
        let coords = (1..=self.tau())
            .map(|h| {
                let mut c = vec![S::zero(); self.block_size(h)];
                c[0] = S::one();
                c
            })
            .collect();
        self.torus_point_from_coords(coords)
            .expect("basis vectors are units")
    }

    /// Writes `x = x^0 + Σ β_h J_h` with `β_h ≥ 0`; degenerate blocks get
    /// `β_h = 0` and the first block vector as `J_h`.
    pub fn decompose(&self, x: &Element<S>) -> Result<SlicePoint<S>> {
        let coords = self.basis.coordinates(x)?;
        let scale = if S::EXACT {
            S::one()
        } else {
            coords.iter().fold(S::zero(), |acc, c| acc + c.abs())
        };
        let mirror = coords[self.mirror_range()].to_vec();
        let mut betas = Vec::with_capacity(self.tau());
        let mut units = Vec::with_capacity(self.tau());
        for h in 1..=self.tau() {
            let block = &coords[self.block(h)];
            let sq = block
                .iter()
                .fold(S::zero(), |acc, c| acc + c.clone() * c.clone());
            let degenerate = if S::EXACT {
                sq.is_zero()
            } else {
                block.iter().all(|c| c.is_negligible(&scale))
            };
            if degenerate {
                betas.push(S::zero());
                let mut unit = vec![S::zero(); block.len()];
                unit[0] = S::one();
                units.push(unit);
            } else {
                let beta = sq.sqrt_exact().ok_or(Error::IrrationalNorm { block: h })?;
                units.push(block.iter().map(|c| c.clone() / beta.clone()).collect());
                betas.push(beta);
            }
        }
        Ok(SlicePoint {
            mirror,
            betas,
            torus: self.torus_point_from_coords(units)?,
        })
    }

    /// `x^0 + Σ β_h J_h`.
    pub fn recompose(&self, point: &SlicePoint<S>) -> Result<Element<S>> {
        self.slice_point(&point.mirror, &point.betas, &point.torus)
    }

    /// Point of the slice `ℝ_J` with mirror coordinates and betas.
    pub fn slice_point(
        &self,
        mirror: &[S],
        betas: &[S],
        torus: &TorusPoint<S>,
    ) -> Result<Element<S>> {
        if mirror.len() != self.mirror_dim()
            || betas.len() != self.tau()
            || torus.units.len() != self.tau()
        {
            return Err(Error::VarCountMismatch {
                expected: self.slice_vars(),
                found: mirror.len() + betas.len(),
            });
        }
        let mut out = Element::zero(self.basis.algebra());
        for (c, l) in mirror.iter().zip(self.mirror_range()) {
            out.add_scaled(c, self.basis.vector(l));
        }
        for (beta, unit) in betas.iter().zip(&torus.units) {
            out.add_scaled(beta, unit);
        }
        Ok(out)
    }

    /// The T-symmetric orbit `𝕊_x = {x^0 + Σ β_h J_h : J ∈ 𝕋}`.
    pub fn symmetric_orbit(&self, x: &Element<S>) -> Result<Orbit<S>> {
        let coords = self.basis.coordinates(x)?;
        let beta_sq = (1..=self.tau())
            .map(|h| {
                coords[self.block(h)]
                    .iter()
                    .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
            })
            .collect();
        Ok(Orbit {
            mirror: coords[self.mirror_range()].to_vec(),
            beta_sq,
        })
    }

    /// Whether `x` lies in the slice `ℝ^{t_0+τ+1}_J`: every block part of `x`
    /// is a real multiple of `J_h`.
    pub fn slice_membership(&self, torus: &TorusPoint<S>, x: &Element<S>) -> bool {
        let Ok(coords) = self.basis.coordinates(x) else {
            return false;
        };
        let scale = if S::EXACT {
            S::one()
        } else {
            coords.iter().fold(S::one(), |acc, c| acc + c.abs())
        };
        (1..=self.tau()).all(|h| {
            let y = &coords[self.block(h)];
            let j = &torus.coords[h - 1];
            let along = y
                .iter()
                .zip(j)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
            y.iter()
                .zip(j)
                .all(|(a, b)| (a.clone() - along.clone() * b.clone()).is_negligible(&scale))
        })
    }

    /// Finite samples of the torus `𝕋`.
    pub fn torus_sample(&self, sampler: &Sampler) -> Result<Vec<TorusPoint<S>>> {
        let per_block: Vec<Vec<Vec<S>>> = match *sampler {
            Sampler::RationalGrid { density } => {
                if density == 0 {
                    return Err(Error::InvalidParameter(
                        "grid density must be positive".into(),
                    ));
                }
                (1..=self.tau())
                    .map(|h| sphere_grid(self.block_size(h), density))
                    .collect()
            }
            Sampler::Random { seed, count } => {
                let mut rng = sampling::rng(seed);
                let points = (0..count)
                    .map(|_| {
                        let coords = (1..=self.tau())
                            .map(|h| random_sphere_point(&mut rng, self.block_size(h)))
                            .collect();
                        self.torus_point_from_coords(coords)
                    })
                    .collect();
                return points;
            }
        };
        cartesian(&per_block)
            .into_iter()
            .map(|coords| self.torus_point_from_coords(coords))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name(),
            "basis": self.basis.to_json(),
            "steps": self.steps,
            "tau": self.tau(),
            "mirror_dim": self.mirror_dim(),
            "torus_dim": self.torus_dim(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let basis = HypercomplexBasis::from_json(
            value
                .get("basis")
                .ok_or_else(|| Error::Parse("fan needs a \"basis\"".into()))?,
        )?;
        let steps: Vec<usize> = serde_json::from_value(
            value
                .get("steps")
                .cloned()
                .ok_or_else(|| Error::Parse("fan needs \"steps\"".into()))?,
        )
        .map_err(|e| Error::Parse(e.to_string()))?;
        make_fan(basis, &steps)
    }
}

/// A point `J = (J_1, …, J_τ)` of the T-torus, stored both as elements and as
/// block coordinates in the fan's basis.
#[derive(Debug, Clone)]
pub struct TorusPoint<S: Scalar> {
    units: Vec<Element<S>>,
    coords: Vec<Vec<S>>,
}

impl<S: Scalar> PartialEq for TorusPoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.units == other.units
    }
}

impl<S: Scalar> TorusPoint<S> {
    pub fn units(&self) -> &[Element<S>] {
        &self.units
    }

    pub fn unit(&self, h: usize) -> &Element<S> {
        &self.units[h - 1]
    }

    /// Coordinates of `J_h` over block `h`.
    pub fn block_coords(&self, h: usize) -> &[S] {
        &self.coords[h - 1]
    }

    /// The torus point with `J_h` replaced by `-J_h`.
    pub fn flipped(&self, h: usize) -> Self {
        let mut out = self.clone();
        out.units[h - 1] = -out.units[h - 1].clone();
        out.coords[h - 1] = out.coords[h - 1].iter().map(|c| -c.clone()).collect();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "units": self.units.iter().map(Element::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(fan: &TFan<S>, value: &Value) -> Result<Self> {
        let alg = fan.basis().algebra();
        let units = value
            .get("units")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("torus point needs \"units\"".into()))?
            .iter()
            .map(|v| Element::from_json_in(alg, v))
            .collect::<Result<Vec<_>>>()?;
        fan.torus_point(units)
    }
}

/// `x = x^0 + Σ β_h J_h`, with mirror coordinates `x^0` in the fan's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicePoint<S: Scalar> {
    pub mirror: Vec<S>,
    pub betas: Vec<S>,
    pub torus: TorusPoint<S>,
}

impl<S: Scalar> SlicePoint<S> {
    /// Slice-map variables `(x_0, …, x_{t_0}, β_1, …, β_τ)`.
    pub fn slice_coords(&self) -> Vec<S> {
        self.mirror.iter().chain(&self.betas).cloned().collect()
    }
}

/// The orbit of a point as mirror coordinates plus squared block norms, which
/// keeps membership tests exact without square roots.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<S> {
    pub mirror: Vec<S>,
    pub beta_sq: Vec<S>,
}

impl<S: Scalar> Orbit<S> {
    pub fn contains(&self, fan: &TFan<S>, y: &Element<S>) -> bool {
        match fan.symmetric_orbit(y) {
            Ok(other) => {
                let scale = self
                    .mirror
                    .iter()
                    .chain(&self.beta_sq)
                    .fold(S::one(), |acc, c| acc + c.abs());
                self.mirror
                    .iter()
                    .zip(&other.mirror)
                    .chain(self.beta_sq.iter().zip(&other.beta_sq))
                    .all(|(a, b)| (a.clone() - b.clone()).is_negligible(&scale))
            }
            Err(_) => false,
        }
    }

    /// Whether the orbit is a single mirror point.
    pub fn is_singleton(&self) -> bool {
        self.beta_sq.iter().all(|b| b.is_zero())
    }
}

/// How to pick finitely many points of the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Exact points from stereographic projection of rational parameters;
    /// `density` parameters per sphere coordinate.
    RationalGrid { density: usize },
    /// Seeded random points. Exact fields get random rational stereographic
    /// parameters (so points stay exactly on the sphere); floats get
    /// normalized uniform samples.
    Random { seed: u64, count: usize },
}

/// `0, 1/2, -1/2, 2, -2, 1/3, -1/3, 3, -3, 2/3, -2/3, 3/2, -3/2, …`
pub fn grid_parameters(count: usize) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    let mut n = 2i64;
    while out.len() < count {
        for p in 1..n {
            if num_integer::gcd(p, n) != 1 {
                continue;
            }
            for (a, b) in [(p, n), (n, p)] {
                out.push((a, b));
                out.push((-a, b));
            }
        }
        n += 1;
    }
    out.truncate(count);
    out
}

/// Inverse stereographic projection from `-e_1` of `u ∈ ℝ^{m-1}` onto the unit
/// sphere in `ℝ^m`.
pub fn stereographic<S: Scalar>(u: &[S]) -> Vec<S> {
    let two = S::from_int(2);
    let sq = u
        .iter()
        .fold(S::zero(), |acc, c| acc + c.clone() * c.clone());
    let den = S::one() + sq.clone();
    let mut out = Vec::with_capacity(u.len() + 1);
    out.push((S::one() - sq) / den.clone());
    out.extend(u.iter().map(|c| two.clone() * c.clone() / den.clone()));
    out
}

fn sphere_grid<S: Scalar>(m: usize, density: usize) -> Vec<Vec<S>> {
    if m == 1 {
        return vec![vec![S::one()], vec![-S::one()]];
    }
    let params: Vec<S> = grid_parameters(density)
        .into_iter()
        .map(|(p, q)| S::from_ratio(p, q))
        .collect();
    let tuples = cartesian(&vec![
        params
            .iter()
            .map(|p| vec![p.clone()])
            .collect::<Vec<_>>();
        m - 1
    ]);
    tuples
        .into_iter()
        .map(|t| stereographic(&t.into_iter().flatten().collect::<Vec<_>>()))
        .collect()
}

fn random_sphere_point<S: Scalar>(rng: &mut SampleRng, m: usize) -> Vec<S> {
    if m == 1 {
        return vec![if rng.random_bool(0.5) {
            S::one()
        } else {
            -S::one()
        }];
    }
    if S::EXACT {
        let u: Vec<S> = (0..m - 1)
            .map(|_| S::from_ratio(rng.random_range(-12..=12), rng.random_range(1..=7)))
            .collect();
        return stereographic(&u);
    }
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.iter().map(|c| S::from_f64(c / norm)).collect();
        }
    }
}

fn cartesian<T: Clone>(factors: &[Vec<T>]) -> Vec<Vec<T>> {
    factors.iter().fold(vec![Vec::new()], |acc, factor| {
        acc.iter()
            .flat_map(|prefix| {
                factor.iter().map(move |item| {
                    let mut next = prefix.clone();
                    next.push(item.clone());
                    next
                })
            })
            .collect()
    })
}
