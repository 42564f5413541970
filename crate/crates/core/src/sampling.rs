//! Seeded random scalars and elements for property checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraSpec, Element};
use crate::hypercomplex::HypercomplexBasis;
use crate::scalar::Scalar;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small random value: exact `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 5` for exact
/// fields, uniform in `[-2, 2]` otherwise.
pub fn scalar<S: Scalar>(rng: &mut SampleRng) -> S {
    if S::EXACT {
        S::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=5))
    } else {
        S::from_f64(rng.random_range(-2.0..=2.0))
    }
}

/// A nonzero value from the same distribution.
pub fn nonzero_scalar<S: Scalar>(rng: &mut SampleRng) -> S {
    loop {
        let s: S = scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn scalars<S: Scalar>(rng: &mut SampleRng, count: usize) -> Vec<S> {
    (0..count).map(|_| scalar(rng)).collect()
}

pub fn element<S: Scalar>(rng: &mut SampleRng, alg: &Arc<AlgebraSpec>) -> Element<S> {
    Element::new(alg, scalars(rng, alg.dim())).expect("length matches")
}

/// Random element of the span of a basis.
pub fn in_span<S: Scalar>(rng: &mut SampleRng, basis: &HypercomplexBasis<S>) -> Element<S> {
    basis
        .combine(&scalars(rng, basis.vectors().len()))
        .expect("length matches")
}
