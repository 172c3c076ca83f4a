//! Seeded random generators for scalars, tensors and index maps.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::index::{IndexMap, IndexSet, MultiIndex};
use crate::linalg::DenseMatrix;
use crate::scalar::{gq, GaussQ, Scalar, C64};
use crate::tensor::{Tensor, TensorVector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub trait RandomScalar: Scalar {
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl RandomScalar for C64 {
    /// Uniform on `[-1, 1]^2`.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    }
}

impl RandomScalar for GaussQ {
    /// Small numerators over small denominators, with a bias toward zero so
    /// that sparse and singular inputs show up.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.gen_bool(0.15) {
            return GaussQ::from_i64(0);
        }
        let im = if rng.gen_bool(0.5) { rng.gen_range(-3..=3) } else { 0 };
        gq(rng.gen_range(-6..=6), rng.gen_range(1..=4), im, rng.gen_range(1..=3))
    }
}

pub fn random_matrix<S: RandomScalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix<S> {
    DenseMatrix::from_fn(rows, cols, |_, _| S::random(rng))
}

pub fn random_tensor<S: RandomScalar, R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> Tensor<S> {
    Tensor::from_fn(domain.clone(), |_, _| S::random(rng))
}

pub fn random_vector<S: RandomScalar, R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> TensorVector<S> {
    let entries = (0..domain.len()).map(|_| S::random(rng)).collect();
    TensorVector::from_entries(domain.clone(), entries).expect("length matches")
}

/// A rectangular set with arity in `1..=max_arity` and sides in `1..=max_side`.
pub fn random_rectangle<R: Rng + ?Sized>(rng: &mut R, max_arity: usize, max_side: usize) -> IndexSet {
    let l = rng.gen_range(1..=max_arity);
    let dims: Vec<usize> = (0..l).map(|_| rng.gen_range(1..=max_side)).collect();
    IndexSet::rectangular(&dims).expect("positive dims")
}

/// A table with values in a narrow range, so collisions are common.
pub fn random_table<R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> IndexMap {
    let spread = (domain.len() as i64 / 2).max(1);
    let pairs = domain
        .points()
        .iter()
        .map(|p| (p.clone(), rng.gen_range(-spread..=spread)))
        .collect();
    IndexMap::table(domain.clone(), pairs).expect("total table")
}

/// An injective table: a shuffled, shifted and spread-out set of distinct values.
pub fn random_injective_table<R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> IndexMap {
    let mut values: Vec<i64> = (0..domain.len() as i64).map(|v| 3 * v - 7).collect();
    values.shuffle(rng);
    let pairs: BTreeMap<MultiIndex, i64> = domain.points().iter().cloned().zip(values).collect();
    IndexMap::table(domain.clone(), pairs).expect("total table")
}

/// One of: linear with `k ∈ [-2, 2]^l`, mixed radix, max coordinate, random
/// table, enumeration.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> IndexMap {
    let choice = if domain.is_rectangular() { rng.gen_range(0..5) } else { [0, 2, 3, 4][rng.gen_range(0..4)] };
    match choice {
        0 => {
            let k: Vec<i64> = (0..domain.arity()).map(|_| rng.gen_range(-2..=2)).collect();
            IndexMap::linear(domain.clone(), &k).expect("arity matches")
        }
        1 => IndexMap::mixed_radix(domain.clone()).expect("rectangular"),
        2 => IndexMap::max_coord(domain.clone()).expect("total"),
        3 => random_table(rng, domain),
        _ => IndexMap::enumeration(domain.clone()).expect("small coordinates"),
    }
}
