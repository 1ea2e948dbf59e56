//! Seeded random instances for property checks.
//!
//! Every generator takes a caller-owned [`ChaCha8Rng`], so a seed determines
//! the whole stream on every platform.

use rand::seq::SliceRandom;
use rand::Rng;
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::phylo::tree::{Node, PhyloTree};
use crate::point::{normalize, DataSet, TropicalPoint, WeightVector};
use crate::rational::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over rationals `a/d` in `[-radius, radius]` with `d` uniform in `1..=max_den`.
pub fn rational(rng: &mut ChaCha8Rng, radius: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    Rational::new(rng.gen_range(-radius * d..=radius * d), d)
}

pub fn point(rng: &mut ChaCha8Rng, n: usize, radius: i64, max_den: i64) -> TropicalPoint {
    let raw: Vec<Rational> = (0..n).map(|_| rational(rng, radius, max_den)).collect();
    normalize(&raw).expect("n >= 2")
}

pub fn dataset(rng: &mut ChaCha8Rng, m: usize, n: usize, radius: i64, max_den: i64) -> DataSet {
    DataSet::new((0..m).map(|_| point(rng, n, radius, max_den)).collect()).expect("m >= 1")
}

/// Positive weights `k_i / sum k` with `k_i` uniform in `1..=20`.
pub fn weights(rng: &mut ChaCha8Rng, m: usize) -> WeightVector {
    WeightVector::normalized((0..m).map(|_| Rational::from_integer(rng.gen_range(1..=20))).collect())
        .expect("positive")
}

/// Weights near `base` moved by independent perturbations with large prime
/// denominators, then renormalized.
pub fn perturbed_weights(rng: &mut ChaCha8Rng, base: &WeightVector) -> WeightVector {
    const PRIMES: [i64; 6] = [1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099];
    let raw: Vec<Rational> = base
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let p = PRIMES[i % PRIMES.len()];
            w + Rational::new(rng.gen_range(1..=p / 50), p * 100)
        })
        .collect();
    WeightVector::normalized(raw).expect("positive")
}

/// A random equidistant tree on `n` leaves.
///
/// Clusters are merged two at a time, occasionally three, at strictly
/// increasing heights. The first merges may sit below the leaf level, which
/// gives negative leaf branches.
pub fn tree(rng: &mut ChaCha8Rng, n: usize, max_den: i64) -> Result<PhyloTree> {
    // (node, height above the leaves); leaves are at height 0
    let mut clusters: Vec<(Node, Option<Rational>)> =
        (0..n).map(|l| (Node::leaf(l, Rational::zero()), None)).collect();
    let floor = Rational::new(rng.gen_range(-max_den..=2 * max_den), max_den);
    while clusters.len() > 1 {
        let k = if clusters.len() >= 3 && rng.gen_ratio(1, 4) { 3 } else { 2 };
        clusters.shuffle(rng);
        let group: Vec<(Node, Option<Rational>)> = clusters.drain(..k).collect();
        let base = group
            .iter()
            .filter_map(|(_, h)| h.clone())
            .fold(floor.clone(), Rational::max);
        let height = base + Rational::new(rng.gen_range(1..=2 * max_den), max_den);
        let children = group
            .into_iter()
            .map(|(mut node, h)| {
                node.length = &height - h.unwrap_or_else(Rational::zero);
                node
            })
            .collect();
        clusters.push((Node::internal(Rational::zero(), children), Some(height)));
    }
    let (root, _) = clusters.pop().expect("n >= 1");
    PhyloTree::new(root)
}

/// A uniformly random permutation of `0..n`.
pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
