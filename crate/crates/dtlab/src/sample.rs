//! Seeded generators for random partial functions, trees, pmfs, and
//! monotone functions. Every generator is deterministic given its RNG.

use crate::boolfn::{BitVector, PartialFn};
use crate::dtree::{DecisionTree, Node, Pmf};
use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;

/// A random partial function: distinct points with random labels.
/// Always nonempty; may be constant.
pub fn rand_partial_fn(rng: &mut ChaCha20Rng, width: usize, max_points: usize) -> PartialFn {
    assert!(width <= 20);
    let cube = 1u64 << width;
    let target = rng.gen_range(1..=max_points.min(cube as usize));
    let mut points = BTreeSet::new();
    while points.len() < target {
        points.insert(rng.gen_range(0..cube));
    }
    let entries: Vec<(BitVector, bool)> = points
        .into_iter()
        .map(|v| (BitVector::from_u64(width, v), rng.gen()))
        .collect();
    PartialFn::new(width, entries).expect("widths agree")
}

/// Like [`rand_partial_fn`] but guaranteed to take both labels.
pub fn rand_nonconstant_fn(rng: &mut ChaCha20Rng, width: usize, max_points: usize) -> PartialFn {
    loop {
        let f = rand_partial_fn(rng, width, max_points.max(2));
        if !f.is_constant() {
            return f;
        }
    }
}

/// A random legal tree: no coordinate repeats along a path, at most
/// `max_leaves` leaves.
pub fn rand_tree(rng: &mut ChaCha20Rng, width: usize, max_leaves: usize) -> DecisionTree {
    fn grow(rng: &mut ChaCha20Rng, free: &[usize], budget: &mut usize) -> Node {
        if free.is_empty() || *budget == 0 || rng.gen_bool(0.4) {
            return Node::Leaf(rng.gen());
        }
        let index = free[rng.gen_range(0..free.len())];
        let rest: Vec<usize> = free.iter().copied().filter(|&i| i != index).collect();
        // each split spends one leaf from the budget
        *budget = budget.saturating_sub(1);
        Node::Query {
            index,
            lo: Box::new(grow(rng, &rest, budget)),
            hi: Box::new(grow(rng, &rest, budget)),
        }
    }
    let free: Vec<usize> = (0..width).collect();
    let mut budget = max_leaves.saturating_sub(1);
    DecisionTree::new(grow(rng, &free, &mut budget))
}

/// A random pmf on the whole domain of `f`, with small integer weights so
/// the common denominator stays tame.
pub fn rand_pmf(rng: &mut ChaCha20Rng, f: &PartialFn) -> Pmf {
    let weights: Vec<u64> = (0..f.len()).map(|_| rng.gen_range(1..=8u64)).collect();
    let total: u64 = weights.iter().sum();
    let points = f
        .iter()
        .zip(&weights)
        .map(|((x, _), &w)| {
            (
                x.clone(),
                BigRational::new(BigInt::from(w), BigInt::from(total)),
            )
        })
        .collect();
    Pmf::new(points).expect("weights are positive and sum to total")
}

/// A random monotone function on the full cube: the upward closure of a
/// few random generator points.
pub fn rand_monotone_fn(rng: &mut ChaCha20Rng, width: usize) -> PartialFn {
    assert!(width <= 16);
    let cube = 1u64 << width;
    let generators: Vec<u64> = (0..rng.gen_range(0..=3usize))
        .map(|_| rng.gen_range(0..cube))
        .collect();
    PartialFn::total(width, |x| {
        generators.iter().any(|&g| {
            (0..width).all(|i| (g >> i) & 1 == 0 || x.get(i))
        })
    })
    .expect("width within cap")
}

/// A random restriction consistent with `x`, fixing roughly half of a
/// random coordinate subset.
pub fn rand_restriction_consistent(
    rng: &mut ChaCha20Rng,
    x: &BitVector,
) -> crate::boolfn::Restriction {
    let mut rho = crate::boolfn::Restriction::new();
    let mut coords: Vec<usize> = (0..x.width()).collect();
    coords.shuffle(rng);
    let keep = rng.gen_range(0..=x.width());
    for &i in coords.iter().take(keep) {
        rho.fix(i, x.get(i));
    }
    rho
}
