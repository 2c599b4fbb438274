//! Random multigraph DAGs for the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use pathcount::graph::{Dag, Edge};
use proptest::prelude::*;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shape of a random DAG: vertices `0..n`, `s = 0`, `t = n - 1`, edges
/// `(i, j)` with `i < j` (parallel edges allowed).
#[derive(Clone, Debug)]
pub struct Shape {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64, i64)>,
    /// Weights are divided by this, to exercise fractional lengths.
    pub denom: i64,
    pub two_weights: bool,
}

impl Shape {
    pub fn dag(&self) -> Dag {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, w1, w2)| {
                let (w1, w2) = (ratio(w1, self.denom), ratio(w2, self.denom));
                if self.two_weights {
                    Edge::with_second(a, b, w1, w2)
                } else {
                    Edge::new(a, b, w1)
                }
            })
            .collect();
        Dag::new(self.n, 0, self.n - 1, edges).expect("forward edges form a DAG")
    }
}

/// Deterministic random shape; every vertex gets an edge from an earlier
/// one, so most vertices lie on s-t paths.
pub fn random_shape(
    seed: u64,
    n: usize,
    extra: usize,
    w_max: i64,
    denom: i64,
    two_weights: bool,
) -> Shape {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut next = |m: u64| rng.next_u64() % m;
    let mut edges = Vec::new();
    let weight = |next: &mut dyn FnMut(u64) -> u64| next(w_max as u64 + 1) as i64;
    for v in 1..n {
        let u = next(v as u64) as usize;
        let (a, b) = (weight(&mut next), weight(&mut next));
        edges.push((u, v, a, b));
    }
    for _ in 0..extra {
        let a = next(n as u64 - 1) as usize;
        let b = a + 1 + next((n - 1 - a) as u64) as usize;
        let (w1, w2) = (weight(&mut next), weight(&mut next));
        edges.push((a, b, w1, w2));
    }
    Shape {
        n,
        edges,
        denom,
        two_weights,
    }
}

/// Proptest strategy over small shapes.
pub fn shapes(
    max_n: usize,
    max_extra: usize,
    w_max: i64,
    two_weights: bool,
) -> impl Strategy<Value = Shape> {
    (
        2..=max_n,
        0..=max_extra,
        any::<u64>(),
        prop_oneof![Just(1i64), Just(2), Just(4)],
    )
        .prop_map(move |(n, extra, seed, denom)| {
            random_shape(seed, n, extra, w_max, denom, two_weights)
        })
}

/// Complete DAG on `n` vertices with unit weights.
pub fn complete(n: usize) -> Dag {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| Edge::new(i, j, int(1))))
        .collect();
    Dag::new(n, 0, n - 1, edges).unwrap()
}
