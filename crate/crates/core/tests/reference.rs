//! The greedy table against a literal, exhaustive evaluation of the rounded
//! recurrence.

mod common;

use common::{int, random_shape, ratio};
use pathcount::build_staircase;
use pathcount::graph::{Dag, Edge};
use pathcount::oracle::tau_prime_reference;
use pathcount::Extended;

fn assert_same_table(dag: &Dag, eps: &num_rational::BigRational) -> bool {
    let Ok(reference) = tau_prime_reference(dag, eps) else {
        return false;
    };
    let table = build_staircase(dag, eps).unwrap();
    assert_eq!(table.grid(), reference.grid());
    let width = table.grid().s_max() + 1;
    for v in 0..table.dag().vertex_count() {
        assert_eq!(table.row(v).to_dense(width), reference.row(v), "vertex {v}");
    }
    true
}

#[test]
fn chains_match_reference() {
    let mut compared = 0;
    for n in 2..7usize {
        for parallel in 1..4usize {
            let edges = (0..n - 1)
                .flat_map(|i| {
                    (0..parallel).map(move |p| Edge::new(i, i + 1, int((i * 3 + p * 2 + 1) as i64)))
                })
                .collect();
            let dag = Dag::new(n, 0, n - 1, edges).unwrap();
            for eps in [ratio(1, 4), ratio(1, 2), int(2), int(8)] {
                if assert_same_table(&dag, &eps) {
                    compared += 1;
                }
            }
        }
    }
    assert!(
        compared >= 25,
        "only {compared} chains within reference limits"
    );
}

#[test]
fn random_small_graphs_match_reference() {
    let mut compared = 0;
    for seed in 0..300u64 {
        let shape = random_shape(
            seed,
            2 + (seed % 5) as usize,
            (seed % 4) as usize,
            5,
            1 + (seed % 2) as i64,
            false,
        );
        for eps in [ratio(1, 2), int(3)] {
            if assert_same_table(&shape.dag(), &eps) {
                compared += 1;
            }
        }
    }
    assert!(
        compared > 400,
        "only {compared} instances within reference limits"
    );
}

#[test]
fn parallel_pair_row() {
    // two parallel edges of lengths 1 and 2; T[t][j] = 2 while q^(j-1) < 2
    let dag = Dag::new(
        2,
        0,
        1,
        vec![Edge::new(0, 1, int(1)), Edge::new(0, 1, int(2))],
    )
    .unwrap();
    let table = build_staircase(&dag, &ratio(1, 2)).unwrap();
    let q = table.grid().base();
    assert_eq!(table.value(1, 0), Extended::Finite(int(1)));
    for j in 1..=table.grid().s_max() {
        let expected = if q.pow(j as i64 - 1) < int(2) {
            Extended::Finite(int(2))
        } else {
            Extended::Infinity
        };
        assert_eq!(table.value(1, j), expected, "j = {j}");
    }
}
