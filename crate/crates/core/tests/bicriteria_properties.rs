mod common;

use common::{int, ratio, shapes, Shape};
use num_bigint::BigUint;
use num_rational::BigRational;
use pathcount::bicriteria::{build_bi_table, build_pseudo_table};
use pathcount::graph::{Dag, Edge};
use pathcount::oracle::{enumerate_path_pairs, DEFAULT_ENUMERATION_CAP};
use pathcount::{build_staircase, Extended};
use proptest::prelude::*;

fn fin(x: BigRational) -> Extended {
    Extended::Finite(x)
}

fn params() -> impl Strategy<Value = BigRational> {
    prop_oneof![Just(ratio(1, 4)), Just(ratio(1, 2)), Just(int(2))]
}

fn second_only(dag: &Dag) -> Dag {
    let edges = dag
        .edges()
        .iter()
        .map(|e| Edge::new(e.tail, e.head, e.w2.clone().unwrap()))
        .collect();
    Dag::new(dag.vertex_count(), dag.source(), dag.sink(), edges).unwrap()
}

fn integer_shape(mut shape: Shape) -> Shape {
    shape.denom = 1;
    shape
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bi_rows_are_sandwiched_and_monotone(
        shape in shapes(6, 7, 5, true),
        eps in params(),
        delta in params(),
        l1 in 1..30i64,
    ) {
        let table = build_bi_table(&shape.dag(), &eps, &delta, &ratio(l1, 2)).unwrap();
        let dag = table.dag();
        let pairs = enumerate_path_pairs(dag, DEFAULT_ENUMERATION_CAP).unwrap();
        let (q, rg) = (table.grid().base(), table.rgrid());
        let s_max = table.grid().s_max();
        for &v in dag.topo_order() {
            let i = dag.topo_position(v);
            for level in 0..rg.levels() {
                let row = table.row(v, level);
                prop_assert!(row.is_monotone());
                if level + 1 < rg.levels() {
                    prop_assert!(table.row(v, level + 1).pointwise_le(row));
                }
                let (own, shrunk) = if level == 0 {
                    (fin(int(0)), fin(int(0)))
                } else {
                    let k = rg.k_min() + level as i64 - 1;
                    (fin(rg.base().pow(k)), fin(rg.base().pow(k - i as i64)))
                };
                for j in i..=s_max {
                    let lower = pairs.tau2(v, &q.pow((j - i) as i64), &own).unwrap();
                    let upper = pairs.tau2(v, &q.pow(j as i64), &shrunk).unwrap();
                    let value = row.get(j);
                    prop_assert!(lower <= value && value <= upper,
                        "v={v} level={level} j={j}: {lower} <= {value} <= {upper}");
                }
            }
        }
    }

    #[test]
    fn bi_estimate_is_certified(
        shape in shapes(7, 8, 6, true),
        eps in params(),
        delta in params(),
        l1 in 1..40i64,
        l2 in 0..40i64,
    ) {
        let dag = shape.dag();
        let table = build_bi_table(&dag, &eps, &delta, &ratio(l1, 2)).unwrap();
        let est = table.count_bi(&ratio(l2, 2));
        let pairs = enumerate_path_pairs(&dag, DEFAULT_ENUMERATION_CAP).unwrap();
        let count = |budget: BigRational| {
            BigUint::from(pairs.count_bicriteria(dag.sink(), &fin(budget), &fin(ratio(l2, 2))).unwrap())
        };
        let (a, b) = (count(est.budget_lo()), count(est.budget_hi()));
        prop_assert!(est.certifies(&a, &b), "a={a} b={b} k={:?}", est.estimate.exponent());
        prop_assert!(est.budget_lo() <= ratio(l1, 2) && ratio(l1, 2) <= est.budget_hi());
        prop_assert!(est.budget_hi() / est.budget_lo() <= int(1) + &delta);
    }

    #[test]
    fn pseudo_estimate_brackets_exact_pair_count(
        shape in shapes(7, 8, 6, true).prop_map(integer_shape),
        eps in params(),
        l1 in 0..25u64,
        l2 in 0..25i64,
    ) {
        let dag = shape.dag();
        let table = build_pseudo_table(&dag, &eps, l1).unwrap();
        let pairs = enumerate_path_pairs(&dag, DEFAULT_ENUMERATION_CAP).unwrap();
        let exact = pairs.count_bicriteria(dag.sink(), &fin(int(l1 as i64)), &fin(int(l2))).unwrap();
        prop_assert!(table.count_pseudo(&int(l2)).brackets(&BigUint::from(exact)));
        for b in 0..l1 {
            for v in 0..table.dag().vertex_count() {
                prop_assert!(table.row(v, b + 1).pointwise_le(table.row(v, b)));
            }
        }
    }

    #[test]
    fn unbinding_budget_reduces_to_single_instance(shape in shapes(7, 8, 6, true).prop_map(integer_shape), eps in params()) {
        let dag = shape.dag();
        let total: BigRational = dag.edges().iter().map(|e| e.w1.clone()).sum();
        let l1 = total.to_integer().try_into().unwrap_or(0u64);
        let single = build_staircase(&second_only(&dag), &eps).unwrap();
        let pseudo = build_pseudo_table(&dag, &eps, l1).unwrap();
        let t = pseudo.dag().sink();
        prop_assert_eq!(pseudo.row(t, l1), single.sink_row());
        if l1 > 0 {
            let bi = build_bi_table(&dag, &eps, &ratio(1, 2), &total).unwrap();
            for l2 in 0..30 {
                let bi_zero = bi.count_bi(&int(l2)).estimate.is_zero();
                prop_assert_eq!(bi_zero, single.count_at_most(&int(l2)).is_zero());
            }
        }
    }

    #[test]
    fn zero_first_weights_ignore_the_budget(shape in shapes(7, 8, 6, true), eps in params(), l1 in 1..10i64) {
        let mut shape = shape;
        for e in shape.edges.iter_mut() {
            e.2 = 0;
        }
        let dag = shape.dag();
        let bi = build_bi_table(&dag, &eps, &ratio(1, 4), &int(l1)).unwrap();
        let t = bi.dag().sink();
        for level in 1..bi.rgrid().levels() {
            prop_assert_eq!(bi.row(t, level), bi.row(t, 0));
        }
        let pairs = enumerate_path_pairs(&dag, DEFAULT_ENUMERATION_CAP).unwrap();
        for l2 in 0..30 {
            let exact = pairs.count_bicriteria(dag.sink(), &Extended::Infinity, &fin(int(l2))).unwrap();
            prop_assert!(bi.count_bi(&int(l2)).estimate.brackets(&BigUint::from(exact)));
        }
    }
}
