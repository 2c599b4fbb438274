//! Exact references used to check the approximation schemes.
//!
//! Enumeration-based oracles materialise the multiset of path lengths for
//! every vertex and refuse to run past a path-count cap. The threshold
//! functions are order statistics of those multisets: `tau(v, a)` is the
//! `ceil(a)`-th smallest s-v length, and `tau2(v, a, B)` the `ceil(a)`-th
//! smallest second length among paths whose first length is at most `B`.
//!
//! [`counts_by_length`] is an independent pseudo-polynomial oracle for
//! integer weights, and [`tau_prime_reference`] evaluates the rounded
//! recurrence literally by exhaustive search on tiny graphs.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Dag, VertexId};
use crate::grid::QGrid;
use crate::numeric::Extended;

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Sorted path lengths from the source to every vertex.
#[derive(Clone, Debug)]
pub struct PathLengths {
    lengths: Vec<Vec<BigRational>>,
    pairs: Option<Vec<Vec<(BigRational, BigRational)>>>,
}

fn check_cap(dag: &Dag, cap: u64) -> Result<()> {
    let counts = dag.path_counts_from_source();
    let worst = counts.iter().max().cloned().unwrap_or_default();
    if worst > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            count: worst.to_string(),
            cap,
        });
    }
    Ok(())
}

/// All path lengths (first instance) from the source to each vertex.
pub fn enumerate_paths(dag: &Dag, cap: u64) -> Result<PathLengths> {
    check_cap(dag, cap)?;
    let mut lengths: Vec<Vec<BigRational>> = vec![Vec::new(); dag.vertex_count()];
    lengths[dag.source()].push(BigRational::zero());
    for &v in dag.topo_order() {
        if v == dag.source() {
            continue;
        }
        let mut here = Vec::new();
        for &ei in dag.incoming(v) {
            let e = dag.edge(ei);
            here.extend(lengths[e.tail].iter().map(|x| x + &e.w1));
        }
        here.sort();
        lengths[v] = here;
    }
    Ok(PathLengths {
        lengths,
        pairs: None,
    })
}

/// Like [`enumerate_paths`], additionally keeping `(len1, len2)` pairs.
pub fn enumerate_path_pairs(dag: &Dag, cap: u64) -> Result<PathLengths> {
    if !dag.has_second_weights() {
        return Err(Error::InstanceTwoAbsent);
    }
    let mut out = enumerate_paths(dag, cap)?;
    let mut pairs: Vec<Vec<(BigRational, BigRational)>> = vec![Vec::new(); dag.vertex_count()];
    pairs[dag.source()].push((BigRational::zero(), BigRational::zero()));
    for &v in dag.topo_order() {
        if v == dag.source() {
            continue;
        }
        let mut here = Vec::new();
        for &ei in dag.incoming(v) {
            let e = dag.edge(ei);
            let w2 = e.w2.as_ref().expect("checked above");
            here.extend(pairs[e.tail].iter().map(|(a, b)| (a + &e.w1, b + w2)));
        }
        here.sort();
        pairs[v] = here;
    }
    out.pairs = Some(pairs);
    Ok(out)
}

/// `ceil(a)` as a rank, `None` when `a <= 0`.
fn rank(a: &BigRational) -> Option<BigInt> {
    a.is_positive().then(|| a.ceil().to_integer())
}

fn order_statistic(sorted: &[BigRational], a: &BigRational) -> Extended {
    match rank(a) {
        None => Extended::NegInfinity,
        Some(r) => match r.to_usize() {
            Some(r) if r <= sorted.len() => Extended::Finite(sorted[r - 1].clone()),
            _ => Extended::Infinity,
        },
    }
}

impl PathLengths {
    pub fn lengths(&self, v: VertexId) -> &[BigRational] {
        &self.lengths[v]
    }

    /// `(len1, len2)` pairs sorted by `len1`, if enumerated.
    pub fn pairs(&self, v: VertexId) -> Option<&[(BigRational, BigRational)]> {
        self.pairs.as_ref().map(|p| p[v].as_slice())
    }

    /// Number of s-v paths of length at most `max_length` (ties included).
    pub fn count_at_most(&self, v: VertexId, max_length: &BigRational) -> usize {
        self.lengths[v].partition_point(|x| x <= max_length)
    }

    /// Smallest `L'` such that at least `a` s-v paths have length `<= L'`.
    pub fn tau(&self, v: VertexId, a: &BigRational) -> Extended {
        order_statistic(&self.lengths[v], a)
    }

    fn second_lengths_within(&self, v: VertexId, budget: &Extended) -> Result<Vec<BigRational>> {
        let pairs = self.pairs(v).ok_or(Error::InstanceTwoAbsent)?;
        let mut within: Vec<BigRational> = pairs
            .iter()
            .filter(|(l1, _)| match budget {
                Extended::Finite(b) => l1 <= b,
                other => other == &Extended::Infinity,
            })
            .map(|(_, l2)| l2.clone())
            .collect();
        within.sort();
        Ok(within)
    }

    /// Smallest `L2` such that at least `a` s-v paths have first length at
    /// most `budget` and second length at most `L2`.
    pub fn tau2(&self, v: VertexId, a: &BigRational, budget: &Extended) -> Result<Extended> {
        Ok(order_statistic(&self.second_lengths_within(v, budget)?, a))
    }

    pub fn count_bicriteria(&self, v: VertexId, l1: &Extended, l2: &Extended) -> Result<usize> {
        let within = self.second_lengths_within(v, l1)?;
        Ok(match l2 {
            Extended::Finite(b) => within.partition_point(|x| x <= b),
            Extended::Infinity => within.len(),
            Extended::NegInfinity => 0,
        })
    }
}

/// Number of s-t paths of length at most `max_length`.
pub fn exact_count_at_most(dag: &Dag, max_length: &BigRational, cap: u64) -> Result<BigUint> {
    let p = enumerate_paths(dag, cap)?;
    Ok(BigUint::from(p.count_at_most(dag.sink(), max_length)))
}

/// `tau(v, a)`: `-inf` for `a <= 0`, `+inf` when fewer than `ceil(a)` paths
/// reach `v`.
pub fn tau_exact(dag: &Dag, v: VertexId, a: &BigRational, cap: u64) -> Result<Extended> {
    Ok(enumerate_paths(dag, cap)?.tau(v, a))
}

/// Number of s-t paths with first length `<= l1` and second length `<= l2`.
pub fn exact_count_bicriteria(
    dag: &Dag,
    l1: &Extended,
    l2: &Extended,
    cap: u64,
) -> Result<BigUint> {
    let p = enumerate_path_pairs(dag, cap)?;
    Ok(BigUint::from(p.count_bicriteria(dag.sink(), l1, l2)?))
}

fn integer_weights(dag: &Dag) -> Result<Vec<u64>> {
    dag.edges()
        .iter()
        .map(|e| {
            if !e.w1.is_integer() {
                return Err(Error::NonIntegerWeights);
            }
            e.w1.to_integer()
                .to_u64()
                .ok_or_else(|| Error::ParameterOutOfRange {
                    name: "w1",
                    reason: "integer weight does not fit in 64 bits".into(),
                })
        })
        .collect()
}

/// Exact number of s-t paths of each length `0..=max_length`, by dynamic
/// programming over (vertex, length). Requires integer first weights.
pub fn counts_by_length(dag: &Dag, max_length: u64) -> Result<Vec<BigUint>> {
    let weights = integer_weights(dag)?;
    let width = usize::try_from(max_length)
        .ok()
        .and_then(|m| m.checked_add(1))
        .ok_or_else(|| Error::ParameterOutOfRange {
            name: "max_length",
            reason: "too large".into(),
        })?;
    let mut table: Vec<Vec<BigUint>> = vec![Vec::new(); dag.vertex_count()];
    let zeros = || vec![BigUint::zero(); width];
    table[dag.source()] = zeros();
    table[dag.source()][0] = BigUint::one();
    for &v in dag.topo_order() {
        if v == dag.source() {
            continue;
        }
        let mut here = zeros();
        for &ei in dag.incoming(v) {
            let tail = &table[dag.edge(ei).tail];
            let w = weights[ei];
            if tail.is_empty() || w > max_length {
                continue;
            }
            let w = w as usize;
            for len in w..width {
                if !tail[len - w].is_zero() {
                    here[len] += &tail[len - w];
                }
            }
        }
        table[v] = here;
    }
    let mut sink = std::mem::take(&mut table[dag.sink()]);
    if sink.is_empty() {
        sink = zeros();
    }
    Ok(sink)
}

/// Number of s-t paths of length at most `max_length`, for integer weights.
pub fn exact_count_by_length(dag: &Dag, max_length: &BigInt) -> Result<BigUint> {
    integer_weights(dag)?;
    if max_length.is_negative() {
        return Ok(BigUint::zero());
    }
    let m = max_length
        .to_u64()
        .ok_or_else(|| Error::ParameterOutOfRange {
            name: "max_length",
            reason: "too large".into(),
        })?;
    Ok(counts_by_length(dag, m)?.into_iter().sum())
}

/// Dense rounded-threshold rows evaluated literally from the recurrence.
#[derive(Clone, Debug)]
pub struct ReferenceTable {
    dag: Dag,
    grid: QGrid,
    rows: Vec<Vec<Extended>>,
}

impl ReferenceTable {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn row(&self, v: VertexId) -> &[Extended] {
        &self.rows[v]
    }
}

pub const REFERENCE_MAX_INDEGREE: usize = 3;
pub const REFERENCE_MAX_TABLE: usize = 40;

/// Literal evaluation of the rounded recurrence on a tiny graph.
///
/// For every vertex and grid index `j`, minimises the largest
/// `row_p[k_p] + l_p` over all assignments of exponents `k_p` (or "unused")
/// to the incoming edges with `sum q^k_p` in `(q^(j-1), q^j]`. Exponents may
/// be negative; a fractional path count is rounded up, so `row_p[k < 0]` is
/// `row_p[0]`. The grid is the one [`crate::fptas::build_staircase`] uses.
pub fn tau_prime_reference(dag: &Dag, eps: &BigRational) -> Result<ReferenceTable> {
    let dag = dag.prune_to_st();
    let grid = QGrid::single_instance(eps, dag.vertex_count(), &dag.total_path_count())?;
    let s_max = grid.s_max();
    if s_max > REFERENCE_MAX_TABLE {
        return Err(Error::InstanceTooLarge(format!(
            "table size {s_max} > {REFERENCE_MAX_TABLE}"
        )));
    }
    if let Some(v) =
        (0..dag.vertex_count()).find(|&v| dag.incoming(v).len() > REFERENCE_MAX_INDEGREE)
    {
        return Err(Error::InstanceTooLarge(format!(
            "vertex {v} has in-degree above {REFERENCE_MAX_INDEGREE}"
        )));
    }

    let base = grid.base();
    let width = s_max + 1;
    let mut rows = vec![vec![Extended::Infinity; width]; dag.vertex_count()];
    rows[dag.source()][0] = Extended::zero();
    if !dag.is_reachable() {
        return Ok(ReferenceTable { dag, grid, rows });
    }

    let odd = (BigUint::one() << base.shift()) + 1u32;
    let t = base.shift() as usize;
    for &v in dag.topo_order() {
        if v == dag.source() {
            continue;
        }
        let incoming = dag.incoming(v);
        let d = incoming.len();
        let neg = if d > 1 {
            base.ceil_log_int(&BigUint::from(d)) as usize
        } else {
            0
        };
        // Every quantity is scaled by S = 2^(t (s_max + 1)) (2^t + 1)^(neg + 1)
        // so q^k for k in -neg-1..=s_max + 1 becomes an integer.
        let scaled = |k: i64| -> BigUint {
            let up = (k + neg as i64 + 1) as usize;
            let down = (s_max as i64 + 1 - k) as usize;
            num_traits::pow(odd.clone(), up) << (t * down)
        };
        let levels: Vec<i64> = (-(neg as i64)..=s_max as i64).collect();
        let contribution: Vec<BigUint> = levels.iter().map(|&k| scaled(k)).collect();
        let threshold: Vec<BigUint> = (-1..=s_max as i64).map(scaled).collect();
        let costs: Vec<Vec<Extended>> = incoming
            .iter()
            .map(|&ei| {
                let e = dag.edge(ei);
                levels
                    .iter()
                    .map(|&k| rows[e.tail][k.max(0) as usize].plus(&e.w1))
                    .collect()
            })
            .collect();

        let mut best = vec![Extended::Infinity; width];
        let mut search = Search {
            contribution: &contribution,
            threshold: &threshold,
            costs: &costs,
            best: &mut best,
        };
        search.descend(0, BigUint::zero(), None);
        rows[v] = best;
    }
    Ok(ReferenceTable { dag, grid, rows })
}

struct Search<'a> {
    contribution: &'a [BigUint],
    threshold: &'a [BigUint],
    costs: &'a [Vec<Extended>],
    best: &'a mut Vec<Extended>,
}

impl Search<'_> {
    fn descend(&mut self, edge: usize, sum: BigUint, worst: Option<&Extended>) {
        let top = self.threshold.last().expect("non-empty");
        if &sum > top {
            return;
        }
        if edge == self.costs.len() {
            if let Some(cost) = worst {
                // threshold[i] = q^(i-1); find j with q^(j-1) < sum <= q^j
                let i = self.threshold.partition_point(|th| th < &sum);
                if i >= 1 && i < self.threshold.len() {
                    let j = i - 1;
                    if cost < &self.best[j] {
                        self.best[j] = cost.clone();
                    }
                }
            }
            return;
        }
        self.descend(edge + 1, sum.clone(), worst);
        for (idx, c) in self.costs[edge].iter().enumerate() {
            if !c.is_finite() {
                break;
            }
            let next = sum.clone() + &self.contribution[idx];
            let w = match worst {
                Some(w) if w >= c => w,
                _ => c,
            };
            self.descend(edge + 1, next, Some(w));
        }
    }
}

/// Brute-force count of orientations `+-s_i` summing to zero.
pub fn balanced_orientations(set: &[u64]) -> u64 {
    assert!(
        set.len() < 64,
        "orientation brute force limited to 63 items"
    );
    let mut count = 0;
    for mask in 0u64..(1u64 << set.len()) {
        let mut balance: i128 = 0;
        for (i, &x) in set.iter().enumerate() {
            if mask >> i & 1 == 1 {
                balance += x as i128;
            } else {
                balance -= x as i128;
            }
        }
        if balance == 0 {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::numeric::{parse_decimal, rational_from_int};

    fn r(x: i64) -> BigRational {
        rational_from_int(x)
    }

    fn fin(x: i64) -> Extended {
        Extended::Finite(r(x))
    }

    fn e(tail: usize, head: usize, w: i64) -> Edge {
        Edge::new(tail, head, r(w))
    }

    fn e2(tail: usize, head: usize, w1: i64, w2: i64) -> Edge {
        Edge::with_second(tail, head, r(w1), r(w2))
    }

    fn parallel() -> Dag {
        Dag::new(2, 0, 1, vec![e(0, 1, 1), e(0, 1, 2)]).unwrap()
    }

    fn diamond() -> Dag {
        Dag::new(
            4,
            0,
            3,
            vec![e(0, 1, 1), e(0, 2, 3), e(1, 3, 1), e(2, 3, 3)],
        )
        .unwrap()
    }

    fn complete(n: usize, w: i64) -> Dag {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| e(i, j, w)))
            .collect();
        Dag::new(n, 0, n - 1, edges).unwrap()
    }

    const CAP: u64 = DEFAULT_ENUMERATION_CAP;

    #[test]
    fn enumerates_small_graphs() {
        let p = enumerate_paths(&diamond(), CAP).unwrap();
        assert_eq!(p.lengths(3), &[r(2), r(6)]);
        let p = enumerate_paths(&parallel(), CAP).unwrap();
        assert_eq!(p.lengths(1), &[r(1), r(2)]);
    }

    #[test]
    fn complete_five_lengths_match_subsets() {
        // every subset of the 3 inner vertices is a path with |subset| + 1 edges
        let mut expected: Vec<BigRational> =
            (0u32..8).map(|m| r(m.count_ones() as i64 + 1)).collect();
        expected.sort();
        let p = enumerate_paths(&complete(5, 1), CAP).unwrap();
        assert_eq!(p.lengths(4), expected.as_slice());
        assert_eq!(
            expected,
            vec![r(1), r(2), r(2), r(2), r(3), r(3), r(3), r(4)]
        );
    }

    #[test]
    fn cap_is_an_error() {
        let err = enumerate_paths(&complete(12, 1), 100).unwrap_err();
        assert_eq!(
            err,
            Error::CapExceeded {
                count: "1024".into(),
                cap: 100
            }
        );
        assert!(err.is_capability());
    }

    #[test]
    fn counts_at_most_include_ties() {
        let g = parallel();
        assert_eq!(
            exact_count_at_most(&g, &r(1), CAP).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            exact_count_at_most(&g, &r(2), CAP).unwrap(),
            BigUint::from(2u32)
        );
        let half = parse_decimal("0.5").unwrap();
        assert_eq!(
            exact_count_at_most(&g, &half, CAP).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            exact_count_at_most(&diamond(), &r(2), CAP).unwrap(),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn tau_order_statistics() {
        let g = parallel();
        assert_eq!(tau_exact(&g, 1, &r(1), CAP).unwrap(), fin(1));
        assert_eq!(tau_exact(&g, 1, &r(2), CAP).unwrap(), fin(2));
        assert_eq!(tau_exact(&g, 1, &r(3), CAP).unwrap(), Extended::Infinity);
        let p = enumerate_paths(&g, CAP).unwrap();
        assert_eq!(p.tau(1, &parse_decimal("1.5").unwrap()), p.tau(1, &r(2)));
        assert_eq!(p.tau(0, &r(1)), fin(0));
        assert_eq!(p.tau(1, &r(0)), Extended::NegInfinity);
    }

    #[test]
    fn bicriteria_counts() {
        let g = Dag::new(2, 0, 1, vec![e2(0, 1, 1, 5), e2(0, 1, 2, 1)]).unwrap();
        let c = |l1: i64, l2: i64| exact_count_bicriteria(&g, &fin(l1), &fin(l2), CAP).unwrap();
        assert_eq!(c(2, 1), BigUint::from(1u32));
        assert_eq!(c(2, 5), BigUint::from(2u32));
        assert_eq!(c(1, 1), BigUint::zero());
        assert_eq!(
            exact_count_bicriteria(&parallel(), &fin(1), &fin(1), CAP).unwrap_err(),
            Error::InstanceTwoAbsent
        );
        // an unbounded first budget leaves a count over the second weights
        let p = enumerate_path_pairs(&g, CAP).unwrap();
        for l2 in 0..7 {
            let unbounded = p
                .count_bicriteria(1, &Extended::Infinity, &fin(l2))
                .unwrap();
            let second_only = [5, 1].iter().filter(|&&w| w <= l2).count();
            assert_eq!(unbounded, second_only);
        }
        assert_eq!(p.tau2(1, &r(1), &fin(1)).unwrap(), fin(5));
        assert_eq!(p.tau2(1, &r(2), &fin(2)).unwrap(), fin(5));
        assert_eq!(p.tau2(1, &r(1), &fin(2)).unwrap(), fin(1));
        assert_eq!(p.tau2(1, &r(1), &fin(0)).unwrap(), Extended::Infinity);
    }

    #[test]
    fn counts_by_length_small() {
        assert_eq!(
            exact_count_by_length(&parallel(), &BigInt::from(2)).unwrap(),
            BigUint::from(2u32)
        );
        let chain = Dag::new(4, 0, 3, vec![e(0, 1, 1), e(1, 2, 2), e(2, 3, 3)]).unwrap();
        assert_eq!(
            exact_count_by_length(&chain, &BigInt::from(5)).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            exact_count_by_length(&chain, &BigInt::from(6)).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            exact_count_by_length(&chain, &BigInt::from(-1)).unwrap(),
            BigUint::zero()
        );
        let frac = Dag::new(
            2,
            0,
            1,
            vec![Edge::new(0, 1, parse_decimal("0.5").unwrap())],
        )
        .unwrap();
        assert_eq!(
            exact_count_by_length(&frac, &BigInt::from(1)).unwrap_err(),
            Error::NonIntegerWeights
        );
    }

    #[test]
    fn balanced_orientation_counts() {
        assert_eq!(balanced_orientations(&[1, 2, 3]), 2);
        assert_eq!(balanced_orientations(&[1, 1]), 2);
        assert_eq!(balanced_orientations(&[1, 2]), 0);
    }

    #[test]
    fn reference_single_edge_shifts_source() {
        let g = Dag::new(2, 0, 1, vec![e(0, 1, 5)]).unwrap();
        let reference = tau_prime_reference(&g, &parse_decimal("0.5").unwrap()).unwrap();
        let row = reference.row(1);
        assert_eq!(row[0], fin(5));
        assert!(row[1..].iter().all(|x| x == &Extended::Infinity));
    }

    #[test]
    fn reference_rejects_large_instances() {
        let g = complete(6, 1);
        assert!(matches!(
            tau_prime_reference(&g, &parse_decimal("0.5").unwrap()),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn reference_parallel_edges() {
        let g = parallel();
        let reference = tau_prime_reference(&g, &parse_decimal("0.5").unwrap()).unwrap();
        let q = reference.grid().base();
        let row = reference.row(1);
        assert_eq!(row[0], fin(1));
        for (j, x) in row.iter().enumerate().skip(1) {
            let expected = if q.pow(j as i64 - 1) < r(2) {
                fin(2)
            } else {
                Extended::Infinity
            };
            assert_eq!(x, &expected, "j = {j}");
        }
    }
}
