//! Counting paths under two length functions at once.
//!
//! Every edge carries a first weight `w1` (the budgeted instance) and a
//! second weight `w2`. Two tables are provided:
//!
//! * [`BiTable`] rounds the remaining first-instance budget to powers
//!   `r^k`. Its answer is certified only between two budgets: at least the
//!   count under `r^(K_top - n)` and at most the count under `r^K_top`, up to
//!   a factor `1 + eps`. No multiplicative guarantee for the exact pair
//!   `(L1, L2)` is claimed.
//! * [`PseudoBiTable`] keeps integer budgets `0..=L1` exactly and gives a
//!   `(1 + eps)` estimate for the pair `(L1, L2)` in time linear in `L1`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fptas::{CountEstimate, EstimateReport, DECIMAL_DIGITS};
use crate::graph::{Dag, VertexId};
use crate::grid::QGrid;
use crate::numeric::{render_fixed, to_exact_decimal, DyadicBase, Extended, Rounding};
use crate::staircase::{greedy_row, Feed, Row};

/// Label attached to every [`BiEstimate`] report.
pub const CERTIFIED_LABEL: &str = "count certified between budgets";

/// Budgets `0` and `r^k` for `k` in `k_min..=k_top`, with `r = 1 + 2^-u`
/// the coarsest dyadic base satisfying `r^n <= 1 + delta`.
///
/// Index 0 is the zero budget: a remaining allowance below `r^k_min` can
/// only be spent on zero-weight edges. `k_min` sits one step below the
/// smallest positive first weight, so any such remainder is smaller than
/// every positive weight.
#[derive(Clone, Debug)]
pub struct RGrid {
    delta: BigRational,
    vertices: usize,
    base: DyadicBase,
    l1: BigRational,
    k_top: i64,
    k_min: i64,
    powers: Vec<BigRational>,
}

impl RGrid {
    pub fn new(
        delta: &BigRational,
        vertices: usize,
        l1: &BigRational,
        w_min: Option<&BigRational>,
    ) -> Result<RGrid> {
        if !delta.is_positive() {
            return Err(Error::NonPositiveParameter { name: "delta" });
        }
        if !l1.is_positive() {
            return Err(Error::NonPositiveL1);
        }
        let bound = BigRational::from_integer(1.into()) + delta;
        let base = DyadicBase::coarsest_within(&bound, (vertices as u32).max(1));
        let k_top = base.ceil_log(l1);
        let k_min = w_min.map_or(k_top, |w| (base.floor_log(w) - 1).min(k_top));
        let mut powers = Vec::with_capacity((k_top - k_min + 1) as usize);
        let (mut p, r) = (base.pow(k_min), base.value());
        for _ in k_min..=k_top {
            powers.push(p.clone());
            p *= &r;
        }
        Ok(RGrid {
            delta: delta.clone(),
            vertices,
            base,
            l1: l1.clone(),
            k_top,
            k_min,
            powers,
        })
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn base(&self) -> DyadicBase {
        self.base
    }

    pub fn l1(&self) -> &BigRational {
        &self.l1
    }

    pub fn k_top(&self) -> i64 {
        self.k_top
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    /// Number of budget levels, the zero budget included.
    pub fn levels(&self) -> usize {
        self.powers.len() + 1
    }

    /// Level index of `r^k`.
    pub fn level_of_exponent(&self, k: i64) -> Option<usize> {
        (self.k_min..=self.k_top)
            .contains(&k)
            .then(|| (k - self.k_min) as usize + 1)
    }

    /// Budget value of a level index.
    pub fn budget(&self, level: usize) -> BigRational {
        if level == 0 {
            BigRational::zero()
        } else {
            self.powers[level - 1].clone()
        }
    }

    /// Largest level whose budget is at most `x`; `None` once `x < 0`.
    pub fn level_at_most(&self, x: &BigRational) -> Option<usize> {
        if x.is_negative() {
            return None;
        }
        Some(self.powers.partition_point(|p| p <= x))
    }

    /// `r^K_top`, the largest budget, at least `L1`.
    pub fn budget_hi(&self) -> BigRational {
        self.base.pow(self.k_top)
    }

    /// `r^(K_top - n)`, below `L1` and a factor `r^n <= 1 + delta` under
    /// [`RGrid::budget_hi`].
    pub fn budget_lo(&self) -> BigRational {
        self.base.pow(self.k_top - self.vertices as i64)
    }
}

/// Rows `B[v][level][j]` over budget levels of an [`RGrid`].
#[derive(Clone, Debug)]
pub struct BiTable {
    dag: Dag,
    grid: QGrid,
    rgrid: RGrid,
    rows: Vec<Vec<Row>>,
}

fn require_second(dag: &Dag) -> Result<()> {
    if dag.has_second_weights() {
        Ok(())
    } else {
        Err(Error::InstanceTwoAbsent)
    }
}

/// Builds the budget-rounded table for `dag` (pruned first if needed).
pub fn build_bi_table(
    dag: &Dag,
    eps: &BigRational,
    delta: &BigRational,
    l1: &BigRational,
) -> Result<BiTable> {
    require_second(dag)?;
    let dag = dag.prune_to_st();
    let grid = QGrid::bicriteria(eps, dag.vertex_count(), &dag.total_path_count())?;
    let w_min = dag
        .edges()
        .iter()
        .map(|e| &e.w1)
        .filter(|w| w.is_positive())
        .min();
    let rgrid = RGrid::new(delta, dag.vertex_count(), l1, w_min)?;
    let levels = rgrid.levels();
    let mut rows = vec![vec![Row::unreachable(); levels]; dag.vertex_count()];
    rows[dag.source()] = vec![Row::source(); levels];
    if dag.is_reachable() {
        for &v in dag.topo_order() {
            if v == dag.source() {
                continue;
            }
            let mut here = Vec::with_capacity(levels);
            for level in 0..levels {
                let budget = rgrid.budget(level);
                let feeds: Vec<Feed<'_>> = dag
                    .incoming(v)
                    .iter()
                    .filter_map(|&ei| {
                        let e = dag.edge(ei);
                        let pred = rgrid.level_at_most(&(&budget - &e.w1))?;
                        Some(Feed {
                            row: &rows[e.tail][pred],
                            added: e.w2.as_ref().expect("checked"),
                        })
                    })
                    .collect();
                here.push(greedy_row(&feeds, grid.base(), grid.s_max()));
            }
            rows[v] = here;
        }
    }
    Ok(BiTable {
        dag,
        grid,
        rgrid,
        rows,
    })
}

impl BiTable {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn rgrid(&self) -> &RGrid {
        &self.rgrid
    }

    /// Row of `v` at a level index of [`BiTable::rgrid`].
    pub fn row(&self, v: VertexId, level: usize) -> &Row {
        &self.rows[v][level]
    }

    /// Row of `v` under budget `r^k`, if `k` is in range.
    pub fn row_at_exponent(&self, v: VertexId, k: i64) -> Option<&Row> {
        self.rgrid.level_of_exponent(k).map(|l| &self.rows[v][l])
    }

    /// Row of `v` under the top budget `r^K_top`.
    pub fn top_row(&self, v: VertexId) -> &Row {
        self.rows[v].last().expect("at least one level")
    }

    /// Largest `k` with `B[t][K_top][k] <= L2`.
    pub fn count_bi(&self, l2: &BigRational) -> BiEstimate {
        let exponent = self.top_row(self.dag.sink()).last_index_at_most(l2);
        BiEstimate {
            estimate: CountEstimate::new(exponent, self.grid.base(), self.grid.eps().clone()),
            rgrid: self.rgrid.clone(),
            l2: l2.clone(),
        }
    }
}

/// Estimate from a [`BiTable`] together with its bracketing budgets.
///
/// With `a` the exact count under first budget `budget_lo` and `b` under
/// `budget_hi` (both with second bound `L2`): `a <= b`, `a <= q^k (1 + eps)`
/// and `q^k <= b (1 + eps)`. A zero estimate means `a = 0`.
#[derive(Clone, Debug)]
pub struct BiEstimate {
    pub estimate: CountEstimate,
    pub rgrid: RGrid,
    pub l2: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiReport {
    pub label: &'static str,
    pub estimate: EstimateReport,
    pub r: String,
    pub delta: String,
    pub k_top: String,
    pub budget_lo_exponent: String,
    pub budget_lo: String,
    pub budget_hi: String,
}

impl BiEstimate {
    pub fn budget_lo(&self) -> BigRational {
        self.rgrid.budget_lo()
    }

    pub fn budget_hi(&self) -> BigRational {
        self.rgrid.budget_hi()
    }

    /// Checks the certificate against exact counts `a` (at `budget_lo`) and
    /// `b` (at `budget_hi`).
    pub fn certifies(&self, a: &BigUint, b: &BigUint) -> bool {
        if a > b {
            return false;
        }
        let factor = BigRational::from_integer(1.into()) + self.estimate.eps();
        let v = self.estimate.value();
        let as_rat = |x: &BigUint| BigRational::from_integer(x.clone().into());
        match self.estimate.exponent() {
            None => a.is_zero(),
            Some(_) => as_rat(a) <= &v * &factor && v <= as_rat(b) * factor,
        }
    }

    /// Decimal rendering; `budget_lo` rounded down and `budget_hi` up, so the
    /// printed bracket still contains `L1`.
    pub fn report(&self) -> BiReport {
        let lo = self.budget_lo();
        let hi = self.budget_hi();
        BiReport {
            label: CERTIFIED_LABEL,
            estimate: self.estimate.report(),
            r: self.rgrid.base().to_string(),
            delta: to_exact_decimal(self.rgrid.delta())
                .unwrap_or_else(|| self.rgrid.delta().to_string()),
            k_top: self.rgrid.k_top().to_string(),
            budget_lo_exponent: (self.rgrid.k_top() - self.rgrid.vertices as i64).to_string(),
            budget_lo: render_fixed(lo.numer(), lo.denom(), DECIMAL_DIGITS, Rounding::Floor),
            budget_hi: render_fixed(hi.numer(), hi.denom(), DECIMAL_DIGITS, Rounding::Ceil),
        }
    }
}

/// Rows `P[v][b][j]` for every integer first budget `b` in `0..=L1`.
#[derive(Clone, Debug)]
pub struct PseudoBiTable {
    dag: Dag,
    grid: QGrid,
    l1: u64,
    rows: Vec<Vec<Row>>,
}

fn integer_first_weights(dag: &Dag) -> Result<Vec<u64>> {
    dag.edges()
        .iter()
        .map(|e| {
            if !e.w1.is_integer() {
                return Err(Error::NonIntegerWeights);
            }
            // weights above u64 never fit a budget we can allocate
            Ok(e.w1.to_integer().to_u64().unwrap_or(u64::MAX))
        })
        .collect()
}

/// Builds the integer-budget table for `dag` (pruned first if needed).
pub fn build_pseudo_table(dag: &Dag, eps: &BigRational, l1: u64) -> Result<PseudoBiTable> {
    require_second(dag)?;
    let dag = dag.prune_to_st();
    let weights = integer_first_weights(&dag)?;
    let grid = QGrid::single_instance(eps, dag.vertex_count(), &dag.total_path_count())?;
    let budgets = usize::try_from(l1)
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::ParameterOutOfRange {
            name: "l1",
            reason: "too large".into(),
        })?;
    let mut rows = vec![vec![Row::unreachable(); budgets]; dag.vertex_count()];
    rows[dag.source()] = vec![Row::source(); budgets];
    if dag.is_reachable() {
        for &v in dag.topo_order() {
            if v == dag.source() {
                continue;
            }
            let mut here = Vec::with_capacity(budgets);
            for b in 0..budgets as u64 {
                let feeds: Vec<Feed<'_>> = dag
                    .incoming(v)
                    .iter()
                    .filter_map(|&ei| {
                        let e = dag.edge(ei);
                        let rest = b.checked_sub(weights[ei])?;
                        Some(Feed {
                            row: &rows[e.tail][rest as usize],
                            added: e.w2.as_ref().expect("checked"),
                        })
                    })
                    .collect();
                here.push(greedy_row(&feeds, grid.base(), grid.s_max()));
            }
            rows[v] = here;
        }
    }
    Ok(PseudoBiTable {
        dag,
        grid,
        l1,
        rows,
    })
}

impl PseudoBiTable {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn l1(&self) -> u64 {
        self.l1
    }

    pub fn row(&self, v: VertexId, budget: u64) -> &Row {
        &self.rows[v][budget as usize]
    }

    pub fn value(&self, v: VertexId, budget: u64, j: usize) -> Extended {
        self.row(v, budget).get(j)
    }

    /// Estimates the number of paths with first length `<= L1` and second
    /// length `<= L2`.
    pub fn count_pseudo(&self, l2: &BigRational) -> CountEstimate {
        let exponent = self.row(self.dag.sink(), self.l1).last_index_at_most(l2);
        CountEstimate::new(exponent, self.grid.base(), self.grid.eps().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fptas::build_staircase;
    use crate::graph::Edge;
    use crate::numeric::{parse_decimal, rational_from_int};

    fn r(x: i64) -> BigRational {
        rational_from_int(x)
    }

    fn d(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    fn fin(x: i64) -> Extended {
        Extended::Finite(r(x))
    }

    fn e2(tail: usize, head: usize, w1: i64, w2: i64) -> Edge {
        Edge::with_second(tail, head, r(w1), r(w2))
    }

    fn pair() -> Dag {
        Dag::new(2, 0, 1, vec![e2(0, 1, 1, 5), e2(0, 1, 2, 1)]).unwrap()
    }

    #[test]
    fn rgrid_brackets_l1() {
        let g = RGrid::new(&d("0.25"), 4, &d("1.5"), Some(&r(1))).unwrap();
        let r4 = g.base().pow(4);
        assert!(r4 <= d("1.25"));
        assert!(g.budget_hi() >= d("1.5"));
        assert!(g.base().pow(g.k_top() - 1) < d("1.5"));
        assert!(g.budget_lo() <= d("1.5"));
        assert_eq!(g.budget_hi() / g.budget_lo(), r4);
        assert!(g.base().pow(g.k_min()) < r(1));
        assert_eq!(g.level_at_most(&d("-0.1")), None);
        assert_eq!(g.level_at_most(&r(0)), Some(0));
        assert_eq!(g.level_at_most(&g.budget_hi()), Some(g.levels() - 1));
        assert_eq!(g.level_at_most(&d("1.5")), Some(g.levels() - 2));
        assert!(RGrid::new(&d("0.25"), 4, &r(0), None).is_err());
    }

    #[test]
    fn top_row_of_pair_at_unit_budget() {
        let t = build_bi_table(&pair(), &d("0.5"), &d("0.5"), &r(1)).unwrap();
        let row = t.top_row(1);
        assert_eq!(row.get(0), fin(5));
        assert_eq!(row.get(1), Extended::Infinity);
        assert!(t.count_bi(&r(4)).estimate.is_zero());
        let est = t.count_bi(&r(5));
        assert!(est.estimate.brackets(&BigUint::from(1u32)));
        assert_eq!(est.report().label, CERTIFIED_LABEL);
    }

    #[test]
    fn budget_remainder_below_unit_is_usable_for_zero_edges() {
        // s -> a costs 1 of 1.5; a -> t is free in the first instance
        let g = Dag::new(3, 0, 2, vec![e2(0, 1, 1, 1), e2(1, 2, 0, 1)]).unwrap();
        let t = build_bi_table(&g, &d("0.25"), &d("0.25"), &d("1.5")).unwrap();
        assert_eq!(t.top_row(2).get(0), fin(2));
    }

    #[test]
    fn zero_first_weights_match_single_instance() {
        let g = Dag::new(
            3,
            0,
            2,
            vec![
                e2(0, 1, 0, 1),
                e2(0, 1, 0, 2),
                e2(1, 2, 0, 3),
                e2(0, 2, 0, 7),
            ],
        )
        .unwrap();
        let eps = d("0.5");
        let t = build_bi_table(&g, &eps, &d("0.5"), &r(3)).unwrap();
        let swapped: Vec<Edge> = g
            .edges()
            .iter()
            .map(|e| Edge::new(e.tail, e.head, e.w2.clone().unwrap()))
            .collect();
        let single = Dag::new(3, 0, 2, swapped).unwrap();
        let grid = QGrid::bicriteria(&eps, 3, &single.total_path_count()).unwrap();
        let rows = crate::fptas::build_rows(&single, &grid, crate::graph::Instance::First);
        for level in 0..t.rgrid().levels() {
            assert_eq!(t.row(2, level), &rows[2]);
        }
    }

    #[test]
    fn rejects_missing_second_weights() {
        let g = Dag::new(2, 0, 1, vec![Edge::new(0, 1, r(1))]).unwrap();
        assert_eq!(
            build_bi_table(&g, &r(1), &r(1), &r(1)).unwrap_err(),
            Error::InstanceTwoAbsent
        );
        assert_eq!(
            build_pseudo_table(&g, &r(1), 1).unwrap_err(),
            Error::InstanceTwoAbsent
        );
        assert_eq!(
            build_bi_table(&pair(), &r(1), &r(1), &r(0)).unwrap_err(),
            Error::NonPositiveL1
        );
    }

    #[test]
    fn pseudo_rows_of_pair() {
        let t = build_pseudo_table(&pair(), &d("0.5"), 2).unwrap();
        assert!(t.row(1, 0).get(0) == Extended::Infinity);
        assert_eq!(t.value(1, 1, 0), fin(5));
        assert_eq!(t.value(1, 2, 0), fin(1));
        let q = t.grid().base();
        let covering = (0..).find(|&j| q.pow(j) >= r(2)).unwrap() as usize;
        assert_eq!(t.value(1, 2, covering), fin(5));
        assert!(t.count_pseudo(&r(1)).brackets(&BigUint::from(1u32)));
        assert!(t.count_pseudo(&r(5)).brackets(&BigUint::from(2u32)));
        let zero = build_pseudo_table(&pair(), &d("0.5"), 0).unwrap();
        assert!(zero.count_pseudo(&r(100)).is_zero());
    }

    #[test]
    fn pseudo_rejects_fractional_weights() {
        let g = Dag::new(2, 0, 1, vec![Edge::with_second(0, 1, d("0.5"), r(1))]).unwrap();
        assert_eq!(
            build_pseudo_table(&g, &r(1), 1).unwrap_err(),
            Error::NonIntegerWeights
        );
    }

    #[test]
    fn unbinding_budget_matches_single_instance_count() {
        let g = pair();
        let t = build_pseudo_table(&g, &d("0.1"), 3).unwrap();
        let single = Dag::new(2, 0, 1, vec![Edge::new(0, 1, r(5)), Edge::new(0, 1, r(1))]).unwrap();
        let s = build_staircase(&single, &d("0.1")).unwrap();
        assert_eq!(t.row(1, 3), s.sink_row());
    }
}
