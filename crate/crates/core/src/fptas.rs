//! Single-instance approximate counting of s-t paths with length at most `L`.
//!
//! [`build_staircase`] fills one [`Row`] per vertex in topological order by
//! merging predecessor rows with the greedy of [`crate::staircase`]. A query
//! then reads the sink row: the largest `k` with `T[t][k] <= L` gives the
//! estimate `q^k`, within a factor `1 + eps` of the true count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dag, Instance, VertexId};
use crate::grid::QGrid;
use crate::numeric::{render_fixed, DyadicBase, Extended, Rounding};
use crate::staircase::{greedy_row, Feed, Row};

/// Fractional digits used for decimal renderings of estimates.
pub const DECIMAL_DIGITS: u32 = 6;

/// The rounded threshold table of a pruned graph.
#[derive(Clone, Debug)]
pub struct Staircase {
    dag: Dag,
    grid: QGrid,
    rows: Vec<Row>,
}

/// Builds the threshold table for `dag` (pruned first if needed).
pub fn build_staircase(dag: &Dag, eps: &BigRational) -> Result<Staircase> {
    let dag = dag.prune_to_st();
    let grid = QGrid::single_instance(eps, dag.vertex_count(), &dag.total_path_count())?;
    let rows = build_rows(&dag, &grid, Instance::First);
    Ok(Staircase { dag, grid, rows })
}

/// Greedy rows for every vertex under the given instance's weights.
pub(crate) fn build_rows(dag: &Dag, grid: &QGrid, instance: Instance) -> Vec<Row> {
    let mut rows = vec![Row::unreachable(); dag.vertex_count()];
    if !dag.is_reachable() {
        rows[dag.source()] = Row::source();
        return rows;
    }
    for &v in dag.topo_order() {
        if v == dag.source() {
            rows[v] = Row::source();
            continue;
        }
        let feeds: Vec<Feed<'_>> = dag
            .incoming(v)
            .iter()
            .map(|&ei| {
                let e = dag.edge(ei);
                Feed {
                    row: &rows[e.tail],
                    added: e.weight(instance).expect("instance present"),
                }
            })
            .collect();
        let row = greedy_row(&feeds, grid.base(), grid.s_max());
        rows[v] = row;
    }
    rows
}

impl Staircase {
    /// The pruned graph the table was built on; vertex ids refer to it.
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn row(&self, v: VertexId) -> &Row {
        &self.rows[v]
    }

    pub fn value(&self, v: VertexId, j: usize) -> Extended {
        self.rows[v].get(j)
    }

    pub fn sink_row(&self) -> &Row {
        &self.rows[self.dag.sink()]
    }

    /// Estimates the number of s-t paths of length at most `max_length`.
    pub fn count_at_most(&self, max_length: &BigRational) -> CountEstimate {
        CountEstimate::new(
            self.sink_row().last_index_at_most(max_length),
            self.grid.base(),
            self.grid.eps().clone(),
        )
    }

    /// Estimates the number of `rho`-approximate shortest paths, i.e. paths
    /// of length at most `rho * OPT`.
    pub fn count_rho_approx(&self, rho: &BigRational) -> Result<RhoEstimate> {
        if rho < &BigRational::one() {
            return Err(Error::ParameterOutOfRange {
                name: "rho",
                reason: "must be >= 1".into(),
            });
        }
        let opt = match self.dag.shortest_path_length(Instance::First)? {
            Extended::Finite(x) => x,
            _ => return Err(Error::NoPath),
        };
        let max_length = rho * &opt;
        Ok(RhoEstimate {
            estimate: self.count_at_most(&max_length),
            opt_is_zero: opt.is_zero(),
            opt,
            max_length,
        })
    }
}

/// Result of [`Staircase::count_rho_approx`].
#[derive(Clone, Debug)]
pub struct RhoEstimate {
    pub estimate: CountEstimate,
    pub opt: BigRational,
    pub max_length: BigRational,
    /// With `OPT = 0` only zero-length paths qualify for any `rho`.
    pub opt_is_zero: bool,
}

/// An approximate count `q^k`, or zero when no path qualifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountEstimate {
    exponent: Option<usize>,
    base: DyadicBase,
    eps: BigRational,
}

/// Decimal rendering of a [`CountEstimate`], as written by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateReport {
    pub k: Option<String>,
    pub q: String,
    pub eps: String,
    pub value_decimal: String,
    pub lower_bound: String,
    pub upper_bound: String,
}

impl CountEstimate {
    pub fn new(exponent: Option<usize>, base: DyadicBase, eps: BigRational) -> Self {
        CountEstimate {
            exponent,
            base,
            eps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    pub fn exponent(&self) -> Option<usize> {
        self.exponent
    }

    pub fn base(&self) -> DyadicBase {
        self.base
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    /// Exact `q^k`, or 0.
    pub fn value(&self) -> BigRational {
        let (n, d) = self.value_fraction();
        BigRational::new_raw(n, d)
    }

    pub fn lower_bound(&self) -> BigRational {
        self.value() / (BigRational::one() + &self.eps)
    }

    pub fn upper_bound(&self) -> BigRational {
        self.value() * (BigRational::one() + &self.eps)
    }

    /// True when the estimate is within a factor `1 + eps` of `count`, and
    /// zero exactly when `count` is zero.
    pub fn brackets(&self, count: &BigUint) -> bool {
        match self.exponent {
            None => count.is_zero(),
            Some(_) if count.is_zero() => false,
            Some(_) => {
                let a = BigRational::from_integer(BigInt::from(count.clone()));
                let factor = BigRational::one() + &self.eps;
                let v = self.value();
                &a / &factor <= v && v <= a * factor
            }
        }
    }

    fn value_fraction(&self) -> (BigInt, BigInt) {
        match self.exponent {
            None => (BigInt::zero(), BigInt::one()),
            Some(k) => {
                let p = self.base.pow(k as i64);
                (p.numer().clone(), p.denom().clone())
            }
        }
    }

    pub fn report(&self) -> EstimateReport {
        let (n, d) = self.value_fraction();
        let en = self.eps.numer();
        let ed = self.eps.denom();
        // value * ed / (ed + en) and value * (ed + en) / ed
        let lower = render_fixed(
            &(&n * ed),
            &(&d * (ed + en)),
            DECIMAL_DIGITS,
            Rounding::Floor,
        );
        let upper = render_fixed(
            &(&n * (ed + en)),
            &(&d * ed),
            DECIMAL_DIGITS,
            Rounding::Ceil,
        );
        EstimateReport {
            k: self.exponent.map(|k| k.to_string()),
            q: self.base.to_string(),
            eps: crate::numeric::to_exact_decimal(&self.eps)
                .unwrap_or_else(|| self.eps.to_string()),
            value_decimal: render_fixed(&n, &d, DECIMAL_DIGITS, Rounding::Nearest),
            lower_bound: lower,
            upper_bound: upper,
        }
    }
}
