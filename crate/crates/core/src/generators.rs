//! Seeded instance generators.
//!
//! Random choices come from SplitMix64 (`rand_xoshiro::SplitMix64`, state
//! initialised to the seed). A uniform integer in `lo..=hi` is
//! `lo + x % (hi - lo + 1)` and a Bernoulli draw with probability `p/q` is
//! `x % q < p`, where `x` is the next 64-bit output.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dag, Edge, Instance};
use crate::json::GraphDoc;
use crate::numeric::{decimal_string, rational_from_int, Extended};
use crate::oracle::{counts_by_length, exact_count_bicriteria, DEFAULT_ENUMERATION_CAP};

/// One query attached to a generated graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    AtMost {
        description: String,
        max_length: BigRational,
    },
    Bicriteria {
        description: String,
        l1: BigRational,
        l2: BigRational,
    },
}

/// An exact count computed by an oracle, with a note saying which.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub value: BigUint,
    pub note: String,
}

/// Affine map from item prices to second weights: `w2 = base - scale * price`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transform {
    pub description: String,
    pub g2_scale: String,
    pub g2_base: String,
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub dag: Dag,
    pub queries: Vec<Query>,
    pub ground_truth: Option<GroundTruth>,
    pub transform: Option<Transform>,
}

/// JSON sidecar describing the queries of a generated instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueriesDoc {
    pub queries: Vec<QueryDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<GroundTruthDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<Transform>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryDoc {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_length: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundTruthDoc {
    pub value: String,
    pub note: String,
}

impl GeneratedInstance {
    pub fn graph_doc(&self) -> Result<GraphDoc> {
        GraphDoc::from_dag(&self.dag)
    }

    pub fn queries_doc(&self) -> Result<QueriesDoc> {
        let queries = self
            .queries
            .iter()
            .map(|q| {
                Ok(match q {
                    Query::AtMost {
                        description,
                        max_length,
                    } => QueryDoc {
                        description: description.clone(),
                        max_length: Some(decimal_string(max_length)?),
                        l1: None,
                        l2: None,
                    },
                    Query::Bicriteria {
                        description,
                        l1,
                        l2,
                    } => QueryDoc {
                        description: description.clone(),
                        max_length: None,
                        l1: Some(decimal_string(l1)?),
                        l2: Some(decimal_string(l2)?),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QueriesDoc {
            queries,
            ground_truth: self.ground_truth.as_ref().map(|g| GroundTruthDoc {
                value: g.value.to_string(),
                note: g.note.clone(),
            }),
            transform: self.transform.clone(),
        })
    }
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Chain with parallel edges `M + s_i` and `M - s_i`, `M = max(S)`.
///
/// Paths of length exactly `n M` are the orientations `+-s_i` summing to
/// zero; the attached queries at `n M` and `n M - 1` isolate them.
pub fn gen_partition(set: &[u64]) -> Result<GeneratedInstance> {
    let m = *set.iter().max().ok_or(Error::EmptyInput)?;
    let n = set.len();
    let mut edges = Vec::with_capacity(2 * n);
    for (i, &s) in set.iter().enumerate() {
        edges.push(Edge::new(i, i + 1, int(m + s)));
        edges.push(Edge::new(i, i + 1, int(m - s)));
    }
    let dag = Dag::new(n + 1, 0, n, edges)?;
    let target = n as u64 * m;
    let ground_truth = match counts_by_length(&dag, target) {
        Ok(counts) => Some(GroundTruth {
            value: counts[target as usize].clone(),
            note: "paths of length exactly n*M, by length dynamic programming".into(),
        }),
        Err(e) if e.is_capability() => None,
        Err(e) => return Err(e),
    };
    let mut queries = vec![Query::AtMost {
        description: "at most n*M".into(),
        max_length: int(target),
    }];
    if target > 0 {
        queries.push(Query::AtMost {
            description: "at most n*M - 1".into(),
            max_length: int(target - 1),
        });
    }
    Ok(GeneratedInstance {
        dag,
        queries,
        ground_truth,
        transform: None,
    })
}

/// Chain with a take edge `(w_k, c - (n+1) p_k)` and a skip edge `(0, c)`
/// per item, where `c = max(2P, (n+1) max p)` keeps second weights
/// nonnegative. The query `(W, n c - (n+1) P)` counts subsets of weight at
/// most `W` and price at least `P`.
pub fn gen_knapsack_bicriteria(
    weights: &[i64],
    prices: &[i64],
    capacity: i64,
    target: i64,
) -> Result<GeneratedInstance> {
    if weights.len() != prices.len() {
        return Err(Error::DimensionMismatch(weights.len(), prices.len()));
    }
    if weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::UnrescalableInstance(format!(
            "negative item weight {w}"
        )));
    }
    if let Some(p) = prices.iter().find(|p| p.is_negative()) {
        return Err(Error::UnrescalableInstance(format!(
            "negative item price {p}"
        )));
    }
    let n = weights.len();
    let scale = BigInt::from(n + 1);
    let max_price = BigInt::from(*prices.iter().max().expect("non-empty"));
    let c = (BigInt::from(2) * target).max(&scale * max_price);
    let mut edges = Vec::with_capacity(2 * n);
    for (k, (&w, &p)) in weights.iter().zip(prices).enumerate() {
        let take = &c - &scale * p;
        edges.push(Edge::with_second(
            k,
            k + 1,
            rational_from_int(w),
            BigRational::from_integer(take),
        ));
        edges.push(Edge::with_second(
            k,
            k + 1,
            BigRational::zero(),
            BigRational::from_integer(c.clone()),
        ));
    }
    let dag = Dag::new(n + 1, 0, n, edges)?;
    let l1 = rational_from_int(capacity);
    let l2 = BigRational::from_integer(BigInt::from(n) * &c - &scale * target);
    let ground_truth = match exact_count_bicriteria(
        &dag,
        &Extended::Finite(l1.clone()),
        &Extended::Finite(l2.clone()),
        DEFAULT_ENUMERATION_CAP,
    ) {
        Ok(value) => Some(GroundTruth {
            value,
            note: "feasible subsets, by path enumeration".into(),
        }),
        Err(e) if e.is_capability() => None,
        Err(e) => return Err(e),
    };
    Ok(GeneratedInstance {
        dag,
        queries: vec![Query::Bicriteria {
            description: "weight <= W and price >= P".into(),
            l1,
            l2,
        }],
        ground_truth,
        transform: Some(Transform {
            description:
                "take edge w2 = base - scale*price, skip edge w2 = base; L2 = n*base - scale*P"
                    .into(),
            g2_scale: scale.to_string(),
            g2_base: c.to_string(),
        }),
    })
}

/// Parameters of [`gen_random_layered`].
#[derive(Clone, Debug)]
pub struct LayeredParams {
    pub layers: usize,
    pub width: usize,
    pub edge_prob: BigRational,
    pub w_max: u64,
    pub two_weights: bool,
    pub seed: u64,
}

struct Draws(SplitMix64);

impl Draws {
    fn uniform(&mut self, lo: u64, hi: u64) -> u64 {
        let span = hi - lo + 1;
        lo + self.0.next_u64() % span
    }

    fn bernoulli(&mut self, num: u64, den: u64) -> bool {
        self.0.next_u64() % den < num
    }

    fn weights(&mut self, p: &LayeredParams) -> (BigRational, Option<BigRational>) {
        let w1 = int(self.uniform(1, p.w_max));
        let w2 = p.two_weights.then(|| int(self.uniform(1, p.w_max)));
        (w1, w2)
    }
}

fn edge(tail: usize, head: usize, (w1, w2): (BigRational, Option<BigRational>)) -> Edge {
    Edge { tail, head, w1, w2 }
}

/// Layered DAG: `s`, `layers` layers of `width` vertices, then `t`.
///
/// `s` feeds every vertex of the first layer and every vertex of the last
/// layer feeds `t`; each pair of vertices in consecutive layers is joined
/// with probability `edge_prob`. Weights are uniform in `1..=w_max`. Edges
/// are drawn in order: source edges, layer pairs by (layer, tail, head),
/// sink edges. The result is pruned to vertices on s-t paths.
pub fn gen_random_layered(p: &LayeredParams) -> Result<GeneratedInstance> {
    if p.layers < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "layers",
            reason: "must be >= 2".into(),
        });
    }
    if p.width < 1 {
        return Err(Error::ParameterOutOfRange {
            name: "width",
            reason: "must be >= 1".into(),
        });
    }
    if p.w_max < 1 {
        return Err(Error::ParameterOutOfRange {
            name: "w_max",
            reason: "must be >= 1".into(),
        });
    }
    if !p.edge_prob.is_positive() || p.edge_prob > BigRational::one() {
        return Err(Error::ParameterOutOfRange {
            name: "edge_prob",
            reason: "must be in (0, 1]".into(),
        });
    }
    let (num, den) = match (p.edge_prob.numer().to_u64(), p.edge_prob.denom().to_u64()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::ParameterOutOfRange {
                name: "edge_prob",
                reason: "numerator and denominator must fit in 64 bits".into(),
            })
        }
    };
    let mut draws = Draws(SplitMix64::seed_from_u64(p.seed));
    let id = |layer: usize, i: usize| 1 + layer * p.width + i;
    let n = p.layers * p.width + 2;
    let (s, t) = (0, n - 1);
    let mut edges = Vec::new();
    for i in 0..p.width {
        edges.push(edge(s, id(0, i), draws.weights(p)));
    }
    for layer in 0..p.layers - 1 {
        for i in 0..p.width {
            for j in 0..p.width {
                if draws.bernoulli(num, den) {
                    edges.push(edge(id(layer, i), id(layer + 1, j), draws.weights(p)));
                }
            }
        }
    }
    for i in 0..p.width {
        edges.push(edge(id(p.layers - 1, i), t, draws.weights(p)));
    }
    let dag = Dag::new(n, s, t, edges)?.prune_to_st();
    if !dag.is_reachable() {
        return Err(Error::DegenerateInstance);
    }
    let opt = |instance| match dag.shortest_path_length(instance) {
        Ok(Extended::Finite(x)) => Ok(x),
        Ok(_) => Err(Error::DegenerateInstance),
        Err(e) => Err(e),
    };
    let opt1 = opt(Instance::First)?;
    let factors = [(1, 1), (5, 4), (3, 2), (2, 1)];
    let mut queries: Vec<Query> = factors
        .iter()
        .map(|&(a, b)| Query::AtMost {
            description: format!("{a}/{b} of the shortest length"),
            max_length: &opt1 * BigRational::new(a.into(), b.into()),
        })
        .collect();
    if p.two_weights {
        let three_halves = BigRational::new(3.into(), 2.into());
        queries.push(Query::Bicriteria {
            description: "3/2 of each shortest length".into(),
            l1: &opt1 * &three_halves,
            l2: opt(Instance::Second)? * three_halves,
        });
    }
    Ok(GeneratedInstance {
        dag,
        queries,
        ground_truth: None,
        transform: None,
    })
}

/// One term `coeff * x^power` of a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub power: u64,
    pub coeff: i64,
}

/// Chain `u_0 .. u_J` with `coeff` parallel edges of weight `power` from
/// `u_(j-1)` to `u_j` for every term of factor `j`. The number of paths of
/// length at most `L` is the sum of the product's coefficients up to `x^L`.
pub fn gen_poly_product(factors: &[Vec<Term>]) -> Result<GeneratedInstance> {
    if factors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut edges = Vec::new();
    let mut degree = 0u64;
    for (j, factor) in factors.iter().enumerate() {
        if factor.iter().any(|t| t.coeff < 0) {
            return Err(Error::NegativeCoefficient { factor: j });
        }
        if factor.iter().all(|t| t.coeff == 0) {
            return Err(Error::EmptyFactor { factor: j });
        }
        for term in factor {
            for _ in 0..term.coeff {
                edges.push(Edge::new(j, j + 1, int(term.power)));
            }
        }
        degree += factor
            .iter()
            .filter(|t| t.coeff > 0)
            .map(|t| t.power)
            .max()
            .unwrap_or(0);
    }
    let dag = Dag::new(factors.len() + 1, 0, factors.len(), edges)?;
    let total = dag.total_path_count();
    Ok(GeneratedInstance {
        dag,
        queries: vec![Query::AtMost {
            description: "degree of the product".into(),
            max_length: int(degree),
        }],
        ground_truth: Some(GroundTruth {
            value: total,
            note: "sum of all coefficients, by path counting".into(),
        }),
        transform: None,
    })
}

/// Parses a factor written as `coeff:power` pairs separated by commas, e.g.
/// `1:0,1:1` for `1 + x`.
pub fn parse_factor(text: &str) -> Result<Vec<Term>> {
    text.split(',')
        .map(|part| {
            let bad = || Error::InvalidDecimal(part.to_string());
            let (c, p) = part.trim().split_once(':').ok_or_else(bad)?;
            Ok(Term {
                coeff: c.trim().parse().map_err(|_| bad())?,
                power: p.trim().parse().map_err(|_| bad())?,
            })
        })
        .collect()
}
