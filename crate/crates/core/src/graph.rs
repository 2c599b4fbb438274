//! Directed acyclic multigraphs with one or two exact rational weights per
//! edge and a distinguished source and sink.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::Extended;

pub type VertexId = usize;

/// Which of the two weight functions to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instance {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub w1: BigRational,
    pub w2: Option<BigRational>,
}

impl Edge {
    pub fn new(tail: VertexId, head: VertexId, w1: BigRational) -> Self {
        Edge {
            tail,
            head,
            w1,
            w2: None,
        }
    }

    pub fn with_second(tail: VertexId, head: VertexId, w1: BigRational, w2: BigRational) -> Self {
        Edge {
            tail,
            head,
            w1,
            w2: Some(w2),
        }
    }

    /// Weight under the given instance, if present.
    pub fn weight(&self, instance: Instance) -> Option<&BigRational> {
        match instance {
            Instance::First => Some(&self.w1),
            Instance::Second => self.w2.as_ref(),
        }
    }
}

/// A validated DAG with a cached topological order.
///
/// Immutable once built. Parallel edges are allowed, self-loops are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    s: VertexId,
    t: VertexId,
    edges: Vec<Edge>,
    topo: Vec<VertexId>,
    position: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    pruned: bool,
    reachable: bool,
    original_ids: Vec<VertexId>,
}

impl Dag {
    /// Validates a raw description and computes a topological order.
    ///
    /// Ties in the order are broken by the smallest vertex id, so the order
    /// is a pure function of the input.
    pub fn new(n: usize, s: VertexId, t: VertexId, edges: Vec<Edge>) -> Result<Dag> {
        for v in [s, t] {
            if v >= n {
                return Err(Error::DanglingVertexId { vertex: v, n });
            }
        }
        if s == t {
            return Err(Error::SourceEqualsSink(s));
        }
        let has_second = edges.first().is_some_and(|e| e.w2.is_some());
        for (i, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v >= n {
                    return Err(Error::DanglingVertexId { vertex: v, n });
                }
            }
            if e.tail == e.head {
                return Err(Error::SelfLoop {
                    edge: i,
                    vertex: e.tail,
                });
            }
            if e.w1.is_negative() || e.w2.as_ref().is_some_and(|w| w.is_negative()) {
                return Err(Error::NegativeWeight { edge: i });
            }
            if e.w2.is_some() != has_second {
                return Err(Error::PartialSecondWeights { edge: i });
            }
        }

        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            outgoing[e.tail].push(i);
            incoming[e.head].push(i);
        }
        let mut indegree: Vec<usize> = incoming.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<VertexId>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            topo.push(v);
            for &ei in &outgoing[v] {
                let h = edges[ei].head;
                indegree[h] -= 1;
                if indegree[h] == 0 {
                    ready.push(Reverse(h));
                }
            }
        }
        if topo.len() != n {
            return Err(Error::CyclicGraph);
        }
        let mut position = vec![0; n];
        for (i, &v) in topo.iter().enumerate() {
            position[v] = i;
        }
        let mut dag = Dag {
            n,
            s,
            t,
            edges,
            topo,
            position,
            incoming,
            outgoing,
            pruned: false,
            reachable: false,
            original_ids: (0..n).collect(),
        };
        let (fwd, bwd) = dag.reach_sets();
        dag.reachable = fwd[t];
        dag.pruned = dag.reachable
            && (0..n).all(|v| fwd[v] && bwd[v])
            && dag.topo.first() == Some(&s)
            && dag.topo.last() == Some(&t);
        Ok(dag)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> VertexId {
        self.s
    }

    pub fn sink(&self) -> VertexId {
        self.t
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn topo_order(&self) -> &[VertexId] {
        &self.topo
    }

    /// 0-based position of `v` in the topological order.
    pub fn topo_position(&self, v: VertexId) -> usize {
        self.position[v]
    }

    /// Indices of edges entering `v`, in ascending edge order.
    pub fn incoming(&self, v: VertexId) -> &[usize] {
        &self.incoming[v]
    }

    pub fn outgoing(&self, v: VertexId) -> &[usize] {
        &self.outgoing[v]
    }

    /// True when every vertex lies on an s-t path, or the graph is the
    /// two-vertex result of pruning an instance without s-t paths.
    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    /// True when `t` is reachable from `s`.
    pub fn is_reachable(&self) -> bool {
        self.reachable
    }

    /// Vertex ids of the graph this one was pruned from (identity otherwise).
    pub fn original_ids(&self) -> &[VertexId] {
        &self.original_ids
    }

    pub fn has_second_weights(&self) -> bool {
        self.edges.first().is_some_and(|e| e.w2.is_some())
    }

    /// True when every first-instance weight is an integer.
    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|e| e.w1.is_integer())
    }

    fn reach_sets(&self) -> (Vec<bool>, Vec<bool>) {
        let mut fwd = vec![false; self.n];
        fwd[self.s] = true;
        for &v in &self.topo {
            if fwd[v] {
                for &ei in &self.outgoing[v] {
                    fwd[self.edges[ei].head] = true;
                }
            }
        }
        let mut bwd = vec![false; self.n];
        bwd[self.t] = true;
        for &v in self.topo.iter().rev() {
            if bwd[v] {
                for &ei in &self.incoming[v] {
                    bwd[self.edges[ei].tail] = true;
                }
            }
        }
        (fwd, bwd)
    }

    /// Restricts the graph to vertices and edges that lie on some s-t path.
    ///
    /// Surviving vertices are renumbered densely in ascending order of their
    /// old ids and edges keep their relative order, so pruning is idempotent.
    /// When `t` is unreachable the result is the two vertices `s`, `t` with
    /// no edges and [`Dag::is_reachable`] false.
    pub fn prune_to_st(&self) -> Dag {
        if self.pruned {
            return self.clone();
        }
        let (fwd, bwd) = self.reach_sets();
        let keep: Vec<bool> = if self.reachable {
            (0..self.n).map(|v| fwd[v] && bwd[v]).collect()
        } else {
            (0..self.n).map(|v| v == self.s || v == self.t).collect()
        };
        let mut new_id = vec![usize::MAX; self.n];
        let mut original_ids = Vec::new();
        for v in (0..self.n).filter(|&v| keep[v]) {
            new_id[v] = original_ids.len();
            original_ids.push(self.original_ids[v]);
        }
        let edges: Vec<Edge> = if self.reachable {
            self.edges
                .iter()
                .filter(|e| keep[e.tail] && keep[e.head])
                .map(|e| Edge {
                    tail: new_id[e.tail],
                    head: new_id[e.head],
                    w1: e.w1.clone(),
                    w2: e.w2.clone(),
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut dag = Dag::new(original_ids.len(), new_id[self.s], new_id[self.t], edges)
            .expect("a subgraph of a valid DAG is valid");
        dag.original_ids = original_ids;
        dag.pruned = true;
        dag
    }

    /// Shortest s-v distances under one instance, `+inf` where unreachable.
    pub fn distances_from_source(&self, instance: Instance) -> Result<Vec<Extended>> {
        if instance == Instance::Second && !self.has_second_weights() {
            return Err(Error::InstanceTwoAbsent);
        }
        let mut dist = vec![Extended::Infinity; self.n];
        dist[self.s] = Extended::zero();
        for &v in &self.topo {
            if v == self.s {
                continue;
            }
            let best = self.incoming[v]
                .iter()
                .map(|&ei| {
                    let e = &self.edges[ei];
                    dist[e.tail].plus(e.weight(instance).expect("checked above"))
                })
                .min()
                .unwrap_or(Extended::Infinity);
            dist[v] = best;
        }
        Ok(dist)
    }

    /// Length of a shortest s-t path under one instance (`OPT`), or `+inf`.
    pub fn shortest_path_length(&self, instance: Instance) -> Result<Extended> {
        if instance == Instance::Second && !self.has_second_weights() {
            return Err(Error::InstanceTwoAbsent);
        }
        if self.edges.is_empty() {
            return Ok(Extended::Infinity);
        }
        Ok(self.distances_from_source(instance)?.swap_remove(self.t))
    }

    /// Number of s-v paths for every vertex; parallel edges count separately.
    pub fn path_counts_from_source(&self) -> Vec<BigUint> {
        let mut count = vec![BigUint::zero(); self.n];
        count[self.s] = BigUint::one();
        for &v in &self.topo {
            if v == self.s {
                continue;
            }
            let c: BigUint = self.incoming[v]
                .iter()
                .map(|&ei| &count[self.edges[ei].tail])
                .sum();
            count[v] = c;
        }
        count
    }

    /// Exact number of distinct s-t paths.
    pub fn total_path_count(&self) -> BigUint {
        self.path_counts_from_source().swap_remove(self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_from_int;

    fn e(tail: usize, head: usize, w: i64) -> Edge {
        Edge::new(tail, head, rational_from_int(w))
    }

    fn diamond() -> Dag {
        // s=0, a=1, b=2, t=3
        Dag::new(
            4,
            0,
            3,
            vec![e(0, 1, 1), e(0, 2, 3), e(1, 3, 1), e(2, 3, 3)],
        )
        .unwrap()
    }

    fn complete(n: usize) -> Dag {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| e(i, j, 1)))
            .collect();
        Dag::new(n, 0, n - 1, edges).unwrap()
    }

    #[test]
    fn single_edge() {
        let d = Dag::new(2, 0, 1, vec![e(0, 1, 5)]).unwrap();
        assert_eq!(d.topo_order(), &[0, 1]);
        assert!(d.is_pruned());
        assert_eq!(
            d.shortest_path_length(Instance::First).unwrap(),
            rational_from_int(5).into()
        );
    }

    #[test]
    fn rejects_cycles_loops_and_bad_ids() {
        assert_eq!(
            Dag::new(2, 0, 1, vec![e(1, 0, 1), e(0, 1, 1)]).unwrap_err(),
            Error::CyclicGraph
        );
        assert!(matches!(
            Dag::new(3, 0, 2, vec![e(1, 1, 1)]).unwrap_err(),
            Error::SelfLoop { edge: 0, vertex: 1 }
        ));
        assert_eq!(
            Dag::new(2, 1, 1, vec![]).unwrap_err(),
            Error::SourceEqualsSink(1)
        );
        assert!(matches!(
            Dag::new(2, 0, 1, vec![e(0, 5, 1)]).unwrap_err(),
            Error::DanglingVertexId { vertex: 5, n: 2 }
        ));
        assert!(matches!(
            Dag::new(2, 0, 1, vec![e(0, 1, -1)]).unwrap_err(),
            Error::NegativeWeight { edge: 0 }
        ));
        let mixed = vec![
            Edge::with_second(0, 1, rational_from_int(1), rational_from_int(1)),
            e(0, 1, 2),
        ];
        assert!(matches!(
            Dag::new(2, 0, 1, mixed).unwrap_err(),
            Error::PartialSecondWeights { edge: 1 }
        ));
    }

    #[test]
    fn diamond_order_and_distances() {
        let d = diamond();
        assert_eq!(d.topo_order().first(), Some(&0));
        assert_eq!(d.topo_order().last(), Some(&3));
        assert_eq!(
            d.shortest_path_length(Instance::First).unwrap(),
            rational_from_int(2).into()
        );
        assert_eq!(d.total_path_count(), BigUint::from(2u32));
        assert_eq!(
            d.shortest_path_length(Instance::Second).unwrap_err(),
            Error::InstanceTwoAbsent
        );
    }

    #[test]
    fn chain_length() {
        let d = Dag::new(4, 0, 3, vec![e(0, 1, 1), e(1, 2, 2), e(2, 3, 3)]).unwrap();
        assert_eq!(
            d.shortest_path_length(Instance::First).unwrap(),
            rational_from_int(6).into()
        );
    }

    #[test]
    fn prune_drops_isolated_and_dead_ends() {
        let mut edges = diamond().edges().to_vec();
        edges.push(e(4, 5, 1));
        let d = Dag::new(6, 0, 3, edges).unwrap();
        assert!(!d.is_pruned());
        let p = d.prune_to_st();
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.edges(), diamond().edges());
        assert_eq!(p.original_ids(), &[0, 1, 2, 3]);

        // s->a with a dead end, plus s->t
        let d = Dag::new(3, 0, 2, vec![e(0, 1, 1), e(0, 2, 4)]).unwrap();
        let p = d.prune_to_st();
        assert_eq!(p.vertex_count(), 2);
        assert_eq!(p.edges(), &[e(0, 1, 4)]);
        assert_eq!(p.original_ids(), &[0, 2]);
    }

    #[test]
    fn prune_unreachable_sink() {
        let d = Dag::new(4, 0, 3, vec![e(0, 1, 1), e(2, 3, 1)]).unwrap();
        let p = d.prune_to_st();
        assert!(!p.is_reachable());
        assert_eq!(p.vertex_count(), 2);
        assert_eq!(p.edge_count(), 0);
        assert_eq!(
            p.shortest_path_length(Instance::First).unwrap(),
            Extended::Infinity
        );
        assert_eq!(p.total_path_count(), BigUint::zero());
    }

    #[test]
    fn prune_relabels_when_source_has_larger_id() {
        let d = Dag::new(3, 2, 0, vec![e(2, 1, 1), e(1, 0, 1)]).unwrap();
        assert!(d.is_pruned());
        assert_eq!(d.topo_order(), &[2, 1, 0]);
        assert_eq!(d.prune_to_st(), d);
    }

    #[test]
    fn parallel_edges_count_separately() {
        let d = Dag::new(2, 0, 1, vec![e(0, 1, 1), e(0, 1, 2)]).unwrap();
        assert_eq!(d.total_path_count(), BigUint::from(2u32));
    }

    #[test]
    fn complete_dag_counts() {
        assert_eq!(complete(5).total_path_count(), BigUint::from(8u32));
        assert_eq!(complete(20).total_path_count(), BigUint::from(262_144u32));
        for n in 3..=30 {
            assert_eq!(complete(n).total_path_count(), BigUint::one() << (n - 2));
        }
    }
}
