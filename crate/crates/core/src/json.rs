//! Graph JSON interchange:
//!
//! ```json
//! { "n": 3, "s": 0, "t": 2,
//!   "edges": [ { "tail": 0, "head": 1, "w1": "1.5", "w2": "2" } ] }
//! ```
//!
//! Weights are decimal strings (plain JSON integers are accepted on input);
//! `w2` is optional but must be present on all edges or on none. Output is
//! canonical: weights are written in shortest exact decimal form, so
//! serialising a parsed document is a fixed point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dag, Edge};
use crate::numeric::{decimal_string, parse_decimal};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub tail: usize,
    pub head: usize,
    pub w1: Weight,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w2: Option<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Text(String),
    Integer(i64),
}

impl Weight {
    fn parse(&self) -> Result<num_rational::BigRational> {
        match self {
            Weight::Text(s) => parse_decimal(s),
            Weight::Integer(i) => Ok(crate::numeric::rational_from_int(*i)),
        }
    }
}

impl GraphDoc {
    pub fn from_dag(dag: &Dag) -> Result<GraphDoc> {
        let edges = dag
            .edges()
            .iter()
            .map(|e| {
                Ok(EdgeDoc {
                    tail: e.tail,
                    head: e.head,
                    w1: Weight::Text(decimal_string(&e.w1)?),
                    w2: e
                        .w2
                        .as_ref()
                        .map(decimal_string)
                        .transpose()?
                        .map(Weight::Text),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphDoc {
            n: dag.vertex_count(),
            s: dag.source(),
            t: dag.sink(),
            edges,
        })
    }

    /// `validate_and_sort` on a parsed document.
    pub fn to_dag(&self) -> Result<Dag> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    tail: e.tail,
                    head: e.head,
                    w1: e.w1.parse()?,
                    w2: e.w2.as_ref().map(Weight::parse).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Dag::new(self.n, self.s, self.t, edges)
    }
}

pub fn parse_graph(text: &str) -> Result<Dag> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    doc.to_dag()
}

/// Canonical pretty-printed JSON for a graph.
pub fn graph_to_json(dag: &Dag) -> Result<String> {
    let doc = GraphDoc::from_dag(dag)?;
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Json(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_strings_and_integers() {
        let text = r#"{"n":3,"s":0,"t":2,"edges":[
            {"tail":0,"head":1,"w1":"1.50","w2":"2"},
            {"tail":1,"head":2,"w1":3,"w2":"0.25"}]}"#;
        let dag = parse_graph(text).unwrap();
        assert_eq!(dag.edge_count(), 2);
        assert!(dag.has_second_weights());
        let out = graph_to_json(&dag).unwrap();
        assert!(out.contains("\"1.5\""));
        assert!(out.contains("\"3\""));
        assert_eq!(graph_to_json(&parse_graph(&out).unwrap()).unwrap(), out);
    }

    #[test]
    fn reports_bad_input() {
        assert!(matches!(parse_graph("{"), Err(Error::Json(_))));
        let bad = r#"{"n":2,"s":0,"t":1,"edges":[{"tail":0,"head":1,"w1":"1e3"}]}"#;
        assert!(matches!(parse_graph(bad), Err(Error::InvalidDecimal(_))));
        let cyc = r#"{"n":2,"s":0,"t":1,"edges":[
            {"tail":0,"head":1,"w1":"1"},{"tail":1,"head":0,"w1":"1"}]}"#;
        assert_eq!(parse_graph(cyc).unwrap_err(), Error::CyclicGraph);
    }
}
