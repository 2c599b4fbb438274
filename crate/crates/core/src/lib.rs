//! Exact and approximate counting of s-t paths of bounded length in
//! edge-weighted directed acyclic multigraphs.
//!
//! * [`graph`] validates graphs, orders and prunes them, and computes
//!   shortest paths and total path counts.
//! * [`oracle`] holds exponential-time and pseudo-polynomial exact
//!   references.
//! * [`fptas`] approximates the number of paths of length at most `L`
//!   within a factor `1 + eps`.
//! * [`bicriteria`] handles two weight functions with two budgets, both via
//!   a geometric budget grid and via exact integer budgets.
//! * [`generators`] builds seeded and structured test instances.

pub mod bicriteria;
pub mod error;
pub mod fptas;
pub mod generators;
pub mod graph;
pub mod grid;
pub mod json;
pub mod numeric;
pub mod oracle;
pub mod staircase;

pub use error::{Error, Result};
pub use fptas::{build_staircase, CountEstimate, Staircase};
pub use graph::{Dag, Edge, Instance, VertexId};
pub use grid::QGrid;
pub use numeric::{parse_decimal, DyadicBase, Extended};
