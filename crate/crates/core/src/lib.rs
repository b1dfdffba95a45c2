//! Solver toolkit for the minimum W-separator problem: delete as few vertices
//! as possible from an undirected graph so that every remaining connected
//! component has at most W vertices.
//!
//! The crate is organised around that single problem:
//!
//! * [`graph`]: compact undirected graphs, vertex sets, component queries,
//!   and duplicate-free enumeration of connected fixed-size subgraphs;
//! * [`separator`]: problem instances, search points, exact branch-and-bound
//!   baselines, and packings of disjoint oversized subgraphs;
//! * [`lp`]: the exact rational relaxation (hit every connected subgraph on
//!   W+1 vertices), solved by lazy constraint generation, plus persistence
//!   analysis of its optima;
//! * [`reducible`]: head/crown pairs certified by small flow networks, the
//!   reductions they license, and packings extracted from them;
//! * [`emo`]: a multi-objective evolutionary engine whose archives keep the
//!   Pareto front of LP-informed fitness vectors, with instrumented traces.
//!
//! All numeric reasoning that decides dominance or feasibility is exact:
//! values are integers or arbitrary-precision rationals throughout.

pub mod emo;
pub mod graph;
pub mod lp;
pub mod reducible;
pub mod separator;

pub use graph::{Graph, GraphParseError, Vertex, VertexSet};
pub use separator::{Instance, SearchPoint};
