//! Exact line calculus for 3-uniform hypergraphs and finite metric spaces.
//!
//! The line of a vertex pair `(u, v)` in a 3-uniform hypergraph is
//! `{u, v}` plus every third point that forms a hedge with the pair; in a
//! metric space the same notion arises from exact betweenness equalities.
//! This crate computes and enumerates such lines, checks the antichain,
//! trace, span, and binomial-tail properties that drive lower bounds on the
//! number of distinct lines, extracts machine-checkable bound certificates,
//! and searches hypergraph space for minimum-line instances.
//!
//! Everything is exact: rational distances, big-integer tail sums, and
//! `lg`-comparisons carried out as integer power comparisons. All values are
//! immutable after construction and every operation is a pure function.
//!
//! Modules:
//! - [`hypergraph`]: the fundamental types and the line/trace/span calculus
//! - [`metrics`]: metric spaces, betweenness hypergraphs, and generators
//! - [`proofkit`]: the property checkers and bound certificates
//! - [`search`]: exhaustive/sampled searches and canonical forms

pub mod bits;
pub mod hypergraph;
pub mod metrics;
pub mod proofkit;
pub mod search;

pub use hypergraph::{CoreError, Hypergraph3, Line, LineSet, TraceMap, VertexId};
pub use metrics::{Family, Generated, Graph, MetricSpace, MetricError};
pub use proofkit::{BoundCertificate, Branch, CertMode, ProofkitError};
pub use search::{Constraint, SearchError, SearchResult, SearchTask, Shard};
