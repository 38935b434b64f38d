//! Natural linear representations of `(k, l)`-sparsity matroids on
//! hypergraphs.
//!
//! The row for edge `e` of a realization is supported on the `k` columns of
//! each endpoint of `e`. [`realization`] builds these matrices over a large
//! prime field or the rationals, [`matroid`] answers rank, independence,
//! basis and circuit queries through them, and [`oracle`] provides the
//! brute-force combinatorial reference they are checked against.
//!
//! Vertices are 0-indexed throughout.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod field;
pub mod hypergraph;
pub mod matroid;
pub mod oracle;
pub mod params;
pub mod realization;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Matrix, PrimeField, Rationals};
pub use hypergraph::{Hyperedge, Hypergraph, VertexId};
pub use matroid::{cross_validate, LinearMatroid, MatroidReport, RetryPolicy};
pub use oracle::{find_orientation, Orientation, SparsityOracle, SparsityViolation};
pub use params::{Arity, Grading, SparsityParams};
pub use realization::{
    build_pattern, realize_graded, realize_k0, realize_kl, specialize_identity, verify_pattern,
    Realization, SupportPattern,
};
