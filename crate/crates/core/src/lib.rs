//! Causal effect identification in maximally oriented partially directed
//! acyclic graphs (MPDAGs).
//!
//! An MPDAG represents a set of DAGs: a Markov equivalence class refined by
//! background knowledge. [`identify`] decides whether `f(y | do(x))` is the same
//! for every DAG in that set and, if so, returns a formula in terms of the
//! observational density. [`check_adjustment`] and [`find_adjustment_set`]
//! cover covariate adjustment; the [`oracle`] module holds the brute-force
//! machinery used to test all of it.

pub mod error;
pub mod estimate;
pub mod formula;
pub mod graph;
pub mod identify;
pub mod meek;
pub mod oracle;
pub mod ordering;
pub mod paths;

pub use error::{Error, Result};
pub use estimate::{gaussian_effect, Dataset};
pub use formula::{Factor, IdFormula, Style};
pub use graph::{node_set, Edge, EdgeKind, GraphClass, NodeId, NodeSet, Pdag, Relation};
pub use identify::{
    check_adjustment, find_adjustment_set, identification_formula, identify, truncated_factorization, Adjustment,
    Identification, NoAdjustmentReason,
};
pub use meek::{close, is_mpdag, BackgroundKnowledge};
pub use ordering::{bucket_decomposition, pco, OrderedBuckets};
pub use paths::{
    amenability_witness, classify_path, d_separated, exists_possibly_causal, exists_proper_pcp_starting_undirected,
    forbidden_set, Path, PathStatus,
};
