use crate::graph::NodeId;

/// Errors raised by graph construction, the decision procedures, and the oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid node name {0:?}: names must match [A-Za-z0-9_.]+")]
    InvalidName(String),

    #[error("more than one edge between {0} and {1}")]
    DuplicateEdge(NodeId, NodeId),

    #[error("self-loop on {0}")]
    SelfLoop(NodeId),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("graph contains a directed cycle")]
    DirectedCycle,

    #[error("graph is not a valid {0}: {1}")]
    InvalidClass(&'static str, String),

    #[error("inconsistent background knowledge: {0}")]
    InconsistentKnowledge(String),

    #[error("node sets must be disjoint; {0} appears in more than one")]
    Overlap(NodeId),

    #[error("{0} must be nonempty")]
    EmptySet(&'static str),

    #[error("{0} -- {1} is undirected, so the truncated factorization does not apply")]
    NotTruncatable(NodeId, NodeId),

    #[error("not a path in the graph: {0}")]
    NotAPath(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("conditioning on a zero-probability event in factor f({0})")]
    DegenerateConditioning(String),

    #[error("joint table of {0} configurations exceeds the cap of {1}")]
    ConfigurationCap(u128, usize),

    #[error("model is not unit-variance: Var({0}) = {1}")]
    NotUnitVariance(NodeId, f64),

    #[error("regression design for {0} is singular")]
    SingularDesign(String),

    #[error("data: {0}")]
    Data(String),

    #[error("malformed formula: {0}")]
    Formula(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
