use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("source {0} is outside the subgraph")]
    SourceOutsideSubgraph(usize),
    #[error("not a partition: {0}")]
    NotAPartition(String),
}

/// A tree-decomposition condition that does not hold, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("bag {bag} contains vertex {vertex} outside the graph")]
    BagVertexOutOfRange { bag: usize, vertex: usize },
    #[error("tree edge {0}-{1} references a missing bag")]
    TreeEdgeOutOfRange(usize, usize),
    #[error("bag tree has a cycle through edge {0}-{1}")]
    NotAForest(usize, usize),
    #[error("condition (i): vertex {0} is in no bag")]
    VertexNotCovered(usize),
    #[error("condition (ii): edge {0}-{1} is in no bag")]
    EdgeNotCovered(usize, usize),
    #[error("condition (iii): bags containing vertex {vertex} are disconnected (bags {first} and {second})")]
    Disconnected { vertex: usize, first: usize, second: usize },
}

/// A broken property of a nice tree decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NiceViolation {
    #[error("node {0} has more than two children")]
    TooManyChildren(usize),
    #[error("join node {0} has a child with a different bag")]
    JoinBagMismatch(usize),
    #[error("node {0} does not differ from its child by exactly one vertex")]
    BadTransition(usize),
    #[error("node {0} is a leaf or the root but its bag is not empty")]
    NonEmptyEnd(usize),
    #[error("node {0} is labelled inconsistently with its bag and children")]
    WrongKind(usize),
    #[error("node {0} is not in post-order")]
    Order(usize),
    #[error(transparent)]
    Decomposition(#[from] Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("decomposition does not match the graph: {0}")]
    Mismatch(#[from] NiceViolation),
    #[error("shadow check failed at node {node}: {detail}")]
    ShadowMismatch { node: usize, detail: String },
    #[error("certificate unavailable: {0}")]
    Certificate(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("component with {size} vertices exceeds the brute-force limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
