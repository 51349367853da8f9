//! Exact solver for s-club edge deletion on graphs of bounded treewidth.
//!
//! Given a graph `G`, a radius `s ≥ 2` and a budget `k`, decide whether at
//! most `k` edge deletions leave every connected component with diameter at
//! most `s` (equivalently, whether `V` splits into s-clubs cutting at most
//! `k` edges). The solver runs a dynamic program over a nice tree
//! decomposition; a brute-force oracle is included for cross-checking.

pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod records;
pub mod treedec;

pub use engine::{
    run, run_observed, solve, solve_observed, BagStat, Certificate, DpResult, Instance, RunOptions, RunStats,
};
pub use error::{EngineError, GraphError, NiceViolation, OracleError, Violation};
pub use graph::{crossing_edges, is_s_club, Graph, Partition};
pub use oracle::{min_deletions_bruteforce, OracleResult};
pub use treedec::{
    heuristic_decomposition, nicify, NiceNode, NiceTreeDecomposition, NodeKind, Strategy, TreeDecomposition,
};
