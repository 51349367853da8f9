use std::sync::Arc;

use crate::error::EngineError;
use crate::graph::{crossing_edges, is_s_club, Graph, Partition};
use crate::records::{Provenance, Step};
use crate::treedec::Dsu;

/// A partition into s-clubs and the edges it cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub partition: Partition,
    pub deleted: Vec<(usize, usize)>,
}

/// Rebuilds the partition behind a root solution.
///
/// Every introduce step that put a vertex into an existing cluster names a
/// boundary vertex of that cluster; merging the two is enough, because the
/// members of an open cluster stay linked through its boundary.
pub fn reconstruct_certificate(g: &Graph, root: &Arc<Provenance>) -> Result<Certificate, EngineError> {
    let mut dsu = Dsu::new(g.n());
    let mut seen = vec![false; g.n()];
    let mut stack: Vec<&Provenance> = vec![root];
    while let Some(p) = stack.pop() {
        match &p.step {
            Step::Leaf => {}
            Step::Introduce { vertex, joined, prev } => {
                if *vertex >= g.n() {
                    return Err(EngineError::Certificate(format!("vertex {vertex} out of range")));
                }
                seen[*vertex] = true;
                if let Some(u) = joined {
                    dsu.union(*vertex, *u);
                }
                stack.push(prev);
            }
            Step::Forget { prev, .. } => stack.push(prev),
            Step::Join { left, right } => {
                stack.push(left);
                stack.push(right);
            }
        }
    }
    if let Some(v) = seen.iter().position(|&x| !x) {
        return Err(EngineError::Certificate(format!("vertex {v} never introduced")));
    }
    let labels: Vec<usize> = (0..g.n()).map(|v| dsu.find(v)).collect();
    let partition = Partition::from_labels(&labels);
    let deleted = crossing_edges(g, &partition).map_err(|e| EngineError::Certificate(e.to_string()))?;
    Ok(Certificate { partition, deleted })
}

/// Independent check: every block is an s-club and the cut matches.
pub fn verify_certificate(
    g: &Graph,
    s: usize,
    expected_cut: usize,
    cert: &Certificate,
) -> Result<(), EngineError> {
    let fail = |msg: String| Err(EngineError::Certificate(msg));
    for block in cert.partition.blocks() {
        match is_s_club(g, block, s) {
            Ok(true) => {}
            Ok(false) => return fail(format!("block {block:?} is not an {s}-club")),
            Err(e) => return fail(e.to_string()),
        }
    }
    let cut = crossing_edges(g, &cert.partition).map_err(|e| EngineError::Certificate(e.to_string()))?;
    if cut != cert.deleted || cut.len() != expected_cut {
        return fail(format!("partition cuts {} edges, expected {expected_cut}", cut.len()));
    }
    Ok(())
}
