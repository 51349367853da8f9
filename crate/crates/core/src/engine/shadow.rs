//! Self-check mode: compares each stored record with one rebuilt from BFS.

use crate::error::EngineError;
use crate::graph::{is_s_club, Graph};
use crate::oracle::cluster_ground_truth;
use crate::records::{Dist, Solution, SolutionSet};
use crate::treedec::{subtree_vertices, NiceTreeDecomposition};

pub(super) fn check_set(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    node: usize,
    s: usize,
    table_s: Dist,
    k: usize,
    set: &SolutionSet,
) -> Result<(), EngineError> {
    let seen = subtree_vertices(ntd, node);
    let bag = &ntd.node(node).bag;
    for sol in set.iter() {
        check_solution(g, &seen, bag, s, table_s, k, sol)
            .map_err(|detail| EngineError::ShadowMismatch { node, detail })?;
    }
    Ok(())
}

fn check_solution(
    g: &Graph,
    seen: &[usize],
    bag: &[usize],
    s: usize,
    table_s: Dist,
    k: usize,
    sol: &Solution,
) -> Result<(), String> {
    let sh = sol.shadow().ok_or("solution carries no member sets")?;
    if sh.open.len() != sol.clusters().len() {
        return Err("open member sets do not line up with the clusters".into());
    }

    let mut label = vec![usize::MAX; g.n()];
    for (i, members) in sh.open.iter().chain(&sh.closed).enumerate() {
        for &v in members {
            if label[v] != usize::MAX {
                return Err(format!("vertex {v} sits in two clusters"));
            }
            label[v] = i;
        }
    }
    if let Some(&v) = seen.iter().find(|&&v| label[v] == usize::MAX) {
        return Err(format!("vertex {v} of the subtree is in no cluster"));
    }
    let cut = g
        .edges()
        .iter()
        .filter(|&&(u, v)| label[u] != usize::MAX && label[v] != usize::MAX && label[u] != label[v])
        .count();
    if cut != sol.counter() {
        return Err(format!("counter {} but {cut} crossing edges", sol.counter()));
    }
    if cut > k {
        return Err(format!("counter {cut} exceeds the budget {k}"));
    }

    for members in &sh.closed {
        if !is_s_club(g, members, s).map_err(|e| e.to_string())? {
            return Err(format!("closed cluster {members:?} is not an s-club"));
        }
    }

    for (rec, members) in sol.clusters().iter().zip(&sh.open) {
        let boundary: Vec<usize> = members.iter().copied().filter(|v| bag.binary_search(v).is_ok()).collect();
        if boundary != rec.boundary() {
            return Err(format!("boundary {:?} but members meet the bag in {boundary:?}", rec.boundary()));
        }
        let truth =
            cluster_ground_truth(g, members, &boundary, table_s as usize).map_err(|e| e.to_string())?;
        if !truth.unresolved.is_empty() {
            return Err(format!("cluster {members:?} holds a dead pair {:?}", truth.unresolved[0]));
        }
        if truth.record != *rec {
            return Err(format!("cluster {members:?}: stored {rec:?}, expected {:?}", truth.record));
        }
    }
    Ok(())
}
