//! Brute-force reference solver and per-cluster ground truth.
//!
//! Nothing here goes through the decomposition machinery: partitions are
//! enumerated directly and cluster records are rebuilt from plain BFS.

use crate::error::{GraphError, OracleError};
use crate::graph::{connected_components, is_s_club, truncated_distances, Graph, Partition, UNREACHABLE};
use crate::records::{
    request_from_distances, sort_rows, ClusterRecord, Dist, DistTable, Request, RequestOutcome, INF,
};

/// Largest component the enumeration accepts by default (Bell(12) ≈ 4.2M).
pub const DEFAULT_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub min_deletions: usize,
    pub witness: Partition,
}

pub fn min_deletions_bruteforce(g: &Graph, s: usize) -> Result<OracleResult, OracleError> {
    min_deletions_with_limit(g, s, DEFAULT_LIMIT)
}

/// Exact minimum number of crossing edges over all partitions of `g` into
/// s-clubs.
///
/// Each connected component is solved on its own (merging across components
/// never pays off). Within a component, set partitions are enumerated as
/// restricted-growth strings in lexicographic order; the first partition
/// reaching the minimum is the witness.
pub fn min_deletions_with_limit(g: &Graph, s: usize, limit: usize) -> Result<OracleResult, OracleError> {
    let components = connected_components(g);
    let mut blocks = Vec::new();
    let mut total = 0;
    for comp in components.blocks() {
        if comp.len() > limit {
            return Err(OracleError::TooLarge { size: comp.len(), limit });
        }
        let (cost, parts) = solve_component(g, comp, s)?;
        total += cost;
        blocks.extend(parts);
    }
    Ok(OracleResult { min_deletions: total, witness: Partition::new(g.n(), blocks)? })
}

pub fn decide_bruteforce(g: &Graph, s: usize, k: usize) -> Result<bool, OracleError> {
    Ok(min_deletions_bruteforce(g, s)?.min_deletions <= k)
}

struct Search<'a> {
    g: &'a Graph,
    verts: &'a [usize],
    /// `earlier[i]` lists positions `j < i` adjacent to `verts[i]`.
    earlier: Vec<Vec<usize>>,
    s: usize,
    labels: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
}

impl Search<'_> {
    fn go(&mut self, i: usize, blocks: usize, cost: usize) -> Result<(), GraphError> {
        if let Some((best, _)) = &self.best {
            if cost >= *best {
                return Ok(());
            }
        }
        if i == self.verts.len() {
            for b in 0..blocks {
                let members: Vec<usize> =
                    (0..i).filter(|&j| self.labels[j] == b).map(|j| self.verts[j]).collect();
                if !is_s_club(self.g, &members, self.s)? {
                    return Ok(());
                }
            }
            self.best = Some((cost, self.labels.clone()));
            return Ok(());
        }
        for label in 0..=blocks {
            self.labels[i] = label;
            let extra = self.earlier[i].iter().filter(|&&j| self.labels[j] != label).count();
            let next_blocks = if label == blocks { blocks + 1 } else { blocks };
            self.go(i + 1, next_blocks, cost + extra)?;
        }
        Ok(())
    }
}

fn solve_component(g: &Graph, comp: &[usize], s: usize) -> Result<(usize, Vec<Vec<usize>>), GraphError> {
    let pos = |v: usize| comp.binary_search(&v).ok();
    let earlier = comp
        .iter()
        .enumerate()
        .map(|(i, &v)| g.neighbors(v).iter().filter_map(|&u| pos(u)).filter(|&j| j < i).collect())
        .collect();
    let mut search = Search { g, verts: comp, earlier, s, labels: vec![0; comp.len()], best: None };
    search.go(0, 0, 0)?;
    let (cost, labels) = search.best.expect("singletons are always feasible");
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (j, &l) in labels.iter().enumerate() {
        blocks[l].push(comp[j]);
    }
    Ok((cost, blocks))
}

/// Reference record for cluster `c` seen through `boundary`, plus the
/// outcomes of any far-apart interior class pairs whose request is
/// fulfilled or all-⋆ (a stored solution should never have any).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub record: ClusterRecord,
    pub unresolved: Vec<(usize, usize, RequestOutcome)>,
}

/// Rebuilds the distance table, class rows and requests of `c` from BFS in
/// `g[c]`, truncating at `s`.
pub fn cluster_ground_truth(
    g: &Graph,
    c: &[usize],
    boundary: &[usize],
    s: usize,
) -> Result<GroundTruth, GraphError> {
    let s_dist = Dist::try_from(s).expect("s fits the distance alphabet");
    let mut boundary = boundary.to_vec();
    boundary.sort_unstable();
    let mut interior: Vec<usize> = c.iter().copied().filter(|v| boundary.binary_search(v).is_err()).collect();
    interior.sort_unstable();
    let to_dist = |d: usize| if d == UNREACHABLE { INF } else { d as Dist };

    let from_boundary = truncated_distances(g, &boundary, c, s)?;
    let dist = DistTable::from_fn(boundary.len(), |i, j| to_dist(from_boundary[i][boundary[j]]));

    let from_interior = truncated_distances(g, &interior, c, s)?;
    let mut rows: Vec<Vec<Dist>> =
        from_interior.iter().map(|row| boundary.iter().map(|&a| to_dist(row[a])).collect()).collect();
    let class_of = sort_rows(&mut rows);

    let mut pairs = Vec::new();
    for (i, row) in from_interior.iter().enumerate() {
        for (j, &z) in interior.iter().enumerate().skip(i + 1) {
            if row[z] == UNREACHABLE {
                let (a, b) = (class_of[i], class_of[j]);
                pairs.push((a.min(b), a.max(b)));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut requests = Vec::new();
    let mut unresolved = Vec::new();
    for (a, b) in pairs {
        match request_from_distances(&rows[a], &rows[b], &dist, s_dist) {
            RequestOutcome::Pending(cells) => requests.push(Request::new(a, b, cells)),
            other => unresolved.push((a, b, other)),
        }
    }
    Ok(GroundTruth { record: ClusterRecord::new(boundary, dist, rows, requests), unresolved })
}
