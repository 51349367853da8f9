//! The four bag handlers.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::graph::Graph;
use crate::records::{
    dist_add, request_from_distances, sort_rows, truncate, ClusterRecord, Dist, DistTable, Provenance,
    Request, RequestOutcome, Shadow, Solution, SolutionSet, Step, INF,
};

/// Everything a handler needs besides the child solution sets.
pub struct Ctx<'a> {
    pub graph: &'a Graph,
    pub s: Dist,
    pub k: usize,
    pub node: usize,
    /// Sorted bag of the node being processed.
    pub bag: &'a [usize],
    pub provenance: bool,
    pub shadow: bool,
    pub pool: Option<&'a ThreadPool>,
}

impl Ctx<'_> {
    /// Applies `f` to every item and inserts the produced solutions in item
    /// order, so the result does not depend on the worker count.
    fn expand<T, F>(&self, items: &[T], f: F) -> SolutionSet
    where
        T: Sync,
        F: Fn(&T, &mut Vec<Solution>) + Sync,
    {
        let mut set = SolutionSet::new();
        match self.pool {
            Some(pool) if items.len() > 1 => {
                let batches: Vec<Vec<Solution>> = pool.install(|| {
                    items
                        .par_iter()
                        .map(|item| {
                            let mut out = Vec::new();
                            f(item, &mut out);
                            out
                        })
                        .collect()
                });
                for batch in batches {
                    set.extend(batch);
                }
            }
            _ => {
                let mut out = Vec::new();
                for item in items {
                    f(item, &mut out);
                    set.extend(out.drain(..));
                }
            }
        }
        set
    }

    fn trace(&self, step: impl FnOnce() -> Step) -> Option<Arc<Provenance>> {
        self.provenance.then(|| Arc::new(Provenance { node: self.node, step: step() }))
    }
}

pub fn handle_leaf(ctx: &Ctx<'_>) -> SolutionSet {
    let mut set = SolutionSet::new();
    let shadow = ctx.shadow.then(Shadow::default);
    set.insert(Solution::assemble(Vec::new(), 0, ctx.trace(|| Step::Leaf), shadow));
    set
}

pub fn handle_introduce(ctx: &Ctx<'_>, v: usize, child: SolutionSet) -> SolutionSet {
    let g = ctx.graph;
    let bag_neighbors: Vec<usize> = ctx.bag.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
    let items = child.into_vec();
    ctx.expand(&items, |sol, out| {
        let prev = sol.provenance();
        let step = |joined: Option<usize>| Step::Introduce {
            vertex: v,
            joined,
            prev: prev.expect("provenance enabled").clone(),
        };

        // v opens its own cluster: every bag neighbour is now a crossing edge.
        let counter = sol.counter() + bag_neighbors.len();
        if counter <= ctx.k {
            let mut clusters = sol.clusters().to_vec();
            clusters.push(ClusterRecord::singleton(v));
            let shadow = sol.shadow().map(|sh| {
                let mut sh = sh.clone();
                sh.open.push(vec![v]);
                sh
            });
            out.push(Solution::assemble(clusters, counter, ctx.trace(|| step(None)), shadow));
        }

        // v joins an existing cluster.
        for (ci, rec) in sol.clusters().iter().enumerate() {
            let inside = bag_neighbors.iter().filter(|&&u| rec.position(u).is_some()).count();
            let counter = sol.counter() + bag_neighbors.len() - inside;
            if counter > ctx.k {
                continue;
            }
            let Some(grown) = introduce_into(g, rec, v, ctx.s) else { continue };
            let mut clusters = sol.clusters().to_vec();
            clusters[ci] = grown;
            let shadow = sol.shadow().map(|sh| {
                let mut sh = sh.clone();
                let members = &mut sh.open[ci];
                members.insert(members.binary_search(&v).unwrap_err(), v);
                sh
            });
            let joined = rec.boundary()[0];
            out.push(Solution::assemble(clusters, counter, ctx.trace(|| step(Some(joined))), shadow));
        }
    })
}

/// Adds boundary vertex `v` to the cluster described by `rec`.
///
/// New shortest paths must pass through `v`, and `v` only touches the
/// boundary, so distances to `v` come from one relaxation over its boundary
/// neighbours and every other entry is relaxed once through `v`.
pub fn introduce_into(g: &Graph, rec: &ClusterRecord, v: usize, s: Dist) -> Option<ClusterRecord> {
    let old = rec.boundary();
    let b = old.len();
    let nbr: Vec<usize> = (0..b).filter(|&i| g.has_edge(old[i], v)).collect();

    let to_v: Vec<Dist> = (0..b)
        .map(|i| {
            let closest = nbr.iter().map(|&j| rec.dist().get(i, j)).min().unwrap_or(INF);
            truncate(dist_add(closest, 1), s)
        })
        .collect();

    let p = old.binary_search(&v).unwrap_err();
    let mut boundary = old.to_vec();
    boundary.insert(p, v);
    let old_pos = |i: usize| {
        if i < p {
            Some(i)
        } else if i == p {
            None
        } else {
            Some(i - 1)
        }
    };
    let dist = DistTable::from_fn(b + 1, |i, j| match (old_pos(i), old_pos(j)) {
        (Some(x), Some(y)) => rec.dist().get(x, y).min(truncate(dist_add(to_v[x], to_v[y]), s)),
        (Some(x), None) | (None, Some(x)) => to_v[x],
        (None, None) => unreachable!(),
    });

    let rows: Vec<Vec<Dist>> = rec
        .rows()
        .iter()
        .map(|row| {
            let closest = nbr.iter().map(|&j| row[j]).min().unwrap_or(INF);
            let hv = truncate(dist_add(closest, 1), s);
            let mut grown: Vec<Dist> =
                (0..b).map(|a| row[a].min(truncate(dist_add(hv, to_v[a]), s))).collect();
            grown.insert(p, hv);
            grown
        })
        .collect();

    let pairs = rec.requests().iter().map(Request::rows).collect();
    finish_record(boundary, dist, rows, pairs, s)
}

/// Canonicalises rows, remaps request endpoints and recomputes every
/// request against the final tables. Returns `None` when the cluster can no
/// longer become an s-club: an unsatisfiable request, or an interior class
/// that is already too far from the whole boundary.
pub(crate) fn finish_record(
    boundary: Vec<usize>,
    dist: DistTable,
    mut rows: Vec<Vec<Dist>>,
    pairs: Vec<(usize, usize)>,
    s: Dist,
) -> Option<ClusterRecord> {
    if rows.iter().any(|r| r.iter().all(|&d| d == INF)) {
        return None;
    }
    let map = sort_rows(&mut rows);
    let mut pairs: Vec<(usize, usize)> = pairs
        .into_iter()
        .map(|(w, z)| {
            let (a, b) = (map[w], map[z]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut requests = Vec::with_capacity(pairs.len());
    for (w, z) in pairs {
        match request_from_distances(&rows[w], &rows[z], &dist, s) {
            RequestOutcome::Fulfilled => {}
            RequestOutcome::AllStar => return None,
            RequestOutcome::Pending(cells) => requests.push(Request::new(w, z, cells)),
        }
    }
    Some(ClusterRecord::new(boundary, dist, rows, requests))
}

pub fn handle_forget(ctx: &Ctx<'_>, v: usize, child: SolutionSet) -> SolutionSet {
    let items = child.into_vec();
    ctx.expand(&items, |sol, out| {
        let ci = sol.cluster_of(v).expect("forgotten vertex belongs to an open cluster");
        let rec = &sol.clusters()[ci];
        let mut shadow = sol.shadow().cloned();
        let mut clusters = sol.clusters().to_vec();
        if rec.boundary().len() == 1 {
            if !completes(rec) {
                return;
            }
            clusters.remove(ci);
            if let Some(sh) = &mut shadow {
                let members = sh.open.remove(ci);
                sh.closed.push(members);
            }
        } else {
            let Some(shrunk) = forget_from(rec, v, ctx.s) else { return };
            clusters[ci] = shrunk;
        }
        let prev = sol.provenance();
        let provenance = ctx.trace(|| Step::Forget { vertex: v, prev: prev.unwrap().clone() });
        out.push(Solution::assemble(clusters, sol.counter(), provenance, shadow));
    })
}

/// Completion test for a cluster whose last boundary vertex is leaving:
/// every interior class within `s` of it and no pending request.
pub fn completes(rec: &ClusterRecord) -> bool {
    rec.rows().iter().all(|r| r.iter().all(|&d| d != INF)) && rec.requests().is_empty()
}

/// Turns boundary vertex `v` into an interior vertex of the cluster.
pub fn forget_from(rec: &ClusterRecord, v: usize, s: Dist) -> Option<ClusterRecord> {
    let p = rec.position(v).expect("v on the boundary");
    let b = rec.boundary().len();
    let mut boundary = rec.boundary().to_vec();
    boundary.remove(p);
    let dist = rec.dist().without(p);

    let mut rows: Vec<Vec<Dist>> = rec
        .rows()
        .iter()
        .map(|r| r.iter().enumerate().filter(|&(a, _)| a != p).map(|(_, &d)| d).collect())
        .collect();
    let v_row = rows.len();
    rows.push((0..b).filter(|&a| a != p).map(|a| rec.dist().get(a, p)).collect());

    let mut pairs: Vec<(usize, usize)> = rec.requests().iter().map(Request::rows).collect();
    pairs.extend(rec.rows().iter().enumerate().filter(|(_, r)| r[p] == INF).map(|(u, _)| (u, v_row)));
    finish_record(boundary, dist, rows, pairs, s)
}

pub fn handle_join(ctx: &Ctx<'_>, left: SolutionSet, right: SolutionSet) -> SolutionSet {
    let right = right.into_vec();
    let mut by_partition: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, sol) in right.iter().enumerate() {
        by_partition.entry(partition_signature(sol)).or_default().push(i);
    }
    let g = ctx.graph;
    let items = left.into_vec();
    ctx.expand(&items, |l, out| {
        let Some(matches) = by_partition.get(&partition_signature(l)) else { return };
        let shared = crossing_in_bag(g, ctx.bag, l);
        for &ri in matches {
            let r = &right[ri];
            let counter = l.counter() + r.counter() - shared;
            if counter > ctx.k {
                continue;
            }
            let merged: Option<Vec<ClusterRecord>> =
                l.clusters().iter().zip(r.clusters()).map(|(a, b)| merge_records(a, b, ctx.s)).collect();
            let Some(clusters) = merged else { continue };
            let shadow = match (l.shadow(), r.shadow()) {
                (Some(a), Some(b)) => Some(merge_shadow(a, b)),
                _ => None,
            };
            let provenance = ctx.trace(|| Step::Join {
                left: l.provenance().unwrap().clone(),
                right: r.provenance().unwrap().clone(),
            });
            out.push(Solution::assemble(clusters, counter, provenance, shadow));
        }
    })
}

fn partition_signature(sol: &Solution) -> Vec<usize> {
    let mut sig = Vec::new();
    for c in sol.clusters() {
        sig.extend_from_slice(c.boundary());
        sig.push(usize::MAX);
    }
    sig
}

/// Edges of `G[bag]` crossing between clusters of `sol`; both children
/// count them, so the join subtracts them once.
fn crossing_in_bag(g: &Graph, bag: &[usize], sol: &Solution) -> usize {
    let mut count = 0;
    for (i, &u) in bag.iter().enumerate() {
        for &w in &bag[i + 1..] {
            if g.has_edge(u, w) && sol.cluster_of(u) != sol.cluster_of(w) {
                count += 1;
            }
        }
    }
    count
}

fn merge_shadow(a: &Shadow, b: &Shadow) -> Shadow {
    let open = a
        .open
        .iter()
        .zip(&b.open)
        .map(|(x, y)| {
            let mut m: Vec<usize> = x.iter().chain(y).copied().collect();
            m.sort_unstable();
            m.dedup();
            m
        })
        .collect();
    let closed = a.closed.iter().chain(&b.closed).cloned().collect();
    Shadow { open, closed }
}

/// Merges the two halves of a cluster that share the same boundary.
///
/// Boundary distances are shortest paths in the complete graph on the
/// boundary weighted by the better of the two sides; interior rows are
/// re-derived through those distances. Pairs of interior classes from
/// opposite sides that remain more than `s` apart become new requests.
pub fn merge_records(l: &ClusterRecord, r: &ClusterRecord, s: Dist) -> Option<ClusterRecord> {
    debug_assert_eq!(l.boundary(), r.boundary());
    let b = l.boundary().len();
    let mut w: Vec<Vec<Dist>> =
        (0..b).map(|i| (0..b).map(|j| l.dist().get(i, j).min(r.dist().get(i, j))).collect()).collect();
    for m in 0..b {
        for i in 0..b {
            for j in 0..b {
                let via = truncate(dist_add(w[i][m], w[m][j]), s);
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    let dist = DistTable::from_fn(b, |i, j| w[i][j]);

    let relax = |row: &Vec<Dist>| -> Vec<Dist> {
        (0..b).map(|a| (0..b).map(|j| truncate(dist_add(row[j], w[j][a]), s)).min().unwrap_or(INF)).collect()
    };
    let left_rows: Vec<Vec<Dist>> = l.rows().iter().map(relax).collect();
    let right_rows: Vec<Vec<Dist>> = r.rows().iter().map(relax).collect();
    let offset = left_rows.len();

    let mut pairs: Vec<(usize, usize)> = l.requests().iter().map(Request::rows).collect();
    pairs.extend(r.requests().iter().map(|q| {
        let (a, b) = q.rows();
        (a + offset, b + offset)
    }));
    for (wi, wrow) in left_rows.iter().enumerate() {
        for (zi, zrow) in right_rows.iter().enumerate() {
            let mut sigma = u16::MAX;
            for a in 0..b {
                for c in 0..b {
                    let len = dist_add(wrow[a], w[a][c]).saturating_add(if zrow[c] == INF {
                        u16::MAX
                    } else {
                        zrow[c] as u16
                    });
                    sigma = sigma.min(len);
                }
            }
            if sigma > s as u16 {
                pairs.push((wi, offset + zi));
            }
        }
    }
    let rows = left_rows.into_iter().chain(right_rows).collect();
    finish_record(l.boundary().to_vec(), dist, rows, pairs, s)
}
