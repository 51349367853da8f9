//! Bottom-up dynamic program over a nice tree decomposition.
//!
//! Nodes are visited in post-order. Each node turns the solution sets of its
//! children into its own; the run stops as soon as a set becomes empty. The
//! root bag is empty, so a surviving root solution holds only closed clusters
//! and its counter is the number of crossing edges of a full partition.

mod certificate;
mod handlers;
mod shadow;

use std::time::{Duration, Instant};

use rayon::{ThreadPool, ThreadPoolBuilder};

pub use certificate::{reconstruct_certificate, verify_certificate, Certificate};
pub use handlers::{
    completes, forget_from, handle_forget, handle_introduce, handle_join, handle_leaf, introduce_into,
    merge_records, Ctx,
};

use crate::error::EngineError;
use crate::graph::{crossing_edges, Graph, Partition};
use crate::records::{Dist, SolutionSet, MAX_S};
use crate::treedec::{NiceTreeDecomposition, NodeKind};

/// A graph, the club radius `s` and the deletion budget `k`.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: Graph,
    s: usize,
    k: usize,
}

impl Instance {
    /// Budgets above `m` are clamped to `m`; they cannot change the answer.
    pub fn new(graph: Graph, s: usize, k: usize) -> Result<Self, EngineError> {
        if s < 2 {
            return Err(EngineError::InvalidInstance(format!("s must be at least 2, got {s}")));
        }
        let k = k.min(graph.m());
        Ok(Instance { graph, s, k })
    }

    /// Optimisation mode: the budget is every edge.
    pub fn optimize(graph: Graph, s: usize) -> Result<Self, EngineError> {
        let m = graph.m();
        Instance::new(graph, s, m)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Radius used inside the tables. No induced path is longer than
    /// `n - 1`, so larger values behave the same.
    fn table_radius(&self) -> Result<Dist, EngineError> {
        let eff = self.s.min(self.graph.n().saturating_sub(1).max(2));
        if eff > MAX_S {
            return Err(EngineError::InvalidInstance(format!(
                "s = {} exceeds the supported maximum of {MAX_S}",
                self.s
            )));
        }
        Ok(eff as Dist)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; 0 and 1 both mean run inline.
    pub threads: usize,
    /// Record provenance and rebuild a partition at the root.
    pub certificate: bool,
    /// Carry explicit member sets and check every record against BFS.
    pub shadow: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagStat {
    pub node: usize,
    pub kind: NodeKind,
    pub bag_size: usize,
    pub solutions: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Per-node statistics of the last pass.
    pub bags: Vec<BagStat>,
    /// Budgets tried by [`solve`], in order; empty for a single [`run`].
    pub budgets: Vec<usize>,
    pub peak_set_size: usize,
    pub wall_time: Duration,
    /// First node whose solution set came out empty.
    pub aborted_at: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct DpResult {
    pub feasible: bool,
    pub best_counter: Option<usize>,
    pub certificate: Option<Certificate>,
    pub stats: RunStats,
}

pub fn run(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    options: &RunOptions,
) -> Result<DpResult, EngineError> {
    run_observed(inst, ntd, options, |_| {})
}

/// Like [`run`], calling `observe` after every node.
pub fn run_observed(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    options: &RunOptions,
    mut observe: impl FnMut(&BagStat),
) -> Result<DpResult, EngineError> {
    let start = Instant::now();
    let g = inst.graph();
    ntd.validate(g)?;
    let s = inst.table_radius()?;
    let pool = build_pool(options.threads)?;

    let mut stats = RunStats::default();
    let mut pending: Vec<SolutionSet> = Vec::new();
    for (i, node) in ntd.nodes().iter().enumerate() {
        let bag_start = Instant::now();
        let ctx = Ctx {
            graph: g,
            s,
            k: inst.k(),
            node: i,
            bag: &node.bag,
            provenance: options.certificate,
            shadow: options.shadow,
            pool: pool.as_ref(),
        };
        let set = match node.kind {
            NodeKind::Leaf => handle_leaf(&ctx),
            NodeKind::Introduce(v) => handle_introduce(&ctx, v, pop(&mut pending)),
            NodeKind::Forget(v) => handle_forget(&ctx, v, pop(&mut pending)),
            NodeKind::Join => {
                let right = pop(&mut pending);
                let left = pop(&mut pending);
                handle_join(&ctx, left, right)
            }
        };
        if options.shadow {
            shadow::check_set(g, ntd, i, inst.s(), s, inst.k(), &set)?;
        }
        let stat = BagStat {
            node: i,
            kind: node.kind,
            bag_size: node.bag.len(),
            solutions: set.len(),
            elapsed: bag_start.elapsed(),
        };
        observe(&stat);
        stats.peak_set_size = stats.peak_set_size.max(set.len());
        stats.bags.push(stat);
        if set.is_empty() {
            stats.aborted_at = Some(i);
            stats.wall_time = start.elapsed();
            return Ok(DpResult { feasible: false, best_counter: None, certificate: None, stats });
        }
        pending.push(set);
    }

    let root = pop(&mut pending);
    debug_assert!(pending.is_empty());
    let best = root.best().expect("root set is non-empty");
    debug_assert!(best.clusters().is_empty());
    let best_counter = best.counter();
    let certificate = if options.certificate {
        let prov = best
            .provenance()
            .ok_or_else(|| EngineError::Certificate("provenance was not recorded".into()))?;
        let cert = reconstruct_certificate(g, prov)?;
        verify_certificate(g, inst.s(), best_counter, &cert)?;
        Some(cert)
    } else {
        None
    };
    stats.wall_time = start.elapsed();
    Ok(DpResult { feasible: true, best_counter: Some(best_counter), certificate, stats })
}

/// Exact answer for `inst`, reached through a sequence of cheaper passes.
///
/// A greedy partition into s-clubs bounds the optimum from above, so the
/// budget can be capped there without changing the outcome. Budgets
/// 0, 1, 3, 7, ... up to that cap are tried in turn and the first feasible
/// pass is returned; its counter is the optimum because every smaller
/// budget failed or the optimum is below it. Small budgets prune most
/// states, which is what keeps wide bags tractable.
pub fn solve(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    options: &RunOptions,
) -> Result<DpResult, EngineError> {
    solve_observed(inst, ntd, options, |_| {})
}

pub fn solve_observed(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    options: &RunOptions,
    mut observe: impl FnMut(&BagStat),
) -> Result<DpResult, EngineError> {
    let start = Instant::now();
    let g = inst.graph();
    let upper = crossing_edges(g, &greedy_partition(g, inst.s()))
        .map_err(|e| EngineError::InvalidInstance(e.to_string()))?
        .len();
    let cap = inst.k().min(upper);
    let mut budgets = Vec::new();
    let mut peak = 0;
    let mut budget = 0;
    loop {
        let budget_now = budget.min(cap);
        budgets.push(budget_now);
        let attempt = Instance { graph: inst.graph.clone(), s: inst.s, k: budget_now };
        let mut res = run_observed(&attempt, ntd, options, &mut observe)?;
        peak = peak.max(res.stats.peak_set_size);
        if res.feasible || budget_now == cap {
            res.stats.budgets = budgets;
            res.stats.peak_set_size = peak;
            res.stats.wall_time = start.elapsed();
            return Ok(res);
        }
        budget = 2 * budget + 1;
    }
}

/// Greedy partition into s-clubs: repeatedly take the unassigned vertex of
/// highest remaining degree and claim its ball of radius `s / 2` among the
/// unassigned vertices. Any two members of a ball are within `s`.
pub fn greedy_partition(g: &Graph, s: usize) -> Partition {
    use std::cmp::Reverse;
    use std::collections::{BinaryHeap, VecDeque};

    let n = g.n();
    let radius = s / 2;
    let mut label = vec![usize::MAX; n];
    let mut free_degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    // Lazy max-heap: entries whose degree is stale are skipped on pop.
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        (0..n).map(|v| (free_degree[v], Reverse(v))).collect();
    let mut queue = VecDeque::new();
    let mut depth = vec![0usize; n];
    let mut next = 0;
    while let Some((d, Reverse(center))) = heap.pop() {
        if label[center] != usize::MAX || d != free_degree[center] {
            continue;
        }
        label[center] = next;
        depth[center] = 0;
        queue.push_back(center);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    free_degree[w] -= 1;
                    if depth[u] < radius {
                        label[w] = next;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    } else {
                        heap.push((free_degree[w], Reverse(w)));
                    }
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(&label)
}

fn pop(pending: &mut Vec<SolutionSet>) -> SolutionSet {
    pending.pop().expect("validated post-order supplies every child")
}

fn build_pool(threads: usize) -> Result<Option<ThreadPool>, EngineError> {
    if threads <= 1 {
        return Ok(None);
    }
    ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| EngineError::Pool(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedec::{heuristic_decomposition, nicify, Strategy};

    fn solve_small(n: usize, edges: &[(usize, usize)], s: usize, k: usize) -> DpResult {
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        let ntd = nicify(&heuristic_decomposition(&g, Strategy::MinFill)).unwrap();
        let inst = Instance::new(g, s, k).unwrap();
        let opts = RunOptions { certificate: true, shadow: true, ..RunOptions::default() };
        run(&inst, &ntd, &opts).unwrap()
    }

    const P4: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 3)];

    #[test]
    fn path_with_one_deletion() {
        let res = solve_small(4, &P4, 2, 1);
        assert!(res.feasible);
        assert_eq!(res.best_counter, Some(1));
        // Both {0,1}{2,3} and {0,1,2}{3} cut one edge; either is fine.
        let cert = res.certificate.unwrap();
        assert_eq!(cert.deleted.len(), 1);
        assert_eq!(cert.partition.len(), 2);
    }

    #[test]
    fn path_without_budget() {
        let res = solve_small(4, &P4, 2, 0);
        assert!(!res.feasible);
        assert!(res.stats.aborted_at.is_some());
    }

    #[test]
    fn five_cycle() {
        let res = solve_small(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 2, 0);
        assert_eq!(res.best_counter, Some(0));
        assert_eq!(res.certificate.unwrap().partition.len(), 1);
    }

    #[test]
    fn two_triangles() {
        let res = solve_small(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 2, 0);
        let cert = res.certificate.unwrap();
        assert_eq!(cert.partition.len(), 2);
        assert!(cert.deleted.is_empty());
    }

    #[test]
    fn greedy_blocks_are_clubs() {
        let edges: Vec<(usize, usize)> = (1..30).map(|i| (i / 3, i)).chain([(3, 17), (5, 22)]).collect();
        let g = Graph::from_edges(30, edges).unwrap();
        for s in 2..6 {
            let p = greedy_partition(&g, s);
            for block in p.blocks() {
                assert!(crate::graph::is_s_club(&g, block, s).unwrap(), "s={s} {block:?}");
            }
        }
    }

    #[test]
    fn schedule_matches_single_pass() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 6)];
        let g = Graph::from_edges(8, edges).unwrap();
        let ntd = nicify(&heuristic_decomposition(&g, Strategy::MinFill)).unwrap();
        for s in 2..5 {
            let inst = Instance::optimize(g.clone(), s).unwrap();
            let direct = run(&inst, &ntd, &RunOptions::default()).unwrap();
            let scheduled = solve(&inst, &ntd, &RunOptions::default()).unwrap();
            assert_eq!(direct.best_counter, scheduled.best_counter);
            assert!(!scheduled.stats.budgets.is_empty());
        }
    }

    #[test]
    fn s_below_two_is_rejected() {
        assert!(Instance::new(Graph::empty(2), 1, 0).is_err());
    }

    #[test]
    fn budget_is_clamped() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(Instance::new(g, 2, 10).unwrap().k(), 1);
    }

    #[test]
    fn huge_s_on_small_graph() {
        let res = solve_small(4, &P4, 10_000, 0);
        assert_eq!(res.best_counter, Some(0));
    }

    #[test]
    fn mismatched_decomposition_is_an_error() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let other = Graph::from_edges(3, [(0, 1)]).unwrap();
        let ntd = nicify(&heuristic_decomposition(&other, Strategy::MinFill)).unwrap();
        let inst = Instance::optimize(g, 2).unwrap();
        assert!(matches!(run(&inst, &ntd, &RunOptions::default()), Err(EngineError::Mismatch(_))));
    }

    #[test]
    fn thread_count_does_not_change_the_result() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 6), (6, 7)];
        let g = Graph::from_edges(8, edges).unwrap();
        let ntd = nicify(&heuristic_decomposition(&g, Strategy::MinFill)).unwrap();
        let inst = Instance::optimize(g, 2).unwrap();
        let base = RunOptions { certificate: true, ..RunOptions::default() };
        let a = run(&inst, &ntd, &base).unwrap();
        let b = run(&inst, &ntd, &RunOptions { threads: 4, ..base }).unwrap();
        assert_eq!(a.best_counter, b.best_counter);
        assert_eq!(a.certificate, b.certificate);
        let sizes = |r: &DpResult| r.stats.bags.iter().map(|b| b.solutions).collect::<Vec<_>>();
        assert_eq!(sizes(&a), sizes(&b));
    }
}
