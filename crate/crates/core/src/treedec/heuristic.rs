use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::Graph;

/// Greedy vertex elimination rule. Ties go to the smallest vertex id.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    MinDegree,
    #[default]
    MinFill,
}

struct Eliminator {
    adj: Vec<BTreeSet<usize>>,
    score: Vec<usize>,
    queue: BTreeSet<(usize, usize)>,
    strategy: Strategy,
}

impl Eliminator {
    fn new(g: &Graph, strategy: Strategy) -> Self {
        let adj: Vec<BTreeSet<usize>> =
            (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect();
        let mut e = Eliminator { adj, score: vec![0; g.n()], queue: BTreeSet::new(), strategy };
        for v in 0..g.n() {
            e.score[v] = e.compute(v);
            e.queue.insert((e.score[v], v));
        }
        e
    }

    fn compute(&self, v: usize) -> usize {
        match self.strategy {
            Strategy::MinDegree => self.adj[v].len(),
            Strategy::MinFill => {
                let nbrs: Vec<usize> = self.adj[v].iter().copied().collect();
                let mut missing = 0;
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if !self.adj[a].contains(&b) {
                            missing += 1;
                        }
                    }
                }
                missing
            }
        }
    }

    fn refresh(&mut self, v: usize) {
        let fresh = self.compute(v);
        if fresh != self.score[v] {
            self.queue.remove(&(self.score[v], v));
            self.score[v] = fresh;
            self.queue.insert((fresh, v));
        }
    }

    /// Eliminates the next vertex and returns it with its neighbourhood at
    /// elimination time.
    fn step(&mut self) -> Option<(usize, Vec<usize>)> {
        let (_, v) = self.queue.pop_first()?;
        let nbrs: Vec<usize> = std::mem::take(&mut self.adj[v]).into_iter().collect();
        for &a in &nbrs {
            self.adj[a].remove(&v);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                self.adj[a].insert(b);
                self.adj[b].insert(a);
            }
        }
        let mut affected: BTreeSet<usize> = nbrs.iter().copied().collect();
        if self.strategy == Strategy::MinFill {
            for &a in &nbrs {
                affected.extend(self.adj[a].iter().copied());
            }
        }
        for a in affected {
            self.refresh(a);
        }
        Some((v, nbrs))
    }
}

/// Elimination ordering chosen greedily by `strategy`.
pub fn elimination_order(g: &Graph, strategy: Strategy) -> Vec<usize> {
    let mut e = Eliminator::new(g, strategy);
    std::iter::from_fn(|| e.step().map(|(v, _)| v)).collect()
}

/// Tree decomposition built from a greedy elimination ordering.
///
/// Bag `i` holds the `i`-th eliminated vertex and its neighbourhood in the
/// fill graph at that moment; it hangs below the bag of the earliest
/// eliminated neighbour. Component roots are chained together so the result
/// is a single tree.
pub fn heuristic_decomposition(g: &Graph, strategy: Strategy) -> TreeDecomposition {
    let mut e = Eliminator::new(g, strategy);
    let mut steps = Vec::with_capacity(g.n());
    while let Some(step) = e.step() {
        steps.push(step);
    }
    let mut pos = vec![0; g.n()];
    for (i, (v, _)) in steps.iter().enumerate() {
        pos[*v] = i;
    }
    let mut bags = Vec::with_capacity(steps.len());
    let mut edges = Vec::with_capacity(steps.len());
    let mut roots = Vec::new();
    for (i, (v, nbrs)) in steps.into_iter().enumerate() {
        match nbrs.iter().map(|&u| pos[u]).min() {
            Some(parent) => edges.push((i, parent)),
            None => roots.push(i),
        }
        let mut bag = nbrs;
        bag.push(v);
        bags.push(bag);
    }
    edges.extend(roots.windows(2).map(|w| (w[0], w[1])));
    TreeDecomposition::new(bags, edges)
}
