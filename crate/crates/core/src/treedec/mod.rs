//! Tree decompositions: validation, heuristic construction and the
//! transformation into nice form.

mod heuristic;
mod nice;

pub use heuristic::{elimination_order, heuristic_decomposition, Strategy};
pub use nice::{nicify, subtree_vertices, NiceNode, NiceTreeDecomposition, NodeKind};

use crate::error::Violation;
use crate::graph::Graph;

/// Bags plus an undirected tree (or forest) over bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Bags are sorted on construction; no validation happens here.
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Largest bag size minus one (zero for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Result<Vec<Vec<usize>>, Violation> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        let mut dsu = Dsu::new(self.bags.len());
        for &(a, b) in &self.edges {
            if a >= self.bags.len() || b >= self.bags.len() {
                return Err(Violation::TreeEdgeOutOfRange(a, b));
            }
            if !dsu.union(a, b) {
                return Err(Violation::NotAForest(a, b));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        Ok(adj)
    }

    /// Checks condition (iii) and the forest structure only; the graph is
    /// needed for conditions (i) and (ii).
    pub(crate) fn check_structure(&self) -> Result<Vec<Vec<usize>>, Violation> {
        let adj = self.adjacency()?;
        let max_vertex = self.bags.iter().flatten().copied().max();
        let Some(max_vertex) = max_vertex else { return Ok(adj) };
        // For a forest, the bags holding v are connected iff they span
        // exactly (count - 1) tree edges.
        let mut bag_count = vec![0usize; max_vertex + 1];
        let mut edge_count = vec![0usize; max_vertex + 1];
        let mut first_bag = vec![usize::MAX; max_vertex + 1];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                bag_count[v] += 1;
                if first_bag[v] == usize::MAX {
                    first_bag[v] = i;
                }
            }
        }
        for &(a, b) in &self.edges {
            let (x, y) = (&self.bags[a], &self.bags[b]);
            for v in intersect(x, y) {
                edge_count[v] += 1;
            }
        }
        for v in 0..=max_vertex {
            if bag_count[v] > 0 && edge_count[v] + 1 != bag_count[v] {
                let second = self.disconnected_witness(&adj, v, first_bag[v]);
                return Err(Violation::Disconnected { vertex: v, first: first_bag[v], second });
            }
        }
        Ok(adj)
    }

    fn disconnected_witness(&self, adj: &[Vec<usize>], v: usize, start: usize) -> usize {
        let mut seen = vec![false; self.bags.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] && self.bags[j].binary_search(&v).is_ok() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        (0..self.bags.len()).find(|&i| !seen[i] && self.bags[i].binary_search(&v).is_ok()).unwrap_or(start)
    }
}

/// Checks the three tree-decomposition conditions of `td` against `g`,
/// reporting the first violation in condition order.
pub fn validate(td: &TreeDecomposition, g: &Graph) -> Result<(), Violation> {
    for (i, bag) in td.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= g.n()) {
            return Err(Violation::BagVertexOutOfRange { bag: i, vertex: v });
        }
    }
    td.adjacency()?;
    let mut covered = vec![false; g.n()];
    for &v in td.bags.iter().flatten() {
        covered[v] = true;
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Violation::VertexNotCovered(v));
    }
    check_edge_cover(td.bags.iter().map(Vec::as_slice), g)?;
    td.check_structure()?;
    Ok(())
}

pub(crate) fn check_edge_cover<'a, I>(bags: I, g: &Graph) -> Result<(), Violation>
where
    I: Iterator<Item = &'a [usize]>,
{
    let mut edge_seen = vec![false; g.m()];
    for bag in bags {
        for (i, &u) in bag.iter().enumerate() {
            for &v in &bag[i + 1..] {
                if let Ok(idx) = g.edges().binary_search(&(u.min(v), u.max(v))) {
                    edge_seen[idx] = true;
                }
            }
        }
    }
    match edge_seen.iter().position(|&s| !s) {
        Some(idx) => Err(Violation::EdgeNotCovered(g.edges()[idx].0, g.edges()[idx].1)),
        None => Ok(()),
    }
}

fn intersect<'a>(x: &'a [usize], y: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    x.iter().copied().filter(move |v| y.binary_search(v).is_ok())
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_decomposition_is_valid() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(validate(&td, &g), Ok(()));
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn uncovered_edge_is_reported() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(validate(&td, &g), Err(Violation::EdgeNotCovered(0, 2)));
    }

    #[test]
    fn disconnected_occurrence_is_reported() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2], vec![0]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate(&td, &g), Err(Violation::Disconnected { vertex: 0, first: 0, second: 2 }));
    }

    #[test]
    fn uncovered_vertex_and_cycles() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert_eq!(validate(&td, &g), Err(Violation::VertexNotCovered(2)));

        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2]], vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(validate(&td, &g), Err(Violation::NotAForest(2, 0)));

        let td = TreeDecomposition::new(vec![vec![0, 1, 5]], vec![]);
        assert_eq!(validate(&td, &g), Err(Violation::BagVertexOutOfRange { bag: 0, vertex: 5 }));
    }

    #[test]
    fn forests_are_accepted() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![]);
        assert_eq!(validate(&td, &g), Ok(()));
    }
}
