//! Simple undirected graphs with dense vertex ids, plus the ground-truth
//! queries every other module leans on: truncated BFS, the s-club test and
//! crossing-edge counting.

use std::collections::{HashMap, VecDeque};

use crate::error::GraphError;

/// Distance value returned by [`truncated_distances`] for unreachable pairs
/// and pairs beyond the cap.
pub const UNREACHABLE: usize = usize::MAX;

/// Undirected simple graph on vertices `0..n`.
///
/// Immutable after construction. Adjacency lists are sorted, which keeps
/// iteration order (and everything derived from it) deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
            adj[u].push(v);
            adj[v].push(u);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph { adj, edges: list })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::from_edges(vertices.len(), edges)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges = self.edges.iter().copied().chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph::from_edges(self.n() + other.n(), edges).expect("union of simple graphs is simple")
    }
}

/// A partition of the vertex set into disjoint blocks.
///
/// Blocks are kept sorted internally and ordered by their smallest vertex,
/// so two partitions with the same blocks compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Checks that `blocks` are non-empty, disjoint and cover `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(GraphError::NotAPartition("empty block".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        for (i, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                if block_of[v] != usize::MAX {
                    return Err(GraphError::NotAPartition(format!("vertex {v} appears twice")));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(GraphError::NotAPartition(format!("vertex {v} is not covered")));
        }
        Ok(Partition { blocks, block_of })
    }

    /// Builds a partition from per-vertex labels; equal labels share a block.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first_seen: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &label) in labels.iter().enumerate() {
            let idx = *first_seen.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(v);
        }
        Partition::new(labels.len(), blocks).expect("labels induce a partition")
    }

    pub fn single_block(n: usize) -> Self {
        if n == 0 {
            return Partition { blocks: Vec::new(), block_of: Vec::new() };
        }
        Partition::new(n, vec![(0..n).collect()]).unwrap()
    }

    pub fn singletons(n: usize) -> Self {
        Partition::new(n, (0..n).map(|v| vec![v]).collect()).unwrap()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// BFS distances inside `g[within]` from every source, truncated at `cap`.
///
/// Row `i` of the result belongs to `sources[i]` and is indexed by vertex id;
/// entries beyond `cap`, unreachable vertices and vertices outside `within`
/// are [`UNREACHABLE`].
pub fn truncated_distances(
    g: &Graph,
    sources: &[usize],
    within: &[usize],
    cap: usize,
) -> Result<Vec<Vec<usize>>, GraphError> {
    let mut allowed = vec![false; g.n()];
    for &v in within {
        g.check_vertex(v)?;
        allowed[v] = true;
    }
    let mut out = Vec::with_capacity(sources.len());
    let mut queue = VecDeque::new();
    for &src in sources {
        g.check_vertex(src)?;
        let mut dist = vec![UNREACHABLE; g.n()];
        if !allowed[src] {
            return Err(GraphError::SourceOutsideSubgraph(src));
        }
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            if du >= cap {
                continue;
            }
            for &w in g.neighbors(u) {
                if allowed[w] && dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        out.push(dist);
    }
    Ok(out)
}

/// True iff every pair of `c` is within distance `s` inside `g[c]`.
pub fn is_s_club(g: &Graph, c: &[usize], s: usize) -> Result<bool, GraphError> {
    if c.len() <= 1 {
        for &v in c {
            g.check_vertex(v)?;
        }
        return Ok(true);
    }
    let table = truncated_distances(g, c, c, s)?;
    Ok(table.iter().all(|row| c.iter().all(|&v| row[v] != UNREACHABLE)))
}

/// Edges whose endpoints lie in different blocks of `p`.
pub fn crossing_edges(g: &Graph, p: &Partition) -> Result<Vec<(usize, usize)>, GraphError> {
    if p.n() != g.n() {
        return Err(GraphError::NotAPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.n(),
            g.n()
        )));
    }
    Ok(g.edges().iter().copied().filter(|&(u, v)| p.block_of(u) != p.block_of(v)).collect())
}

pub fn connected_components(g: &Graph) -> Partition {
    let mut label = vec![usize::MAX; g.n()];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..g.n() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(&label)
}

/// Diameter of `g[c]`, or `None` when it is disconnected.
pub fn diameter(g: &Graph, c: &[usize]) -> Result<Option<usize>, GraphError> {
    let table = truncated_distances(g, c, c, usize::MAX)?;
    let mut best = 0;
    for row in &table {
        for &v in c {
            if row[v] == UNREACHABLE {
                return Ok(None);
            }
            best = best.max(row[v]);
        }
    }
    Ok(Some(best))
}
