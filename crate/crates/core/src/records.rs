//! Per-cluster records and bag-level solutions.
//!
//! A partial cluster `C` seen from bag `X` is summarised by its boundary
//! `C ∩ X`, the pairwise boundary distances inside `G[C]`, one distance
//! vector per class of interior vertices, and the set of pending requests
//! (pairs of interior classes that are still more than `s` apart). All
//! distances are truncated: anything above `s` is stored as [`INF`].

use std::sync::Arc;

use indexmap::IndexMap;

/// Truncated distance. Finite values never exceed the club radius `s`.
pub type Dist = u8;

/// Distance above `s` (or no path at all).
pub const INF: Dist = u8::MAX;

/// Largest supported `s`; distances must fit below the sentinels.
pub const MAX_S: usize = 250;

const STAR_BYTE: u8 = 0xFE;

/// `a + b` with [`INF`] absorbing, widened so it cannot overflow.
#[inline]
pub fn dist_add(a: Dist, b: Dist) -> u16 {
    if a == INF || b == INF {
        u16::MAX
    } else {
        a as u16 + b as u16
    }
}

/// Maps a widened distance back into `{0..=s} ∪ {INF}`.
#[inline]
pub fn truncate(x: u16, s: Dist) -> Dist {
    if x > s as u16 {
        INF
    } else {
        x as Dist
    }
}

#[inline]
fn tri_index(size: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < size);
    i * (2 * size - i - 1) / 2 + (j - i - 1)
}

/// Symmetric boundary distance table with an implicit zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistTable {
    size: usize,
    upper: Vec<Dist>,
}

impl DistTable {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Dist) -> Self {
        let mut upper = Vec::with_capacity(size * size.saturating_sub(1) / 2);
        for i in 0..size {
            for j in i + 1..size {
                upper.push(f(i, j));
            }
        }
        DistTable { size, upper }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Dist {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => self.upper[tri_index(self.size, i, j)],
            std::cmp::Ordering::Greater => self.upper[tri_index(self.size, j, i)],
        }
    }

    /// Table without row and column `p`.
    pub fn without(&self, p: usize) -> Self {
        let map = |i: usize| if i < p { i } else { i + 1 };
        DistTable::from_fn(self.size - 1, |i, j| self.get(map(i), map(j)))
    }

    pub(crate) fn bytes(&self) -> &[u8] {
        &self.upper
    }
}

/// One request cell: the longest future boundary-to-boundary path that would
/// still bring the two classes within `s`, or ⋆ when no such path exists.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell(u8);

impl Cell {
    pub const STAR: Cell = Cell(STAR_BYTE);

    pub fn length(max_len: Dist) -> Cell {
        assert!((2..=MAX_S as Dist).contains(&max_len), "request length {max_len} out of range");
        Cell(max_len)
    }

    pub fn max_length(self) -> Option<Dist> {
        (self.0 != STAR_BYTE).then_some(self.0)
    }

    pub fn is_star(self) -> bool {
        self.0 == STAR_BYTE
    }

    /// Whether a current boundary distance `d` already satisfies this cell.
    #[inline]
    pub fn admits(self, d: Dist) -> bool {
        match self.max_length() {
            Some(len) => d != INF && d <= len,
            None => false,
        }
    }
}

impl std::fmt::Debug for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.max_length() {
            Some(l) => write!(f, "{l}"),
            None => f.write_str("*"),
        }
    }
}

/// Pending request between two interior classes (rows of `H`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Request {
    w_row: u32,
    z_row: u32,
    cells: Vec<Cell>,
}

impl Request {
    /// Endpoint rows are stored in ascending order.
    pub fn new(w_row: usize, z_row: usize, cells: Vec<Cell>) -> Self {
        let (lo, hi) = (w_row.min(z_row), w_row.max(z_row));
        Request { w_row: lo as u32, z_row: hi as u32, cells }
    }

    pub fn rows(&self) -> (usize, usize) {
        (self.w_row as usize, self.z_row as usize)
    }

    /// Cell for boundary positions `a`, `b`; the diagonal is always ⋆.
    pub fn cell(&self, a: usize, b: usize, boundary_len: usize) -> Cell {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => Cell::STAR,
            std::cmp::Ordering::Less => self.cells[tri_index(boundary_len, a, b)],
            std::cmp::Ordering::Greater => self.cells[tri_index(boundary_len, b, a)],
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RequestOutcome {
    /// Some boundary pair already connects the two classes within `s`.
    Fulfilled,
    /// No future path can help; the owning solution is dead.
    AllStar,
    Pending(Vec<Cell>),
}

/// Builds the request for two interior classes with boundary distance
/// vectors `wa` and `za`.
///
/// For every boundary pair `(a, b)` the cheapest attachment is
/// `δ = min(wa[a] + za[b], wa[b] + za[a])`; the cell allows a connecting
/// path of length up to `s - δ` when `δ < s - 1` and is ⋆ otherwise.
pub fn request_from_distances(wa: &[Dist], za: &[Dist], d: &DistTable, s: Dist) -> RequestOutcome {
    let size = wa.len();
    debug_assert_eq!(za.len(), size);
    debug_assert_eq!(d.size(), size);
    let mut cells = Vec::with_capacity(size * size.saturating_sub(1) / 2);
    let mut any = false;
    for a in 0..size {
        for b in a + 1..size {
            let delta = dist_add(wa[a], za[b]).min(dist_add(wa[b], za[a]));
            let cell = if delta < (s as u16).saturating_sub(1) {
                Cell::length(s - delta as Dist)
            } else {
                Cell::STAR
            };
            if cell.admits(d.get(a, b)) {
                return RequestOutcome::Fulfilled;
            }
            any |= !cell.is_star();
            cells.push(cell);
        }
    }
    if any {
        RequestOutcome::Pending(cells)
    } else {
        RequestOutcome::AllStar
    }
}

/// Record of one partial cluster with a non-empty boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusterRecord {
    boundary: Vec<usize>,
    dist: DistTable,
    rows: Vec<Vec<Dist>>,
    requests: Vec<Request>,
}

impl ClusterRecord {
    /// Assembles a record and brings it into canonical form.
    pub fn new(boundary: Vec<usize>, dist: DistTable, rows: Vec<Vec<Dist>>, requests: Vec<Request>) -> Self {
        assert!(boundary.windows(2).all(|w| w[0] < w[1]), "boundary must be strictly ascending");
        assert_eq!(dist.size(), boundary.len());
        assert!(rows.iter().all(|r| r.len() == boundary.len()));
        let mut rec = ClusterRecord { boundary, dist, rows, requests };
        rec.canonicalize();
        rec
    }

    /// Fresh cluster made of `v` alone.
    pub fn singleton(v: usize) -> Self {
        ClusterRecord {
            boundary: vec![v],
            dist: DistTable::from_fn(1, |_, _| unreachable!()),
            rows: Vec::new(),
            requests: Vec::new(),
        }
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn dist(&self) -> &DistTable {
        &self.dist
    }

    pub fn rows(&self) -> &[Vec<Dist>] {
        &self.rows
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.boundary.binary_search(&v).ok()
    }

    /// Merges identical rows and duplicate requests, remapping request
    /// endpoints to the surviving rows.
    pub fn dedup_rows(mut self) -> Self {
        self.canonicalize();
        self
    }

    pub(crate) fn is_canonical(&self) -> bool {
        self.rows.windows(2).all(|w| w[0] < w[1])
            && self.requests.windows(2).all(|w| w[0] < w[1])
            && self.requests.iter().all(|r| r.w_row <= r.z_row)
    }

    fn canonicalize(&mut self) {
        if self.is_canonical() {
            return;
        }
        let map = sort_rows(&mut self.rows);
        for r in &mut self.requests {
            let (a, b) = (map[r.w_row as usize] as u32, map[r.z_row as usize] as u32);
            r.w_row = a.min(b);
            r.z_row = a.max(b);
        }
        self.requests.sort_unstable();
        self.requests.dedup();
    }

    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.boundary.len() as u32).to_le_bytes());
        for &v in &self.boundary {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        out.extend_from_slice(self.dist.bytes());
        out.extend_from_slice(&(self.rows.len() as u32).to_le_bytes());
        for row in &self.rows {
            out.extend_from_slice(row);
        }
        out.extend_from_slice(&(self.requests.len() as u32).to_le_bytes());
        for r in &self.requests {
            out.extend_from_slice(&r.w_row.to_le_bytes());
            out.extend_from_slice(&r.z_row.to_le_bytes());
            out.extend(r.cells.iter().map(|c| c.0));
        }
    }
}

/// Sorts and deduplicates `rows`, returning old index -> new index.
pub(crate) fn sort_rows(rows: &mut Vec<Vec<Dist>>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].cmp(&rows[b]));
    let mut map = vec![0; rows.len()];
    let mut sorted: Vec<Vec<Dist>> = Vec::with_capacity(rows.len());
    let mut taken: Vec<Option<Vec<Dist>>> = std::mem::take(rows).into_iter().map(Some).collect();
    for old in order {
        let row = taken[old].take().unwrap();
        if sorted.last() != Some(&row) {
            sorted.push(row);
        }
        map[old] = sorted.len() - 1;
    }
    *rows = sorted;
    map
}

/// How a solution was derived; walked backwards to rebuild a partition.
#[derive(Debug)]
pub struct Provenance {
    pub node: usize,
    pub step: Step,
}

#[derive(Debug)]
pub enum Step {
    Leaf,
    /// `joined` is a boundary vertex of the cluster `vertex` was added to,
    /// or `None` when it opened a new cluster.
    Introduce {
        vertex: usize,
        joined: Option<usize>,
        prev: Arc<Provenance>,
    },
    Forget {
        vertex: usize,
        prev: Arc<Provenance>,
    },
    Join {
        left: Arc<Provenance>,
        right: Arc<Provenance>,
    },
}

impl Drop for Provenance {
    // Chains are as long as the decomposition; unlink them iteratively.
    fn drop(&mut self) {
        let mut stack: Vec<Arc<Provenance>> = Vec::new();
        let take =
            |step: &mut Step, stack: &mut Vec<Arc<Provenance>>| match std::mem::replace(step, Step::Leaf) {
                Step::Leaf => {}
                Step::Introduce { prev, .. } | Step::Forget { prev, .. } => stack.push(prev),
                Step::Join { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
            };
        take(&mut self.step, &mut stack);
        while let Some(arc) = stack.pop() {
            if let Ok(mut inner) = Arc::try_unwrap(arc) {
                take(&mut inner.step, &mut stack);
            }
        }
    }
}

/// Explicit vertex sets carried alongside a solution for self-checking.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Shadow {
    /// Members of each open cluster, aligned with `Solution::clusters`.
    pub open: Vec<Vec<usize>>,
    /// Members of clusters that were already closed off.
    pub closed: Vec<Vec<usize>>,
}

/// Bag-level solution: open clusters plus the crossing-edge counter.
#[derive(Clone, Debug)]
pub struct Solution {
    clusters: Vec<ClusterRecord>,
    counter: usize,
    provenance: Option<Arc<Provenance>>,
    shadow: Option<Shadow>,
}

impl Solution {
    pub fn new(clusters: Vec<ClusterRecord>, counter: usize) -> Self {
        Solution::assemble(clusters, counter, None, None)
    }

    /// Orders clusters by smallest boundary vertex, permuting the shadow
    /// sets to match.
    pub fn assemble(
        clusters: Vec<ClusterRecord>,
        counter: usize,
        provenance: Option<Arc<Provenance>>,
        shadow: Option<Shadow>,
    ) -> Self {
        assert!(clusters.iter().all(|c| !c.boundary.is_empty()), "open clusters need a boundary");
        let mut sol = Solution { clusters, counter, provenance, shadow };
        if !sol.clusters.windows(2).all(|w| w[0].boundary[0] < w[1].boundary[0]) {
            let mut idx: Vec<usize> = (0..sol.clusters.len()).collect();
            idx.sort_by_key(|&i| sol.clusters[i].boundary[0]);
            let mut slots: Vec<Option<ClusterRecord>> =
                std::mem::take(&mut sol.clusters).into_iter().map(Some).collect();
            sol.clusters = idx.iter().map(|&i| slots[i].take().unwrap()).collect();
            if let Some(sh) = &mut sol.shadow {
                let mut open: Vec<Option<Vec<usize>>> =
                    std::mem::take(&mut sh.open).into_iter().map(Some).collect();
                sh.open = idx.iter().map(|&i| open[i].take().unwrap()).collect();
            }
        }
        sol
    }

    pub fn clusters(&self) -> &[ClusterRecord] {
        &self.clusters
    }

    pub fn counter(&self) -> usize {
        self.counter
    }

    pub fn provenance(&self) -> Option<&Arc<Provenance>> {
        self.provenance.as_ref()
    }

    pub fn shadow(&self) -> Option<&Shadow> {
        self.shadow.as_ref()
    }

    /// Index of the open cluster whose boundary holds `v`.
    pub fn cluster_of(&self, v: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.position(v).is_some())
    }
}

/// Deterministic byte encoding of everything except the counter (and the
/// provenance/shadow attachments). Two solutions get the same key exactly
/// when their boundary partitions, distance tables, row sets and request
/// sets all coincide.
pub fn canonical_key(sol: &Solution) -> Vec<u8> {
    let mut order: Vec<&ClusterRecord> = sol.clusters.iter().collect();
    order.sort_by_key(|c| c.boundary[0]);
    let mut out = Vec::new();
    for rec in order {
        if rec.is_canonical() {
            rec.encode(&mut out);
        } else {
            rec.clone().dedup_rows().encode(&mut out);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inserted {
    New,
    Replaced,
    Kept,
}

/// Solutions keyed by [`canonical_key`]; on collision the lower counter
/// wins and ties keep the incumbent. Iteration follows insertion order.
#[derive(Clone, Debug, Default)]
pub struct SolutionSet {
    map: IndexMap<Vec<u8>, Solution>,
}

impl SolutionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sol: Solution) -> Inserted {
        let key = canonical_key(&sol);
        match self.map.get_mut(&key) {
            None => {
                self.map.insert(key, sol);
                Inserted::New
            }
            Some(cur) if sol.counter < cur.counter => {
                *cur = sol;
                Inserted::Replaced
            }
            Some(_) => Inserted::Kept,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Solution> {
        self.map.values()
    }

    pub fn get(&self, key: &[u8]) -> Option<&Solution> {
        self.map.get(key)
    }

    pub fn into_vec(self) -> Vec<Solution> {
        self.map.into_values().collect()
    }

    /// Solution with the smallest counter (first one on ties).
    pub fn best(&self) -> Option<&Solution> {
        self.map.values().reduce(|a, b| if b.counter < a.counter { b } else { a })
    }
}

impl Extend<Solution> for SolutionSet {
    fn extend<T: IntoIterator<Item = Solution>>(&mut self, iter: T) {
        for sol in iter {
            self.insert(sol);
        }
    }
}
