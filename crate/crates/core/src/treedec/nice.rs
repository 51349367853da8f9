use super::{validate, TreeDecomposition};
use crate::error::{NiceViolation, Violation};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

impl NodeKind {
    pub fn label(&self) -> &'static str {
        match self {
            NodeKind::Leaf => "leaf",
            NodeKind::Introduce(_) => "introduce",
            NodeKind::Forget(_) => "forget",
            NodeKind::Join => "join",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    /// Sorted vertex set.
    pub bag: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Rooted nice tree decomposition.
///
/// Nodes are stored in depth-first post-order: children precede their parent
/// and the root is the last node, so a bottom-up pass is a plain scan with a
/// stack of pending child results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NiceNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Underlying plain decomposition (parent-child tree edges).
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition::new(bags, edges)
    }

    /// Checks node ordering, P.1 to P.4, node labels, and the three
    /// decomposition conditions against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), NiceViolation> {
        if self.nodes.is_empty() {
            return Err(NiceViolation::Order(0));
        }
        let mut pending: Vec<usize> = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.len() > 2 {
                return Err(NiceViolation::TooManyChildren(i));
            }
            for &c in node.children.iter().rev() {
                if pending.pop() != Some(c) {
                    return Err(NiceViolation::Order(i));
                }
            }
            pending.push(i);
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(NiceViolation::WrongKind(i));
            }
            match (node.children.as_slice(), node.kind) {
                ([], NodeKind::Leaf) => {
                    if !node.bag.is_empty() {
                        return Err(NiceViolation::NonEmptyEnd(i));
                    }
                }
                ([c], kind) => {
                    let child = &self.nodes[*c].bag;
                    let expected = match one_vertex_difference(&node.bag, child) {
                        Some(Step::Added(v)) => NodeKind::Introduce(v),
                        Some(Step::Removed(v)) => NodeKind::Forget(v),
                        None => return Err(NiceViolation::BadTransition(i)),
                    };
                    if kind != expected {
                        return Err(NiceViolation::WrongKind(i));
                    }
                }
                ([a, b], NodeKind::Join) => {
                    if self.nodes[*a].bag != node.bag || self.nodes[*b].bag != node.bag {
                        return Err(NiceViolation::JoinBagMismatch(i));
                    }
                }
                _ => return Err(NiceViolation::WrongKind(i)),
            }
        }
        if pending.len() != 1 {
            return Err(NiceViolation::Order(self.root()));
        }
        if !self.nodes[self.root()].bag.is_empty() {
            return Err(NiceViolation::NonEmptyEnd(self.root()));
        }
        validate(&self.to_tree_decomposition(), g)?;
        Ok(())
    }
}

enum Step {
    Added(usize),
    Removed(usize),
}

fn one_vertex_difference(parent: &[usize], child: &[usize]) -> Option<Step> {
    let extra = |a: &[usize], b: &[usize]| -> Option<usize> {
        if a.len() != b.len() + 1 {
            return None;
        }
        let mut it = a.iter().copied().filter(|v| b.binary_search(v).is_err());
        let v = it.next()?;
        it.next().is_none().then_some(v)
    };
    extra(parent, child).map(Step::Added).or_else(|| extra(child, parent).map(Step::Removed))
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    fn leaf(&mut self) -> usize {
        self.push(Vec::new(), NodeKind::Leaf, Vec::new())
    }

    /// Walks from the bag of `top` to `target`: forgets first, then
    /// introduces, each in ascending vertex order.
    fn chain(&mut self, mut top: usize, target: &[usize]) -> usize {
        let mut current = self.nodes[top].bag.clone();
        let gone: Vec<usize> = current.iter().copied().filter(|v| target.binary_search(v).is_err()).collect();
        for v in gone {
            current.retain(|&u| u != v);
            top = self.push(current.clone(), NodeKind::Forget(v), vec![top]);
        }
        let new: Vec<usize> = target.iter().copied().filter(|v| current.binary_search(v).is_err()).collect();
        for v in new {
            let at = current.binary_search(&v).unwrap_err();
            current.insert(at, v);
            top = self.push(current.clone(), NodeKind::Introduce(v), vec![top]);
        }
        top
    }

    fn join(&mut self, a: usize, b: usize) -> usize {
        let bag = self.nodes[a].bag.clone();
        self.push(bag, NodeKind::Join, vec![a, b])
    }

    /// Renumbers nodes into depth-first post-order from `root`.
    fn finish(self, root: usize) -> NiceTreeDecomposition {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(root, false)];
        while let Some((i, expanded)) = stack.pop() {
            if expanded {
                order.push(i);
            } else {
                stack.push((i, true));
                for &c in self.nodes[i].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_id[old] = pos;
        }
        let mut slots: Vec<Option<NiceNode>> = self.nodes.into_iter().map(Some).collect();
        let nodes = order
            .iter()
            .map(|&old| {
                let mut node = slots[old].take().expect("each node is reached once");
                for c in &mut node.children {
                    *c = new_id[*c];
                }
                node
            })
            .collect();
        NiceTreeDecomposition { nodes }
    }
}

/// Converts a decomposition into nice form of the same width.
///
/// Each bag tree component is rooted at its smallest bag index; children are
/// connected to their parent bag through forget-then-introduce chains and
/// combined with binary join nodes that copy the parent bag. Components are
/// joined under empty bags so the result has a single empty root.
pub fn nicify(td: &TreeDecomposition) -> Result<NiceTreeDecomposition, Violation> {
    let adj = td.check_structure()?;
    let bags = td.bags();
    let mut b = Builder { nodes: Vec::with_capacity(bags.len() * 4 + 1) };
    let mut seen = vec![false; bags.len()];
    let mut top = vec![usize::MAX; bags.len()];
    let mut component_tops = Vec::new();

    for root in 0..bags.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut order = vec![root];
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let t = order[head];
            head += 1;
            let mut kids = Vec::new();
            for &u in &adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    kids.push(u);
                    order.push(u);
                }
            }
            children.push(kids);
        }
        for idx in (0..order.len()).rev() {
            let t = order[idx];
            let mut tops = children[idx].iter().map(|&c| b.chain(top[c], &bags[t]));
            top[t] = match tops.next() {
                None => {
                    let leaf = b.leaf();
                    b.chain(leaf, &bags[t])
                }
                Some(first) => {
                    let rest: Vec<usize> = tops.collect();
                    rest.into_iter().fold(first, |acc, next| b.join(acc, next))
                }
            };
        }
        component_tops.push(b.chain(top[root], &[]));
    }

    let root = match component_tops.split_first() {
        None => b.leaf(),
        Some((&first, rest)) => rest.iter().fold(first, |acc, &next| b.join(acc, next)),
    };
    Ok(b.finish(root))
}

/// Vertices appearing in the subtree rooted at `node`, sorted.
pub fn subtree_vertices(ntd: &NiceTreeDecomposition, node: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![node];
    while let Some(i) = stack.pop() {
        let n = ntd.node(i);
        out.extend_from_slice(&n.bag);
        stack.extend_from_slice(&n.children);
    }
    out.sort_unstable();
    out.dedup();
    out
}
