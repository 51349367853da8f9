//! Instance generators: planted partitions and a few structured families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sclub_core::graph::{Graph, Partition};
use sclub_core::treedec::{heuristic_decomposition, Strategy, TreeDecomposition};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("cannot split {n} vertices into {d} non-empty blocks")]
    BlockCount { n: usize, d: usize },
    #[error("s must be at least 2, got {0}")]
    Radius(usize),
    #[error("only {available} inter-block vertex pairs exist, {noise} noise edges requested")]
    TooMuchNoise { noise: usize, available: usize },
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub graph: Graph,
    pub planted: Partition,
    pub noise: usize,
    pub decomposition: TreeDecomposition,
}

/// Random graph with a planted partition into `d` s-clubs plus exactly
/// `noise` edges between blocks.
///
/// Each block is a random tree hanging from a centre with depth at most
/// `s / 2`, plus a few random chords; any two members are therefore within
/// `2 * (s / 2) <= s` of each other.
pub fn generate_planted(
    n: usize,
    d: usize,
    s: usize,
    noise: usize,
    seed: u64,
) -> Result<GeneratedInstance, GenerateError> {
    if d == 0 && n > 0 || d > n {
        return Err(GenerateError::BlockCount { n, d });
    }
    if s < 2 {
        return Err(GenerateError::Radius(s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(&mut rng);

    // d - 1 distinct cut points give d non-empty blocks.
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(d.saturating_sub(1)).collect();
    cuts.sort_unstable();
    let mut blocks = Vec::with_capacity(d);
    let mut start = 0;
    for end in cuts.into_iter().chain((d > 0).then_some(n)) {
        blocks.push(verts[start..end].to_vec());
        start = end;
    }

    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let available =
        n * n.saturating_sub(1) / 2 - sizes.iter().map(|k| k * (k.saturating_sub(1)) / 2).sum::<usize>();
    if noise > available {
        return Err(GenerateError::TooMuchNoise { noise, available });
    }

    let radius = s / 2;
    let mut edges = std::collections::BTreeSet::new();
    for block in &blocks {
        let mut depth = vec![0usize; block.len()];
        for i in 1..block.len() {
            let parents: Vec<usize> = (0..i).filter(|&j| depth[j] < radius).collect();
            let p = parents[rng.gen_range(0..parents.len())];
            depth[i] = depth[p] + 1;
            let (a, b) = (block[p], block[i]);
            edges.insert((a.min(b), a.max(b)));
        }
        for _ in 0..block.len() / 4 {
            let a = block[rng.gen_range(0..block.len())];
            let b = block[rng.gen_range(0..block.len())];
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }

    let mut label = vec![0; n];
    for (i, block) in blocks.iter().enumerate() {
        for &v in block {
            label[v] = i;
        }
    }
    let mut added = 0;
    if noise * 4 <= available {
        while added < noise {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if label[a] != label[b] && edges.insert((a.min(b), a.max(b))) {
                added += 1;
            }
        }
    } else {
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| label[a] != label[b])
            .collect();
        pairs.shuffle(&mut rng);
        edges.extend(pairs.into_iter().take(noise));
    }

    let graph = Graph::from_edges(n, edges).expect("generated edges are simple");
    let planted = Partition::new(n, blocks).expect("blocks split the vertex set");
    let decomposition = heuristic_decomposition(&graph, Strategy::MinFill);
    Ok(GeneratedInstance { graph, planted, noise, decomposition })
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are simple")
}

pub fn cycle(n: usize) -> Graph {
    if n < 3 {
        return path(n);
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are simple")
}

/// Random k-tree: a (k+1)-clique, then each new vertex is attached to a
/// random k-clique created so far. Treewidth exactly `k` once `n > k`.
pub fn ktree(n: usize, k: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = n.min(k + 1);
    let mut edges: Vec<(usize, usize)> = (0..base).flat_map(|u| (u + 1..base).map(move |v| (u, v))).collect();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    if n > k {
        for skip in 0..=k {
            cliques.push((0..=k).filter(|&u| u != skip).collect());
        }
    }
    for v in base..n {
        let c = cliques[rng.gen_range(0..cliques.len())].clone();
        edges.extend(c.iter().map(|&u| (u, v)));
        for skip in 0..k {
            let mut next: Vec<usize> =
                c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &u)| u).collect();
            next.push(v);
            cliques.push(next);
        }
    }
    Graph::from_edges(n, edges).expect("k-tree edges are simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use sclub_core::graph::{crossing_edges, is_s_club};

    #[test]
    fn all_singletons_without_noise_is_edgeless() {
        let inst = generate_planted(6, 6, 3, 0, 1).unwrap();
        assert_eq!(inst.graph.m(), 0);
    }

    #[test]
    fn one_block_is_an_s_club() {
        let inst = generate_planted(15, 1, 2, 0, 9).unwrap();
        assert!(is_s_club(&inst.graph, &(0..15).collect::<Vec<_>>(), 2).unwrap());
    }

    #[test]
    fn planted_invariant_over_seeds() {
        for seed in 0..50 {
            let inst = generate_planted(20, 4, 3, 5, seed).unwrap();
            for block in inst.planted.blocks() {
                assert!(is_s_club(&inst.graph, block, 3).unwrap());
            }
            assert_eq!(crossing_edges(&inst.graph, &inst.planted).unwrap().len(), 5);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a = generate_planted(12, 3, 2, 2, 42).unwrap();
        let b = generate_planted(12, 3, 2, 2, 42).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.planted, b.planted);
    }

    #[test]
    fn bad_sizes() {
        assert!(generate_planted(3, 4, 2, 0, 0).is_err());
        assert!(generate_planted(3, 1, 2, 1, 0).is_err());
        assert!(generate_planted(3, 3, 2, 3, 0).is_ok());
        assert!(generate_planted(3, 3, 2, 4, 0).is_err());
    }

    #[test]
    fn ktree_has_the_right_width() {
        let g = ktree(40, 3, 5);
        assert_eq!(g.m(), 6 + 3 * 36);
        assert_eq!(heuristic_decomposition(&g, Strategy::MinFill).width(), 3);
    }

    #[test]
    fn small_families() {
        assert_eq!(path(1).m(), 0);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(cycle(2).m(), 1);
    }
}
