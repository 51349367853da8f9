//! Scaling harness: runs the solver over instance families and tabulates
//! peak solution-set size and wall time.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use sclub_core::engine::{solve, Instance, RunOptions};
use sclub_core::graph::Graph;
use sclub_core::treedec::{heuristic_decomposition, nicify, Strategy};
use serde::Serialize;

use crate::generate::{cycle, generate_planted, ktree, path};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path,
    Cycle,
    KTree {
        k: usize,
    },
    /// Planted instance with `n / block` clusters and `noise` extra edges.
    Planted {
        block: usize,
        noise: usize,
    },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Path => "path".into(),
            Family::Cycle => "cycle".into(),
            Family::KTree { k } => format!("{k}-tree"),
            Family::Planted { .. } => "planted".into(),
        }
    }

    pub fn build(&self, n: usize, s: usize, seed: u64) -> Result<Graph> {
        Ok(match *self {
            Family::Path => path(n),
            Family::Cycle => cycle(n),
            Family::KTree { k } => ktree(n, k, seed),
            Family::Planted { block, noise } => {
                generate_planted(n, (n / block.max(1)).clamp(1, n.max(1)), s, noise, seed)?.graph
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub tw: usize,
    pub s: usize,
    pub best_counter: Option<usize>,
    pub peak_set_size: usize,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("row serializes")
    }
}

pub fn bench_one(family: Family, n: usize, s: usize, seed: u64, threads: usize) -> Result<BenchRow> {
    let g = family.build(n, s, seed)?;
    let start = Instant::now();
    let ntd = nicify(&heuristic_decomposition(&g, Strategy::MinFill)).expect("heuristic output is valid");
    let inst = Instance::optimize(g, s)?;
    let res = solve(&inst, &ntd, &RunOptions { threads, ..RunOptions::default() })?;
    Ok(BenchRow {
        family: family.name(),
        n,
        tw: ntd.width(),
        s,
        best_counter: res.best_counter,
        peak_set_size: res.stats.peak_set_size,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Every combination of `sizes` and `radii`, in that nesting order.
pub fn bench(
    family: Family,
    sizes: &[usize],
    radii: &[usize],
    seed: u64,
    threads: usize,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in sizes {
        for &s in radii {
            rows.push(bench_one(family, n, s, seed, threads)?);
        }
    }
    Ok(rows)
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<10} {:>7} {:>4} {:>3} {:>8} {:>10} {:>12}\n",
        "family", "n", "tw", "s", "best", "peak", "wall_ms"
    );
    for r in rows {
        let best = r.best_counter.map_or("-".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>4} {:>3} {:>8} {:>10} {:>12.2}",
            r.family, r.n, r.tw, r.s, best, r.peak_set_size, r.wall_ms
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_run_gives_one_row() {
        let rows = bench(Family::Path, &[20], &[3], 0, 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].tw, 1);
        assert_eq!(rows[0].best_counter, Some(4));
        assert!(format_table(&rows).lines().count() == 2);
        assert!(rows[0].json_line().starts_with("{\"family\":\"path\""));
    }

    #[test]
    fn two_tree_family_keeps_width_two() {
        let rows = bench(Family::KTree { k: 2 }, &[40], &[2, 3, 4], 1, 1).unwrap();
        assert!(rows.iter().all(|r| r.tw == 2));
    }
}
