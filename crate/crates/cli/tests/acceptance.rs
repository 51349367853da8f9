//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sclub_cli::formats::write_graph;
use sclub_cli::generate::{generate_planted, ktree, path};
use sclub_cli::{run_cli, OutputFormat, RunConfig};
use sclub_core::engine::{run, solve, DpResult, Instance, RunOptions};
use sclub_core::graph::{connected_components, crossing_edges, diameter, is_s_club, Graph};
use sclub_core::oracle::min_deletions_bruteforce;
use sclub_core::treedec::{heuristic_decomposition, nicify, validate, NiceTreeDecomposition, Strategy};

const SAMPLE_SEED: u64 = 0x5c1u64;
const RADII: [usize; 3] = [2, 3, 4];

type Verdict = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn main() {
    let sample = criterion_one_sample();
    let criteria: Vec<(&str, Check)> = vec![
        ("C1 oracle equivalence", Box::new(|| oracle_equivalence(&sample))),
        ("C2 certificate validity", Box::new(|| certificate_validity(&sample))),
        ("C3 shadow-mode records", Box::new(|| shadow_records(&sample))),
        ("C4 nice decomposition validator", Box::new(nice_validator)),
        ("C5 analytic properties", Box::new(|| analytic_properties(&sample))),
        ("C6 determinism under concurrency", Box::new(determinism)),
        ("C7 desk-scale scaling", Box::new(scaling)),
        ("C8 planted-instance bound", Box::new(planted_bound)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// All 1024 labelled graphs on 5 vertices, then 300 random graphs on 6 to 8
/// vertices with edge probabilities cycling through 0.2, 0.5, 0.8.
fn criterion_one_sample() -> Vec<Graph> {
    let mut graphs: Vec<Graph> = (0..1024).map(|mask| graph_from_mask(5, mask)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for i in 0..300 {
        let n = rng.gen_range(6..=8);
        let p = [0.2, 0.5, 0.8][i % 3];
        graphs.push(gnp(&mut rng, n, p));
    }
    graphs
}

fn decompose(g: &Graph) -> NiceTreeDecomposition {
    nicify(&heuristic_decomposition(g, Strategy::MinFill)).unwrap()
}

fn dp(g: &Graph, s: usize, options: &RunOptions) -> Result<DpResult, String> {
    let inst = Instance::optimize(g.clone(), s).map_err(|e| e.to_string())?;
    run(&inst, &decompose(g), options).map_err(|e| e.to_string())
}

fn describe(g: &Graph) -> String {
    format!("n={} edges={:?}", g.n(), g.edges())
}

fn oracle_equivalence(sample: &[Graph]) -> Verdict {
    let mut runs = 0;
    for g in sample {
        for s in RADII {
            let expected = min_deletions_bruteforce(g, s).map_err(|e| e.to_string())?.min_deletions;
            let single = dp(g, s, &RunOptions::default())?.best_counter;
            let inst = Instance::optimize(g.clone(), s).unwrap();
            let scheduled = solve(&inst, &decompose(g), &RunOptions::default()).map_err(|e| e.to_string())?;
            if single != Some(expected) || scheduled.best_counter != Some(expected) {
                return Err(format!(
                    "{} s={s}: oracle {expected}, dp {single:?}, scheduled {:?}",
                    describe(g),
                    scheduled.best_counter
                ));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs match the brute-force minimum"))
}

fn verify_certificate(g: &Graph, s: usize, res: &DpResult) -> Result<(), String> {
    let cert = res.certificate.as_ref().ok_or("no certificate")?;
    for block in cert.partition.blocks() {
        if !is_s_club(g, block, s).unwrap() {
            return Err(format!("block {block:?} is not an {s}-club"));
        }
    }
    let cut = crossing_edges(g, &cert.partition).unwrap();
    if Some(cut.len()) != res.best_counter || cut != cert.deleted {
        return Err(format!("cut {} but best_counter {:?}", cut.len(), res.best_counter));
    }
    Ok(())
}

/// Fixed planted instances: n from 10 to 40, s from 2 to 4, noise up to 6.
fn planted_cases() -> Vec<(usize, usize, usize, usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 1);
    (0..100)
        .map(|i| {
            let n = rng.gen_range(10..=40);
            let d = rng.gen_range(2..=(n / 4).max(2));
            let s = RADII[i % 3];
            let noise = rng.gen_range(0..=6);
            (n, d, s, noise, 1000 + i as u64)
        })
        .collect()
}

fn certificate_validity(sample: &[Graph]) -> Verdict {
    let options = RunOptions { certificate: true, ..RunOptions::default() };
    let mut checked = 0;
    for g in sample {
        for s in RADII {
            let res = dp(g, s, &options)?;
            verify_certificate(g, s, &res).map_err(|e| format!("{} s={s}: {e}", describe(g)))?;
            checked += 1;
        }
    }
    for (n, d, s, noise, seed) in planted_cases() {
        let inst = generate_planted(n, d, s, noise, seed).map_err(|e| e.to_string())?;
        let ntd = nicify(&inst.decomposition).unwrap();
        let res = solve(&Instance::optimize(inst.graph.clone(), s).unwrap(), &ntd, &options)
            .map_err(|e| e.to_string())?;
        verify_certificate(&inst.graph, s, &res).map_err(|e| format!("planted seed {seed}: {e}"))?;
        checked += 1;
    }
    Ok(format!("{checked} certificates verified"))
}

fn shadow_records(sample: &[Graph]) -> Verdict {
    let options = RunOptions { shadow: true, ..RunOptions::default() };
    let mut bags = 0;
    for g in sample {
        for s in RADII {
            let res = dp(g, s, &options).map_err(|e| format!("{} s={s}: {e}", describe(g)))?;
            bags += res.stats.bags.len();
        }
    }
    Ok(format!("records matched ground truth after {bags} handler calls"))
}

fn nice_validator() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 2);
    for i in 0..200 {
        let n = rng.gen_range(1..=50);
        let p = rng.gen_range(0.02..0.4);
        let g = gnp(&mut rng, n, p);
        let strategy = if i % 2 == 0 { Strategy::MinFill } else { Strategy::MinDegree };
        let td = heuristic_decomposition(&g, strategy);
        validate(&td, &g).map_err(|e| format!("heuristic output invalid on graph {i}: {e}"))?;
        let ntd = nicify(&td).map_err(|e| format!("graph {i}: {e}"))?;
        ntd.validate(&g).map_err(|e| format!("graph {i}: {e}"))?;
        if ntd.width() != td.width() {
            return Err(format!("graph {i}: width {} became {}", td.width(), ntd.width()));
        }
    }
    Ok("200 decompositions satisfy P.1-P.4 and keep their width".into())
}

fn best(g: &Graph, s: usize) -> Result<usize, String> {
    dp(g, s, &RunOptions::default())?.best_counter.ok_or_else(|| "optimize run infeasible".into())
}

fn analytic_properties(sample: &[Graph]) -> Verdict {
    for g in sample {
        let values: Vec<usize> = RADII.iter().map(|&s| best(g, s)).collect::<Result<_, _>>()?;
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("{}: best_counter not monotone in s: {values:?}", describe(g)));
        }
        let big = g.n().saturating_sub(1).max(2);
        if best(g, big)? != 0 {
            return Err(format!("{}: nonzero at s = {big}", describe(g)));
        }
        for s in RADII {
            let expected = connected_components(g)
                .blocks()
                .iter()
                .all(|c| diameter(g, c).unwrap().is_some_and(|d| d <= s));
            let inst = Instance::new(g.clone(), s, 0).unwrap();
            let got = run(&inst, &decompose(g), &RunOptions::default()).map_err(|e| e.to_string())?.feasible;
            if got != expected {
                return Err(format!("{} s={s}: k=0 gives {got}, diameter test {expected}", describe(g)));
            }
        }
    }
    let random = &sample[1024..];
    for pair in random.chunks(2).take(60) {
        let union = pair[0].disjoint_union(&pair[1]);
        for s in RADII {
            let (a, b, u) = (best(&pair[0], s)?, best(&pair[1], s)?, best(&union, s)?);
            if u != a + b {
                return Err(format!("disjoint union s={s}: {u} != {a} + {b}"));
            }
        }
    }
    Ok(format!("{} graphs, 60 disjoint unions", sample.len()))
}

fn strip_timing(json: &str) -> Result<String, String> {
    let mut value: serde_json::Value = serde_json::from_str(json).map_err(|e| e.to_string())?;
    value.as_object_mut().ok_or("report is not an object")?.remove("timing");
    Ok(value.to_string())
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 3);
    for i in 0..50u64 {
        let s = RADII[i as usize % 3];
        let g = if i % 2 == 0 {
            generate_planted(rng.gen_range(12..=30), 4, s, rng.gen_range(0..5), i).unwrap().graph
        } else {
            let n = rng.gen_range(8..=14);
            gnp(&mut rng, n, 0.3)
        };
        let file = dir.path().join(format!("g{i}.gr"));
        std::fs::write(&file, write_graph(&g)).map_err(|e| e.to_string())?;
        let report = |threads: usize| -> Result<String, String> {
            let mut config = RunConfig::new(Path::new(&file), s);
            config.certificate = true;
            config.threads = threads;
            config.format = OutputFormat::Json;
            let out = run_cli(&config);
            if out.exit_code != 0 {
                return Err(format!("instance {i}: exit {} {}", out.exit_code, out.output));
            }
            strip_timing(&out.output)
        };
        if report(1)? != report(8)? {
            return Err(format!("instance {i}: 1-thread and 8-thread reports differ"));
        }
    }
    Ok("50 instances give identical reports with 1 and 8 workers".into())
}

fn timed_solve(g: &Graph, s: usize, threads: usize) -> Result<(Duration, usize), String> {
    let start = Instant::now();
    let ntd = decompose(g);
    let inst = Instance::optimize(g.clone(), s).unwrap();
    let res =
        solve(&inst, &ntd, &RunOptions { threads, ..RunOptions::default() }).map_err(|e| e.to_string())?;
    let best = res.best_counter.ok_or("infeasible")?;
    Ok((start.elapsed(), best))
}

fn scaling() -> Verdict {
    let mut times = Vec::new();
    for n in [1000, 2000, 4000] {
        let g = path(n);
        // Best of five damps scheduler noise on millisecond-scale runs.
        let mut fastest = Duration::MAX;
        for _ in 0..5 {
            let (t, best) = timed_solve(&g, 3, 1)?;
            if best != n.div_ceil(4) - 1 {
                return Err(format!("path {n}: best_counter {best}, expected {}", n.div_ceil(4) - 1));
            }
            fastest = fastest.min(t);
        }
        times.push(fastest.as_secs_f64());
    }
    let ratios = [times[1] / times[0], times[2] / times[1]];
    if ratios.iter().any(|&r| r > 2.5) || times[2] >= 60.0 {
        return Err(format!("path times {times:?} s, doubling ratios {ratios:?}"));
    }
    let g = ktree(200, 3, 7);
    let mut ktree_times = Vec::new();
    for s in RADII {
        let (t, best) = timed_solve(&g, s, 1)?;
        ktree_times.push(format!("s={s}: {best} in {:.1}s", t.as_secs_f64()));
    }
    Ok(format!(
        "paths {:.1}/{:.1}/{:.1} ms (ratios {:.2}, {:.2}); 3-tree n=200 {}",
        times[0] * 1e3,
        times[1] * 1e3,
        times[2] * 1e3,
        ratios[0],
        ratios[1],
        ktree_times.join(", ")
    ))
}

fn planted_bound() -> Verdict {
    let mut slack = 0;
    for (n, d, s, noise, seed) in planted_cases() {
        let inst = generate_planted(n, d, s, noise, seed).map_err(|e| e.to_string())?;
        let ntd = nicify(&inst.decomposition).unwrap();
        let res = solve(&Instance::optimize(inst.graph, s).unwrap(), &ntd, &RunOptions::default())
            .map_err(|e| e.to_string())?;
        let best = res.best_counter.ok_or("infeasible")?;
        if best > noise {
            return Err(format!("seed {seed}: best_counter {best} exceeds planted noise {noise}"));
        }
        slack += noise - best;
    }
    Ok(format!("100 instances within the planted noise (total slack {slack})"))
}
