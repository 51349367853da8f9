use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use sclub_core::engine::{solve_observed, BagStat, Instance, RunOptions};
use sclub_core::graph::{crossing_edges, is_s_club, Graph};
use sclub_core::oracle::{min_deletions_with_limit, DEFAULT_LIMIT};
use sclub_core::treedec::{heuristic_decomposition, nicify, NiceTreeDecomposition, Strategy};

use crate::formats::{parse_graph, parse_partition, parse_td};
use crate::report::{CertificateInfo, InstanceInfo, Report, StatsInfo, Timing, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Decide,
    Optimize,
    Oracle,
    Check,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Decide => "decide",
            Mode::Optimize => "optimize",
            Mode::Oracle => "oracle",
            Mode::Check => "check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub td: Option<PathBuf>,
    /// Partition to verify in check mode.
    pub partition: Option<PathBuf>,
    pub s: usize,
    pub k: Option<usize>,
    pub optimize: bool,
    /// Defaults to decide when `k` is given and optimize otherwise.
    pub mode: Option<Mode>,
    pub certificate: bool,
    pub shadow: bool,
    pub threads: usize,
    /// Recorded in the report; decomposition heuristics are deterministic.
    pub seed: u64,
    pub format: OutputFormat,
    pub oracle_limit: usize,
}

impl RunConfig {
    pub fn new(graph: impl Into<PathBuf>, s: usize) -> Self {
        RunConfig {
            graph: graph.into(),
            td: None,
            partition: None,
            s,
            k: None,
            optimize: false,
            mode: None,
            certificate: false,
            shadow: false,
            threads: 1,
            seed: 0,
            format: OutputFormat::Text,
            oracle_limit: DEFAULT_LIMIT,
        }
    }

    pub fn resolved_mode(&self) -> Result<Mode> {
        if self.s < 2 {
            bail!("s must be at least 2, got {}", self.s);
        }
        if self.optimize && self.k.is_some() {
            bail!("--k and --optimize are mutually exclusive");
        }
        let mode = self.mode.unwrap_or(if self.k.is_some() { Mode::Decide } else { Mode::Optimize });
        match mode {
            Mode::Decide if self.k.is_none() => bail!("decide mode needs --k"),
            Mode::Decide if self.optimize => bail!("decide mode cannot be combined with --optimize"),
            Mode::Optimize if self.k.is_some() => bail!("optimize mode takes no --k"),
            Mode::Check if self.partition.is_none() => bail!("check mode needs --partition"),
            _ => Ok(mode),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    /// 0 feasible or verified, 1 infeasible or rejected, 2 usage or input error.
    pub exit_code: i32,
    pub output: String,
    pub report: Option<Report>,
}

pub fn run_cli(config: &RunConfig) -> Outcome {
    run_cli_observed(config, |_| {})
}

/// Like [`run_cli`], passing every per-bag event to `trace`.
pub fn run_cli_observed(config: &RunConfig, trace: impl FnMut(&BagStat)) -> Outcome {
    match execute(config, trace) {
        Ok(report) => {
            let exit_code = match (report.feasible, report.verified) {
                (Some(true), _) | (_, Some(true)) => 0,
                _ => 1,
            };
            let output = match config.format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Text => render_text(&report),
            };
            Outcome { exit_code, output, report: Some(report) }
        }
        Err(e) => Outcome { exit_code: 2, output: format!("error: {e:#}"), report: None },
    }
}

fn execute(config: &RunConfig, trace: impl FnMut(&BagStat)) -> Result<Report> {
    let start = Instant::now();
    let mode = config.resolved_mode()?;
    let g = parse_graph(&config.graph)?;
    let mut report = Report {
        format: FORMAT_VERSION,
        mode: mode.name(),
        instance: InstanceInfo {
            n: g.n(),
            m: g.m(),
            s: config.s,
            k: config.k,
            width: None,
            seed: config.seed,
        },
        feasible: None,
        best_counter: None,
        verified: None,
        message: None,
        certificate: None,
        stats: None,
        timing: Timing::default(),
    };
    match mode {
        Mode::Decide | Mode::Optimize => {
            let ntd = decomposition(config, &g)?;
            report.instance.width = Some(ntd.width());
            let inst = match config.k {
                Some(k) => Instance::new(g, config.s, k)?,
                None => Instance::optimize(g, config.s)?,
            };
            let options = RunOptions {
                threads: config.threads,
                certificate: config.certificate,
                shadow: config.shadow,
            };
            let res = solve_observed(&inst, &ntd, &options, trace)?;
            let (stats, bag_ms) = StatsInfo::split(&res.stats);
            report.feasible = Some(res.feasible);
            report.best_counter = res.best_counter;
            report.certificate = res.certificate.as_ref().map(CertificateInfo::from);
            report.stats = Some(stats);
            report.timing.bag_ms = bag_ms;
        }
        Mode::Oracle => {
            let res = min_deletions_with_limit(&g, config.s, config.oracle_limit)?;
            let feasible = config.k.map_or(true, |k| res.min_deletions <= k);
            report.feasible = Some(feasible);
            report.best_counter = Some(res.min_deletions);
            if config.certificate {
                let deleted = crossing_edges(&g, &res.witness)?;
                report.certificate = Some(CertificateInfo::new(res.witness.blocks(), &deleted));
            }
        }
        Mode::Check => {
            let path = config.partition.as_ref().expect("checked by resolved_mode");
            let p = parse_partition(path, g.n())?;
            let deleted = crossing_edges(&g, &p)?;
            let bad = p
                .blocks()
                .iter()
                .find(|b| !is_s_club(&g, b, config.s).unwrap_or(false))
                .map(|b| b.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" "));
            let over = config.k.filter(|&k| deleted.len() > k);
            report.verified = Some(bad.is_none() && over.is_none());
            report.message = match (bad, over) {
                (Some(b), _) => Some(format!("block {{{b}}} is not an {}-club", config.s)),
                (None, Some(k)) => Some(format!("{} crossing edges exceed the budget {k}", deleted.len())),
                (None, None) => None,
            };
            report.best_counter = Some(deleted.len());
            report.certificate = Some(CertificateInfo::new(p.blocks(), &deleted));
        }
    }
    report.timing.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn decomposition(config: &RunConfig, g: &Graph) -> Result<NiceTreeDecomposition> {
    let td = match &config.td {
        Some(path) => parse_td(path, g)?,
        None => heuristic_decomposition(g, Strategy::MinFill),
    };
    nicify(&td)
        .map_err(|v| anyhow!("{}", crate::formats::describe_violation(&v)))
        .context("building nice decomposition")
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    match r.mode {
        "check" => {
            let verdict = if r.verified == Some(true) { "VALID" } else { "INVALID" };
            let _ = writeln!(out, "{verdict}: {} crossing edges", r.best_counter.unwrap_or(0));
            if let Some(msg) = &r.message {
                let _ = writeln!(out, "{msg}");
            }
            return out;
        }
        _ if r.instance.k.is_some() => match (r.feasible, r.best_counter) {
            (Some(true), Some(c)) => {
                let _ = writeln!(out, "YES {c}");
            }
            _ => {
                let _ = writeln!(out, "NO");
            }
        },
        _ => {
            let _ = writeln!(out, "minimum deletions: {}", r.best_counter.unwrap_or(0));
        }
    }
    if let Some(cert) = &r.certificate {
        for block in &cert.blocks {
            let labels: Vec<String> = block.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "block {}", labels.join(" "));
        }
        for [u, v] in &cert.deleted {
            let _ = writeln!(out, "delete {u} {v}");
        }
    }
    out
}
