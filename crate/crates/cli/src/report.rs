//! Machine-readable run report. Everything that varies between identical
//! runs lives under `timing`.

use sclub_core::engine::{Certificate, RunStats};
use serde::Serialize;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format: u32,
    pub mode: &'static str,
    pub instance: InstanceInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_counter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsInfo>,
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceInfo {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub k: Option<usize>,
    pub width: Option<usize>,
    pub seed: u64,
}

/// Blocks and deleted edges with 1-based labels.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateInfo {
    pub blocks: Vec<Vec<usize>>,
    pub deleted: Vec<[usize; 2]>,
}

impl CertificateInfo {
    pub fn new(blocks: &[Vec<usize>], deleted: &[(usize, usize)]) -> Self {
        CertificateInfo {
            blocks: blocks.iter().map(|b| b.iter().map(|v| v + 1).collect()).collect(),
            deleted: deleted.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        }
    }
}

impl From<&Certificate> for CertificateInfo {
    fn from(c: &Certificate) -> Self {
        CertificateInfo::new(c.partition.blocks(), &c.deleted)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsInfo {
    pub bags: Vec<BagInfo>,
    pub peak_set_size: usize,
    pub budgets: Vec<usize>,
    pub aborted_at: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BagInfo {
    pub node: usize,
    pub kind: &'static str,
    pub bag_size: usize,
    pub solutions: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bag_ms: Vec<f64>,
}

impl StatsInfo {
    pub fn split(stats: &RunStats) -> (StatsInfo, Vec<f64>) {
        let bags = stats
            .bags
            .iter()
            .map(|b| BagInfo {
                node: b.node,
                kind: b.kind.label(),
                bag_size: b.bag_size,
                solutions: b.solutions,
            })
            .collect();
        let bag_ms = stats.bags.iter().map(|b| b.elapsed.as_secs_f64() * 1e3).collect();
        let info = StatsInfo {
            bags,
            peak_set_size: stats.peak_set_size,
            budgets: stats.budgets.clone(),
            aborted_at: stats.aborted_at,
        };
        (info, bag_ms)
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
