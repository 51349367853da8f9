//! Fixtures shared by the criterion benches.

use sclub_cli::bench::Family;
use sclub_core::engine::Instance;
use sclub_core::treedec::{heuristic_decomposition, nicify, NiceTreeDecomposition, Strategy};

/// Optimisation instance plus its nice decomposition.
pub fn fixture(family: Family, n: usize, s: usize, seed: u64) -> (Instance, NiceTreeDecomposition) {
    let g = family.build(n, s, seed).expect("family parameters are valid");
    let ntd = nicify(&heuristic_decomposition(&g, Strategy::MinFill)).expect("heuristic output is valid");
    (Instance::optimize(g, s).expect("s >= 2"), ntd)
}
