//! Seeded inputs shared by the benchmarks.

use numrad_core::{draw, CMatrix, EnsembleSpec, Family};

pub const SIZES: [usize; 4] = [4, 8, 16, 32];

/// Deterministic draws from `family` with the given arity.
pub fn inputs(family: Family, n: usize, arity: usize, trial: u64) -> Vec<CMatrix> {
    let mut spec = EnsembleSpec::new(family, n, 7);
    if family == Family::Ginibre {
        spec = spec.with_param("arity", arity as u64);
    }
    draw(&spec, trial).expect("valid spec")
}

pub fn ginibre(n: usize) -> CMatrix {
    inputs(Family::Ginibre, n, 1, 0).remove(0)
}

pub fn hermitian(n: usize) -> CMatrix {
    inputs(Family::HermitianGauss, n, 1, 0).remove(0)
}
