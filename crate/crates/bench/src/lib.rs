//! Benchmark fixtures for the cloning pipeline.

use spinclone_core::{build_isometry, choi_from_isometry, max_fidelity, ChoiOperator, Result};

/// Solve, build the isometry and its Choi operator for dimension `d`.
pub fn full_pipeline(d: usize) -> Result<ChoiOperator> {
    let sol = max_fidelity(d)?;
    choi_from_isometry(&build_isometry(&sol)?)
}
