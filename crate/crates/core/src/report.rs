//! Serializable result records and the sweep CSV format.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::channel::ConjectureVerdict;
use crate::error::{Error, Result};
use crate::optimizer::{universal_fidelity, OptimalSolution, SweepRow};

pub const SWEEP_HEADER: [&str; 3] = ["d", "f_coherent", "f_universal"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub d: usize,
    pub f_coherent: f64,
    pub f_universal: f64,
    pub lambda_max: f64,
    pub multiplicity: usize,
}

impl From<&OptimalSolution> for FidelityReport {
    fn from(sol: &OptimalSolution) -> Self {
        Self {
            d: sol.dim,
            f_coherent: sol.fidelity,
            f_universal: universal_fidelity(sol.dim),
            lambda_max: sol.lambda_max,
            multiplicity: sol.multiplicity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiReport {
    pub d: usize,
    pub eigenvalues: Vec<f64>,
    pub trace_residual: f64,
    pub covariance_residual: f64,
    pub permutation_residual: f64,
    pub conjecture: ConjectureVerdict,
}

/// One nonzero `<a|R_ns>` coefficient of a cloning isometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformEntry {
    pub n: usize,
    /// Symmetric two-clone state `|i,j>` with `i <= j`.
    pub s: [usize; 2],
    pub a: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub d: usize,
    pub ancilla_dim: usize,
    pub fidelity: f64,
    pub isometry_residual: f64,
    pub entries: Vec<TransformEntry>,
}

/// Decimal rendering with 17 significant digits, enough to round-trip any `f64`.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            format_sig17(r.f_coherent),
            format_sig17(r.f_universal),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::DimensionMismatch {
            expected: SWEEP_HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}
