//! The fidelity tensor `A` on the (input number state) ⊗ (symmetric two-clone
//! state) space.
//!
//! For a machine `|n>|0>|A0> -> sum_s |s>|R_ns>` the average single-clone
//! fidelity over spin coherent inputs is `sum <R_n's'|R_ns> A[(n',s'),(n,s)]`
//! with
//!
//! ```text
//! A[(n',s'),(n,s)] = sum_{k,k',l} <k|<l|s> <s'|k'>|l> ∫dΩ O*_n' O_k' O*_k O_n
//! ```
//!
//! where `dΩ = dφ dθ sinθ / 4π`. The angular integral is evaluated in closed
//! form; the φ integral makes it vanish unless `n + k' = n' + k`, so `A`
//! conserves the charge `i + j - n` of a composite index `(n, s = {i, j})`.
//! Composite indices are laid out as `n * S + s`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, Error, Result};
use crate::spin::binomial;
use crate::symmetric::SymmetricBasis;

/// Largest `d` for which factorials are evaluated directly in `f64`.
const DIRECT_FACTORIAL_MAX_DIM: usize = 30;

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `∫dΩ O*_{n'} O_{k'} O*_k O_n` for spin coherent amplitudes in dimension `d`.
///
/// On the support `n + k' = n' + k` the integral is
/// `sqrt(C(n') C(k') C(k) C(n)) * B(p/2 + 1, q/2 + 1)` with `C(i) = binom(d-1, i)`,
/// `p = n + n' + k + k'` and `q = 4(d - 1) - p`; the Beta function at these
/// integer arguments is `(p/2)! (q/2)! / (2d - 1)!`.
pub fn angular_moment(d: usize, n_out: usize, k_out: usize, k: usize, n: usize) -> Result<f64> {
    check_dimension(d)?;
    for idx in [n_out, k_out, k, n] {
        if idx >= d {
            return Err(Error::IndexOutOfRange {
                what: "number basis",
                index: idx,
                bound: d,
            });
        }
    }
    Ok(moment_unchecked(d, n_out, k_out, k, n))
}

/// [`angular_moment`] without index validation; indices must be below `d`.
pub fn moment_unchecked(d: usize, n_out: usize, k_out: usize, k: usize, n: usize) -> f64 {
    if n + k_out != n_out + k {
        return 0.0;
    }
    let half_p = (n + n_out + k + k_out) / 2;
    let half_q = 2 * (d - 1) - half_p;
    let binoms =
        binomial(d - 1, n_out) * binomial(d - 1, k_out) * binomial(d - 1, k) * binomial(d - 1, n);
    let beta = if d <= DIRECT_FACTORIAL_MAX_DIM {
        factorial(half_p) * factorial(half_q) / factorial(2 * d - 1)
    } else {
        (ln_factorial(half_p) + ln_factorial(half_q) - ln_factorial(2 * d - 1)).exp()
    };
    binoms.sqrt() * beta
}

#[derive(Debug, Clone)]
pub struct FidelityTensor {
    basis: SymmetricBasis,
    matrix: DMatrix<f64>,
}

/// Serializable dump of the tensor: `data` is the row-major `(d*S) x (d*S)` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDump {
    pub d: usize,
    #[serde(rename = "S")]
    pub s: usize,
    pub data: Vec<f64>,
}

impl FidelityTensor {
    /// Assembles `A` using `moment(d, n', k', k, n)` for the angular integral.
    /// Rows are filled in parallel.
    pub fn from_moments<F>(basis: &SymmetricBasis, moment: F) -> Self
    where
        F: Fn(usize, usize, usize, usize, usize) -> f64 + Sync,
    {
        let d = basis.dim_single();
        let s_dim = basis.len();
        let n_total = d * s_dim;
        let rows: Vec<Vec<f64>> = (0..n_total)
            .into_par_iter()
            .map(|row| {
                let (n_out, s_out) = (row / s_dim, row % s_dim);
                let (i, j) = basis.pair(s_out);
                let mut out = vec![0.0; n_total];
                // <s'|k' l>: both orderings of the pair contribute
                let terms: &[(usize, usize)] = if i == j { &[(i, i)] } else { &[(i, j), (j, i)] };
                for &(k_out, l) in terms {
                    let b = basis.amp(k_out, l, s_out);
                    for k in 0..d {
                        let Some(n) = (n_out + k).checked_sub(k_out).filter(|&n| n < d) else {
                            continue;
                        };
                        let s = basis.index_of(k, l).expect("in range");
                        let a = basis.amp(k, l, s);
                        out[n * s_dim + s] += a * b * moment(d, n_out, k_out, k, n);
                    }
                }
                out
            })
            .collect();
        let matrix = DMatrix::from_fn(n_total, n_total, |r, c| rows[r][c]);
        Self {
            basis: basis.clone(),
            matrix,
        }
    }

    pub fn dim_single(&self) -> usize {
        self.basis.dim_single()
    }

    pub fn sym_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &SymmetricBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn composite(&self, n: usize, s: usize) -> usize {
        n * self.sym_dim() + s
    }

    /// Conserved charge `i + j - n` of composite index `idx`.
    pub fn charge(&self, idx: usize) -> isize {
        let s_dim = self.sym_dim();
        let (i, j) = self.basis.pair(idx % s_dim);
        (i + j) as isize - (idx / s_dim) as isize
    }

    /// Composite indices grouped by charge, ascending. `A` is block diagonal
    /// with respect to this partition.
    pub fn charge_sectors(&self) -> Vec<Vec<usize>> {
        let d = self.dim_single() as isize;
        let mut sectors = vec![Vec::new(); (3 * (d - 1) + 1) as usize];
        for idx in 0..self.matrix.nrows() {
            sectors[(self.charge(idx) + d - 1) as usize].push(idx);
        }
        sectors.retain(|s| !s.is_empty());
        sectors
    }

    pub fn sector_block(&self, sector: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(sector.len(), sector.len(), |r, c| {
            self.matrix[(sector[r], sector[c])]
        })
    }

    /// `<w|A|w>` summed over the columns of `w` (one column per ancilla state).
    pub fn expectation(&self, w: &DMatrix<f64>) -> f64 {
        (w.transpose() * &self.matrix * w).trace()
    }

    pub fn dump(&self) -> TensorDump {
        let n = self.matrix.nrows();
        TensorDump {
            d: self.dim_single(),
            s: self.sym_dim(),
            data: (0..n * n).map(|k| self.matrix[(k / n, k % n)]).collect(),
        }
    }
}

pub fn build_fidelity_tensor(d: usize, basis: &SymmetricBasis) -> Result<FidelityTensor> {
    check_dimension(d)?;
    if basis.dim_single() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("symmetric basis for d = {d}"),
            found: format!("d = {}", basis.dim_single()),
        });
    }
    Ok(FidelityTensor::from_moments(basis, moment_unchecked))
}
