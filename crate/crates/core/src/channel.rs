//! Choi (Jamiołkowski) operators of cloning channels and their symmetry
//! residuals.
//!
//! `P = (E ⊗ id)(|I><I|)` with the unnormalized `|I> = sum_n |n>|n>`, so a
//! trace-preserving `E` has `Tr_K P = I` and `Tr P = d`. Rows and columns are
//! indexed `(i * d + j) * d + n`: clone 1, clone 2, then the copy of the input.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, Error, Result};
use crate::linalg::{hermitian_eigen, kron3_mul_left, partial_trace_first, to_complex, CMatrix};
use crate::optimizer::CloningIsometry;
use crate::spin::{rotation_matrix, CoherentPoint};

/// Largest `d` for which `d^3 x d^3` operators are stored densely.
pub const MAX_DENSE_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator {
    d: usize,
    matrix: CMatrix,
}

/// Errors unless `d^3 x d^3` operators are within the dense ceiling.
pub fn check_dense(d: usize) -> Result<()> {
    check_dimension(d)?;
    if d > MAX_DENSE_DIM {
        return Err(Error::DimensionTooLarge {
            d,
            max: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

impl ChoiOperator {
    /// Wraps an arbitrary `d^3 x d^3` operator. Validity (positivity, trace
    /// preservation) is measured by the residual functions, not enforced.
    pub fn from_matrix(d: usize, matrix: CMatrix) -> Result<Self> {
        check_dense(d)?;
        let n = d * d * d;
        if matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        Ok(Self { d, matrix })
    }

    /// Choi operator of `rho -> Tr_a V rho V^dagger`, where `outputs[n]` is the
    /// `d^2 x ancilla` matrix `<k l, a|V|n>`.
    pub fn from_product_map(d: usize, outputs: &[CMatrix]) -> Result<Self> {
        check_dense(d)?;
        if outputs.len() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("{d} outputs"),
                found: outputs.len().to_string(),
            });
        }
        let ancilla = outputs[0].ncols();
        if outputs.iter().any(|o| o.shape() != (d * d, ancilla)) {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{ancilla} output blocks", d * d),
                found: "ragged blocks".into(),
            });
        }
        // columns of psi are the vectors sum_n V|n> ⊗ |n> split by ancilla state
        let psi = CMatrix::from_fn(d * d * d, ancilla, |row, a| outputs[row % d][(row / d, a)]);
        Self::from_matrix(d, &psi * psi.adjoint())
    }

    pub fn dim_single(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            d: self.d,
            matrix: &self.matrix * Complex64::new(factor, 0.0),
        }
    }

    /// `Tr_K P`, a `d x d` operator on the input copy.
    pub fn reduced_input(&self) -> CMatrix {
        partial_trace_first(&self.matrix, self.d * self.d, self.d)
    }

    /// `E(rho) = Tr_3[(I_K ⊗ rho^T) P]`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let d = self.d;
        if rho.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d}"),
                found: format!("{}x{}", rho.nrows(), rho.ncols()),
            });
        }
        let k = d * d;
        Ok(CMatrix::from_fn(k, k, |x, y| {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..d {
                for np in 0..d {
                    acc += self.matrix[(x * d + n, y * d + np)] * rho[(n, np)];
                }
            }
            acc
        }))
    }
}

pub fn choi_from_isometry(iso: &CloningIsometry) -> Result<ChoiOperator> {
    let d = iso.dim();
    check_dense(d)?;
    let embed = to_complex(&iso.basis().embedding());
    let outputs: Vec<CMatrix> = iso.components().iter().map(|r| &embed * r).collect();
    ChoiOperator::from_product_map(d, &outputs)
}

/// `||Tr_K P - I||_F`.
pub fn trace_preservation_residual(p: &ChoiOperator) -> f64 {
    let d = p.d;
    (p.reduced_input() - CMatrix::identity(d, d)).norm()
}

/// Largest `||[P, R ⊗ R ⊗ R*]||_F` over the sampled rotations.
pub fn covariance_residual(p: &ChoiOperator, samples: &[CoherentPoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &point in samples {
        let r = rotation_matrix(p.d, point)?;
        let rc = r.conjugate();
        let up = kron3_mul_left(&r, &r, &rc, &p.matrix);
        let pu = kron3_mul_left(
            &r.transpose(),
            &r.transpose(),
            &r.adjoint(),
            &p.matrix.transpose(),
        )
        .transpose();
        worst = worst.max((up - pu).norm());
    }
    Ok(worst)
}

/// `||[P, SWAP_12 ⊗ I]||_F`.
pub fn permutation_residual(p: &ChoiOperator) -> f64 {
    let d = p.d;
    let n = d * d * d;
    let swap = |idx: usize| {
        let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
        (j * d + i) * d + k
    };
    // (S P S)[x, y] = P[swap x, swap y]; ||SP - PS|| = ||SPS - P||
    let mut acc = 0.0;
    for x in 0..n {
        for y in 0..n {
            acc += (p.matrix[(swap(x), swap(y))] - p.matrix[(x, y)]).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Full spectrum, descending.
pub fn choi_spectrum(p: &ChoiOperator) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(&p.matrix)?.values)
}

/// Whether a spectrum has exactly `d` eigenvalues at 1 and the rest at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub holds: bool,
    /// Largest `|lambda_k - 1|` over the top `d` eigenvalues.
    pub top_deviation: f64,
    /// Largest `|lambda_k|` over the remaining eigenvalues.
    pub tail_max: f64,
    pub tolerance: f64,
}

pub fn unit_eigenvalue_verdict(spectrum: &[f64], d: usize, tolerance: f64) -> ConjectureVerdict {
    let top_deviation = spectrum
        .iter()
        .take(d)
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let tail_max = spectrum.iter().skip(d).map(|v| v.abs()).fold(0.0, f64::max);
    ConjectureVerdict {
        holds: spectrum.len() >= d && top_deviation < tolerance && tail_max < tolerance,
        top_deviation,
        tail_max,
        tolerance,
    }
}
