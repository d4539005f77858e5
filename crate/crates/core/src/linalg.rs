//! Small dense helpers on top of nalgebra shared by the other modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: nalgebra::ComplexField<RealField = f64>> {
    pub values: Vec<f64>,
    /// Columns are eigenvectors in the order of `values`.
    pub vectors: DMatrix<T>,
}

pub fn hermitian_eigen<T>(m: &DMatrix<T>) -> Result<HermitianEigen<T>>
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0).ok_or_else(|| {
        Error::Numeric(format!(
            "symmetric eigensolver did not converge on a {n}x{n} matrix"
        ))
    })?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!(
            "non-finite eigenvalue in a {n}x{n} matrix"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])].clone());
    Ok(HermitianEigen { values, vectors })
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Negative eigenvalues down to `-tol` are clamped to zero.
pub fn psd_sqrt(m: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let eig = hermitian_eigen(m)?;
    if let Some(&min) = eig.values.last() {
        if min < -tol {
            return Err(Error::Numeric(format!(
                "matrix is not PSD (min eigenvalue {min:.3e})"
            )));
        }
    }
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (k, &v) in eig.values.iter().enumerate() {
        let col = eig.vectors.column(k);
        out += col * col.transpose() * v.max(0.0).sqrt();
    }
    Ok(out)
}

/// Frobenius norm of `a - a^dagger`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Partial trace over the second factor of a `(d1*d2) x (d1*d2)` operator.
pub fn partial_trace_second(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d1, d1, |i, k| {
        (0..d2).map(|l| m[(i * d2 + l, k * d2 + l)]).sum()
    })
}

/// Partial trace over the first factor of a `(d1*d2) x (d1*d2)` operator.
pub fn partial_trace_first(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d2, d2, |j, l| {
        (0..d1).map(|i| m[(i * d2 + j, i * d2 + l)]).sum()
    })
}

/// `(a ⊗ b ⊗ c) · m` for square `a`, `b`, `c` of the same size `d` and `m`
/// with `d^3` rows, without forming the Kronecker product.
pub fn kron3_mul_left(a: &CMatrix, b: &CMatrix, c: &CMatrix, m: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let ncols = m.ncols();
    debug_assert_eq!(m.nrows(), d * d * d);
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    let mut t1 = CMatrix::zeros(d * d * d, ncols);
    let mut t2 = CMatrix::zeros(d * d * d, ncols);
    for col in 0..ncols {
        // contract the third index with c
        for i in 0..d {
            for j in 0..d {
                for k2 in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..d {
                        acc += c[(k2, k)] * m[(idx(i, j, k), col)];
                    }
                    t1[(idx(i, j, k2), col)] = acc;
                }
            }
        }
        for i in 0..d {
            for k in 0..d {
                for j2 in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..d {
                        acc += b[(j2, j)] * t1[(idx(i, j, k), col)];
                    }
                    t2[(idx(i, j2, k), col)] = acc;
                }
            }
        }
        for j in 0..d {
            for k in 0..d {
                for i2 in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        acc += a[(i2, i)] * t2[(idx(i, j, k), col)];
                    }
                    t1[(idx(i2, j, k), col)] = acc;
                }
            }
        }
    }
    t1
}
