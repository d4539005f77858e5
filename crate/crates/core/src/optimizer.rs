//! Optimal fidelity from the top eigenvalue of the fidelity tensor, and an
//! explicit cloning isometry rebuilt from the top eigenspace.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, Error, Result};
use crate::fidelity::{build_fidelity_tensor, FidelityTensor};
use crate::linalg::{hermitian_eigen, partial_trace_second, psd_sqrt, CMatrix};
use crate::spin::{coherent_amplitudes, AmplitudeVector, CoherentPoint};
use crate::symmetric::SymmetricBasis;

/// Residual allowed on the Gram condition `G = I` when rebuilding an isometry.
pub const ISOMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Eigenvalues within `degeneracy_tol * lambda_max` of the top one are
    /// treated as degenerate with it.
    pub degeneracy_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            degeneracy_tol: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn with_degeneracy_tol(tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        Ok(Self {
            degeneracy_tol: tol,
        })
    }
}

#[derive(Debug, Clone)]
pub struct OptimalSolution {
    pub dim: usize,
    pub fidelity: f64,
    pub lambda_max: f64,
    pub multiplicity: usize,
    /// Orthonormal basis of the top eigenspace, each of length `d * S` in the
    /// composite layout `n * S + s`.
    pub eigenvectors: Vec<DVector<f64>>,
    pub basis: SymmetricBasis,
}

/// Top eigenpairs of `A`, solved sector by sector over the conserved charge.
pub fn solve(tensor: &FidelityTensor, opts: &SolverOptions) -> Result<OptimalSolution> {
    let d = tensor.dim_single();
    let n_total = tensor.matrix().nrows();
    let sectors = tensor.charge_sectors();
    let spectra = sectors
        .par_iter()
        .map(|sector| hermitian_eigen(&tensor.sector_block(sector)).map(|e| (sector, e)))
        .collect::<Result<Vec<_>>>()?;

    let lambda_max = spectra
        .iter()
        .filter_map(|(_, e)| e.values.first().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Numeric(format!(
            "top eigenvalue {lambda_max} of the fidelity tensor for d = {d}"
        )));
    }
    let cutoff = lambda_max - opts.degeneracy_tol * lambda_max;

    let mut eigenvectors = Vec::new();
    for (sector, eig) in &spectra {
        for (k, _) in eig
            .values
            .iter()
            .enumerate()
            .take_while(|(_, &v)| v >= cutoff)
        {
            let mut v = DVector::zeros(n_total);
            for (local, &global) in sector.iter().enumerate() {
                v[global] = eig.vectors[(local, k)];
            }
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.neg_mut();
                }
            }
            eigenvectors.push(v);
        }
    }

    let fidelity = d as f64 * lambda_max;
    if !(0.5 - 1e-12..=1.0 + 1e-12).contains(&fidelity) {
        return Err(Error::Numeric(format!(
            "fidelity {fidelity} outside [1/2, 1] for d = {d}"
        )));
    }
    Ok(OptimalSolution {
        dim: d,
        fidelity,
        lambda_max,
        multiplicity: eigenvectors.len(),
        eigenvectors,
        basis: tensor.basis().clone(),
    })
}

pub fn max_fidelity(d: usize) -> Result<OptimalSolution> {
    max_fidelity_with(d, &SolverOptions::default())
}

pub fn max_fidelity_with(d: usize, opts: &SolverOptions) -> Result<OptimalSolution> {
    check_dimension(d)?;
    let basis = SymmetricBasis::new(d)?;
    solve(&build_fidelity_tensor(d, &basis)?, opts)
}

/// Optimal universal `1 -> 2` cloning fidelity `(d + 3) / (2d + 2)`.
pub fn universal_fidelity(d: usize) -> f64 {
    (d as f64 + 3.0) / (2.0 * d as f64 + 2.0)
}

/// `|n>|0>|A0> -> sum_{s,a} <a|R_ns> |s>|a>`.
#[derive(Debug, Clone)]
pub struct CloningIsometry {
    basis: SymmetricBasis,
    ancilla_dim: usize,
    /// `amplitudes[n][(s, a)] = <a|R_ns>`.
    amplitudes: Vec<CMatrix>,
}

impl CloningIsometry {
    pub fn new(basis: SymmetricBasis, amplitudes: Vec<CMatrix>) -> Result<Self> {
        let d = basis.dim_single();
        if amplitudes.len() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("{d} input components"),
                found: amplitudes.len().to_string(),
            });
        }
        let ancilla_dim = amplitudes[0].ncols();
        for m in &amplitudes {
            if m.shape() != (basis.len(), ancilla_dim) {
                return Err(Error::DimensionMismatch {
                    expected: format!("{}x{}", basis.len(), ancilla_dim),
                    found: format!("{}x{}", m.nrows(), m.ncols()),
                });
            }
        }
        Ok(Self {
            basis,
            ancilla_dim,
            amplitudes,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim_single()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn basis(&self) -> &SymmetricBasis {
        &self.basis
    }

    /// `S x ancilla` block `<a|R_ns>` for input `n`.
    pub fn component(&self, n: usize) -> &CMatrix {
        &self.amplitudes[n]
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.amplitudes
    }

    /// `G[n'][n] = sum_{s,a} <a|R_n's>* <a|R_ns>`.
    pub fn gram(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |np, n| self.amplitudes[np].dotc(&self.amplitudes[n]))
    }

    /// Largest entry of `|G - I|`.
    pub fn isometry_residual(&self) -> f64 {
        let d = self.dim();
        (self.gram() - CMatrix::identity(d, d)).camax()
    }

    /// `sum_{n,s} <R_ns|R_ns>`; equals `d` for an isometry.
    pub fn total_norm(&self) -> f64 {
        self.amplitudes.iter().map(|m| m.norm_squared()).sum()
    }

    /// Columns indexed by ancilla state, rows by composite index `n * S + s`.
    pub fn stacked(&self) -> CMatrix {
        let s_dim = self.basis.len();
        CMatrix::from_fn(self.dim() * s_dim, self.ancilla_dim, |r, a| {
            self.amplitudes[r / s_dim][(r % s_dim, a)]
        })
    }

    /// Ancilla-independent operator `sum_a |w_a><w_a|` on the composite space.
    pub fn composite_gram(&self) -> CMatrix {
        let w = self.stacked();
        &w * w.adjoint()
    }

    /// Average single-clone fidelity `sum_a <w_a|A|w_a>` over coherent inputs.
    pub fn fidelity(&self, tensor: &FidelityTensor) -> f64 {
        let w = self.stacked();
        let a = tensor.matrix();
        let re = w.map(|z| z.re);
        let im = w.map(|z| z.im);
        tensor.expectation(&re) + (im.transpose() * a * &im).trace()
    }
}

/// Combines the top eigenvectors into an isometry.
///
/// With eigenvectors `v_b` reshaped to `d x S` matrices, candidate ancilla
/// vectors are `w_a = sum_b C_ab v_b`. The Gram condition
/// `G(M) = sum_bc M_bc v_b v_c^T = I` is linear in `M = C^T C`; it is solved
/// in least squares, checked for positivity, and `C = M^{1/2}`.
pub fn build_isometry(solution: &OptimalSolution) -> Result<CloningIsometry> {
    let d = solution.dim;
    let m = solution.multiplicity;
    if m < d {
        return Err(Error::DegeneracyDeficit {
            multiplicity: m,
            required: d,
        });
    }
    let s_dim = solution.basis.len();
    let blocks: Vec<DMatrix<f64>> = solution
        .eigenvectors
        .iter()
        .map(|v| DMatrix::from_fn(d, s_dim, |n, s| v[n * s_dim + s]))
        .collect();

    let mut system = DMatrix::zeros(d * d, m * m);
    for b in 0..m {
        for c in 0..m {
            let g = &blocks[b] * blocks[c].transpose();
            for (k, x) in g.iter().enumerate() {
                system[(k, b * m + c)] = *x;
            }
        }
    }
    let target = DMatrix::<f64>::identity(d, d);
    let rhs = DVector::from_iterator(d * d, target.iter().copied());
    let svd = system.clone().svd(true, true);
    let x = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Numeric(e.to_string()))?;
    let mix = DMatrix::from_fn(m, m, |b, c| x[b * m + c]);
    let mix = (&mix + mix.transpose()) * 0.5;

    // mix is symmetric, so its column-major flattening matches the b * m + c layout
    let residual = (&system * DVector::from_iterator(m * m, mix.iter().copied()) - &rhs).amax();
    if residual > ISOMETRY_TOL {
        return Err(Error::ConstraintInfeasible { residual });
    }
    let root =
        psd_sqrt(&mix, ISOMETRY_TOL).map_err(|_| Error::ConstraintInfeasible { residual })?;

    let mut ancilla: Vec<DMatrix<f64>> = (0..m)
        .map(|a| {
            (0..m).fold(DMatrix::zeros(d, s_dim), |acc, b| {
                acc + &blocks[b] * root[(a, b)]
            })
        })
        .collect();
    for w in &mut ancilla {
        if let Some(first) = w.transpose().iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                w.neg_mut();
            }
        }
    }
    let amplitudes = (0..d)
        .map(|n| CMatrix::from_fn(s_dim, m, |s, a| Complex64::new(ancilla[a][(n, s)], 0.0)))
        .collect();
    let iso = CloningIsometry::new(solution.basis.clone(), amplitudes)?;
    let residual = iso.isometry_residual();
    if residual > ISOMETRY_TOL {
        return Err(Error::ConstraintInfeasible { residual });
    }
    Ok(iso)
}

#[derive(Debug, Clone)]
pub struct CloneOutput {
    /// Joint state of both clones on `H ⊗ H` (`d^2 x d^2`).
    pub two_clone: CMatrix,
    /// Reduced state of clone 1.
    pub single_clone: CMatrix,
}

pub fn clone_state(iso: &CloningIsometry, input: &AmplitudeVector) -> Result<CloneOutput> {
    let d = iso.dim();
    if input.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("input of dimension {d}"),
            found: input.dim().to_string(),
        });
    }
    let s_dim = iso.basis.len();
    let mut out = CMatrix::zeros(s_dim, iso.ancilla_dim);
    for n in 0..d {
        out += iso.component(n) * input[n];
    }
    let rho_sym = &out * out.adjoint();
    let two_clone = iso.basis.embed_operator(&rho_sym)?;
    let single_clone = partial_trace_second(&two_clone, d, d);
    Ok(CloneOutput {
        two_clone,
        single_clone,
    })
}

/// `<θφ|ρ_out|θφ>` for a coherent input.
pub fn coherent_clone_fidelity(iso: &CloningIsometry, point: CoherentPoint) -> Result<f64> {
    let o = coherent_amplitudes(iso.dim(), point)?;
    let rho = clone_state(iso, &o)?.single_clone;
    let v = o.as_vector();
    Ok((v.adjoint() * rho * v)[(0, 0)].re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub f_coherent: f64,
    pub f_universal: f64,
}

/// Optimal coherent and universal fidelities for `d_min..=d_max`, computed in
/// parallel across dimensions.
pub fn sweep(d_min: usize, d_max: usize) -> Result<Vec<SweepRow>> {
    sweep_with(d_min, d_max, &SolverOptions::default())
}

pub fn sweep_with(d_min: usize, d_max: usize, opts: &SolverOptions) -> Result<Vec<SweepRow>> {
    check_dimension(d_min)?;
    if d_max < d_min {
        return Err(Error::DimensionMismatch {
            expected: format!("d_max >= {d_min}"),
            found: d_max.to_string(),
        });
    }
    // largest dimensions first so the long eigensolves start early
    let mut rows = (d_min..=d_max)
        .rev()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| {
            max_fidelity_with(d, opts)
                .map(|sol| SweepRow {
                    d,
                    f_coherent: sol.fidelity,
                    f_universal: universal_fidelity(d),
                })
                .map_err(|e| Error::AtDimension {
                    d,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.d);
    Ok(rows)
}
