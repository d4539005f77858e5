//! The symmetric subspace of the two-clone space `H ⊗ H`.
//!
//! Basis states are `|i,i> = |i>|i>` and `|i,j> = (|i>|j> + |j>|i>)/sqrt 2`
//! for `i < j`, enumerated lexicographically over pairs `i <= j`. There are
//! `S = d(d+1)/2` of them. Product states `|k>|l>` use index `k * d + l`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dimension, Error, Result};
use crate::linalg::{partial_trace_second as ptrace2, to_complex, CMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBasis {
    d: usize,
    pairs: Vec<(usize, usize)>,
    /// `index[k * d + l]` is the symmetric index of the unordered pair {k, l}.
    index: Vec<usize>,
}

impl SymmetricBasis {
    pub fn new(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let mut pairs = Vec::with_capacity(d * (d + 1) / 2);
        let mut index = vec![0; d * d];
        for i in 0..d {
            for j in i..d {
                index[i * d + j] = pairs.len();
                index[j * d + i] = pairs.len();
                pairs.push((i, j));
            }
        }
        Ok(Self { d, pairs, index })
    }

    pub fn dim_single(&self) -> usize {
        self.d
    }

    /// `S = d(d+1)/2`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, s: usize) -> (usize, usize) {
        self.pairs[s]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Symmetric index of the unordered pair `{i, j}`.
    pub fn index_of(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i, "number basis", self.d)?;
        self.check(j, "number basis", self.d)?;
        Ok(self.index[i * self.d + j])
    }

    /// Amplitude `<k|l|s>` of the symmetric state in product state `|k>|l>`,
    /// assuming in-range indices.
    pub(crate) fn amp(&self, k: usize, l: usize, s: usize) -> f64 {
        if self.index[k * self.d + l] != s {
            0.0
        } else if k == l {
            1.0
        } else {
            FRAC_1_SQRT_2
        }
    }

    /// `<k ⊗ l | s>`; one of 0, 1, or 1/sqrt 2.
    pub fn overlap(&self, k: usize, l: usize, s: usize) -> Result<f64> {
        self.check(k, "number basis", self.d)?;
        self.check(l, "number basis", self.d)?;
        self.check(s, "symmetric basis", self.len())?;
        Ok(self.amp(k, l, s))
    }

    /// State `s` as a vector in the `d^2`-dimensional product space.
    pub fn state(&self, s: usize) -> Result<DVector<f64>> {
        self.check(s, "symmetric basis", self.len())?;
        Ok(self.embedding().column(s).into_owned())
    }

    /// `d^2 x S` isometry whose columns are the basis states.
    pub fn embedding(&self) -> DMatrix<f64> {
        let d = self.d;
        DMatrix::from_fn(d * d, self.len(), |kl, s| self.amp(kl / d, kl % d, s))
    }

    /// Lifts an `S x S` operator on the symmetric subspace to `H ⊗ H`.
    pub fn embed_operator(&self, m: &CMatrix) -> Result<CMatrix> {
        let s = self.len();
        if m.shape() != (s, s) {
            return Err(Error::DimensionMismatch {
                expected: format!("{s}x{s}"),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let e = to_complex(&self.embedding());
        Ok(&e * m * e.transpose())
    }

    /// Reduced state of clone 1 for an operator given in the symmetric basis.
    pub fn partial_trace_second(&self, m: &CMatrix) -> Result<CMatrix> {
        let full = self.embed_operator(m)?;
        Ok(ptrace2(&full, self.d, self.d))
    }

    fn check(&self, i: usize, what: &'static str, bound: usize) -> Result<()> {
        if i >= bound {
            Err(Error::IndexOutOfRange {
                what,
                index: i,
                bound,
            })
        } else {
            Ok(())
        }
    }
}

pub fn symmetric_basis(d: usize) -> Result<SymmetricBasis> {
    SymmetricBasis::new(d)
}

/// Swap of the two factors of `H ⊗ H` as a `d^2 x d^2` permutation matrix.
pub fn swap_operator(d: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            m[(l * d + k, k * d + l)] = 1.0;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn small_bases() {
        let b = SymmetricBasis::new(2).unwrap();
        assert_eq!(b.pairs(), &[(0, 0), (0, 1), (1, 1)]);
        let b = SymmetricBasis::new(3).unwrap();
        assert_eq!(b.pairs(), &[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]);
        assert_eq!(b.index_of(2, 1).unwrap(), 4);
    }

    #[test]
    fn orthonormal_and_swap_invariant() {
        for d in 2..=8 {
            let b = SymmetricBasis::new(d).unwrap();
            assert_eq!(b.len(), d * (d + 1) / 2);
            let e = b.embedding();
            assert!((e.transpose() * &e - DMatrix::identity(b.len(), b.len())).norm() < 1e-12);
            assert!((swap_operator(d) * &e - &e).norm() < 1e-15);
        }
    }

    #[test]
    fn overlaps() {
        let b = SymmetricBasis::new(3).unwrap();
        assert_eq!(b.overlap(0, 0, 0).unwrap(), 1.0);
        assert_eq!(b.overlap(0, 1, 1).unwrap(), FRAC_1_SQRT_2);
        assert_eq!(b.overlap(1, 0, 1).unwrap(), FRAC_1_SQRT_2);
        assert_eq!(b.overlap(1, 1, 1).unwrap(), 0.0);
        assert!(matches!(
            b.overlap(3, 0, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(b.overlap(0, 0, 6).is_err());
    }

    fn projector(b: &SymmetricBasis, v: &[(usize, f64)]) -> CMatrix {
        let mut x = CMatrix::zeros(b.len(), 1);
        for &(s, a) in v {
            x[s] = Complex64::new(a, 0.0);
        }
        &x * x.adjoint()
    }

    #[test]
    fn partial_trace_examples() {
        let b = SymmetricBasis::new(3).unwrap();
        let r = b.partial_trace_second(&projector(&b, &[(0, 1.0)])).unwrap();
        assert!((r[(0, 0)].re - 1.0).abs() < 1e-15 && (r.norm() - 1.0).abs() < 1e-15);

        let b2 = SymmetricBasis::new(2).unwrap();
        let r = b2
            .partial_trace_second(&projector(&b2, &[(1, 1.0)]))
            .unwrap();
        let half = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        assert!((r - half).norm() < 1e-15);

        // v = beta |1,1> + delta |0,2>: marginal beta^2 |1><1| + delta^2/2 (|0><0| + |2><2|)
        let (beta, delta) = (0.6, 0.8);
        let r = b
            .partial_trace_second(&projector(
                &b,
                &[
                    (b.index_of(1, 1).unwrap(), beta),
                    (b.index_of(0, 2).unwrap(), delta),
                ],
            ))
            .unwrap();
        let mut expected = CMatrix::zeros(3, 3);
        expected[(1, 1)] = Complex64::new(beta * beta, 0.0);
        expected[(0, 0)] = Complex64::new(delta * delta / 2.0, 0.0);
        expected[(2, 2)] = Complex64::new(delta * delta / 2.0, 0.0);
        assert!((r - expected).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let b = SymmetricBasis::new(3).unwrap();
        assert!(matches!(
            b.partial_trace_second(&CMatrix::zeros(5, 5)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(SymmetricBasis::new(1).is_err());
    }

    proptest! {
        #[test]
        fn partial_trace_linear_and_trace_preserving(d in 2usize..=6, seed in any::<u64>(), scale in -3.0f64..3.0) {
            let b = SymmetricBasis::new(d).unwrap();
            let n = b.len();
            let mut s = seed;
            let mut next = move || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let raw1 = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
            let raw2 = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
            let h1 = &raw1 + raw1.adjoint();
            let h2 = &raw2 + raw2.adjoint();
            let t1 = b.partial_trace_second(&h1).unwrap();
            let t2 = b.partial_trace_second(&h2).unwrap();
            prop_assert!((t1.trace() - h1.trace()).norm() < 1e-12);
            let lhs = b.partial_trace_second(&(&h1 * Complex64::new(scale, 0.0) + &h2)).unwrap();
            prop_assert!((lhs - (t1 * Complex64::new(scale, 0.0) + t2)).norm() < 1e-12);
        }
    }
}
