//! Spin-j coherent states, angular-momentum matrices and SU(2) rotations.
//!
//! Basis convention: index `n = 0..d` labels the `J_z` eigenstate with
//! `m = n - j`, so `|0>` is the lowest-weight state `|-j>` and the diagonal
//! of `J_z` ascends. Ladder operators follow the Condon-Shortley phase.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, CVector};

/// Direction `(theta, phi)` on the sphere labelling a spin coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentPoint {
    theta: f64,
    phi: f64,
}

impl CoherentPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite())
            || !(0.0..=PI).contains(&theta)
            || !(0.0..2.0 * PI).contains(&phi)
        {
            return Err(Error::InvalidPoint { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Like [`CoherentPoint::new`] but wraps `phi` into `[0, 2 pi)`.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, phi.rem_euclid(2.0 * PI))
    }

    /// The north-pole ground state `|0>`.
    pub fn ground() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `n_theta x n_phi` product grid with `theta` in `[0, pi]` and `phi`
    /// evenly spaced over `[0, 2 pi)`.
    pub fn grid(n_theta: usize, n_phi: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n_theta * n_phi);
        for a in 0..n_theta {
            let theta = if n_theta == 1 {
                0.0
            } else {
                PI * a as f64 / (n_theta - 1) as f64
            };
            for b in 0..n_phi {
                let phi = 2.0 * PI * b as f64 / n_phi as f64;
                out.push(Self { theta, phi });
            }
        }
        out
    }

    /// `n` pseudo-random points, reproducible from `seed`.
    pub fn sample(n: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Self {
                theta: rng.random_range(0.0..=PI),
                phi: rng.random_range(0.0..2.0 * PI),
            })
            .collect()
    }
}

/// Number-basis amplitudes `O_n = <n|theta, phi>` of a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector(CVector);

impl AmplitudeVector {
    /// Wraps a vector after checking it has unit norm (to 1e-10).
    pub fn new(entries: CVector) -> Result<Self> {
        let norm = entries.norm_squared();
        if entries.len() < 2 || (norm - 1.0).abs() > 1e-10 {
            return Err(Error::DimensionMismatch {
                expected: "normalized vector of length >= 2".into(),
                found: format!("length {} with squared norm {norm}", entries.len()),
            });
        }
        Ok(Self(entries))
    }

    /// Number state `|n>` in dimension `d`.
    pub fn basis(d: usize, n: usize) -> Result<Self> {
        check_dimension(d)?;
        if n >= d {
            return Err(Error::IndexOutOfRange {
                what: "number basis",
                index: n,
                bound: d,
            });
        }
        let mut v = CVector::zeros(d);
        v[n] = Complex64::new(1.0, 0.0);
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }
}

impl std::ops::Index<usize> for AmplitudeVector {
    type Output = Complex64;
    fn index(&self, n: usize) -> &Complex64 {
        &self.0[n]
    }
}

/// `J_x`, `J_y`, `J_z` for spin `j = (d - 1) / 2`.
#[derive(Debug, Clone)]
pub struct AngularMomentumOps {
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl AngularMomentumOps {
    pub fn dim(&self) -> usize {
        self.jz.nrows()
    }

    /// `J_+`, raising `n` by one.
    pub fn raising(&self) -> CMatrix {
        &self.jx + &self.jy * Complex64::i()
    }

    pub fn casimir(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn coherent_amplitudes(d: usize, point: CoherentPoint) -> Result<AmplitudeVector> {
    check_dimension(d)?;
    let (s, c) = (point.theta / 2.0).sin_cos();
    let v = CVector::from_fn(d, |n, _| {
        let mag = binomial(d - 1, n).sqrt() * s.powi(n as i32) * c.powi((d - 1 - n) as i32);
        Complex64::from_polar(mag, -(n as f64) * point.phi)
    });
    Ok(AmplitudeVector(v))
}

pub fn angular_momentum_ops(d: usize) -> Result<AngularMomentumOps> {
    check_dimension(d)?;
    let j = (d as f64 - 1.0) / 2.0;
    let mut jp = CMatrix::zeros(d, d);
    for n in 0..d - 1 {
        let m = n as f64 - j;
        jp[(n + 1, n)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let jz = CMatrix::from_diagonal(&DVector::from_fn(d, |n, _| {
        Complex64::new(n as f64 - j, 0.0)
    }));
    Ok(AngularMomentumOps { jx, jy, jz })
}

/// `R = exp(-i theta (J_x sin phi - J_y cos phi))`, built from the
/// eigendecomposition of the Hermitian generator.
pub fn rotation_matrix(d: usize, point: CoherentPoint) -> Result<CMatrix> {
    let ops = angular_momentum_ops(d)?;
    let (sp, cp) = point.phi.sin_cos();
    let generator = &ops.jx * Complex64::new(sp, 0.0) - &ops.jy * Complex64::new(cp, 0.0);
    let eig = hermitian_eigen(&generator)?;
    let mut r = CMatrix::zeros(d, d);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vectors.column(k);
        r += v * v.adjoint() * Complex64::from_polar(1.0, -point.theta * lambda);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ground_state_for_any_phi() {
        for phi in [0.0, 1.0, 4.0] {
            let o = coherent_amplitudes(3, CoherentPoint::new(0.0, phi).unwrap()).unwrap();
            assert!(
                (o.as_vector() - CVector::from_vec(vec![c(1.0), c(0.0), c(0.0)])).norm() < 1e-15
            );
        }
    }

    #[test]
    fn equator_qubit_and_qutrit() {
        let o = coherent_amplitudes(2, CoherentPoint::new(PI / 2.0, 0.0).unwrap()).unwrap();
        assert!((o[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((o[1] - c(FRAC_1_SQRT_2)).norm() < 1e-15);

        let point = CoherentPoint::new(PI / 2.0, PI).unwrap();
        let o = coherent_amplitudes(3, point).unwrap();
        let expected = CVector::from_vec(vec![c(0.5), c(-FRAC_1_SQRT_2), c(0.5)]);
        assert!((o.as_vector() - &expected).norm() < 1e-14);
        let r = rotation_matrix(3, point).unwrap();
        assert!((r.column(0) - expected).norm() < 1e-12);
    }

    #[test]
    fn jz_diagonals() {
        let ops = angular_momentum_ops(2).unwrap();
        assert_eq!(ops.jz[(0, 0)], c(-0.5));
        assert_eq!(ops.jz[(1, 1)], c(0.5));
        let ops = angular_momentum_ops(3).unwrap();
        for n in 0..3 {
            assert_eq!(ops.jz[(n, n)], c(n as f64 - 1.0));
        }
    }

    #[test]
    fn commutation_relations_and_casimir() {
        for d in 2..=8 {
            let o = angular_momentum_ops(d).unwrap();
            let i = Complex64::i();
            assert!((&o.jx * &o.jy - &o.jy * &o.jx - &o.jz * i).norm() < 1e-12);
            assert!((&o.jy * &o.jz - &o.jz * &o.jy - &o.jx * i).norm() < 1e-12);
            assert!((&o.jz * &o.jx - &o.jx * &o.jz - &o.jy * i).norm() < 1e-12);
            let j = (d as f64 - 1.0) / 2.0;
            assert!((o.casimir() - CMatrix::identity(d, d) * c(j * (j + 1.0))).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_rotation_is_identity() {
        for d in 2..6 {
            let r = rotation_matrix(d, CoherentPoint::new(0.0, 1.3).unwrap()).unwrap();
            assert!((r - CMatrix::identity(d, d)).norm() < 1e-13);
        }
    }

    #[test]
    fn qubit_flip() {
        let r = rotation_matrix(2, CoherentPoint::new(PI, 0.0).unwrap()).unwrap();
        assert!(r[(0, 0)].norm() < 1e-14);
        assert!((r[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_column_matches_closed_form_d4() {
        let p = CoherentPoint::new(1.1, 2.3).unwrap();
        let r = rotation_matrix(4, p).unwrap();
        let o = coherent_amplitudes(4, p).unwrap();
        assert!((r.column(0) - o.as_vector()).norm() < 1e-10);
    }

    #[test]
    fn grid_invariants() {
        let grid = CoherentPoint::grid(4, 5);
        for d in 2..=8 {
            for &p in &grid {
                let r = rotation_matrix(d, p).unwrap();
                let o = coherent_amplitudes(d, p).unwrap();
                assert!((r.column(0) - o.as_vector()).norm() < 1e-10, "d={d} {p:?}");
                assert!((r.adjoint() * &r - CMatrix::identity(d, d)).norm() < 1e-12);
                assert!((o.as_vector().norm_squared() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            coherent_amplitudes(1, CoherentPoint::ground()),
            Err(Error::InvalidDimension(1))
        ));
        assert!(angular_momentum_ops(0).is_err());
        assert!(CoherentPoint::new(-0.1, 0.0).is_err());
        assert!(CoherentPoint::new(0.1, 2.0 * PI).is_err());
        assert!(CoherentPoint::wrapped(0.1, 2.0 * PI + 0.5).is_ok());
    }
}
