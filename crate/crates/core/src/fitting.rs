//! Least-squares fit of `F(d) = (alpha d + beta) / (d + gamma)`.
//!
//! The start point comes from the linearized problem
//! `alpha d + beta - gamma f = f d`; it is refined by damped Gauss-Newton.
//! `alpha` is the large-`d` asymptote.

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 4;
pub const MAX_ITERATIONS: usize = 100;
pub const STEP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityCurve {
    points: Vec<(f64, f64)>,
}

impl FidelityCurve {
    /// Points are sorted by `d`; abscissae must be distinct and `0.5 <= f <= 1`.
    pub fn new(points: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut points: Vec<(f64, f64)> = points.into_iter().map(|(d, f)| (d as f64, f)).collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidCurve("repeated dimension".into()));
        }
        if let Some(&(d, f)) = points.iter().find(|(_, f)| !(0.5..=1.0).contains(f)) {
            return Err(Error::InvalidCurve(format!(
                "fidelity {f} at d = {d} outside [1/2, 1]"
            )));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub rms_residual: f64,
    pub iterations: usize,
}

impl RationalFit {
    pub fn eval(&self, d: f64) -> f64 {
        (self.alpha * d + self.beta) / (d + self.gamma)
    }

    pub fn asymptote(&self) -> f64 {
        self.alpha
    }
}

fn residuals(p: &Vector3<f64>, pts: &[(f64, f64)]) -> DVector<f64> {
    DVector::from_iterator(
        pts.len(),
        pts.iter().map(|&(d, f)| (p[0] * d + p[1]) / (d + p[2]) - f),
    )
}

/// Jacobian of the residuals with respect to `(alpha, beta, gamma)`.
pub fn jacobian(p: &Vector3<f64>, pts: &[(f64, f64)]) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(pts.len(), 3);
    for (row, &(d, _)) in pts.iter().enumerate() {
        let den = d + p[2];
        j[(row, 0)] = d / den;
        j[(row, 1)] = 1.0 / den;
        j[(row, 2)] = -(p[0] * d + p[1]) / (den * den);
    }
    j
}

fn rms(r: &DVector<f64>) -> f64 {
    (r.norm_squared() / r.len() as f64).sqrt()
}

fn check_poles(p: &Vector3<f64>, pts: &[(f64, f64)]) -> Result<()> {
    if pts.iter().any(|&(d, _)| (d + p[2]).abs() < 1e-12) {
        return Err(Error::PoleOnData { pole: -p[2] });
    }
    Ok(())
}

pub fn fit_rational(curve: &FidelityCurve) -> Result<RationalFit> {
    let pts = curve.points();
    if pts.len() < MIN_POINTS {
        return Err(Error::TooFewPoints {
            required: MIN_POINTS,
            found: pts.len(),
        });
    }

    let lin = DMatrix::from_fn(pts.len(), 3, |r, c| match c {
        0 => pts[r].0,
        1 => 1.0,
        _ => -pts[r].1,
    });
    let rhs = DVector::from_iterator(pts.len(), pts.iter().map(|&(d, f)| f * d));
    let svd = lin.svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= smax * 1e-13 {
        return Err(Error::SingularSystem);
    }
    let start = svd.solve(&rhs, 0.0).map_err(|_| Error::SingularSystem)?;
    let mut p = Vector3::new(start[0], start[1], start[2]);
    check_poles(&p, pts)?;

    let mut r = residuals(&p, pts);
    let mut cost = r.norm_squared();
    for it in 1..=MAX_ITERATIONS {
        let jac = jacobian(&p, pts);
        let step = jac
            .svd(true, true)
            .solve(&(-&r), 1e-14)
            .map_err(|_| Error::SingularSystem)?;
        let step = Vector3::new(step[0], step[1], step[2]);

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial = p + step * scale;
            if pts.iter().all(|&(d, _)| (d + trial[2]).abs() > 1e-12) {
                let tr = residuals(&trial, pts);
                let tc = tr.norm_squared();
                if tc <= cost {
                    accepted = Some((trial, tr, tc));
                    break;
                }
            }
            scale *= 0.5;
        }
        let step_norm = step.norm() * scale;
        match accepted {
            Some((trial, tr, tc)) => {
                p = trial;
                r = tr;
                cost = tc;
                if step_norm < STEP_TOL {
                    return finish(p, &r, it, pts);
                }
            }
            // no descent along the Gauss-Newton direction: at the noise floor
            None if step.norm() < 1e-8 => return finish(p, &r, it, pts),
            None => break,
        }
    }
    let best = RationalFit {
        alpha: p[0],
        beta: p[1],
        gamma: p[2],
        rms_residual: rms(&r),
        iterations: MAX_ITERATIONS,
    };
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        best: Box::new(best),
    })
}

fn finish(
    p: Vector3<f64>,
    r: &DVector<f64>,
    iterations: usize,
    pts: &[(f64, f64)],
) -> Result<RationalFit> {
    check_poles(&p, pts)?;
    Ok(RationalFit {
        alpha: p[0],
        beta: p[1],
        gamma: p[2],
        rms_residual: rms(r),
        iterations,
    })
}
