//! End-to-end reproduction checks with pinned tolerances.
//!
//! Each check recomputes its quantity through the library and compares it
//! against closed-form values or an independent route (numerical quadrature
//! for the fidelity tensor, an explicit universal cloner for the baseline).
//! [`Verifier::run_all`] drives the `verify` CLI command and the acceptance
//! test target.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::channel::{
    choi_from_isometry, choi_spectrum, covariance_residual, unit_eigenvalue_verdict,
};
use crate::error::Result;
use crate::fidelity::{moment_unchecked, FidelityTensor};
use crate::fitting::{fit_rational, FidelityCurve};
use crate::irrep::{block_structure, decompose_triple, ExchangeSymmetry};
use crate::optimizer::{
    build_isometry, clone_state, coherent_clone_fidelity, solve, universal_fidelity,
    OptimalSolution, SolverOptions, SweepRow,
};
use crate::spin::{AmplitudeVector, CoherentPoint};
use crate::symmetric::SymmetricBasis;

/// Closed-form optimal fidelity for `d = 3`.
pub fn exact_fidelity_d3() -> f64 {
    (11.0 + 21f64.sqrt()) / 20.0
}

/// Closed-form optimal fidelity for `d = 4`.
pub fn exact_fidelity_d4() -> f64 {
    (79.0 + 697f64.sqrt()) / 140.0
}

pub const SWEEP_MAX_DIM: usize = 16;
pub const REFERENCE_F16: f64 = 0.699;
pub const REFERENCE_ASYMPTOTE: f64 = 0.6812;

/// Independent reference routes used by the checks and by tests.
pub mod oracle {
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    use crate::linalg::CMatrix;
    use crate::optimizer::CloningIsometry;
    use crate::spin::binomial;
    use crate::symmetric::SymmetricBasis;

    /// Gauss-Legendre nodes and weights on `[-1, 1]`.
    pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 1.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    /// `(weight, amplitudes)` over a Gauss-Legendre (in cos θ) by uniform (in φ)
    /// grid, weights normalized so they sum to 1 like `dΩ`.
    fn sphere_grid(d: usize, n_theta: usize, n_phi: usize) -> Vec<(f64, Vec<Complex64>)> {
        let mut out = Vec::with_capacity(n_theta * n_phi);
        for (u, w) in gauss_legendre(n_theta) {
            let theta = u.clamp(-1.0, 1.0).acos();
            let (s, c) = (theta / 2.0).sin_cos();
            for k in 0..n_phi {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
                let amps = (0..d)
                    .map(|n| {
                        Complex64::from_polar(
                            binomial(d - 1, n).sqrt()
                                * s.powi(n as i32)
                                * c.powi((d - 1 - n) as i32),
                            -(n as f64) * phi,
                        )
                    })
                    .collect();
                out.push((w / (2.0 * n_phi as f64), amps));
            }
        }
        out
    }

    /// `∫dΩ O*_{n'} O_{k'} O*_k O_n` by quadrature; `idx = [n', k', k, n]`.
    pub fn quadrature_moment(d: usize, idx: [usize; 4], n_theta: usize, n_phi: usize) -> f64 {
        let [np, kp, k, n] = idx;
        sphere_grid(d, n_theta, n_phi)
            .iter()
            .map(|(w, o)| *w * (o[np].conj() * o[kp] * o[k].conj() * o[n]))
            .sum::<Complex64>()
            .re
    }

    /// Fidelity tensor assembled entirely by quadrature:
    /// `A = ∫dΩ sum_l conj(u_l) u_l^T` with `u_l[(n,s)] = O_n sum_k O*_k <k l|s>`.
    pub fn quadrature_tensor(d: usize, n_theta: usize, n_phi: usize) -> DMatrix<f64> {
        let basis = SymmetricBasis::new(d).expect("d >= 2");
        let s_dim = basis.len();
        let n_total = d * s_dim;
        let mut acc = CMatrix::zeros(n_total, n_total);
        for (w, o) in sphere_grid(d, n_theta, n_phi) {
            for l in 0..d {
                let u = CMatrix::from_fn(n_total, 1, |row, _| {
                    let (n, s) = (row / s_dim, row % s_dim);
                    let inner: Complex64 = (0..d)
                        .map(|k| o[k].conj() * basis.overlap(k, l, s).expect("in range"))
                        .sum();
                    o[n] * inner
                });
                acc += u.conjugate() * u.transpose() * Complex64::new(w, 0.0);
            }
        }
        acc.map(|z| z.re)
    }

    /// Optimal universal cloner
    /// `|n> -> sqrt(2/(d+1)) sum_a P_sym(|n>|a>) |a>`.
    pub fn universal_cloner(d: usize) -> CloningIsometry {
        let basis = SymmetricBasis::new(d).expect("d >= 2");
        let norm = (2.0 / (d as f64 + 1.0)).sqrt();
        let amplitudes = (0..d)
            .map(|n| {
                let mut m = CMatrix::zeros(basis.len(), d);
                for a in 0..d {
                    let s = basis.index_of(n, a).expect("in range");
                    // P_sym |n>|a> = |n,n> or |n,a>/sqrt 2
                    let amp = if n == a {
                        1.0
                    } else {
                        std::f64::consts::FRAC_1_SQRT_2
                    };
                    m[(s, a)] = Complex64::new(norm * amp, 0.0);
                }
                m
            })
            .collect();
        CloningIsometry::new(basis, amplitudes).expect("consistent shapes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub name: String,
    pub passed: bool,
    /// Informational checks report a verdict without gating the run.
    pub required: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(id: &str, name: &str, passed: bool, detail: String) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            passed,
            required: true,
            detail,
        }
    }

    fn failed(id: &str, name: &str, err: impl std::fmt::Display) -> Self {
        Self::new(id, name, false, format!("error: {err}"))
    }

    pub fn line(&self) -> String {
        let status = match (self.passed, self.required) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        format!("[{status}] {:>3} {}: {}", self.id, self.name, self.detail)
    }
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed || !o.required)
}

pub type MomentFn = fn(usize, usize, usize, usize, usize) -> f64;

/// Runs the checks with a configurable angular-moment kernel (so a tampered
/// kernel can be shown to fail) and a seed for sampled group elements.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    pub moment: MomentFn,
    pub seed: u64,
}

impl Default for Verifier {
    fn default() -> Self {
        Self {
            moment: moment_unchecked,
            seed: 2005,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

impl Verifier {
    pub fn tensor(&self, d: usize) -> Result<FidelityTensor> {
        let basis = SymmetricBasis::new(d)?;
        Ok(FidelityTensor::from_moments(&basis, self.moment))
    }

    pub fn solution(&self, d: usize) -> Result<OptimalSolution> {
        solve(&self.tensor(d)?, &SolverOptions::default())
    }

    pub fn sweep(&self, d_max: usize) -> Result<Vec<SweepRow>> {
        use rayon::prelude::*;
        let mut rows = (2..=d_max)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|d| {
                self.solution(d).map(|s| SweepRow {
                    d,
                    f_coherent: s.fidelity,
                    f_universal: universal_fidelity(d),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.sort_by_key(|r| r.d);
        Ok(rows)
    }

    pub fn run_all(&self) -> Vec<CheckOutcome> {
        let (sweep, sweep_time) = timed(|| self.sweep(SWEEP_MAX_DIM));
        let mut out = vec![
            self.check_exact(1, 3, exact_fidelity_d3()),
            self.check_exact(2, 4, exact_fidelity_d4()),
            self.check_universal_baseline(),
        ];
        match &sweep {
            Ok(rows) => {
                out.push(self.check_sweep(rows, sweep_time));
                out.push(self.check_coherent_beats_universal(rows));
            }
            Err(e) => {
                out.push(CheckOutcome::failed("4", "sweep d = 2..16", e));
                out.push(CheckOutcome::failed("5", "coherent vs universal", e));
            }
        }
        out.push(self.check_qutrit_marginals());
        out.push(self.check_covariance());
        out.push(self.check_choi_structure());
        out.push(self.check_unit_eigenvalue_conjecture());
        out.push(self.check_irrep_tables());
        out.push(self.check_tensor_oracle());
        out.push(match &sweep {
            Ok(rows) => self.check_rational_fit(rows),
            Err(e) => CheckOutcome::failed("11", "rational fit", e),
        });
        out
    }

    pub fn check_exact(&self, id: u8, d: usize, exact: f64) -> CheckOutcome {
        let name = format!("exact fidelity d = {d}");
        let (res, elapsed) = timed(|| self.solution(d));
        match res {
            Ok(sol) => {
                let err = (sol.fidelity - exact).abs();
                let passed = err < 1e-10 && elapsed < Duration::from_secs(1);
                CheckOutcome::new(
                    &id.to_string(),
                    &name,
                    passed,
                    format!(
                        "F = {:.12}, |F - exact| = {err:.2e} (< 1e-10), {elapsed:.2?} (< 1 s)",
                        sol.fidelity
                    ),
                )
            }
            Err(e) => CheckOutcome::failed(&id.to_string(), &name, e),
        }
    }

    pub fn check_universal_baseline(&self) -> CheckOutcome {
        let name = "universal baseline (d+3)/(2d+2)";
        let mut worst: f64 = 0.0;
        for d in 2..=SWEEP_MAX_DIM {
            let iso = oracle::universal_cloner(d);
            match coherent_clone_fidelity(&iso, CoherentPoint::ground()) {
                Ok(f) => worst = worst.max((f - universal_fidelity(d)).abs()),
                Err(e) => return CheckOutcome::failed("3", name, e),
            }
        }
        let f6 = universal_fidelity(6);
        let passed = worst < 1e-10 && f6 < 2.0 / 3.0;
        CheckOutcome::new(
            "3",
            name,
            passed,
            format!("explicit universal cloners d = 2..16 deviate by {worst:.2e}; F_univ(6) = {f6:.6} < 2/3"),
        )
    }

    pub fn check_sweep(&self, rows: &[SweepRow], elapsed: Duration) -> CheckOutcome {
        let name = "sweep d = 2..16";
        let monotone = rows.windows(2).all(|w| w[1].f_coherent <= w[0].f_coherent);
        let above = rows.iter().all(|r| r.f_coherent >= 2.0 / 3.0);
        let f16 = rows
            .iter()
            .find(|r| r.d == 16)
            .map(|r| r.f_coherent)
            .unwrap_or(f64::NAN);
        let passed = monotone
            && above
            && (f16 - REFERENCE_F16).abs() <= 1e-3
            && elapsed < Duration::from_secs(600);
        CheckOutcome::new(
            "4",
            name,
            passed,
            format!(
                "monotone = {monotone}, all >= 2/3 = {above}, F(16) = {f16:.6} (0.699 ± 0.001), {elapsed:.2?} (< 10 min)"
            ),
        )
    }

    pub fn check_coherent_beats_universal(&self, rows: &[SweepRow]) -> CheckOutcome {
        let name = "coherent vs universal";
        let eq2 = rows
            .iter()
            .find(|r| r.d == 2)
            .map(|r| (r.f_coherent - r.f_universal).abs());
        let min_gap = rows
            .iter()
            .filter(|r| r.d >= 3)
            .map(|r| r.f_coherent - r.f_universal)
            .fold(f64::INFINITY, f64::min);
        let passed = eq2.is_some_and(|g| g < 1e-10) && min_gap > 1e-10;
        CheckOutcome::new(
            "5",
            name,
            passed,
            format!(
                "|F_coh - F_univ| at d = 2: {:.2e}; min gap d = 3..16: {min_gap:.4e}",
                eq2.unwrap_or(f64::NAN)
            ),
        )
    }

    pub fn check_qutrit_marginals(&self) -> CheckOutcome {
        let name = "d = 3 clone marginals";
        let run = || -> Result<(Vec<f64>, Vec<f64>)> {
            let iso = build_isometry(&self.solution(3)?)?;
            let input = AmplitudeVector::basis(3, 0)?;
            let coh = clone_state(&iso, &input)?.single_clone;
            let uni = clone_state(&oracle::universal_cloner(3), &input)?.single_clone;
            Ok((
                (0..3).map(|i| coh[(i, i)].re).collect(),
                (0..3).map(|i| uni[(i, i)].re).collect(),
            ))
        };
        match run() {
            Ok((coh, uni)) => {
                let coh_ok = coh
                    .iter()
                    .zip([0.779, 0.171, 0.049])
                    .all(|(a, b)| (a - b).abs() <= 1e-3);
                let uni_ok = uni
                    .iter()
                    .zip([0.75, 0.125, 0.125])
                    .all(|(a, b)| (a - b).abs() < 1e-10);
                CheckOutcome::new(
                    "6",
                    name,
                    coh_ok && uni_ok,
                    format!("coherent diag {coh:.4?} (±1e-3), universal diag {uni:.6?} (1e-10)"),
                )
            }
            Err(e) => CheckOutcome::failed("6", name, e),
        }
    }

    pub fn check_covariance(&self) -> CheckOutcome {
        let name = "covariance";
        let grid = CoherentPoint::grid(4, 5);
        let samples = CoherentPoint::sample(10, self.seed);
        let run = || -> Result<(f64, f64)> {
            let mut fid_spread: f64 = 0.0;
            let mut comm: f64 = 0.0;
            for d in 2..=5 {
                let sol = self.solution(d)?;
                let iso = build_isometry(&sol)?;
                for &p in &grid {
                    fid_spread =
                        fid_spread.max((coherent_clone_fidelity(&iso, p)? - sol.fidelity).abs());
                }
                if d <= 4 {
                    comm = comm.max(covariance_residual(&choi_from_isometry(&iso)?, &samples)?);
                }
            }
            Ok((fid_spread, comm))
        };
        match run() {
            Ok((spread, comm)) => CheckOutcome::new(
                "7",
                name,
                spread < 1e-8 && comm < 1e-8,
                format!("fidelity spread over 20-point grid (d = 2..5) {spread:.2e} (< 1e-8); Choi commutator (d = 2..4, 10 elements) {comm:.2e} (< 1e-8)"),
            ),
            Err(e) => CheckOutcome::failed("7", name, e),
        }
    }

    pub fn check_choi_structure(&self) -> CheckOutcome {
        let name = "Choi structure d = 2, 3";
        let run = || -> Result<(bool, String)> {
            let p2 = choi_from_isometry(&build_isometry(&self.solution(2)?)?)?;
            let v2 = unit_eigenvalue_verdict(&choi_spectrum(&p2)?, 2, 1e-8);

            let p3 = choi_from_isometry(&build_isometry(&self.solution(3)?)?)?;
            let v3 = unit_eigenvalue_verdict(&choi_spectrum(&p3)?, 3, 1e-8);
            let dec = decompose_triple(3)?;
            let blocks = block_structure(&p3, &dec)?;
            // M3, M4 in table order are subspaces 2 and 3
            let confined = blocks
                .coefficients
                .iter()
                .filter(|c| !(matches!(c.i, 2 | 3) && matches!(c.j, 2 | 3)))
                .all(|c| c.re.abs() < 1e-8 && c.im.abs() < 1e-8);
            let c33 = blocks.coefficient(2, 2).map_or(f64::NAN, |c| c.re);
            let c44 = blocks.coefficient(3, 3).map_or(f64::NAN, |c| c.re);
            let (a, b) = (c33.max(0.0).sqrt(), c44.max(0.0).sqrt());
            let k = 13.0 / (6.0 * 21f64.sqrt());
            let (a_ref, b_ref) = ((0.5 - k).sqrt(), (0.5 + k).sqrt());
            let coeff_ok = (a - a_ref).abs() < 1e-8 && (b - b_ref).abs() < 1e-8;
            let passed = v2.holds && v3.holds && confined && blocks.leakage < 1e-8 && coeff_ok;
            Ok((
                passed,
                format!(
                    "d=2 unit spectrum {} (dev {:.1e}); d=3 unit spectrum {} (dev {:.1e}); M3+M4 confinement {confined}, leakage {:.1e}; (a, b) = ({a:.10}, {b:.10}) vs ({a_ref:.10}, {b_ref:.10})",
                    v2.holds,
                    v2.top_deviation.max(v2.tail_max),
                    v3.holds,
                    v3.top_deviation.max(v3.tail_max),
                    blocks.leakage
                ),
            ))
        };
        match run() {
            Ok((passed, detail)) => CheckOutcome::new("8", name, passed, detail),
            Err(e) => CheckOutcome::failed("8", name, e),
        }
    }

    /// Top `d` Choi eigenvalues at 1 and the rest at 0, for `d = 4, 5`.
    /// Reported as a verdict; it does not gate the run.
    pub fn check_unit_eigenvalue_conjecture(&self) -> CheckOutcome {
        let name = "unit-eigenvalue conjecture d = 4, 5";
        let run = || -> Result<(bool, String)> {
            let mut all = true;
            let mut parts = Vec::new();
            for d in [4, 5] {
                let p = choi_from_isometry(&build_isometry(&self.solution(d)?)?)?;
                let v = unit_eigenvalue_verdict(&choi_spectrum(&p)?, d, 1e-8);
                let blocks = block_structure(&p, &decompose_triple(d)?)?;
                let dec = decompose_triple(d)?;
                let in_sym_d = blocks.support.iter().all(|&i| {
                    dec.subspaces[i].dim() == d
                        && dec.subspaces[i].symmetry == ExchangeSymmetry::Symmetric
                });
                all &= v.holds && in_sym_d;
                parts.push(format!(
                    "d={d}: unit spectrum {} (top dev {:.1e}, tail {:.1e}), support in symmetric {d}-dim irreps {in_sym_d}",
                    v.holds, v.top_deviation, v.tail_max
                ));
            }
            Ok((all, parts.join("; ")))
        };
        let mut outcome = match run() {
            Ok((passed, detail)) => CheckOutcome::new("8b", name, passed, detail),
            Err(e) => CheckOutcome::failed("8b", name, e),
        };
        outcome.required = false;
        outcome
    }

    pub fn check_irrep_tables(&self) -> CheckOutcome {
        let name = "irrep decomposition";
        use ExchangeSymmetry::{Antisymmetric as A, Symmetric as S};
        let run = || -> Result<(bool, String)> {
            let d2 = decompose_triple(2)?;
            let d3 = decompose_triple(3)?;
            let t2 = d2.dimensions() == [2, 2, 4] && d2.symmetries() == [A, S, S];
            let t3 = d3.dimensions() == [1, 3, 3, 3, 5, 5, 7]
                && d3.symmetries() == [A, A, S, S, A, S, S];
            let mut worst: f64 = 0.0;
            for d in 2..=5 {
                worst = worst.max(decompose_triple(d)?.completeness_residual());
            }
            Ok((
                t2 && t3 && worst < 1e-10,
                format!("d=2 table {t2}, d=3 table {t3}, completeness residual d<=5 {worst:.1e} (< 1e-10)"),
            ))
        };
        match run() {
            Ok((passed, detail)) => CheckOutcome::new("9", name, passed, detail),
            Err(e) => CheckOutcome::failed("9", name, e),
        }
    }

    pub fn check_tensor_oracle(&self) -> CheckOutcome {
        let name = "fidelity tensor vs quadrature";
        let mut worst: f64 = 0.0;
        for d in 2..=4 {
            let analytic = match self.tensor(d) {
                Ok(t) => t,
                Err(e) => return CheckOutcome::failed("10", name, e),
            };
            let quad = oracle::quadrature_tensor(d, 41, 81);
            worst = worst.max((analytic.matrix() - quad).amax());
        }
        CheckOutcome::new(
            "10",
            name,
            worst < 1e-8,
            format!("max elementwise deviation d = 2..4: {worst:.2e} (< 1e-8)"),
        )
    }

    pub fn check_rational_fit(&self, rows: &[SweepRow]) -> CheckOutcome {
        let name = "rational fit";
        let run = || -> Result<(bool, String)> {
            let curve = FidelityCurve::new(
                rows.iter()
                    .filter(|r| r.d >= 3)
                    .map(|r| (r.d, r.f_coherent)),
            )?;
            let fit = fit_rational(&curve)?;
            let (a, b, g) = (0.7, 0.1, 0.5);
            let synth =
                FidelityCurve::new((3..=16).map(|d| (d, (a * d as f64 + b) / (d as f64 + g))))?;
            let sf = fit_rational(&synth)?;
            let synth_err = (sf.alpha - a)
                .abs()
                .max((sf.beta - b).abs())
                .max((sf.gamma - g).abs());
            Ok((
                (fit.alpha - REFERENCE_ASYMPTOTE).abs() <= 5e-3 && synth_err < 1e-9,
                format!(
                    "alpha = {:.5} (0.6812 ± 0.005), beta = {:.5}, gamma = {:.5}; synthetic recovery error {synth_err:.1e} (< 1e-9)",
                    fit.alpha, fit.beta, fit.gamma
                ),
            ))
        };
        match run() {
            Ok((passed, detail)) => CheckOutcome::new("11", name, passed, detail),
            Err(e) => CheckOutcome::failed("11", name, e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let nodes = oracle::gauss_legendre(41);
        let w: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-13);
        let x80: f64 = nodes.iter().map(|(x, w)| w * x.powi(80)).sum();
        assert!((x80 - 2.0 / 81.0).abs() < 1e-13);
    }

    #[test]
    fn universal_cloner_matches_explicit_qutrit_form() {
        let iso = oracle::universal_cloner(3);
        let b = iso.basis();
        let h = 0.5;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // |0> -> |0,0>|A0>/sqrt2 + |0,1>|A1>/2 + |0,2>|A2>/2
        let c0 = iso.component(0);
        assert!((c0[(b.index_of(0, 0).unwrap(), 0)].re - r).abs() < 1e-15);
        assert!((c0[(b.index_of(0, 1).unwrap(), 1)].re - h).abs() < 1e-15);
        assert!((c0[(b.index_of(0, 2).unwrap(), 2)].re - h).abs() < 1e-15);
        // |1> -> |1,1>|A1>/sqrt2 + |0,1>|A0>/2 + |1,2>|A2>/2
        let c1 = iso.component(1);
        assert!((c1[(b.index_of(1, 1).unwrap(), 1)].re - r).abs() < 1e-15);
        assert!((c1[(b.index_of(0, 1).unwrap(), 0)].re - h).abs() < 1e-15);
        assert!((c1[(b.index_of(1, 2).unwrap(), 2)].re - h).abs() < 1e-15);
        assert!((c1.norm_squared() - 1.0).abs() < 1e-15);
        assert!(iso.isometry_residual() < 1e-15);
    }

    #[test]
    fn tampered_kernel_fails_named_checks() {
        // the angular measure without its 4π normalization being accounted for
        fn halved(d: usize, a: usize, b: usize, c: usize, e: usize) -> f64 {
            0.5 * moment_unchecked(d, a, b, c, e)
        }
        let v = Verifier {
            moment: halved,
            ..Verifier::default()
        };
        assert!(!v.check_exact(1, 3, exact_fidelity_d3()).passed);
        let oracle = v.check_tensor_oracle();
        assert!(!oracle.passed);
        assert!(oracle.line().starts_with("[FAIL]  10"));
    }
}
