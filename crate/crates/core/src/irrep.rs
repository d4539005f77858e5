//! Decomposition of `R ⊗ R ⊗ R*` into SU(2) irreducible subspaces.
//!
//! Clones 1 and 2 are coupled first, so every subspace inherits a definite
//! exchange symmetry `(-1)^(2j - J12)` from the intermediate spin `J12`. The
//! conjugate third factor is then coupled after the substitution
//! `|n> -> (-1)^n |d-n-1>`, which intertwines `R*` with `R`.
//!
//! Spins are carried as doubled integers internally (`2j`), so half-integers
//! are exact.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChoiOperator;
use crate::error::{check_dimension, Error, Result};
use crate::linalg::{kron3_mul_left, to_complex, CMatrix};
use crate::spin::{rotation_matrix, CoherentPoint};

fn factorial(n: i64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn doubled(x: f64) -> Result<i64> {
    let t = 2.0 * x;
    if !t.is_finite() || (t - t.round()).abs() > 1e-9 {
        return Err(Error::NotHalfInteger(x));
    }
    Ok(t.round() as i64)
}

/// `<j1 m1; j2 m2 | j m>` with all arguments doubled, Condon-Shortley
/// convention (Racah's closed form). Zero when a selection rule fails.
pub fn clebsch_gordan_doubled(tj1: i64, tj2: i64, tj: i64, tm1: i64, tm2: i64, tm: i64) -> f64 {
    if tj1 < 0 || tj2 < 0 || tj < 0 || tm1 + tm2 != tm {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return 0.0;
    }
    if tj > tj1 + tj2 || tj < (tj1 - tj2).abs() || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let (a, b, c) = (h(tj1 + tj2 - tj), h(tj1 - tj2 + tj), h(-tj1 + tj2 + tj));
    let prefactor = ((tj + 1) as f64 * factorial(a) * factorial(b) * factorial(c)
        / factorial(h(tj1 + tj2 + tj) + 1))
    .sqrt()
        * (factorial(h(tj1 + tm1))
            * factorial(h(tj1 - tm1))
            * factorial(h(tj2 + tm2))
            * factorial(h(tj2 - tm2))
            * factorial(h(tj + tm))
            * factorial(h(tj - tm)))
        .sqrt();
    let k_min = 0.max(h(tj2 - tj - tm1)).max(h(tj1 + tm2 - tj));
    let k_max = a.min(h(tj1 - tm1)).min(h(tj2 + tm2));
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial(a - k)
            * factorial(h(tj1 - tm1) - k)
            * factorial(h(tj2 + tm2) - k)
            * factorial(h(tj - tj2 + tm1) + k)
            * factorial(h(tj - tj1 - tm2) + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    prefactor * sum
}

/// `<j1 m1; j2 m2 | j m>` for half-integer arguments.
pub fn clebsch_gordan(j1: f64, j2: f64, j: f64, m1: f64, m2: f64, m: f64) -> Result<f64> {
    let (tj1, tj2, tj) = (doubled(j1)?, doubled(j2)?, doubled(j)?);
    for (x, t) in [(j1, tj1), (j2, tj2), (j, tj)] {
        if t < 0 {
            return Err(Error::NotHalfInteger(x));
        }
    }
    Ok(clebsch_gordan_doubled(
        tj1,
        tj2,
        tj,
        doubled(m1)?,
        doubled(m2)?,
        doubled(m)?,
    ))
}

/// The substitution `|n> -> (-1)^n |d-n-1>` as a matrix `W`; it satisfies
/// `R* = W R W^T` for every rotation `R` in the spin-(d-1)/2 representation.
pub fn conjugate_basis_map(d: usize) -> Result<DMatrix<f64>> {
    check_dimension(d)?;
    let mut w = DMatrix::zeros(d, d);
    for n in 0..d {
        w[(d - 1 - n, n)] = if n % 2 == 0 { 1.0 } else { -1.0 };
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExchangeSymmetry {
    #[serde(rename = "A")]
    Antisymmetric,
    #[serde(rename = "S")]
    Symmetric,
}

impl ExchangeSymmetry {
    pub fn sign(self) -> f64 {
        match self {
            Self::Symmetric => 1.0,
            Self::Antisymmetric => -1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::Symmetric => "S",
            Self::Antisymmetric => "A",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IrrepSubspace {
    pub twice_spin: u32,
    /// Doubled spin of the coupled clone pair.
    pub twice_pair_spin: u32,
    pub symmetry: ExchangeSymmetry,
    /// Orthonormal basis ordered by ascending `M`, vectors in the product
    /// basis `|i, j, k>` with index `(i * d + j) * d + k`.
    pub basis: Vec<DVector<f64>>,
}

impl IrrepSubspace {
    pub fn spin(&self) -> f64 {
        self.twice_spin as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `d^3 x dim` matrix with the basis as columns.
    pub fn isometry(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.basis)
    }

    pub fn projector(&self) -> DMatrix<f64> {
        let q = self.isometry();
        &q * q.transpose()
    }

    pub fn is_equivalent_to(&self, other: &Self) -> bool {
        self.twice_spin == other.twice_spin
    }
}

#[derive(Debug, Clone)]
pub struct IrrepDecomposition {
    pub dim_single: usize,
    pub subspaces: Vec<IrrepSubspace>,
}

pub fn decompose_triple(d: usize) -> Result<IrrepDecomposition> {
    check_dimension(d)?;
    let tj = d as i64 - 1;
    let w = conjugate_basis_map(d)?;
    let n3 = d * d * d;
    let twice_m = |n: usize| 2 * n as i64 - tj;

    let mut subspaces = Vec::new();
    for pair_spin in 0..d as i64 {
        let tj12 = 2 * pair_spin;
        let symmetry = if (tj - pair_spin) % 2 == 0 {
            ExchangeSymmetry::Symmetric
        } else {
            ExchangeSymmetry::Antisymmetric
        };
        // |J12 M12> on clones 1, 2, indexed by (M12 + J12)
        let pair_states: Vec<DVector<f64>> = (0..=2 * tj12)
            .step_by(2)
            .map(|shift| {
                let tm12 = shift - tj12;
                DVector::from_fn(d * d, |kl, _| {
                    clebsch_gordan_doubled(tj, tj, tj12, twice_m(kl / d), twice_m(kl % d), tm12)
                })
            })
            .collect();
        let mut tj_total = (tj12 - tj).abs();
        while tj_total <= tj12 + tj {
            let basis = (0..=2 * tj_total)
                .step_by(2)
                .map(|shift| {
                    let tm = shift - tj_total;
                    let mut v = DVector::zeros(n3);
                    for (p, pair) in pair_states.iter().enumerate() {
                        let tm12 = 2 * p as i64 - tj12;
                        for n in 0..d {
                            let cg =
                                clebsch_gordan_doubled(tj12, tj, tj_total, tm12, twice_m(n), tm);
                            if cg == 0.0 {
                                continue;
                            }
                            // third factor carries W|n>
                            for k in 0..d {
                                let wk = w[(k, n)];
                                if wk == 0.0 {
                                    continue;
                                }
                                for kl in 0..d * d {
                                    v[kl * d + k] += cg * wk * pair[kl];
                                }
                            }
                        }
                    }
                    v
                })
                .collect();
            subspaces.push(IrrepSubspace {
                twice_spin: tj_total as u32,
                twice_pair_spin: tj12 as u32,
                symmetry,
                basis,
            });
            tj_total += 2;
        }
    }
    subspaces.sort_by_key(|s| (s.twice_spin, s.symmetry, s.twice_pair_spin));
    Ok(IrrepDecomposition {
        dim_single: d,
        subspaces,
    })
}

impl IrrepDecomposition {
    pub fn dimensions(&self) -> Vec<usize> {
        self.subspaces.iter().map(IrrepSubspace::dim).collect()
    }

    pub fn symmetries(&self) -> Vec<ExchangeSymmetry> {
        self.subspaces.iter().map(|s| s.symmetry).collect()
    }

    /// All basis vectors as columns of a `d^3 x d^3` matrix, subspace by subspace.
    pub fn unitary(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self
            .subspaces
            .iter()
            .flat_map(|s| s.basis.iter().cloned())
            .collect();
        DMatrix::from_columns(&cols)
    }

    fn offsets(&self) -> Vec<usize> {
        self.subspaces
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.dim();
                Some(o)
            })
            .collect()
    }

    /// Largest entry of `|Q^T Q - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let q = self.unitary();
        let n = q.ncols();
        if q.nrows() != n {
            return f64::INFINITY;
        }
        (q.transpose() * &q - DMatrix::identity(n, n)).amax()
    }

    /// Largest `||Q_i^T (R ⊗ R ⊗ R*) Q_j||_F` over `i != j` and the sampled rotations.
    pub fn invariance_residual(&self, samples: &[CoherentPoint]) -> Result<f64> {
        let q = to_complex(&self.unitary());
        let offsets = self.offsets();
        let mut worst: f64 = 0.0;
        for &p in samples {
            let r = rotation_matrix(self.dim_single, p)?;
            let rotated = q.transpose() * kron3_mul_left(&r, &r, &r.conjugate(), &q);
            for (i, si) in self.subspaces.iter().enumerate() {
                for (j, sj) in self.subspaces.iter().enumerate() {
                    if i != j {
                        let block = rotated.view((offsets[i], offsets[j]), (si.dim(), sj.dim()));
                        worst = worst.max(block.norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Largest `||(SWAP_12 ⊗ I) v - sign * v||` over all basis vectors.
    pub fn exchange_residual(&self) -> f64 {
        let d = self.dim_single;
        let swap = |idx: usize| {
            let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
            (j * d + i) * d + k
        };
        let mut worst: f64 = 0.0;
        for s in &self.subspaces {
            for v in &s.basis {
                let swapped = DVector::from_fn(v.len(), |idx, _| v[swap(idx)]);
                worst = worst.max((swapped - v * s.symmetry.sign()).norm());
            }
        }
        worst
    }

    pub fn table(&self, with_basis: bool) -> DecompositionTable {
        let d = self.dim_single;
        let rows = self
            .subspaces
            .iter()
            .enumerate()
            .map(|(i, s)| SubspaceRow {
                space: format!("M{}", i + 1),
                dimension: s.dim(),
                spin: format_spin(s.twice_spin),
                pair_spin: format_spin(s.twice_pair_spin),
                symmetry: s.symmetry,
                basis: with_basis.then(|| {
                    s.basis
                        .iter()
                        .map(|v| {
                            v.iter()
                                .enumerate()
                                .filter(|(_, x)| x.abs() > 1e-12)
                                .map(|(idx, &x)| KetAmplitude {
                                    ket: [idx / (d * d), (idx / d) % d, idx % d],
                                    amplitude: x,
                                })
                                .collect()
                        })
                        .collect()
                }),
            })
            .collect();
        DecompositionTable { d, subspaces: rows }
    }
}

fn format_spin(twice: u32) -> String {
    if twice.is_multiple_of(2) {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetAmplitude {
    /// `[clone 1, clone 2, input copy]` number-state labels.
    pub ket: [usize; 3],
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceRow {
    pub space: String,
    pub dimension: usize,
    pub spin: String,
    pub pair_spin: String,
    pub symmetry: ExchangeSymmetry,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis: Option<Vec<Vec<KetAmplitude>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTable {
    pub d: usize,
    pub subspaces: Vec<SubspaceRow>,
}

impl DecompositionTable {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<6} {:>4} {:>6} {:>6} {:>3}",
            "space", "dim", "spin", "J12", "S2"
        );
        for row in &self.subspaces {
            let _ = writeln!(
                out,
                "{:<6} {:>4} {:>6} {:>6} {:>3}",
                row.space,
                row.dimension,
                row.spin,
                row.pair_spin,
                row.symmetry.tag()
            );
            if let Some(basis) = &row.basis {
                for v in basis {
                    let terms: Vec<String> = v
                        .iter()
                        .map(|t| {
                            format!(
                                "{:+.10}|{},{},{}>",
                                t.amplitude, t.ket[0], t.ket[1], t.ket[2]
                            )
                        })
                        .collect();
                    let _ = writeln!(out, "       {}", terms.join(" "));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockCoefficient {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    /// `c_ij` for every pair of equivalent irreps with matching exchange
    /// symmetry (0-based subspace indices).
    pub coefficients: Vec<BlockCoefficient>,
    /// Largest deviation of `Q^T P Q` from `sum c_ij I^i_j`.
    pub leakage: f64,
    /// Largest entry of `Q^T P Q` inside blocks that must vanish.
    pub forbidden_max: f64,
    /// Subspaces with a diagonal coefficient above the support tolerance.
    pub support: Vec<usize>,
}

impl BlockReport {
    pub fn coefficient(&self, i: usize, j: usize) -> Option<Complex64> {
        self.coefficients
            .iter()
            .find(|c| c.i == i && c.j == j)
            .map(|c| Complex64::new(c.re, c.im))
    }
}

pub fn block_structure(p: &ChoiOperator, dec: &IrrepDecomposition) -> Result<BlockReport> {
    let d = dec.dim_single;
    if p.dim_single() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("Choi operator for d = {d}"),
            found: format!("d = {}", p.dim_single()),
        });
    }
    let q = to_complex(&dec.unitary());
    let rotated: CMatrix = q.transpose() * p.matrix() * &q;
    let offsets = dec.offsets();
    let mut model = CMatrix::zeros(rotated.nrows(), rotated.ncols());
    let mut coefficients = Vec::new();
    let mut forbidden_max: f64 = 0.0;
    for (i, si) in dec.subspaces.iter().enumerate() {
        for (j, sj) in dec.subspaces.iter().enumerate() {
            let block = rotated.view((offsets[i], offsets[j]), (si.dim(), sj.dim()));
            if si.is_equivalent_to(sj) && si.symmetry == sj.symmetry {
                let c = block.trace() / Complex64::new(si.dim() as f64, 0.0);
                for k in 0..si.dim() {
                    model[(offsets[i] + k, offsets[j] + k)] = c;
                }
                coefficients.push(BlockCoefficient {
                    i,
                    j,
                    re: c.re,
                    im: c.im,
                });
            } else {
                forbidden_max = forbidden_max.max(block.camax());
            }
        }
    }
    let leakage = (rotated - model).camax();
    let support = coefficients
        .iter()
        .filter(|c| c.i == c.j && c.re.abs() > 1e-8)
        .map(|c| c.i)
        .collect();
    Ok(BlockReport {
        coefficients,
        leakage,
        forbidden_max,
        support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn textbook_coefficients() {
        let cg = clebsch_gordan(0.5, 0.5, 1.0, 0.5, -0.5, 0.0).unwrap();
        assert!((cg - FRAC_1_SQRT_2).abs() < 1e-15);
        let singlet = clebsch_gordan(0.5, 0.5, 0.0, 0.5, -0.5, 0.0).unwrap();
        assert!((singlet - FRAC_1_SQRT_2).abs() < 1e-15);
        let partner = clebsch_gordan(0.5, 0.5, 0.0, -0.5, 0.5, 0.0).unwrap();
        assert!((partner + FRAC_1_SQRT_2).abs() < 1e-15);
        // <1 1; 1/2 -1/2 | 1/2 1/2> = sqrt(2/3)
        let v = clebsch_gordan(1.0, 0.5, 0.5, 1.0, -0.5, 0.5).unwrap();
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // <1 0; 1/2 1/2 | 1/2 1/2> = -sqrt(1/3)
        let v = clebsch_gordan(1.0, 0.5, 0.5, 0.0, 0.5, 0.5).unwrap();
        assert!((v + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn selection_rules_and_errors() {
        assert_eq!(clebsch_gordan(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(clebsch_gordan(1.0, 1.0, 3.0, 1.0, 1.0, 2.0).unwrap(), 0.0);
        assert!(matches!(
            clebsch_gordan(0.3, 0.5, 0.5, 0.0, 0.5, 0.5),
            Err(Error::NotHalfInteger(_))
        ));
        assert!(clebsch_gordan(-1.0, 0.5, 0.5, 0.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn cg_orthogonality() {
        // sum over m1, m2 of CG products is delta in (J, M)
        for tj1 in 0..=4i64 {
            for tj2 in 0..=4i64 {
                let mut tj = (tj1 - tj2).abs();
                while tj <= tj1 + tj2 {
                    let mut tjp = (tj1 - tj2).abs();
                    while tjp <= tj1 + tj2 {
                        for tm in (-tj.min(tjp)..=tj.min(tjp)).step_by(2) {
                            let mut s = 0.0;
                            for tm1 in (-tj1..=tj1).step_by(2) {
                                let tm2 = tm - tm1;
                                s += clebsch_gordan_doubled(tj1, tj2, tj, tm1, tm2, tm)
                                    * clebsch_gordan_doubled(tj1, tj2, tjp, tm1, tm2, tm);
                            }
                            let expect = if tj == tjp { 1.0 } else { 0.0 };
                            assert!((s - expect).abs() < 1e-12);
                        }
                        tjp += 2;
                    }
                    tj += 2;
                }
            }
        }
    }

    #[test]
    fn conjugate_map_examples_and_intertwining() {
        let w2 = conjugate_basis_map(2).unwrap();
        assert_eq!(w2, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let w3 = conjugate_basis_map(3).unwrap();
        assert_eq!(w3.column(0).as_slice(), &[0.0, 0.0, 1.0]);
        assert_eq!(w3.column(1).as_slice(), &[0.0, -1.0, 0.0]);
        assert_eq!(w3.column(2).as_slice(), &[1.0, 0.0, 0.0]);
        for d in 2..=6 {
            let w = to_complex(&conjugate_basis_map(d).unwrap());
            for (t, p) in [(0.3, 0.1), (1.2, 2.0), (2.5, 4.4), (3.0, 5.9), (0.9, 3.3)] {
                let r = rotation_matrix(d, CoherentPoint::new(t, p).unwrap()).unwrap();
                assert!((&w * &r * w.transpose() - r.conjugate()).norm() < 1e-10);
                assert!((w.transpose() * r.conjugate() * &w - &r).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn qubit_table() {
        let dec = decompose_triple(2).unwrap();
        assert_eq!(dec.dimensions(), vec![2, 2, 4]);
        use ExchangeSymmetry::*;
        assert_eq!(dec.symmetries(), vec![Antisymmetric, Symmetric, Symmetric]);
    }

    #[test]
    fn qutrit_table() {
        let dec = decompose_triple(3).unwrap();
        assert_eq!(dec.dimensions(), vec![1, 3, 3, 3, 5, 5, 7]);
        use ExchangeSymmetry::*;
        assert_eq!(
            dec.symmetries(),
            vec![
                Antisymmetric,
                Antisymmetric,
                Symmetric,
                Symmetric,
                Antisymmetric,
                Symmetric,
                Symmetric
            ]
        );
        // first M3 vector: (|0,2,2> - |1,1,2> + |2,0,2>)/sqrt 3
        let v = &dec.subspaces[2].basis[0];
        let idx = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
        let s = 1.0 / 3f64.sqrt();
        let mut expected = DVector::zeros(27);
        expected[idx(0, 2, 2)] = s;
        expected[idx(1, 1, 2)] = -s;
        expected[idx(2, 0, 2)] = s;
        assert!((v - &expected).norm() < 1e-12 || (v + &expected).norm() < 1e-12);
    }

    #[test]
    fn structural_invariants() {
        let samples: Vec<CoherentPoint> = (0..5)
            .map(|k| {
                CoherentPoint::new(0.3 + 0.5 * k as f64, (1.7 * k as f64) % (2.0 * PI)).unwrap()
            })
            .collect();
        for d in 2..=5 {
            let dec = decompose_triple(d).unwrap();
            assert_eq!(dec.dimensions().iter().sum::<usize>(), d * d * d);
            assert!(dec.completeness_residual() < 1e-10, "d={d}");
            assert!(dec.exchange_residual() < 1e-10);
            assert!(dec.invariance_residual(&samples).unwrap() < 1e-8);
        }
    }

    #[test]
    fn table_text_lists_every_subspace() {
        let t = decompose_triple(3).unwrap().table(true);
        let text = t.to_text();
        assert_eq!(text.lines().filter(|l| l.starts_with('M')).count(), 7);
        assert!(text.contains("|0,2,2>"));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            serde_json::from_str::<DecompositionTable>(&json).unwrap(),
            t
        );
    }
}
