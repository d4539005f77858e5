//! Invariant subspaces of `V ⊗ V ⊗ V*` against transcribed tables, and the
//! Choi block coefficients of the d = 2, 3 cloners.

use nalgebra::{DMatrix, DVector};
use spinclone_core::verify::oracle;
use spinclone_core::{
    block_structure, build_isometry, choi_from_isometry, decompose_triple, max_fidelity,
    CloningIsometry, IrrepDecomposition,
};

type Row = (f64, &'static [(i8, [usize; 3])]);

fn vector(d: usize, (norm, terms): &Row) -> DVector<f64> {
    let mut v = DVector::zeros(d * d * d);
    for &(c, [i, j, k]) in terms.iter() {
        v[(i * d + j) * d + k] += c as f64 * norm;
    }
    v
}

fn projector(vs: &[DVector<f64>]) -> DMatrix<f64> {
    vs.iter()
        .fold(DMatrix::zeros(vs[0].len(), vs[0].len()), |acc, v| {
            acc + v * v.transpose()
        })
}

fn assert_tables(dec: &IrrepDecomposition, table: &[&[Row]]) {
    let d = dec.dim_single;
    assert_eq!(dec.subspaces.len(), table.len());
    for (i, (sub, rows)) in dec.subspaces.iter().zip(table).enumerate() {
        let vs: Vec<DVector<f64>> = rows.iter().map(|r| vector(d, r)).collect();
        for v in &vs {
            assert!(
                (v.norm() - 1.0).abs() < 1e-12,
                "M{} row not normalized",
                i + 1
            );
        }
        let p = projector(&vs);
        assert!(
            (&p - sub.projector()).amax() < 1e-12,
            "M{} projector differs",
            i + 1
        );
    }
}

#[test]
fn qubit_subspaces() {
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let r3 = 1.0 / 3f64.sqrt();
    let dec = decompose_triple(2).unwrap();
    // M2 rows carry sqrt(2/3) and sqrt(1/6); write them with a common factor 1/sqrt 6
    let r6 = 1.0 / 6f64.sqrt();
    let table: [&[Row]; 3] = [
        &[
            (r2, &[(-1, [0, 1, 1]), (1, [1, 0, 1])]),
            (r2, &[(1, [0, 1, 0]), (-1, [1, 0, 0])]),
        ],
        &[
            (r6, &[(2, [0, 0, 0]), (1, [0, 1, 1]), (1, [1, 0, 1])]),
            (r6, &[(2, [1, 1, 1]), (1, [0, 1, 0]), (1, [1, 0, 0])]),
        ],
        &[
            (1.0, &[(1, [0, 0, 1])]),
            (r3, &[(-1, [0, 0, 0]), (1, [0, 1, 1]), (1, [1, 0, 1])]),
            (r3, &[(-1, [0, 1, 0]), (-1, [1, 0, 0]), (1, [1, 1, 1])]),
            (1.0, &[(1, [1, 1, 0])]),
        ],
    ];
    assert_tables(&dec, &table);
}

#[test]
fn qutrit_subspaces() {
    let dec = decompose_triple(3).unwrap();
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let t3 = 1.0 / (2.0 * 3f64.sqrt());
    let t15 = 1.0 / (2.0 * 15f64.sqrt());
    let s15 = 1.0 / 15f64.sqrt();
    let s10 = 1.0 / 10f64.sqrt();
    let table: [&[Row]; 7] = [
        &[(
            s6,
            &[
                (-1, [0, 1, 0]),
                (-1, [0, 2, 1]),
                (1, [1, 0, 0]),
                (-1, [1, 2, 2]),
                (1, [2, 0, 1]),
                (1, [2, 1, 2]),
            ],
        )],
        &[
            (
                0.5,
                &[
                    (-1, [0, 1, 1]),
                    (-1, [0, 2, 2]),
                    (1, [1, 0, 1]),
                    (1, [2, 0, 2]),
                ],
            ),
            (
                0.5,
                &[
                    (1, [0, 1, 0]),
                    (-1, [1, 0, 0]),
                    (-1, [1, 2, 2]),
                    (1, [2, 1, 2]),
                ],
            ),
            // |1,2,1> enters with + so the row is exchange-antisymmetric
            (
                0.5,
                &[
                    (1, [0, 2, 0]),
                    (1, [1, 2, 1]),
                    (-1, [2, 0, 0]),
                    (-1, [2, 1, 1]),
                ],
            ),
        ],
        &[
            (s3, &[(1, [0, 2, 2]), (-1, [1, 1, 2]), (1, [2, 0, 2])]),
            (s3, &[(-1, [0, 2, 1]), (1, [1, 1, 1]), (-1, [2, 0, 1])]),
            (s3, &[(1, [0, 2, 0]), (-1, [1, 1, 0]), (1, [2, 0, 0])]),
        ],
        &[
            (
                t15,
                &[
                    (6, [0, 0, 0]),
                    (3, [0, 1, 1]),
                    (1, [0, 2, 2]),
                    (3, [1, 0, 1]),
                    (2, [1, 1, 2]),
                    (1, [2, 0, 2]),
                ],
            ),
            (
                t15,
                &[
                    (3, [0, 1, 0]),
                    (2, [0, 2, 1]),
                    (3, [1, 0, 0]),
                    (4, [1, 1, 1]),
                    (3, [1, 2, 2]),
                    (2, [2, 0, 1]),
                    (3, [2, 1, 2]),
                ],
            ),
            (
                t15,
                &[
                    (1, [0, 2, 0]),
                    (2, [1, 1, 0]),
                    (3, [1, 2, 1]),
                    (1, [2, 0, 0]),
                    (3, [2, 1, 1]),
                    (6, [2, 2, 2]),
                ],
            ),
        ],
        &[
            (s2, &[(-1, [0, 1, 2]), (1, [1, 0, 2])]),
            (
                0.5,
                &[
                    (1, [0, 1, 1]),
                    (-1, [0, 2, 2]),
                    (-1, [1, 0, 1]),
                    (1, [2, 0, 2]),
                ],
            ),
            // charge conservation puts |1,0,0> here
            (
                t3,
                &[
                    (-1, [0, 1, 0]),
                    (2, [0, 2, 1]),
                    (1, [1, 0, 0]),
                    (-1, [1, 2, 2]),
                    (-2, [2, 0, 1]),
                    (1, [2, 1, 2]),
                ],
            ),
            (
                0.5,
                &[
                    (-1, [0, 2, 0]),
                    (1, [1, 2, 1]),
                    (1, [2, 0, 0]),
                    (-1, [2, 1, 1]),
                ],
            ),
            (s2, &[(-1, [1, 2, 0]), (1, [2, 1, 0])]),
        ],
        &[
            (s6, &[(2, [0, 0, 1]), (1, [0, 1, 2]), (1, [1, 0, 2])]),
            (
                t3,
                &[
                    (-2, [0, 0, 0]),
                    (1, [0, 1, 1]),
                    (1, [0, 2, 2]),
                    (1, [1, 0, 1]),
                    (2, [1, 1, 2]),
                    (1, [2, 0, 2]),
                ],
            ),
            (
                0.5,
                &[
                    (-1, [0, 1, 0]),
                    (-1, [1, 0, 0]),
                    (1, [1, 2, 2]),
                    (1, [2, 1, 2]),
                ],
            ),
            (
                t3,
                &[
                    (-1, [0, 2, 0]),
                    (-2, [1, 1, 0]),
                    (-1, [1, 2, 1]),
                    (-1, [2, 0, 0]),
                    (-1, [2, 1, 1]),
                    (2, [2, 2, 2]),
                ],
            ),
            (s6, &[(-2, [2, 2, 1]), (-1, [1, 2, 0]), (-1, [2, 1, 0])]),
        ],
        &[
            (1.0, &[(1, [0, 0, 2])]),
            (s3, &[(-1, [0, 0, 1]), (1, [0, 1, 2]), (1, [1, 0, 2])]),
            // |0,0,0> enters with + so the row is orthogonal to M4 and M6
            (
                s15,
                &[
                    (1, [0, 0, 0]),
                    (-2, [0, 1, 1]),
                    (1, [0, 2, 2]),
                    (-2, [1, 0, 1]),
                    (2, [1, 1, 2]),
                    (1, [2, 0, 2]),
                ],
            ),
            (
                s10,
                &[
                    (1, [0, 1, 0]),
                    (-1, [0, 2, 1]),
                    (1, [1, 0, 0]),
                    (-2, [1, 1, 1]),
                    (1, [1, 2, 2]),
                    (-1, [2, 0, 1]),
                    (1, [2, 1, 2]),
                ],
            ),
            (
                s15,
                &[
                    (1, [0, 2, 0]),
                    (2, [1, 1, 0]),
                    (-2, [1, 2, 1]),
                    (1, [2, 0, 0]),
                    (-2, [2, 1, 1]),
                    (1, [2, 2, 2]),
                ],
            ),
            (s3, &[(1, [1, 2, 0]), (1, [2, 1, 0]), (-1, [2, 2, 1])]),
            (1.0, &[(1, [2, 2, 0])]),
        ],
    ];
    assert_tables(&dec, &table);
}

fn block_diagonal(iso: &CloningIsometry) -> Vec<f64> {
    let dec = decompose_triple(iso.dim()).unwrap();
    let report = block_structure(&choi_from_isometry(iso).unwrap(), &dec).unwrap();
    assert!(report.leakage < 1e-10);
    assert!(report.forbidden_max < 1e-10);
    (0..dec.subspaces.len())
        .map(|i| report.coefficient(i, i).map_or(0.0, |c| c.re))
        .collect()
}

#[test]
fn qubit_cloner_occupies_symmetric_doublet() {
    let diag = block_diagonal(&build_isometry(&max_fidelity(2).unwrap()).unwrap());
    for (x, y) in diag.iter().zip([0.0, 1.0, 0.0]) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn qutrit_block_coefficients() {
    let k = 13.0 / (6.0 * 21f64.sqrt());
    let cases = [
        (
            build_isometry(&max_fidelity(3).unwrap()).unwrap(),
            0.5 - k,
            0.5 + k,
        ),
        (oracle::universal_cloner(3), 1.0 / 6.0, 5.0 / 6.0),
    ];
    for (iso, a2, b2) in cases {
        let dec = decompose_triple(3).unwrap();
        let report = block_structure(&choi_from_isometry(&iso).unwrap(), &dec).unwrap();
        let c = |i, j| report.coefficient(i, j).unwrap();
        assert!((c(2, 2).re.sqrt() - a2.sqrt()).abs() < 1e-10);
        assert!((c(3, 3).re.sqrt() - b2.sqrt()).abs() < 1e-10);
        // rank-one block: |c34|^2 = c33 c44
        assert!((c(2, 3).norm_sqr() - a2 * b2).abs() < 1e-10);
        let mut support = report.support.clone();
        support.sort();
        assert_eq!(support, vec![2, 3]);
    }
}

#[test]
fn larger_dimensions_sum_to_full_space() {
    for d in 4..=6 {
        let dec = decompose_triple(d).unwrap();
        assert_eq!(dec.dimensions().iter().sum::<usize>(), d * d * d);
    }
}
