//! Optimal symmetric 1 -> 2 cloning of SU(2) spin coherent states.
//!
//! Pipeline: coherent amplitudes ([`spin`]) and the symmetric two-clone space
//! ([`symmetric`]) feed the fidelity tensor ([`fidelity`]), whose top
//! eigenspace gives the optimal fidelity and a cloning isometry
//! ([`optimizer`]). The isometry is checked as a channel through its Choi
//! operator ([`channel`]) and against the irreducible decomposition of
//! `V ⊗ V ⊗ V*` ([`irrep`]). [`fitting`] extrapolates `F(d)` to large `d`.

pub mod channel;
pub mod error;
pub mod fidelity;
pub mod fitting;
pub mod irrep;
pub mod linalg;
pub mod optimizer;
pub mod report;
pub mod spin;
pub mod symmetric;
pub mod verify;

pub use channel::{
    choi_from_isometry, choi_spectrum, ChoiOperator, ConjectureVerdict, MAX_DENSE_DIM,
};
pub use error::{Error, Result};
pub use fidelity::{angular_moment, build_fidelity_tensor, FidelityTensor};
pub use fitting::{fit_rational, FidelityCurve, RationalFit};
pub use irrep::{
    block_structure, decompose_triple, ExchangeSymmetry, IrrepDecomposition, IrrepSubspace,
};
pub use linalg::{CMatrix, CVector};
pub use optimizer::{
    build_isometry, max_fidelity, solve, sweep, universal_fidelity, CloningIsometry,
    OptimalSolution, SolverOptions, SweepRow,
};
pub use spin::{coherent_amplitudes, rotation_matrix, AmplitudeVector, CoherentPoint};
pub use symmetric::{symmetric_basis, SymmetricBasis};
