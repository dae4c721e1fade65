//! Analytical lower bound and variational upper bound on the concurrence of
//! mixed states of `2 x K` systems.
//!
//! The lower bound is `sqrt(sum_{i<j} C^2(rho^(ij)))`, where `rho^(ij)` are the
//! projections of `rho` onto `2 x 2` subspaces spanned by pairs of basis
//! vectors of the second factor and `C` is the two-qubit (Wootters)
//! concurrence; it is maximized over the choice of basis. The upper bound is
//! the average pure-state concurrence of a numerically optimized
//! decomposition of `rho`. For `2 x 3` states with a single entangled
//! substate the crate can also certify that the lower bound is exact.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod concurrence;
pub mod error;
pub mod io;
pub mod linalg;
pub mod optim;
pub mod scalar;
pub mod states;

#[cfg(test)]
mod testutil;

pub use bounds::{
    binary_entropy, compute_report, default_ub_length, eof_from_sum_sq, eof_lower_bound,
    exactness_certificate, exactness_certificate_from, lower_bound_fixed_basis,
    lower_bound_optimized, ppt_verdict, upper_bound, BoundReport, Certificate, Exactness,
    LowerBound, PptResult, PptVerdict, ReportOptions, UpperBound,
};
pub use concurrence::{
    flip_operator, project_substates, pure_concurrence, pure_concurrence_flip,
    pure_projection_identity_residual, wootters_concurrence, Substate, SubstateSet,
};
pub use error::{Error, Result};
pub use io::{IoError, ReportJson};
pub use linalg::{
    hermitian_eigensystem, matrix_sqrt_psd, partial_trace, partial_transpose, tensor_product,
    BipartiteDims, ComplexMatrix, Eigensystem, Factor,
};
pub use optim::{
    maximize, minimize, IsometryParams, OptimDiagnostics, OptimResult, OptimizerConfig,
    UnitaryParams,
};
pub use scalar::{Real, Tolerances};
pub use states::{
    derive_seed, family_exact_concurrence, family_state, random_induced_state, random_pure_state,
    random_unitary, Decomposition, DensityMatrix, FamilyClass, FamilyParams, PureState,
};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type PureState64 = PureState<f64>;
pub type Decomposition64 = Decomposition<f64>;
pub type FamilyParams64 = FamilyParams<f64>;
pub type BoundReport64 = BoundReport<f64>;

pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
