//! Sinkhorn alternate scaling of positive matrices.
//!
//! The same iteration runs over `f64` (convergence to a tolerance) and over
//! exact rationals (detection of finite termination). Around it sit the
//! explicit `2 x 2` and bordered `n x n` limits and an exact classifier that
//! decides whether a `2 x 2` matrix terminates in 0, 1, 2 or infinitely many
//! steps.

pub mod classifier;
pub mod closed_form;
pub mod engine;
pub mod error;
pub mod exact;
pub mod io;
pub mod matrix;
pub mod scalar;

pub use classifier::{
    classify_2x2, classify_both_orders, stochastic_one_step_forms, BothOrders, OneStepForm, StochasticShape,
    TerminationClass, TerminationKind,
};
pub use closed_form::{
    bordered_limit, bordered_limit_triangular, bordered_matrix, limit_2x2, limit_2x2_exact,
    limit_2x2_of_exact, limit_2x2_symmetric, BorderedLimit, ExactLimit2x2, Limit2x2, SymmetricLimit2x2,
    TriangularBorderedLimit,
};
pub use engine::{
    finite_termination_search, rc_sinkhorn, scaling_invariance_check, sinkhorn, IterationConfig,
    IterationTrace, SearchCatalog, SearchConfig, SearchEntry, Side, SinkhornResult, StartSide, Status,
    TraceRecord,
};
pub use error::{Result, ScalingError};
pub use exact::Rational;
pub use io::AnyMatrix;
pub use matrix::{DiagonalScaling, MarginTarget, PositiveMatrix};
pub use scalar::Scalar;
