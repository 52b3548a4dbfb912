//! Scalar special functions backing the coherent-state measures: complex
//! log-gamma, modified Bessel `K_nu`, Bessel `J_nu`, generalized
//! hypergeometric series, and a Mellin-Barnes evaluator for the
//! `G_{2,4}^{4,0}` Meijer function.

mod bessel;
mod gamma;
mod meijer;
mod pfq;

pub use bessel::{bessel_j, bessel_k};
pub use gamma::{gamma_real, log_abs_gamma_sign, log_gamma, pochhammer, pochhammer_abs2};
pub use meijer::{meijer_g_2440, meijer_g_q0, MeijerG2440Params, MellinBarnesContour};
pub use pfq::{pfq, PfqParam};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecMathError {
    #[error("gamma pole: argument is a nonpositive integer")]
    PoleAtNonpositiveInteger,
    #[error("argument must be positive")]
    NonpositiveArgument,
    #[error("hypergeometric series diverges for these parameters and argument")]
    DivergentSeries,
    #[error("Mellin-Barnes contour quadrature failed to converge")]
    ContourFailure,
}
