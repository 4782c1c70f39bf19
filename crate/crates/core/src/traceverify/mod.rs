//! Identity checks for the trace and summation formulas, the circle-method
//! approximation, shifted convolution sums and the large-sieve experiment.

mod jutila;
mod petersson;
mod shifted;
mod sieve;
mod voronoi;

use thiserror::Error;

use crate::arith::ArithError;
use crate::forms::FormError;
use crate::quad::QuadError;
use crate::specialfn::SpecialFnError;

pub use jutila::{jutila_build, jutila_l2_error, rational_approx, w_delta, StepFunction};
pub use petersson::{
    petersson_geometric_r, petersson_rank1_check, sss_cusp_sum, sss_partial_sums, Rank1Report,
};
pub use shifted::{parseval_check, shifted_sum_a, ParsevalReport};
pub use sieve::{
    large_sieve_bound, large_sieve_lhs, large_sieve_lhs_direct, random_instance, CoefficientLaw,
    SieveInstance, SieveSign,
};
pub use voronoi::{voronoi_lhs, voronoi_rhs, VoronoiValue};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("truncation too short: tail bound {tail:e} exceeds tolerance {tol:e}")]
    TruncationTooShort { tail: f64, tol: f64 },
    #[error("Atkin-Lehner eigenvalue at {0} is required but missing")]
    MissingAtkinLehner(u64),
    #[error("reflection sign of the Maass form is required but missing")]
    MissingReflectionSign,
    #[error("the set of moduli is empty")]
    EmptyModuli,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}
