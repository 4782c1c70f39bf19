//! Gamma and Bessel functions in the forms the trace formulas need.
//!
//! J of real order uses its power series for x <= 10 and the phase
//! decomposition J = e^{ix} W + e^{-ix} conj(W) beyond. K and the symmetric Y
//! pair of imaginary order come from the same Hankel-type integral along the
//! real and imaginary axes.

mod bessel;
mod gamma;

use thiserror::Error;

pub use bessel::{
    bessel_j, bessel_j_complex, bessel_k_general, bessel_k_imag, bessel_k_imag_scaled,
    bessel_k_real, bessel_y_pair, bessel_y_pair_real, bessel_y_pair_scaled, hankel_integral,
    phase_w, voronoi_kernel, BesselOrder, HankelMethod, KernelKind, Sign,
};
pub use gamma::{gamma, gamma_complex, ln_gamma, ln_gamma_complex};

use crate::quad::QuadError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFnError {
    #[error("intermediate terms exceed the floating-point range")]
    Overflow,
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}
