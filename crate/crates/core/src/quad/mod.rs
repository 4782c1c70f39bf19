//! Adaptive quadrature, smooth windows, the Bessel transforms of a window and
//! the oscillatory kernel integrals built from them.
//!
//! Every integral reports a two-resolution error estimate: on each panel the
//! 15-point Kronrod value is compared with the embedded 7-point Gauss value.

mod engine;
mod kernels;
mod transforms;
mod window;

pub use engine::{
    gauss_legendre, integrate, integrate_complex, integrate_complex_panels, integrate_panels,
    Domain, Envelope, QuadConfig, QuadError,
};
pub use kernels::{kernel_i, kernel_i0, kernel_i1, KernelParams};
pub use transforms::{transform_check, transform_hat, transform_tilde, SpectralParam};
pub use window::SmoothWindow;
