//! Numerical verification toolkit for second-moment estimates of
//! Rankin-Selberg L-functions.
//!
//! The library evaluates every term of the trace formulas, summation formulas
//! and transforms that the analytic argument relies on, and checks them
//! against independent oracles. Most capabilities have a runnable example:
//!
//! ```text
//! cargo run --release --example kloosterman_sums
//! cargo run --release --example bessel_kernels
//! cargo run --release --example bessel_transforms
//! cargo run --release --example delta_coefficients
//! cargo run --release --example petersson_check
//! cargo run --release --example voronoi_check
//! cargo run --release --example jutila_circle
//! cargo run --release --example large_sieve
//! cargo run --release --example second_moment
//! cargo run --release --example afe_weight
//! cargo run --release --example type_calculus
//! cargo run --release --example lmfdb_fetch -- 11.2.a.a
//! ```
//!
//! The `rankinlab` binary exposes the same checks as command-line verbs with
//! deterministic CSV or JSON-lines reports.

use num_complex::Complex64;

pub mod arith;
pub mod cli;
pub mod forms;
pub mod lfunc;
pub mod quad;
pub mod specialfn;
pub mod traceverify;
pub mod typecalc;

/// A real value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
}

/// A complex value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CEvalResult {
    pub value: Complex64,
    pub abs_err: f64,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            abs_err: 0.0,
        }
    }
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
