use std::f64::consts::PI;

use super::engine::{integrate, Domain, QuadConfig};
use super::transforms::ErrTracker;
use super::window::SmoothWindow;
use crate::specialfn::{bessel_j, bessel_k_imag, bessel_y_pair, BesselOrder, SpecialFnError};
use crate::EvalResult;

/// Shared arguments of the kernels I, I_0, I_1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
    pub kappa: u32,
}

fn kernel_with<F>(
    p: &KernelParams,
    h: &SmoothWindow,
    first: F,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError>
where
    F: Fn(f64) -> Result<EvalResult, SpecialFnError>,
{
    let (lo, hi) = h.support();
    if lo < 0.0 {
        return Err(SpecialFnError::Domain(
            "kernel window must live on (0, inf)".into(),
        ));
    }
    let alpha = 4.0 * PI * p.a * p.x.sqrt();
    let beta = 4.0 * PI * p.b * p.y.sqrt();
    // d/dxi of alpha sqrt(xi) is alpha / (2 sqrt(xi))
    let hint =
        (alpha + beta) / (2.0 * lo.max(1e-3).sqrt() * 2.0 * PI) + h.deriv_scale() / h.width();
    let tracker = ErrTracker::default();
    let r = integrate(
        |xi| {
            let s = xi.sqrt();
            let f1 = tracker.take(first(alpha * s));
            let f2 = tracker.take(bessel_j(BesselOrder::Integer(p.kappa as i64 - 1), beta * s));
            h.eval(xi) * f1 * f2
        },
        &Domain::Finite(lo, hi),
        &cfg.with_hint(cfg.oscillation_hint.max(hint)),
    )?;
    let point_err = tracker.finish()?;
    Ok(EvalResult {
        value: r.value,
        abs_err: r.abs_err + 2.0 * point_err * (hi - lo),
    })
}

/// I(x,y) = int h(xi) J_{k-1}(4 pi a sqrt(x xi)) J_{kappa-1}(4 pi b sqrt(y xi)) dxi.
pub fn kernel_i(
    p: &KernelParams,
    k: u32,
    h: &SmoothWindow,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError> {
    kernel_with(
        p,
        h,
        |z| bessel_j(BesselOrder::Integer(k as i64 - 1), z),
        cfg,
    )
}

/// As [`kernel_i`] with (Y_{2it} + Y_{-2it}) in place of J_{k-1}.
pub fn kernel_i0(
    p: &KernelParams,
    t: f64,
    h: &SmoothWindow,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError> {
    kernel_with(p, h, |z| bessel_y_pair(t, z), cfg)
}

/// As [`kernel_i`] with K_{2it} in place of J_{k-1}.
pub fn kernel_i1(
    p: &KernelParams,
    t: f64,
    h: &SmoothWindow,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError> {
    kernel_with(p, h, |z| bessel_k_imag(t, z), cfg)
}
