use std::cell::Cell;
use std::f64::consts::PI;

use super::engine::{gauss_legendre, integrate, integrate_panels, Domain, QuadConfig};
use super::window::SmoothWindow;
use crate::specialfn::{
    bessel_j, bessel_k_imag_scaled, bessel_k_real, ln_gamma, BesselOrder, SpecialFnError,
};
use crate::EvalResult;

/// Spectral parameter: real t, or t = i r with 0 < r < 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralParam {
    Real(f64),
    Imag(f64),
}

/// First error raised inside an integrand plus the largest pointwise error.
#[derive(Default)]
pub(crate) struct ErrTracker {
    first: Cell<Option<()>>,
    err: std::cell::RefCell<Option<SpecialFnError>>,
    max_abs_err: Cell<f64>,
}

impl ErrTracker {
    pub(crate) fn take(&self, r: Result<EvalResult, SpecialFnError>) -> f64 {
        match r {
            Ok(v) => {
                if v.abs_err > self.max_abs_err.get() {
                    self.max_abs_err.set(v.abs_err);
                }
                v.value
            }
            Err(e) => {
                if self.first.get().is_none() {
                    self.first.set(Some(()));
                    *self.err.borrow_mut() = Some(e);
                }
                0.0
            }
        }
    }

    pub(crate) fn finish(self) -> Result<f64, SpecialFnError> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => Ok(self.max_abs_err.get()),
        }
    }
}

/// Integral of |phi(y)| / y over the support, for error propagation.
fn abs_mass(phi: &SmoothWindow) -> f64 {
    let (a, b) = phi.support();
    integrate(
        |y| phi.eval(y).abs() / y,
        &Domain::Finite(a, b),
        &QuadConfig::with_tolerances(1e-6, 1e-14),
    )
    .map(|r| r.value)
    .unwrap_or(f64::INFINITY)
}

/// phi~(l) = int J_l(y) phi(y) dy / y.
pub fn transform_tilde(
    phi: &SmoothWindow,
    l: u32,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError> {
    let (a, b) = phi.support();
    if a <= 0.0 {
        return Err(SpecialFnError::Domain(
            "window support must be in (0, inf)".into(),
        ));
    }
    // |J_l(y)| <= (y/2)^l / l!
    let log_bound = l as f64 * (0.5 * b).ln() - ln_gamma(l as f64 + 1.0).0;
    if l > 0 && log_bound < -700.0 {
        return Ok(EvalResult {
            value: 0.0,
            abs_err: log_bound.exp() * abs_mass(phi),
        });
    }
    let tracker = ErrTracker::default();
    let hint = 1.0 / (2.0 * PI) + phi.deriv_scale() / phi.width();
    let r = integrate(
        |y| tracker.take(bessel_j(BesselOrder::Integer(l as i64), y)) * phi.eval(y) / y,
        &Domain::Finite(a, b),
        &cfg.with_hint(cfg.oscillation_hint.max(hint)),
    )?;
    let point_err = tracker.finish()?;
    Ok(EvalResult {
        value: r.value,
        abs_err: r.abs_err + point_err * abs_mass(phi),
    })
}

/// Phi(c) = int phi(x) cos(c x) dx / x on a fixed Gauss-Legendre grid fine
/// enough for frequencies up to `c_cap`.
struct CosineTransform {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CosineTransform {
    fn new(phi: &SmoothWindow, c_cap: f64) -> Self {
        let (a, b) = phi.support();
        let w = b - a;
        let panels = ((w * c_cap / (2.0 * PI)).ceil() as usize)
            .max((8.0 * phi.deriv_scale()).ceil() as usize)
            .max(64);
        let (gx, gw) = gauss_legendre(16);
        let mut nodes = Vec::with_capacity(panels * 16);
        let mut weights = Vec::with_capacity(panels * 16);
        let h = w / panels as f64;
        for p in 0..panels {
            let c = a + h * (p as f64 + 0.5);
            for (x, wt) in gx.iter().zip(&gw) {
                let t = c + 0.5 * h * x;
                let v = phi.eval(t) / t;
                if v != 0.0 {
                    nodes.push(t);
                    weights.push(0.5 * h * wt * v);
                }
            }
        }
        CosineTransform { nodes, weights }
    }

    fn eval(&self, c: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * (c * x).cos())
            .sum()
    }
}

/// Smallest c >= 1 beyond which |Phi| stays below `target` on a dyadic scan.
fn cosine_cutoff(phi: &SmoothWindow, target: f64) -> Result<f64, SpecialFnError> {
    let mut below = 0;
    let mut c = 1.0f64;
    while c < 1e5 {
        let ct = CosineTransform::new(phi, 1.3 * c);
        let m = (0..6)
            .map(|j| ct.eval(c * (1.0 + 0.05 * j as f64)).abs())
            .fold(0.0, f64::max);
        if m < target {
            below += 1;
            if below == 2 {
                return Ok(c);
            }
        } else {
            below = 0;
        }
        c *= std::f64::consts::SQRT_2;
    }
    Err(SpecialFnError::Unsupported(
        "cosine transform of the window does not decay below tolerance".into(),
    ))
}

/// phi^(t) = (pi / sinh(pi t)) int (J_{2it} - J_{-2it})/(2i) phi(x) dx / x,
/// computed as -2 int_0^inf cos(2 t u) Phi(cosh u) du.
pub fn transform_hat(
    phi: &SmoothWindow,
    t: SpectralParam,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError> {
    let (a, b) = phi.support();
    if a <= 0.0 {
        return Err(SpecialFnError::Domain(
            "window support must be in (0, inf)".into(),
        ));
    }
    let (tr, grow) = match t {
        SpectralParam::Real(t) => (t, 0.0),
        SpectralParam::Imag(r) => {
            if !(0.0..0.5).contains(&r) {
                return Err(SpecialFnError::Domain(format!(
                    "imaginary t must lie in [0, 1/2), got {r}"
                )));
            }
            (0.0, r)
        }
    };
    let target = cfg.abs_tol.max(1e-15);
    let c_cap = cosine_cutoff(phi, target)?;
    let u_max = c_cap.acosh();
    let ct = CosineTransform::new(phi, c_cap * 1.05);

    let mut breaks = vec![0.0];
    let mut u = 0.0;
    while u < u_max {
        let cycles = (2.0 * tr.abs() + b * u.sinh()) / (2.0 * PI) + 1.0;
        u = (u + 0.25 / cycles).min(u_max);
        breaks.push(u);
    }
    let weight = |u: f64| {
        if grow > 0.0 {
            (2.0 * grow * u).cosh()
        } else {
            (2.0 * tr * u).cos()
        }
    };
    let r = integrate_panels(|u| -2.0 * weight(u) * ct.eval(u.cosh()), &breaks, cfg)?;
    let tail = 2.0 * target * (2.0 * grow * u_max).exp();
    Ok(EvalResult {
        value: r.value,
        abs_err: r.abs_err + tail,
    })
}

/// phi-check(t) = (4/pi) cosh(pi t) int K_{2it}(x) phi(x) dx / x.
pub fn transform_check(
    phi: &SmoothWindow,
    t: SpectralParam,
    cfg: &QuadConfig,
) -> Result<EvalResult, SpecialFnError> {
    let (a, b) = phi.support();
    if a <= 0.0 {
        return Err(SpecialFnError::Domain(
            "window support must be in (0, inf)".into(),
        ));
    }
    let tracker = ErrTracker::default();
    let (pref, r) = match t {
        SpectralParam::Real(t) => {
            let pref = 4.0 / PI;
            let hint = t.abs() / (PI * a) + phi.deriv_scale() / phi.width();
            let r = integrate(
                |x| tracker.take(bessel_k_imag_scaled(t, x)) * phi.eval(x) / x,
                &Domain::Finite(a, b),
                &cfg.with_hint(cfg.oscillation_hint.max(hint)),
            )?;
            (pref, r)
        }
        SpectralParam::Imag(rr) => {
            let pref = 4.0 / PI * (PI * rr).cos();
            let hint = phi.deriv_scale() / phi.width();
            let r = integrate(
                |x| tracker.take(bessel_k_real(2.0 * rr, x)) * phi.eval(x) / x,
                &Domain::Finite(a, b),
                &cfg.with_hint(cfg.oscillation_hint.max(hint)),
            )?;
            (pref, r)
        }
    };
    let point_err = tracker.finish()?;
    Ok(EvalResult {
        value: pref * r.value,
        abs_err: pref.abs() * (r.abs_err + point_err * abs_mass(phi)),
    })
}
