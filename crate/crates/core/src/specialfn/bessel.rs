use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use super::SpecialFnError;
use crate::quad::{integrate_complex, integrate_complex_panels, Domain, Envelope, QuadConfig};
use crate::{CEvalResult, EvalResult};

/// Order of a Bessel function. `Imaginary(nu)` is the order i*nu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselOrder {
    Integer(i64),
    Real(f64),
    Imaginary(f64),
}

impl BesselOrder {
    pub fn as_complex(self) -> Complex64 {
        match self {
            BesselOrder::Integer(n) => Complex64::new(n as f64, 0.0),
            BesselOrder::Real(v) => Complex64::new(v, 0.0),
            BesselOrder::Imaginary(nu) => Complex64::new(0.0, nu),
        }
    }
}

/// How the Hankel-type integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelMethod {
    /// Asymptotic series when it reaches full precision, quadrature otherwise.
    Auto,
    Quadrature,
}

const TAYLOR_LIMIT: f64 = 10.0;
const LOG_UNDERFLOW: f64 = -745.0;

/// (1/Gamma(a+1)) * int_0^inf e^{-u} u^a (1 + u/(2z))^a du.
///
/// Requires Re a > -1 and z off the negative real axis.
pub fn hankel_integral(
    a: Complex64,
    z: Complex64,
    method: HankelMethod,
) -> Result<CEvalResult, SpecialFnError> {
    if a.re <= -1.0 {
        return Err(SpecialFnError::Unsupported(format!(
            "Hankel integral needs Re a > -1, got {a}"
        )));
    }
    if method == HankelMethod::Auto {
        if let Some(r) = hankel_asymptotic(a, z) {
            return Ok(r);
        }
    }
    hankel_quadrature(a, z)
}

fn hankel_asymptotic(a: Complex64, z: Complex64) -> Option<CEvalResult> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let kf = k as f64;
        term *= (a - kf) * (a + kf + 1.0) / (z * (2.0 * (kf + 1.0)));
        let t = term.norm();
        if t > prev && t > 1e-17 * sum.norm() {
            return None;
        }
        prev = t;
        sum += term;
        abs_sum += t;
        if t < 1e-17 * sum.norm() && kf + 1.0 > a.re - 0.5 {
            let abs_err = 2.0 * t + 4.0 * f64::EPSILON * abs_sum;
            return Some(CEvalResult {
                value: sum,
                abs_err,
            });
        }
    }
    None
}

fn hankel_quadrature(a: Complex64, z: Complex64) -> Result<CEvalResult, SpecialFnError> {
    let ar = a.re;
    let scale_log = ln_gamma_complex(Complex64::new(ar + 1.0, 0.0)).re;
    let inv_2z = 1.0 / (z * 2.0);
    let log_integrand = move |u: f64| -> Complex64 {
        let lu = u.ln();
        a * (Complex64::new(lu, 0.0) + (Complex64::new(1.0, 0.0) + inv_2z * u).ln()) - u - scale_log
    };
    let cfg = QuadConfig {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        max_panels: 400_000,
        oscillation_hint: 0.0,
    };
    // |(1 + u/(2z))^a| <= exp(|Re a| log(1 + u/(2|z|)) + |Im a| min(pi/2, u/(2|z|)))
    let zabs = z.norm();
    let growth = |u: f64| {
        ar.abs() * (1.0 + u / (2.0 * zabs)).ln() + a.im.abs() * (u / (2.0 * zabs)).min(FRAC_PI_2)
    };

    // u in (0, 1] through u = e^{-w}
    let near = integrate_complex(
        |w: f64| (log_integrand((-w).exp()) - w).exp(),
        &Domain::SemiInfinite {
            start: 0.0,
            envelope: Envelope::Exponential {
                amplitude: (growth(1.0) - scale_log).exp().max(1e-300),
                rate: ar + 1.0,
            },
        },
        &cfg.with_hint(a.im.abs() / (2.0 * PI)),
    )?;

    // u in [1, U] where the integrand bound drops below 1e-18
    let bound_log = |u: f64| ar * u.ln() + growth(u) - u - scale_log;
    let mut upper = (2.0 * ar.abs() + 40.0).max(4.0);
    while bound_log(upper) > -42.0 || bound_log(2.0 * upper) > bound_log(upper) {
        upper *= 1.5;
        if upper > 1e7 {
            return Err(SpecialFnError::Overflow);
        }
    }
    let tail = 2.0 * bound_log(upper).exp();
    let freq = (a.im.abs() + a.norm() / (2.0 * zabs)) / (2.0 * PI);
    let far = integrate_complex(
        |u: f64| log_integrand(u).exp(),
        &Domain::Finite(1.0, upper),
        &cfg.with_hint(freq),
    )?;

    let norm = (Complex64::new(scale_log, 0.0) - ln_gamma_complex(a + 1.0)).exp();
    let value = (near.value + far.value) * norm;
    let abs_err = (near.abs_err + far.abs_err + tail) * norm.norm();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(SpecialFnError::Overflow);
    }
    Ok(CEvalResult { value, abs_err })
}

fn taylor_j(nu: Complex64, x: f64) -> CEvalResult {
    let q = 0.25 * x * x;
    let log0 = nu * (0.5 * x).ln() - ln_gamma_complex(nu + 1.0);
    if log0.re < LOG_UNDERFLOW && nu.re > 0.0 {
        return CEvalResult {
            value: Complex64::new(0.0, 0.0),
            abs_err: 0.0,
        };
    }
    let mut term = log0.exp();
    let mut sum = term;
    let mut abs_sum = term.norm();
    let mut m = 0.0f64;
    loop {
        term = -term * q / ((m + 1.0) * (nu + m + 1.0));
        m += 1.0;
        let t = term.norm();
        // once m(m + Re nu) exceeds 2q the ratio is below 1/2
        if m * (m + nu.re) > 2.0 * q && t <= 1e-17 * abs_sum.max(sum.norm()) {
            let next = t * q / ((m + 1.0) * ((nu + m + 1.0).norm()));
            return CEvalResult {
                value: sum + term,
                abs_err: 2.0 * next + 4.0 * f64::EPSILON * (abs_sum + t),
            };
        }
        sum += term;
        abs_sum += t;
        if m > 10_000.0 {
            return CEvalResult {
                value: sum,
                abs_err: abs_sum * 1e-10,
            };
        }
    }
}

/// W_v(x) of the decomposition J_v(x) = e^{ix} W_v(x) + e^{-ix} conj(W_v(x)),
/// W_v(x) = e^{-i(pi v/2 + pi/4)} / (2 Gamma(v + 1/2)) * sqrt(2/(pi x))
///          * int_0^inf e^{-y} (y (1 + i y/(2x)))^{v - 1/2} dy,
/// integrated numerically.
pub fn phase_w(v: f64, x: f64) -> Result<CEvalResult, SpecialFnError> {
    phase_w_with(v, x, HankelMethod::Quadrature)
}

fn phase_w_with(v: f64, x: f64, method: HankelMethod) -> Result<CEvalResult, SpecialFnError> {
    if x <= 0.0 {
        return Err(SpecialFnError::Domain(format!(
            "phase_w needs x > 0, got {x}"
        )));
    }
    let h = hankel_integral(
        Complex64::new(v - 0.5, 0.0),
        Complex64::new(0.0, -x),
        method,
    )?;
    let pref = Complex64::from_polar(0.5 * (2.0 / (PI * x)).sqrt(), -(FRAC_PI_2 * v + FRAC_PI_4));
    Ok(CEvalResult {
        value: pref * h.value,
        abs_err: pref.norm() * h.abs_err,
    })
}

fn j_via_phase(v: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let w = phase_w_with(v, x, HankelMethod::Auto)?;
    let e = Complex64::from_polar(1.0, x);
    Ok(EvalResult {
        value: 2.0 * (e * w.value).re,
        abs_err: 2.0 * w.abs_err,
    })
}

/// J_v(x) for v >> sqrt(x): downward recurrence from far above max(v, x),
/// normalised against the two lowest orders of the same fractional part.
fn j_via_recurrence(v: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let v0 = v - v.floor();
    let target = v.floor() as usize;
    let top = v.max(x);
    let start = (top + 12.0 * top.cbrt() + 20.0).ceil() as usize;
    let (mut r_next, mut r_cur) = (0.0f64, 1e-30f64);
    let mut r_target = if start == target { r_cur } else { 0.0 };
    let mut r1 = 0.0;
    for k in (1..=start).rev() {
        let mu = v0 + k as f64;
        let r_prev = 2.0 * mu / x * r_cur - r_next;
        r_next = r_cur;
        r_cur = r_prev;
        if r_cur.abs() > 1e250 {
            r_cur *= 1e-250;
            r_next *= 1e-250;
            r_target *= 1e-250;
        }
        if k - 1 == target {
            r_target = r_cur;
        }
        if k == 1 {
            r1 = r_next;
        }
    }
    let r0 = r_cur;
    let j0 = j_via_phase(v0, x)?;
    let j1 = j_via_phase(v0 + 1.0, x)?;
    let denom = r0 * r0 + r1 * r1;
    let scale = (j0.value * r0 + j1.value * r1) / denom;
    let value = r_target * scale;
    let rel = (j0.abs_err + j1.abs_err) / (j0.value.abs() + j1.value.abs()).max(1e-300);
    Ok(EvalResult {
        value,
        abs_err: value.abs() * (rel + 1e-15 * start as f64)
            + f64::EPSILON * scale.abs() * r_target.abs(),
    })
}

/// Integer order by Miller's backward recurrence, normalised with
/// J_0 + 2 sum_k J_{2k} = 1. Stable for every x; cost grows like max(n, x).
fn j_integer_miller(n: usize, x: f64) -> EvalResult {
    let top = (n as f64).max(x);
    let mut start = (top + 12.0 * top.cbrt() + 20.0).ceil() as usize;
    start += start % 2;
    let (mut r_next, mut r_cur) = (0.0f64, 1e-30f64);
    let mut r_target = if start == n { r_cur } else { 0.0 };
    // norm accumulates J_0 + 2 sum J_{2k} in the same unnormalised scale
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let r_prev = 2.0 * k as f64 / x * r_cur - r_next;
        r_next = r_cur;
        r_cur = r_prev;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * r_cur;
        }
        if r_cur.abs() > 1e250 {
            r_cur *= 1e-250;
            r_next *= 1e-250;
            r_target *= 1e-250;
            norm *= 1e-250;
        }
        if k - 1 == n {
            r_target = r_cur;
        }
    }
    norm += r_cur;
    let value = r_target / norm;
    EvalResult {
        value,
        abs_err: 8.0 * f64::EPSILON * start as f64 * value.abs() + 16.0 * f64::EPSILON,
    }
}

/// Largest argument handled by [`j_integer_miller`].
const MILLER_LIMIT: f64 = 400.0;

/// Bessel J of integer or real order.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<EvalResult, SpecialFnError> {
    let v = match order {
        BesselOrder::Integer(n) => {
            if n < 0 {
                let r = bessel_j(BesselOrder::Integer(-n), x)?;
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                return Ok(EvalResult {
                    value: s * r.value,
                    abs_err: r.abs_err,
                });
            }
            n as f64
        }
        BesselOrder::Real(v) => v,
        BesselOrder::Imaginary(_) => {
            return Err(SpecialFnError::Unsupported(
                "imaginary order is complex valued; use bessel_j_complex".into(),
            ))
        }
    };
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "bessel_j needs finite x >= 0, got {x}"
        )));
    }
    if v.abs() > 1e6 {
        return Err(SpecialFnError::Overflow);
    }
    if x == 0.0 {
        let value = if v == 0.0 {
            1.0
        } else if v > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if !value.is_finite() {
            return Err(SpecialFnError::Overflow);
        }
        return Ok(EvalResult {
            value,
            abs_err: 0.0,
        });
    }
    if x <= TAYLOR_LIMIT {
        let r = taylor_j(Complex64::new(v, 0.0), x);
        return Ok(EvalResult {
            value: r.value.re,
            abs_err: r.abs_err,
        });
    }
    if v > 0.0 {
        let log_bound = v * (0.5 * x).ln() - ln_gamma_complex(Complex64::new(v + 1.0, 0.0)).re;
        if log_bound < LOG_UNDERFLOW {
            return Ok(EvalResult {
                value: 0.0,
                abs_err: log_bound.exp(),
            });
        }
    }
    if v <= -0.5 {
        return Err(SpecialFnError::Unsupported(format!(
            "order {v} <= -1/2 with x > {TAYLOR_LIMIT}"
        )));
    }
    if v == v.trunc() && x <= MILLER_LIMIT {
        return Ok(j_integer_miller(v as usize, x));
    }
    if v < 2.0 || v * v * v <= 64.0 * x * x {
        j_via_phase(v, x)
    } else {
        j_via_recurrence(v, x)
    }
}

/// Bessel J of any order kind, complex valued.
pub fn bessel_j_complex(order: BesselOrder, x: f64) -> Result<CEvalResult, SpecialFnError> {
    if let BesselOrder::Imaginary(_) = order {
    } else {
        let r = bessel_j(order, x)?;
        return Ok(CEvalResult {
            value: Complex64::new(r.value, 0.0),
            abs_err: r.abs_err,
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "needs finite x > 0, got {x}"
        )));
    }
    let nu = order.as_complex();
    if x <= TAYLOR_LIMIT {
        return Ok(taylor_j(nu, x));
    }
    let a = nu - 0.5;
    let h1 = hankel_integral(a, Complex64::new(0.0, -x), HankelMethod::Auto)?;
    let h2 = hankel_integral(a, Complex64::new(0.0, x), HankelMethod::Auto)?;
    let theta = Complex64::new(x - FRAC_PI_4, 0.0) - nu * FRAC_PI_2;
    let i = Complex64::i();
    let e1 = (i * theta).exp();
    let e2 = (-i * theta).exp();
    let pref = 0.5 * (2.0 / (PI * x)).sqrt();
    Ok(CEvalResult {
        value: (e1 * h1.value + e2 * h2.value) * pref,
        abs_err: pref * (e1.norm() * h1.abs_err + e2.norm() * h2.abs_err),
    })
}

/// K_nu(z) = sqrt(pi/(2z)) e^{-z} (1/Gamma(nu+1/2)) int_0^inf e^{-u} u^{nu-1/2}
/// (1 + u/(2z))^{nu-1/2} du, for |arg z| <= pi/2.
pub fn bessel_k_general(nu: Complex64, z: Complex64) -> Result<CEvalResult, SpecialFnError> {
    let nu = if nu.re < 0.0 { -nu } else { nu };
    if z.re < -1e-12 || z.norm() == 0.0 {
        return Err(SpecialFnError::Domain(format!(
            "K needs Re z >= 0, z != 0, got {z}"
        )));
    }
    if z.re > 745.0 {
        let bound = (PI / (2.0 * z.re)).sqrt() * (-z.re).exp();
        return Ok(CEvalResult {
            value: Complex64::new(0.0, 0.0),
            abs_err: bound,
        });
    }
    let h = hankel_integral(nu - 0.5, z, HankelMethod::Auto)?;
    let pref = (Complex64::new(PI, 0.0) / (z * 2.0)).sqrt() * (-z).exp();
    Ok(CEvalResult {
        value: pref * h.value,
        abs_err: pref.norm() * h.abs_err,
    })
}

/// K_{2it}(x) for real t and x > 0; real valued.
pub fn bessel_k_imag(t: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    // both orders +-2it give the same value; fix one so the output is symmetric bit for bit
    let t = t.abs();
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "needs finite x > 0, got {x}"
        )));
    }
    if t.abs() >= CONTOUR_T {
        let c = (PI * t).cosh();
        let r = bessel_k_imag_scaled(t, x)?;
        return Ok(EvalResult {
            value: r.value / c,
            abs_err: r.abs_err / c,
        });
    }
    let r = bessel_k_general(Complex64::new(0.0, 2.0 * t), Complex64::new(x, 0.0))?;
    Ok(EvalResult {
        value: r.value.re,
        abs_err: r.abs_err + r.value.im.abs(),
    })
}

/// cosh(pi t) K_{2it}(x) = int_0^inf cos(x sinh u) cos(2tu) du.
///
/// The scaled value is O(1) while K_{2it}(x) itself is of size e^{-pi|t|},
/// so for large |t| this is the form to use.
pub fn bessel_k_imag_scaled(t: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let t = t.abs();
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "needs finite x > 0, got {x}"
        )));
    }
    if t.abs() < CONTOUR_T {
        let k = bessel_k_imag(t, x)?;
        let c = (PI * t).cosh();
        return Ok(EvalResult {
            value: c * k.value,
            abs_err: c * k.abs_err,
        });
    }
    if (x * x - 4.0 * t * t).max(0.0).sqrt() >= SADDLE_DAMPING {
        return k_saddle_line(t, x);
    }
    oscillatory_pair(t, x, false)
}

/// Smallest sqrt(x^2 - 4t^2) for which the saddle-line integral is damped
/// enough to be used.
const SADDLE_DAMPING: f64 = 5.0;

/// cosh(pi t) K_{2it}(x) for x > 2|t| from the integral over the line
/// Im u = phi, sin phi = 2t/x, through the saddle of e^{-x cosh u + 2itu}:
///
/// K_{2it}(x) = e^{-2t phi - x cos phi} int_0^inf e^{-x cos phi (cosh v - 1)} cos(2t(v - sinh v)) dv.
///
/// The integrand is at most 1 and the integral is of order one, so the
/// result keeps full relative accuracy however small K is.
fn k_saddle_line(t: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let phi = (2.0 * t / x).asin();
    let damping = x * phi.cos();
    let v_max = (1.0 + 40.0 / damping).acosh();
    let phase_span = 2.0 * t * (v_max.sinh() - v_max);
    let n = (4.0 + phase_span / PI).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|k| v_max * k as f64 / n as f64).collect();
    let cfg = QuadConfig::with_tolerances(1e-14, 1e-300);
    let r = integrate_complex_panels(
        |v| {
            let g = (-damping * (v.cosh() - 1.0)).exp() * (2.0 * t * (v - v.sinh())).cos();
            Complex64::new(g, 0.0)
        },
        &breaks,
        &cfg,
    )?;
    // ln cosh(pi t) without overflow
    let ln_cosh = PI * t + (-2.0 * PI * t).exp().ln_1p() - std::f64::consts::LN_2;
    let log_scale = ln_cosh - 2.0 * t * phi - damping;
    if log_scale < LOG_UNDERFLOW {
        return Ok(EvalResult {
            value: 0.0,
            abs_err: log_scale.exp().max(f64::MIN_POSITIVE) * 2.0 * v_max,
        });
    }
    let scale = log_scale.exp();
    let tail = (-40.0f64).exp() / damping;
    Ok(EvalResult {
        value: scale * r.value.re,
        // exp() of a large exponent carries relative error |log_scale| eps
        abs_err: scale * (r.abs_err + tail + 8.0 * f64::EPSILON * v_max)
            + 4.0 * f64::EPSILON * log_scale.abs() * (scale * r.value.re).abs(),
    })
}

/// (Y_{2it}(x) + Y_{-2it}(x)) / cosh(pi t) = -(4/pi) int_0^inf cos(x cosh u) cos(2tu) du.
pub fn bessel_y_pair_scaled(t: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let t = t.abs();
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "needs finite x > 0, got {x}"
        )));
    }
    if t.abs() < CONTOUR_T {
        let y = bessel_y_pair(t, x)?;
        let c = (PI * t).cosh();
        return Ok(EvalResult {
            value: y.value / c,
            abs_err: y.abs_err / c,
        });
    }
    let r = oscillatory_pair(t, x, true)?;
    Ok(EvalResult {
        value: -4.0 / PI * r.value,
        abs_err: 4.0 / PI * r.abs_err,
    })
}

/// Above this |t| the Hankel integral loses about 2 pi |t| / ln 10 digits to
/// cancellation and the rotated contour is used instead.
const CONTOUR_T: f64 = 1.0;

/// Re int_0^inf e^{i x g(u)} cos(2tu) du with g = cosh (`use_cosh`) or sinh.
///
/// The path runs up the imaginary axis to i theta and then parallel to the
/// real axis, where |e^{i x g}| decays doubly exponentially. |cos(2tu)| is at
/// most cosh(2 t theta) on the whole path, so theta ~ 1/|t| bounds the
/// cancellation by a constant factor. For large x, theta ~ 1/sqrt(x) keeps
/// the vertical leg from oscillating too much.
fn oscillatory_pair(t: f64, x: f64, use_cosh: bool) -> Result<EvalResult, SpecialFnError> {
    let theta = (1.0f64).min(1.0 / t.abs()).min(10.0 / x.sqrt());
    let (sin_th, cos_th) = theta.sin_cos();
    let tt = 2.0 * t;
    let i = Complex64::new(0.0, 1.0);
    let g = |u: Complex64| if use_cosh { u.cosh() } else { u.sinh() };
    let integrand = |u: Complex64| (i * x * g(u)).exp() * (u * tt).cos();
    let cfg = QuadConfig::with_tolerances(1e-13, 1e-13);

    // vertical leg u = i s, du = i ds
    let n_vert = (1.0 + x * (1.0 - cos_th) / PI + tt.abs() * theta / PI).ceil() as usize;
    let vert_breaks: Vec<f64> = (0..=n_vert)
        .map(|k| theta * k as f64 / n_vert as f64)
        .collect();
    let vert = integrate_complex_panels(
        |s| i * integrand(Complex64::new(0.0, s)),
        &vert_breaks,
        &cfg,
    )?;

    // horizontal leg: |e^{i x g}| <= e^{-x sin(theta) sinh v}; stop at e^{-40}
    let decay = x * sin_th;
    let v_max = (40.0 / decay).asinh().max(1e-3);
    let phase_span = x * cos_th * v_max.cosh() + tt.abs() * v_max;
    let n_hor = (4.0 + phase_span / PI).ceil().min(20_000.0) as usize;
    let hor_breaks: Vec<f64> = (0..=n_hor)
        .map(|k| v_max * k as f64 / n_hor as f64)
        .collect();
    let hor = integrate_complex_panels(|v| integrand(Complex64::new(v, theta)), &hor_breaks, &cfg)?;

    let amp = (tt * theta).cosh();
    let tail = amp * (-decay * v_max.sinh()).exp() / decay.max(1e-300);
    let rounding = 16.0 * f64::EPSILON * amp * (theta + v_max) * (1.0 + x);
    Ok(EvalResult {
        value: (vert.value + hor.value).re,
        abs_err: vert.abs_err + hor.abs_err + tail + rounding,
    })
}

/// K_v(x) for real order v (used for spectral parameters t = i r).
pub fn bessel_k_real(v: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "needs finite x > 0, got {x}"
        )));
    }
    let r = bessel_k_general(Complex64::new(v, 0.0), Complex64::new(x, 0.0))?;
    Ok(EvalResult {
        value: r.value.re,
        abs_err: r.abs_err + r.value.im.abs(),
    })
}

/// Y_{2it}(x) + Y_{-2it}(x) for real t and x > 0, through the continuation
/// -pi Y_v(x) = e^{-v pi i/2} K_v(x e^{-pi i/2}) + e^{v pi i/2} K_v(x e^{pi i/2}).
pub fn bessel_y_pair(t: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let t = t.abs();
    if t.abs() >= CONTOUR_T {
        let c = (PI * t).cosh();
        let r = bessel_y_pair_scaled(t, x)?;
        return Ok(EvalResult {
            value: c * r.value,
            abs_err: c * r.abs_err,
        });
    }
    let k = k_on_negative_imaginary_axis(Complex64::new(0.0, 2.0 * t), x)?;
    let c = 4.0 * (PI * t).cosh() / PI;
    Ok(EvalResult {
        value: -c * k.value.re,
        abs_err: c * k.abs_err,
    })
}

/// Y_v(x) + Y_{-v}(x) for real order v, same continuation.
pub fn bessel_y_pair_real(v: f64, x: f64) -> Result<EvalResult, SpecialFnError> {
    let k = k_on_negative_imaginary_axis(Complex64::new(v.abs(), 0.0), x)?;
    let c = 4.0 * (FRAC_PI_2 * v).cos() / PI;
    Ok(EvalResult {
        value: -c * k.value.re,
        abs_err: c.abs() * k.abs_err,
    })
}

/// K_nu(-i x) for x > 0.
fn k_on_negative_imaginary_axis(nu: Complex64, x: f64) -> Result<CEvalResult, SpecialFnError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(format!(
            "needs finite x > 0, got {x}"
        )));
    }
    let h = hankel_integral(nu - 0.5, Complex64::new(0.0, -x), HankelMethod::Auto)?;
    let pref = Complex64::from_polar((PI / (2.0 * x)).sqrt(), FRAC_PI_4 + x);
    Ok(CEvalResult {
        value: pref * h.value,
        abs_err: pref.norm() * h.abs_err,
    })
}

/// Archimedean type of a form, as needed for the Voronoi kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    Holomorphic { weight: u32 },
    Maass { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// The Voronoi kernels J^{+/-}(y).
pub fn voronoi_kernel(kind: KernelKind, sign: Sign, y: f64) -> Result<EvalResult, SpecialFnError> {
    let arg = 4.0 * PI * y;
    match (kind, sign) {
        (KernelKind::Holomorphic { weight }, Sign::Plus) => {
            let j = bessel_j(BesselOrder::Integer(weight as i64 - 1), arg)?;
            Ok(EvalResult {
                value: 2.0 * PI * j.value,
                abs_err: 2.0 * PI * j.abs_err,
            })
        }
        (KernelKind::Holomorphic { .. }, Sign::Minus) => Ok(EvalResult {
            value: 0.0,
            abs_err: 0.0,
        }),
        (KernelKind::Maass { t }, Sign::Plus) => {
            let yp = bessel_y_pair_scaled(t, arg)?;
            let c = PI;
            Ok(EvalResult {
                value: c * yp.value,
                abs_err: c * yp.abs_err,
            })
        }
        (KernelKind::Maass { t }, Sign::Minus) => {
            let k = bessel_k_imag_scaled(t, arg)?;
            let c = 4.0;
            Ok(EvalResult {
                value: c * k.value,
                abs_err: c * k.abs_err,
            })
        }
    }
}
