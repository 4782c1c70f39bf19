use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::TraceError;
use crate::arith::{gcd, mod_inverse};
use crate::forms::{CuspForm, FormKind};
use crate::quad::{integrate, Domain, QuadConfig, SmoothWindow};
use crate::specialfn::{voronoi_kernel, Sign};

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x.rem_euclid(1.0))
}

/// Right-hand side of the Voronoi formula with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiValue {
    pub value: Complex64,
    pub abs_err: f64,
    /// Largest dual index used.
    pub terms: u64,
}

/// sum_n lambda(n)/sqrt(n) e(n a/q) h(n).
pub fn voronoi_lhs(
    f: &CuspForm,
    a: i64,
    q: u64,
    h: &SmoothWindow,
) -> Result<Complex64, TraceError> {
    let (lo, hi) = h.support();
    let n_lo = lo.ceil().max(1.0) as u64;
    let n_hi = hi.floor().max(0.0) as u64;
    f.require(n_hi)?;
    let ar = a.rem_euclid(q as i64) as u64;
    Ok((n_lo..=n_hi)
        .map(|n| {
            let frac = ((n % q) * ar % q) as f64 / q as f64;
            e(frac) * (f.lambda(n).unwrap() / (n as f64).sqrt() * h.eval(n as f64))
        })
        .sum())
}

/// int_0^inf h(xi^2 c/n) J(xi) d xi, written in x = xi^2 c/n over the support of h.
fn dual_integral(
    f: &CuspForm,
    sign: Sign,
    h: &SmoothWindow,
    n: u64,
    c: f64,
) -> Result<(f64, f64), TraceError> {
    let (lo, hi) = h.support();
    let lo = lo.max(0.0);
    let scale = (n as f64 / c).sqrt();
    let kind = f.kind.kernel_kind();
    // phase 4 pi xi = 4 pi scale sqrt(x): local frequency scale / sqrt(x) cycles per unit
    let hint = scale / lo.max(1e-6 * hi).sqrt() + h.deriv_scale() / h.width();
    let cfg = QuadConfig::with_tolerances(1e-11, 1e-15).with_hint(hint);
    let point_err = std::cell::Cell::new(0.0f64);
    let failure = std::cell::RefCell::new(None);
    let r = integrate(
        |x| {
            let hx = h.eval(x);
            if hx == 0.0 {
                return 0.0;
            }
            match voronoi_kernel(kind, sign, scale * x.sqrt()) {
                Ok(j) => {
                    let w = hx * 0.5 * scale / x.sqrt();
                    point_err.set(point_err.get().max(j.abs_err * w.abs()));
                    j.value * w
                }
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                    0.0
                }
            }
        },
        &Domain::Finite(lo, hi),
        &cfg,
    )?;
    if let Some(err) = failure.into_inner() {
        return Err(err.into());
    }
    Ok((r.value, r.abs_err + point_err.get() * (hi - lo)))
}

/// 2 sum_{+-} eta^{+-} sum_n lambda(n)/sqrt(n) e(-+ n (a N2)bar / q) int h(xi^2 q^2 N2 / n) J^{+-}(xi) d xi,
/// with N2 = N/(N,q) and f* = f (trivial character). The dual sum stops once
/// two consecutive blocks of terms are below `tol`; reaching `n_max` first is an error.
pub fn voronoi_rhs(
    f: &CuspForm,
    a: i64,
    q: u64,
    h: &SmoothWindow,
    n_max: u64,
    tol: f64,
) -> Result<VoronoiValue, TraceError> {
    if q == 0 || gcd(a.unsigned_abs(), q) != 1 {
        return Err(TraceError::InvalidInstance(format!(
            "need (a, q) = 1, got a={a}, q={q}"
        )));
    }
    if !crate::arith::factorize(f.level).is_squarefree() {
        return Err(TraceError::InvalidInstance(format!(
            "level {} is not squarefree",
            f.level
        )));
    }
    let n2 = f.level / gcd(f.level, q);
    let eta_n2 = f.atkin_lehner_product(n2).ok_or_else(|| {
        let missing = crate::arith::factorize(n2)
            .primes()
            .find(|p| !f.atkin_lehner.contains_key(p))
            .unwrap_or(n2);
        TraceError::MissingAtkinLehner(missing)
    })? as f64;
    let (eta_plus, eta_minus) = match f.kind {
        FormKind::Holomorphic { weight } => {
            let ik = if (weight / 2) % 2 == 0 { 1.0 } else { -1.0 };
            (Complex64::new(ik * eta_n2, 0.0), None)
        }
        FormKind::Maass { .. } => {
            let eps = f.reflection_sign.ok_or(TraceError::MissingReflectionSign)? as f64;
            (
                Complex64::new(eta_n2, 0.0),
                Some(Complex64::new(eps * eta_n2, 0.0)),
            )
        }
    };
    let inv = mod_inverse(a.rem_euclid(q as i64) * (n2 % q) as i64, q)?;
    let c = (q * q * n2) as f64;
    let block = 32u64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut quiet_blocks = 0;
    let mut n = 1u64;
    let mut last = 0u64;
    let mut last_block = f64::INFINITY;
    // below this index the holomorphic kernel is still in its power-law rise
    let order = match f.kind {
        FormKind::Holomorphic { weight } => weight as f64,
        FormKind::Maass { .. } => 1.0,
    };
    let n_rise = (c * (order / (2.0 * PI)).powi(2) / h.support().1).ceil() as u64;
    while quiet_blocks < 2 {
        let end = n + block - 1;
        if end > n_max {
            return Err(TraceError::TruncationTooShort {
                tail: last_block,
                tol,
            });
        }
        f.require(end)?;
        let terms: Vec<Result<(Complex64, f64), TraceError>> = (n..=end)
            .into_par_iter()
            .map(|m| {
                let lam = f.lambda(m).unwrap() / (m as f64).sqrt();
                let frac = ((m % q) * inv % q) as f64 / q as f64;
                let (ip, ep) = dual_integral(f, Sign::Plus, h, m, c)?;
                let mut term = eta_plus * e(-frac) * (lam * ip);
                let mut term_err = (lam * ep).abs();
                if let Some(eta_m) = eta_minus {
                    let (im, em) = dual_integral(f, Sign::Minus, h, m, c)?;
                    term += eta_m * e(frac) * (lam * im);
                    term_err += (lam * em).abs();
                }
                Ok((term, term_err))
            })
            .collect();
        let mut block_max: f64 = 0.0;
        for t in terms {
            let (term, term_err) = t?;
            block_max = block_max.max(term.norm());
            total += term;
            err += term_err;
        }
        last = end;
        last_block = block_max * block as f64;
        if last_block <= tol && end >= n_rise {
            quiet_blocks += 1;
            err += 2.0 * block_max * block as f64;
        } else {
            quiet_blocks = 0;
        }
        n = end + 1;
    }
    Ok(VoronoiValue {
        value: total * 2.0,
        abs_err: 2.0 * err,
        terms: last,
    })
}
