use std::f64::consts::PI;

use num_complex::Complex64;

use super::TraceError;
use crate::forms::CuspForm;

/// Largest n paired with m <= x, from l1 m - l2 n = v with v >= 0.
fn n_limit(l1: u64, l2: u64, x: f64) -> u64 {
    (l1 as f64 * x.floor() / l2 as f64).floor() as u64
}

/// A(v; x) = sum over m <= x, 1 <= n <= l1 x / l2 with l1 m - l2 n = v of
/// lambda_g(n) lambda_f(m) / sqrt(nm).
pub fn shifted_sum_a(
    f: &CuspForm,
    g: &CuspForm,
    l1: u64,
    l2: u64,
    v: i64,
    x: f64,
) -> Result<f64, TraceError> {
    if l1 == 0 || l2 == 0 {
        return Err(TraceError::InvalidInstance(
            "l1 and l2 must be positive".into(),
        ));
    }
    if x < 1.0 {
        return Ok(0.0);
    }
    let m_top = x.floor() as u64;
    let n_top = n_limit(l1, l2, x);
    f.require(m_top)?;
    g.require(n_top)?;
    let mut acc = 0.0;
    for m in 1..=m_top {
        let num = l1 as i64 * m as i64 - v;
        if num <= 0 || num % l2 as i64 != 0 {
            continue;
        }
        let n = (num / l2 as i64) as u64;
        if n > n_top {
            continue;
        }
        acc += g.lambda(n).unwrap() * f.lambda(m).unwrap() / ((n * m) as f64).sqrt();
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalReport {
    /// sum over all v of A(v; x)^2
    pub lhs: f64,
    /// int_0^1 |sum_m lambda_f(m) e(l1 m a)/sqrt(m)|^2 |sum_n lambda_g(n) e(-l2 n a)/sqrt(n)|^2 da
    pub rhs: f64,
    pub shifts: usize,
}

/// Both sides of the Parseval identity for A(v; x). The integral is a
/// trigonometric polynomial and is evaluated exactly by equispaced sampling.
pub fn parseval_check(
    f: &CuspForm,
    g: &CuspForm,
    l1: u64,
    l2: u64,
    x: f64,
) -> Result<ParsevalReport, TraceError> {
    if x < 1.0 {
        return Ok(ParsevalReport {
            lhs: 0.0,
            rhs: 0.0,
            shifts: 0,
        });
    }
    let m_top = x.floor() as u64;
    let n_top = n_limit(l1, l2, x);
    f.require(m_top)?;
    g.require(n_top)?;
    let v_lo = l1 as i64 - (l2 * n_top) as i64;
    let v_hi = (l1 * m_top) as i64 - l2 as i64;
    let mut lhs = 0.0;
    let mut shifts = 0;
    for v in v_lo..=v_hi {
        let a = shifted_sum_a(f, g, l1, l2, v, x)?;
        if a != 0.0 {
            shifts += 1;
        }
        lhs += a * a;
    }
    // |P R|^2 has frequencies |k| <= l1 m_top + l2 n_top
    let samples = 2 * (l1 * m_top + l2 * n_top) as usize + 1;
    let mut rhs = 0.0;
    for j in 0..samples {
        let alpha = j as f64 / samples as f64;
        let p: Complex64 = (1..=m_top)
            .map(|m| {
                Complex64::from_polar(
                    f.lambda(m).unwrap() / (m as f64).sqrt(),
                    2.0 * PI * ((l1 * m) as f64 * alpha).fract(),
                )
            })
            .sum();
        let r: Complex64 = (1..=n_top)
            .map(|n| {
                Complex64::from_polar(
                    g.lambda(n).unwrap() / (n as f64).sqrt(),
                    -2.0 * PI * ((l2 * n) as f64 * alpha).fract(),
                )
            })
            .sum();
        rhs += (p * r).norm_sqr();
    }
    Ok(ParsevalReport {
        lhs,
        rhs: rhs / samples as f64,
        shifts,
    })
}
