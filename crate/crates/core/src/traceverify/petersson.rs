use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::TraceError;
use crate::arith::{gcd, kloosterman, mod_inverse};
use crate::forms::CuspForm;
use crate::lfunc::kloosterman_tail_bound;
use crate::specialfn::{bessel_j, BesselOrder};
use crate::EvalResult;

/// R(m,n) = delta(m,n) + 2 pi i^(-k) sum_{c = 0 mod M, c <= c_max} S(n,m;c)/c J_{k-1}(4 pi sqrt(nm)/c),
/// with the tail beyond c_max bounded and added to abs_err.
pub fn petersson_geometric_r(
    m: u64,
    n: u64,
    k: u32,
    level: u64,
    c_max: u64,
    tol: f64,
) -> Result<EvalResult, TraceError> {
    if !k.is_multiple_of(2) || k < 4 {
        return Err(TraceError::InvalidInstance(format!(
            "weight {k} must be even and >= 4"
        )));
    }
    if m == 0 || n == 0 || level == 0 {
        return Err(TraceError::InvalidInstance(
            "m, n and M must be positive".into(),
        ));
    }
    let tail = kloosterman_tail_bound(&[(m, 1.0)], &[(n, 1.0)], k, c_max);
    if tail > tol {
        return Err(TraceError::TruncationTooShort { tail, tol });
    }
    let order = BesselOrder::Integer(k as i64 - 1);
    let x = 4.0 * PI * ((m * n) as f64).sqrt();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut c = level;
    while c <= c_max {
        let s = kloosterman(n as i64, m as i64, c)?;
        let j = bessel_j(order, x / c as f64)?;
        sum += s.value * j.value / c as f64;
        err += (s.residual_imag * j.value.abs() + s.value.abs() * j.abs_err) / c as f64;
        c += level;
    }
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let delta = if m == n { 1.0 } else { 0.0 };
    let value = delta + 2.0 * PI * sign * sum;
    Ok(EvalResult {
        value,
        abs_err: tail + 2.0 * PI * err + 4.0 * f64::EPSILON * value.abs() * (c_max / level) as f64,
    })
}

/// Defects of the rank-one structure of R(m,n) for a one-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Report {
    pub grid: u64,
    pub r11: EvalResult,
    /// max |R(m,n) R(1,1) - R(m,1) R(1,n)|
    pub factorization_defect: f64,
    /// max |R(m,n)/R(1,1) - lambda(m) lambda(n)|
    pub ratio_defect: f64,
    pub worst_ratio: (u64, u64),
    pub max_abs_err: f64,
    /// (m, n, R(m,n)) for m <= n on the grid.
    pub entries: Vec<(u64, u64, EvalResult)>,
}

/// Evaluates R on the grid m, n <= g (coprime to the level) and measures how
/// far it is from omega^(-1) lambda(m) lambda(n).
pub fn petersson_rank1_check(
    f: &CuspForm,
    g: u64,
    c_max: u64,
    tol: f64,
) -> Result<Rank1Report, TraceError> {
    let k = match f.kind {
        crate::forms::FormKind::Holomorphic { weight } => weight,
        _ => {
            return Err(TraceError::InvalidInstance(
                "rank-one check needs a holomorphic form".into(),
            ))
        }
    };
    f.require(g)?;
    let idx: Vec<u64> = (1..=g).filter(|&m| gcd(m, f.level) == 1).collect();
    let pairs: Vec<(u64, u64)> = idx
        .iter()
        .flat_map(|&m| idx.iter().filter(move |&&n| n >= m).map(move |&n| (m, n)))
        .collect();
    let values: Vec<Result<EvalResult, TraceError>> = pairs
        .par_iter()
        .map(|&(m, n)| petersson_geometric_r(m, n, k, f.level, c_max, tol))
        .collect();
    let mut table = std::collections::HashMap::new();
    let mut max_abs_err: f64 = 0.0;
    let mut entries = Vec::with_capacity(pairs.len());
    for (&(m, n), v) in pairs.iter().zip(values) {
        let v = v?;
        entries.push((m, n, v));
        max_abs_err = max_abs_err.max(v.abs_err);
        table.insert((m, n), v.value);
        table.insert((n, m), v.value);
    }
    let r = |m: u64, n: u64| table[&(m, n)];
    let r11 = r(1, 1);
    let mut rep = Rank1Report {
        grid: g,
        r11: EvalResult {
            value: r11,
            abs_err: max_abs_err,
        },
        factorization_defect: 0.0,
        ratio_defect: 0.0,
        worst_ratio: (1, 1),
        max_abs_err,
        entries,
    };
    for &m in &idx {
        for &n in &idx {
            let fac = (r(m, n) * r11 - r(m, 1) * r(1, n)).abs();
            rep.factorization_defect = rep.factorization_defect.max(fac);
            let ratio = (r(m, n) / r11 - f.lambda(m).unwrap() * f.lambda(n).unwrap()).abs();
            if ratio > rep.ratio_defect {
                rep.ratio_defect = ratio;
                rep.worst_ratio = (m, n);
            }
        }
    }
    Ok(rep)
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x.rem_euclid(1.0))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// S_{inf,1/s}(m, n; s sqrt(r) C) for Gamma_0(rs), summed over the double coset
/// from the scaling matrix of the cusp 1/s: for tau = (alpha beta; rs t delta) with
/// delta = C (mod r), t = (C - delta)/r, the entries give a/c = (alpha + beta s)/(s C)
/// and d/c = delta/(r s C).
pub fn sss_cusp_sum(m: i64, n: i64, r: u64, s: u64, c: u64) -> Result<Complex64, TraceError> {
    if gcd(r, s) != 1 || gcd(c, r) != 1 || c == 0 {
        return Err(TraceError::InvalidInstance(format!(
            "need (r,s) = (C,r) = 1, got r={r}, s={s}, C={c}"
        )));
    }
    let (ri, si, ci) = (r as i128, s as i128, c as i128);
    let level = ri * si;
    let mut acc = Complex64::new(0.0, 0.0);
    for delta in 0..(level * ci) {
        if (delta - ci).rem_euclid(ri) != 0 {
            continue;
        }
        let t = (ci - delta) / ri;
        let lower = level * t;
        let (g, x, y) = ext_gcd(delta, lower);
        if g.abs() != 1 {
            continue;
        }
        // alpha delta - beta lower = 1
        let alpha = x * g;
        let beta = -y * g;
        let a_num = (alpha + beta * si).rem_euclid(si * ci);
        let term = m as f64 * a_num as f64 / (si * ci) as f64
            + n as f64 * delta as f64 / (level * ci) as f64;
        acc += e(term);
    }
    Ok(acc)
}

/// Partial sums over C <= c_max, (C, r) = 1, of S_{inf,1/s}/(s sqrt(r) C): the
/// double-coset evaluation and e(n sbar/r) S(m rbar, n; sC) side by side.
pub fn sss_partial_sums(
    m: i64,
    n: i64,
    r: u64,
    s: u64,
    c_max: u64,
) -> Result<(Complex64, Complex64), TraceError> {
    let mut cusp = Complex64::new(0.0, 0.0);
    let mut classical = Complex64::new(0.0, 0.0);
    let s_bar = if r == 1 { 0 } else { mod_inverse(s as i64, r)? };
    for c in 1..=c_max {
        if gcd(c, r) != 1 {
            continue;
        }
        let w = 1.0 / (s as f64 * (r as f64).sqrt() * c as f64);
        cusp += sss_cusp_sum(m, n, r, s, c)? * w;
        let modulus = s * c;
        let r_bar = mod_inverse(r as i64, modulus)?;
        let mr = (m.rem_euclid(modulus as i64) as u128 * r_bar as u128 % modulus as u128) as i64;
        let phase = e((n.rem_euclid(r as i64) as f64 * s_bar as f64) / r as f64);
        classical += phase * kloosterman(mr, n, modulus)?.value * w;
    }
    Ok((cusp, classical))
}
