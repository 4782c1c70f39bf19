//! Rankin-Selberg L-function data and the quantities of the second-moment
//! argument: Dirichlet coefficients, the approximate-functional-equation
//! weight V_s(y), smoothed pair sums, the geometric side of the second moment
//! and the final bound.
//!
//! Archimedean parameters (L_inf = prod Gamma_R(s + mu_i)):
//! * weights k, kappa: mu = (k+kappa)/2 - 1, (k+kappa)/2, |k-kappa|/2, |k-kappa|/2 + 1
//! * weight k with a Maass form of parameter t: mu = (k-1)/2 +- it, (k+1)/2 +- it
//! * Maass forms t1, t2 (even): mu = +-i(t1 + t2), +-i(t1 - t2)

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{divisor_tau, factorize, gcd, primes_up_to, KloostermanTable};
use crate::forms::{CuspForm, FormError, FormKind};
use crate::quad::{integrate_complex, Domain, QuadConfig, QuadError, SmoothWindow};
use crate::specialfn::{bessel_j, ln_gamma, ln_gamma_complex, BesselOrder, SpecialFnError};
use crate::CEvalResult;

#[derive(Debug, Error)]
pub enum LfuncError {
    #[error("levels {0} and {1} are not coprime")]
    NotCoprimeLevels(u64, u64),
    #[error("contour integral did not converge: {0}")]
    ContourNonConvergence(String),
    #[error("truncation too short: tail bound {tail:e} exceeds tolerance {tol:e}")]
    TruncationTooShort { tail: f64, tol: f64 },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

impl From<QuadError> for LfuncError {
    fn from(e: QuadError) -> Self {
        LfuncError::ContourNonConvergence(e.to_string())
    }
}

/// The pair (f, g) defining L(s, f x g).
#[derive(Debug, Clone)]
pub struct RankinSelbergPair {
    pub f: CuspForm,
    pub g: CuspForm,
    pub conductor: u128,
    pub mu: [Complex64; 4],
    /// Root number of f x g, when supplied; never computed here.
    pub eps_phase: Option<Complex64>,
}

impl RankinSelbergPair {
    pub fn new(f: CuspForm, g: CuspForm) -> Result<Self, LfuncError> {
        let conductor = conductor(&f, &g)?;
        let mu = mu_inf(f.kind, g.kind);
        Ok(RankinSelbergPair {
            f,
            g,
            conductor,
            mu,
            eps_phase: None,
        })
    }

    /// Attaches a root number; it must have modulus 1.
    pub fn with_root_number(mut self, eps: Complex64) -> Result<Self, LfuncError> {
        if (eps.norm() - 1.0).abs() > 1e-9 {
            return Err(LfuncError::Unsupported(format!(
                "root number {eps} is not unimodular"
            )));
        }
        self.eps_phase = Some(eps);
        Ok(self)
    }

    /// q_inf(s) = prod (|s| + |mu_i| + 3)^(1/2).
    pub fn q_inf(&self, s: Complex64) -> f64 {
        self.mu
            .iter()
            .map(|m| (s.norm() + m.norm() + 3.0).sqrt())
            .product()
    }

    /// log L_inf(s) = sum log Gamma_R(s + mu_i).
    pub fn ln_l_inf(&self, s: Complex64) -> Complex64 {
        self.mu.iter().map(|m| ln_gamma_r(s + m)).sum()
    }

    pub fn level_product(&self) -> u64 {
        self.f.level * self.g.level
    }
}

/// Conductor (MN)^2 of f x g for coprime levels.
pub fn conductor(f: &CuspForm, g: &CuspForm) -> Result<u128, LfuncError> {
    if gcd(f.level, g.level) != 1 {
        return Err(LfuncError::NotCoprimeLevels(f.level, g.level));
    }
    let mn = f.level as u128 * g.level as u128;
    Ok(mn * mn)
}

pub fn mu_inf(f: FormKind, g: FormKind) -> [Complex64; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match (f, g) {
        (FormKind::Holomorphic { weight: k }, FormKind::Holomorphic { weight: kk }) => {
            let (k, kk) = (k as f64, kk as f64);
            let s = 0.5 * (k + kk);
            let d = 0.5 * (k - kk).abs();
            [c(s - 1.0, 0.0), c(s, 0.0), c(d, 0.0), c(d + 1.0, 0.0)]
        }
        (FormKind::Holomorphic { weight }, FormKind::Maass { t })
        | (FormKind::Maass { t }, FormKind::Holomorphic { weight }) => {
            let k = weight as f64;
            [
                c(0.5 * (k - 1.0), t),
                c(0.5 * (k + 1.0), t),
                c(0.5 * (k - 1.0), -t),
                c(0.5 * (k + 1.0), -t),
            ]
        }
        (FormKind::Maass { t: t1 }, FormKind::Maass { t: t2 }) => [
            c(0.0, t1 + t2),
            c(0.0, t1 - t2),
            c(0.0, -(t1 - t2)),
            c(0.0, -(t1 + t2)),
        ],
    }
}

/// log Gamma_R(z) = -(z/2) log pi + log Gamma(z/2).
pub fn ln_gamma_r(z: Complex64) -> Complex64 {
    -z * 0.5 * PI.ln() + ln_gamma_complex(z * 0.5)
}

/// b(n) = sum_{d^2 | n, (d, NM) = 1} lambda_f(n/d^2) lambda_g(n/d^2), n = 1..n_max.
pub fn rs_dirichlet_coeffs(pair: &RankinSelbergPair, n_max: u64) -> Result<Vec<f64>, LfuncError> {
    pair.f.require(n_max)?;
    pair.g.require(n_max)?;
    let nm = pair.level_product();
    let mut b = vec![0.0; n_max as usize];
    let mut d = 1u64;
    while d * d <= n_max {
        if gcd(d, nm) == 1 {
            let mut k = 1u64;
            while k * d * d <= n_max {
                b[(k * d * d - 1) as usize] +=
                    pair.f.lambda(k).unwrap() * pair.g.lambda(k).unwrap();
                k += 1;
            }
        }
        d += 1;
    }
    Ok(b)
}

/// Partial Euler product for zeta with the primes dividing `level` removed,
/// at Re w > 1; the tail beyond the cutoff is folded into the error.
pub fn zeta_partial_euler(w: Complex64, level: u64, p_cut: u64) -> CEvalResult {
    let sigma = w.re;
    assert!(sigma > 1.0, "Euler product needs Re w > 1");
    // primes beyond p with p^(-sigma) below 1e-18 change nothing
    let needed = (1e18f64).powf(1.0 / sigma).ceil() as u64;
    let cut = p_cut.min(needed.max(2));
    let mut log_sum = Complex64::new(0.0, 0.0);
    for p in primes_up_to(cut) {
        if level.is_multiple_of(p) {
            continue;
        }
        let pw = (-w * (p as f64).ln()).exp();
        log_sum -= (Complex64::new(1.0, 0.0) - pw).ln();
    }
    let value = log_sum.exp();
    // sum_{n > cut} n^(-sigma) <= cut^(1 - sigma) / (sigma - 1)
    let tail = (cut as f64).powf(1.0 - sigma) / (sigma - 1.0);
    CEvalResult {
        value,
        abs_err: value.norm() * (tail * 1.1 + 1e-15),
    }
}

/// zeta(w) for Re w > 1 by Euler-Maclaurin summation, with the Euler factors
/// of the primes dividing `level` removed.
pub fn zeta_level_removed(w: Complex64, level: u64) -> CEvalResult {
    // B_{2k} / (2k)!
    const B: [f64; 10] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
        43867.0 / 5109094217170944000.0,
        -174611.0 / 802857662698291200000.0,
    ];
    let one = Complex64::new(1.0, 0.0);
    let n = (w.norm() as u64 + 20).max(20);
    let nf = n as f64;
    let pow = |m: f64, e: Complex64| (-e * m.ln()).exp();
    let mut sum: Complex64 = (1..n).map(|m| pow(m as f64, w)).sum();
    sum += pow(nf, w - one) / (w - one) + pow(nf, w) * 0.5;
    // rising factorial w (w+1) ... (w+2k-2) times N^(-w-2k+1)
    let mut rising = w;
    let mut npow = pow(nf, w + one);
    let mut last = 0.0;
    for (k, b) in B.iter().enumerate() {
        let term = rising * npow * *b;
        sum += term;
        last = term.norm();
        rising *= (w + (2 * k + 1) as f64) * (w + (2 * k + 2) as f64);
        npow /= nf * nf;
    }
    let mut value = sum;
    for p in factorize(level.max(1)).primes() {
        value *= one - pow(p as f64, w);
    }
    CEvalResult {
        value,
        abs_err: last * 4.0 + 1e-15 * value.norm() * (nf.ln() + 1.0),
    }
}

/// Parameters of the AFE weight contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AFEConfig {
    /// G(u) = cos(pi u / (4 A0))^(-16 A0)
    pub a0: u32,
    /// Half height of the vertical contour; 0 picks it from the decay of G.
    pub contour_height: f64,
    /// Minimum number of initial panels along the contour.
    pub truncation_length: usize,
    pub abs_tol: f64,
}

impl Default for AFEConfig {
    fn default() -> Self {
        AFEConfig {
            a0: 4,
            contour_height: 0.0,
            truncation_length: 64,
            abs_tol: 1e-14,
        }
    }
}

impl AFEConfig {
    /// Abscissa of the contour: 3 for y >= 1 and 1 below, where y^(-3) would
    /// cost digits to cancellation. Both lie left of the first pole of G at 2 A0.
    pub fn abscissa(&self, y: f64) -> f64 {
        let c: f64 = if y >= 1.0 { 3.0 } else { 1.0 };
        c.min(1.5 * self.a0 as f64)
    }
}

fn ln_g_weight(u: Complex64, a0: u32) -> Complex64 {
    let a = a0 as f64;
    -16.0 * a * (u * (PI / (4.0 * a))).cos().ln()
}

/// The contour weight G(u) = cos(pi u / (4 A0))^(-16 A0).
pub fn afe_g(u: Complex64, a0: u32) -> Complex64 {
    ln_g_weight(u, a0).exp()
}

/// V_s(y) = (1/2 pi i) int_{(c)} G(u) L_inf(s+u)/L_inf(s) zeta^(NM)(2s+2u) y^(-u) du/u.
pub fn afe_weight_v(
    pair: &RankinSelbergPair,
    s: Complex64,
    y: f64,
    cfg: &AFEConfig,
) -> Result<CEvalResult, LfuncError> {
    if cfg.a0 == 0 {
        return Err(LfuncError::Unsupported("A0 must be at least 1".into()));
    }
    if !(y > 0.0) {
        return Err(LfuncError::Unsupported(format!(
            "V_s(y) needs y > 0, got {y}"
        )));
    }
    let c = cfg.abscissa(y);
    if 2.0 * (s.re + c) <= 1.0 {
        return Err(LfuncError::Unsupported(
            "contour must satisfy Re(2s + 2u) > 1".into(),
        ));
    }
    let level = pair.level_product();
    let ln_base = pair.ln_l_inf(s);
    let ln_y = y.ln();
    let integrand = |tau: f64| -> Complex64 {
        let u = Complex64::new(c, tau);
        let z = zeta_level_removed((s + u) * 2.0, level);
        let ln = ln_g_weight(u, cfg.a0) + pair.ln_l_inf(s + u) - ln_base - u * ln_y;
        ln.exp() * z.value / u / (2.0 * PI)
    };
    let height = if cfg.contour_height > 0.0 {
        cfg.contour_height
    } else {
        let mut t = 1.0;
        while integrand(t).norm().max(integrand(-t).norm()) > cfg.abs_tol * 1e-3 {
            t *= 1.25;
            if t > 1e4 {
                return Err(LfuncError::ContourNonConvergence(
                    "weight does not decay along the contour".into(),
                ));
            }
        }
        t
    };
    // truncation remainder: the integrand decays at least geometrically past `height`
    let edge = integrand(height).norm() + integrand(-height).norm();
    let qcfg = QuadConfig {
        rel_tol: 1e-12,
        abs_tol: cfg.abs_tol,
        max_panels: 200_000,
        oscillation_hint: (ln_y.abs() / (2.0 * PI) + 1.0)
            .max(cfg.truncation_length as f64 / (8.0 * height)),
    };
    let r = integrate_complex(integrand, &Domain::Finite(-height, height), &qcfg)?;
    Ok(CEvalResult {
        value: r.value,
        abs_err: r.abs_err + edge,
    })
}

/// sum_n lambda_f(n) lambda_g(n) / sqrt(n) h(n / X).
pub fn smoothed_pair_sum(
    f: &CuspForm,
    g: &CuspForm,
    h: &SmoothWindow,
    x: f64,
) -> Result<f64, LfuncError> {
    let (lo, hi) = h.support();
    let n_lo = (lo * x).ceil().max(1.0) as u64;
    let n_hi = (hi * x).floor() as u64;
    f.require(n_hi)?;
    g.require(n_hi)?;
    Ok((n_lo..=n_hi)
        .map(|n| {
            f.lambda(n).unwrap() * g.lambda(n).unwrap() / (n as f64).sqrt() * h.eval(n as f64 / x)
        })
        .sum())
}

/// Geometric side of the second moment over the weight-kappa, level-M family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub value: f64,
    pub diagonal: f64,
    pub off_diagonal: f64,
    /// Bound on the moduli beyond c_max plus rounding and Bessel errors.
    pub truncation_error: f64,
}

/// Bound on 2 pi sum_{c > c_max} sum_{m,n} |a_m b_n| |S(m,n;c)|/c |J_{kappa-1}(4 pi sqrt(mn)/c)|,
/// from |S(m,n;c)| <= tau(c) sqrt(c gcd(m,n)) and |J_v(z)| <= (z/2)^v / v!.
pub fn kloosterman_tail_bound(a: &[(u64, f64)], b: &[(u64, f64)], kappa: u32, c_max: u64) -> f64 {
    assert!(kappa >= 4, "tail bound needs kappa >= 4");
    let k1 = kappa as f64 - 1.0;
    let lf = ln_gamma(kappa as f64).0;
    let c_mid = 20 * c_max.max(1);
    let near_sum: f64 = ((c_max + 1)..=c_mid)
        .map(|c| divisor_tau(c) as f64 * (c as f64).powf(-0.5 - k1))
        .sum();
    // tau(c) <= 2 sqrt(c) beyond c_mid
    let far_sum = 2.0 * (c_mid as f64).powf(2.0 - kappa as f64) / (kappa as f64 - 2.0);
    let mut total = 0.0;
    for &(m, am) in a {
        for &(n, bn) in b {
            let g = gcd(m, n) as f64;
            let z = 2.0 * PI * ((m * n) as f64).sqrt();
            total += (am * bn).abs() * g.sqrt() * (k1 * z.ln() - lf).exp();
        }
    }
    2.0 * PI * total * (near_sum + far_sum)
}

/// sum_n |a_n|^2 + 2 pi i^(-kappa) sum_{c = 0 mod M, c <= c_max} sum_{m,n}
/// a_m a_n S(m,n;c)/c J_{kappa-1}(4 pi sqrt(mn)/c), a_n = lambda_f(n) h(n/X)/sqrt(n).
pub fn second_moment_geometric(
    f: &CuspForm,
    kappa: u32,
    level_m: u64,
    h: &SmoothWindow,
    x: f64,
    c_max: u64,
) -> Result<MomentResult, LfuncError> {
    if !kappa.is_multiple_of(2) || kappa < 4 {
        return Err(LfuncError::Unsupported(format!(
            "weight kappa = {kappa} must be even and >= 4"
        )));
    }
    if level_m == 0 {
        return Err(LfuncError::Unsupported("level M must be positive".into()));
    }
    let (lo, hi) = h.support();
    let n_lo = (lo * x).ceil().max(1.0) as u64;
    let n_hi = (hi * x).floor() as u64;
    f.require(n_hi)?;
    let a: Vec<(u64, f64)> = (n_lo..=n_hi)
        .map(|n| {
            (
                n,
                f.lambda(n).unwrap() * h.eval(n as f64 / x) / (n as f64).sqrt(),
            )
        })
        .filter(|&(_, v)| v != 0.0)
        .collect();
    let diagonal: f64 = a.iter().map(|&(_, v)| v * v).sum();
    let sign = if (kappa / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let order = BesselOrder::Integer(kappa as i64 - 1);

    let moduli: Vec<u64> = (1..=c_max / level_m).map(|j| j * level_m).collect();
    let per_c: Vec<Result<(f64, f64), SpecialFnError>> = moduli
        .par_iter()
        .map(|&c| {
            let table = KloostermanTable::new(c);
            let mut sum = 0.0;
            let mut err = 0.0;
            for (i, &(m, am)) in a.iter().enumerate() {
                for &(n, an) in &a[i..] {
                    let s = table.sum(m as i64, n as i64);
                    let j = bessel_j(order, 4.0 * PI * ((m * n) as f64).sqrt() / c as f64)?;
                    let mult = if m == n { 1.0 } else { 2.0 };
                    sum += mult * am * an * s.re * j.value;
                    err += mult
                        * (am * an).abs()
                        * (s.im.abs() * j.value.abs() + s.norm() * j.abs_err);
                }
            }
            Ok((sum / c as f64, err / c as f64))
        })
        .collect();
    let mut off = 0.0;
    let mut err = 0.0;
    for r in per_c {
        let (s, e) = r?;
        off += s;
        err += e;
    }
    let off_diagonal = 2.0 * PI * sign * off;
    let tail = kloosterman_tail_bound(&a, &a, kappa, c_max);
    Ok(MomentResult {
        value: diagonal + off_diagonal,
        diagonal,
        off_diagonal,
        truncation_error: tail + 2.0 * PI * err + 1e-15 * (diagonal.abs() + off_diagonal.abs()),
    })
}

pub const MOMENT_BETA: f64 = 11.0 / 4875.0;

/// (1 + X/(MN) + X/M^(1+b) + (1+Z)^24 N^(4/3)/M^(1/3+b) (1 + sqrt(X/(MN)))) ((1+Z) X M N)^eps.
pub fn moment_bound(m: f64, n: f64, x: f64, z_h: f64, eps: f64) -> f64 {
    let b = MOMENT_BETA;
    let mn = m * n;
    let main = 1.0
        + x / mn
        + x / m.powf(1.0 + b)
        + (1.0 + z_h).powi(24) * n.powf(4.0 / 3.0) / m.powf(1.0 / 3.0 + b)
            * (1.0 + (x / mn).sqrt());
    main * ((1.0 + z_h) * x * m * n).powf(eps)
}

/// j-th derivative at z0 from `samples` points on the circle of radius r.
pub fn cauchy_derivative<F>(
    f: F,
    z0: Complex64,
    radius: f64,
    order: u32,
    samples: usize,
) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let fact: f64 = (1..=order).map(|k| k as f64).product();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..samples {
        let theta = 2.0 * PI * k as f64 / samples as f64;
        let w = Complex64::from_polar(1.0, theta);
        acc += f(z0 + w * radius) * Complex64::from_polar(1.0, -(order as f64) * theta);
    }
    acc * fact / (samples as f64 * radius.powi(order as i32))
}

/// One row of a moment table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub m: u64,
    pub n: u64,
    pub x: f64,
    pub lhs: f64,
    pub lhs_err: f64,
    pub bound: f64,
}

impl MomentRow {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.bound
    }
}

pub fn write_moment_csv<W: Write>(rows: &[MomentRow], mut out: W) -> io::Result<()> {
    writeln!(out, "M,N,X,lhs_geometric,moment_bound,ratio")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.12e},{:.12e},{:.6e}",
            r.m,
            r.n,
            r.x,
            r.lhs,
            r.bound,
            r.ratio()
        )?;
    }
    Ok(())
}

/// Levels of the family must avoid the prime factors of the fixed form's level.
pub fn levels_coprime(m: u64, n: u64) -> bool {
    factorize(m).primes().all(|p| !n.is_multiple_of(p))
}

/// Smallest multiple-of-M cutoff whose Kloosterman tail bound is below `tol`.
pub fn auto_c_max(
    f: &CuspForm,
    kappa: u32,
    h: &SmoothWindow,
    x: f64,
    tol: f64,
) -> Result<u64, LfuncError> {
    let (lo, hi) = h.support();
    let n_lo = (lo * x).ceil().max(1.0) as u64;
    let n_hi = (hi * x).floor() as u64;
    f.require(n_hi)?;
    let a: Vec<(u64, f64)> = (n_lo..=n_hi)
        .map(|n| {
            (
                n,
                (f.lambda(n).unwrap() * h.eval(n as f64 / x)).abs() / (n as f64).sqrt(),
            )
        })
        .collect();
    let mut c = 16u64;
    while kloosterman_tail_bound(&a, &a, kappa, c) > tol {
        c = c * 5 / 4 + 1;
        if c > 10_000_000 {
            return Err(LfuncError::TruncationTooShort {
                tail: kloosterman_tail_bound(&a, &a, kappa, c),
                tol,
            });
        }
    }
    Ok(c)
}
