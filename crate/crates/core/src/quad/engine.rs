use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::{CEvalResult, EvalResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge: partial value {value} with error {abs_err}")]
    NonConvergence { value: f64, abs_err: f64 },
    #[error("invalid integration domain: {0}")]
    InvalidDomain(String),
    #[error("integrand returned a non-finite value at {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Expected oscillation frequency in cycles per unit length; initial
    /// panels are at most a quarter period wide.
    pub oscillation_hint: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_panels: 200_000,
            oscillation_hint: 0.0,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        QuadConfig {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    pub fn with_hint(mut self, cycles_per_unit: f64) -> Self {
        self.oscillation_hint = cycles_per_unit;
        self
    }

    /// Same tolerances on an initial partition `factor` times finer.
    pub fn refined(mut self, factor: f64) -> Self {
        self.oscillation_hint = self.oscillation_hint.max(1e-300) * factor;
        self.max_panels = (self.max_panels as f64 * factor) as usize;
        self
    }
}

/// Decay bound |f(x)| <= envelope(x) used to truncate an infinite range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// amplitude * exp(-rate * x)
    Exponential { amplitude: f64, rate: f64 },
    /// amplitude * x^(-power), power > 1
    Algebraic { amplitude: f64, power: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    SemiInfinite { start: f64, envelope: Envelope },
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub(crate) trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    mass: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Result<Panel<T>, QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite_value() {
        return Err(QuadError::NonFinite(c));
    }
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.magnitude() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (x1, x2) = (c - dx, c + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite_value() {
            return Err(QuadError::NonFinite(x1));
        }
        if !f2.is_finite_value() {
            return Err(QuadError::NonFinite(x2));
        }
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let value = kron * h;
    let err = (kron - gauss).magnitude() * h.abs() + 50.0 * f64::EPSILON * abs_sum * h.abs();
    Ok(Panel {
        a,
        b,
        value,
        err,
        mass: abs_sum * h.abs(),
    })
}

fn adaptive<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<(T, f64), QuadError> {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(f, w[0], w[1])?);
        }
    }
    let total = |heap: &BinaryHeap<Panel<T>>| {
        heap.iter()
            .fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.err))
    };
    let (mut value, mut err) = total(&heap);
    // cancellation floor: nothing below a few hundred ulps of the absolute mass
    let mass: f64 = heap.iter().map(|p| p.mass).sum();
    let floor = 500.0 * f64::EPSILON * mass;
    let mut steps = 0usize;
    while err > cfg.abs_tol.max(cfg.rel_tol * value.magnitude()).max(floor) {
        if heap.len() >= cfg.max_panels {
            return Err(QuadError::NonConvergence {
                value: value.magnitude(),
                abs_err: err,
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel at floating-point resolution; keep its estimate
            heap.push(Panel { err: 0.0, ..worst });
            err -= worst.err;
            continue;
        }
        let left = gk15(f, worst.a, mid)?;
        let right = gk15(f, mid, worst.b)?;
        value = value - worst.value + left.value + right.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        steps += 1;
        if steps.is_multiple_of(256) {
            (value, err) = total(&heap);
        }
    }
    let (value, err) = total(&heap);
    Ok((value, err))
}

fn uniform_breaks(a: f64, b: f64, cfg: &QuadConfig) -> Vec<f64> {
    let len = b - a;
    let n = if cfg.oscillation_hint > 0.0 {
        (len * 4.0 * cfg.oscillation_hint).ceil().max(1.0)
    } else {
        1.0
    };
    let n = (n as usize).min(cfg.max_panels / 2).max(1);
    (0..=n).map(|i| a + len * i as f64 / n as f64).collect()
}

fn truncate(domain: &Domain, cfg: &QuadConfig) -> Result<(f64, f64, f64), QuadError> {
    match *domain {
        Domain::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite()) || b < a {
                return Err(QuadError::InvalidDomain(format!("[{a}, {b}]")));
            }
            Ok((a, b, 0.0))
        }
        Domain::SemiInfinite { start, envelope } => {
            let target = cfg.abs_tol / 10.0;
            let (end, tail) = match envelope {
                Envelope::Exponential { amplitude, rate } => {
                    if rate <= 0.0 {
                        return Err(QuadError::InvalidDomain("non-positive decay rate".into()));
                    }
                    let end = (start).max((amplitude / (rate * target)).max(1.0).ln() / rate);
                    (end, amplitude / rate * (-rate * end).exp())
                }
                Envelope::Algebraic { amplitude, power } => {
                    if power <= 1.0 {
                        return Err(QuadError::InvalidDomain(
                            "algebraic envelope must have power > 1".into(),
                        ));
                    }
                    let end = start
                        .max(1.0)
                        .max((amplitude / ((power - 1.0) * target)).powf(1.0 / (power - 1.0)));
                    (end, amplitude * end.powf(1.0 - power) / (power - 1.0))
                }
            };
            Ok((start, end, tail))
        }
    }
}

/// Integrates a real function over a finite or envelope-truncated domain.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    domain: &Domain,
    cfg: &QuadConfig,
) -> Result<EvalResult, QuadError> {
    let (a, b, tail) = truncate(domain, cfg)?;
    let (value, err) = adaptive(&f, &uniform_breaks(a, b, cfg), cfg)?;
    Ok(EvalResult {
        value,
        abs_err: err + tail,
    })
}

pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    domain: &Domain,
    cfg: &QuadConfig,
) -> Result<CEvalResult, QuadError> {
    let (a, b, tail) = truncate(domain, cfg)?;
    let (value, err) = adaptive(&f, &uniform_breaks(a, b, cfg), cfg)?;
    Ok(CEvalResult {
        value,
        abs_err: err + tail,
    })
}

/// Integrates over consecutive panels given by sorted breakpoints.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<EvalResult, QuadError> {
    let (value, abs_err) = adaptive(&f, breaks, cfg)?;
    Ok(EvalResult { value, abs_err })
}

pub fn integrate_complex_panels<F: Fn(f64) -> Complex64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<CEvalResult, QuadError> {
    let (value, abs_err) = adaptive(&f, breaks, cfg)?;
    Ok(CEvalResult { value, abs_err })
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x * x, &Domain::Finite(0.0, 3.0), &QuadConfig::default()).unwrap();
        assert!((r.value - 9.0).abs() < 1e-13);
    }

    #[test]
    fn exponential_tail() {
        let cfg = QuadConfig::default();
        let dom = Domain::SemiInfinite {
            start: 0.0,
            envelope: Envelope::Exponential {
                amplitude: 1.0,
                rate: 1.0,
            },
        };
        let r = integrate(|x| (-x).exp(), &dom, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 10, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            if n >= 3 {
                assert!((m4 - 0.4).abs() < 1e-13);
            }
        }
    }
}
