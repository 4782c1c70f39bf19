use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::TraceError;
use crate::arith::{euler_phi, gcd};

/// Right-continuous step function: `values[i]` on [breakpoints[i], breakpoints[i+1]),
/// zero outside [breakpoints[0], breakpoints[last]).
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub breakpoints: Vec<BigRational>,
    pub values: Vec<BigRational>,
    /// Lambda = sum of phi(q) over the moduli.
    pub lambda: u64,
    /// Interval endpoints before equal points were merged, 2 Lambda.
    pub raw_endpoints: usize,
}

impl StepFunction {
    /// Value at x (right-continuous).
    pub fn value_at(&self, x: &BigRational) -> BigRational {
        match self.breakpoints.binary_search(x) {
            Ok(i) if i < self.values.len() => self.values[i].clone(),
            Ok(_) => BigRational::zero(),
            Err(0) => BigRational::zero(),
            Err(i) if i <= self.values.len() => self.values[i - 1].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn integral(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, v) in self.values.iter().enumerate() {
            acc += (&self.breakpoints[i + 1] - &self.breakpoints[i]) * v;
        }
        acc
    }

    /// Breakpoints and values as floats, for plotting and float cross-checks.
    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.breakpoints
                .iter()
                .map(|b| b.to_f64().unwrap_or(f64::NAN))
                .collect(),
            self.values
                .iter()
                .map(|v| v.to_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }
}

/// round(x * den) / den.
pub fn rational_approx(x: f64, den: u64) -> BigRational {
    let num = (x * den as f64).round();
    BigRational::new(BigInt::from(num as i128), BigInt::from(den))
}

/// I(x) = (1/(2 delta Lambda)) sum_{q in set} sum_{a mod q, (a,q)=1} 1_{[a/q - delta, a/q + delta]}(x),
/// with a running over 0 <= a < q.
pub fn jutila_build(q_set: &[u64], delta: &BigRational) -> Result<StepFunction, TraceError> {
    let mut qs: Vec<u64> = q_set.iter().copied().filter(|&q| q > 0).collect();
    qs.sort_unstable();
    qs.dedup();
    if qs.is_empty() {
        return Err(TraceError::EmptyModuli);
    }
    if !delta.is_positive() {
        return Err(TraceError::InvalidInstance("delta must be positive".into()));
    }
    let lambda: u64 = qs.iter().map(|&q| euler_phi(q)).sum();
    let height = (BigRational::from_integer(BigInt::from(2u64 * lambda)) * delta).recip();
    let mut events: BTreeMap<BigRational, i64> = BTreeMap::new();
    let mut raw = 0usize;
    for &q in &qs {
        for a in 0..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let centre = BigRational::new(BigInt::from(a), BigInt::from(q));
            *events.entry(&centre - delta).or_insert(0) += 1;
            *events.entry(&centre + delta).or_insert(0) -= 1;
            raw += 2;
        }
    }
    let mut breakpoints = Vec::with_capacity(events.len());
    let mut values = Vec::with_capacity(events.len());
    let mut level = 0i64;
    for (x, change) in events {
        if change == 0 {
            continue;
        }
        if !breakpoints.is_empty() {
            values.push(&height * BigInt::from(level));
        }
        level += change;
        breakpoints.push(x);
    }
    debug_assert_eq!(level, 0);
    Ok(StepFunction {
        breakpoints,
        values,
        lambda,
        raw_endpoints: raw,
    })
}

/// Exact int |1_{[0,1]} - I|^2 over the real line.
pub fn jutila_l2_error(step: &StepFunction) -> BigRational {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut points: Vec<BigRational> = step.breakpoints.clone();
    points.push(zero.clone());
    points.push(one.clone());
    points.sort();
    points.dedup();
    // group lengths by level to keep the number of big multiplications small
    let mut by_level: BTreeMap<(BigRational, bool), BigRational> = BTreeMap::new();
    let mut j = 0usize;
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        while j < step.breakpoints.len() && &step.breakpoints[j] <= a {
            j += 1;
        }
        // j = number of breakpoints <= a, so the level on [a, b) is values[j - 1]
        let v = if j == 0 || j > step.values.len() {
            zero.clone()
        } else {
            step.values[j - 1].clone()
        };
        let inside = *a >= zero && *b <= one;
        *by_level
            .entry((v, inside))
            .or_insert_with(BigRational::zero) += b - a;
    }
    let mut total = BigRational::zero();
    for ((v, inside), len) in by_level {
        let diff = if inside { &one - v } else { v };
        total += len * &diff * &diff;
    }
    total
}

/// w_delta(Delta) = (1/2 delta) int_{-delta}^{delta} e(Delta x) dx = sin(2 pi delta Delta)/(2 pi delta Delta).
pub fn w_delta(shift: f64, delta: f64) -> f64 {
    assert!(delta > 0.0, "delta must be positive");
    let z = 2.0 * PI * delta * shift;
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}
