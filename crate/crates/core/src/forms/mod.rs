//! Cusp forms described by their normalised Hecke eigenvalues.
//!
//! Coefficients come from the Delta eta-product, from local coefficient files
//! or from the LMFDB (cached on disk). Every form is validated on load.

mod io;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{divisor_tau, factorize, gcd};
use crate::specialfn::{bessel_k_imag_scaled, ln_gamma, KernelKind, SpecialFnError};

pub use io::{
    default_cache_dir, fetch_lmfdb_raw, lmfdb_base_url, load_form, parse_coefficient_file,
    write_coefficient_file, CoefficientSource, Normalization,
};

#[derive(Debug, Error)]
pub enum FormError {
    #[error("network failure: {0}")]
    Network(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("malformed data ({context}): {detail}")]
    MalformedData { context: String, detail: String },
    #[error("invariant violated at n = {n}: {detail}")]
    InvariantViolation { n: u64, detail: String },
    #[error("need coefficients up to {needed}, only {available} stored")]
    InsufficientCoefficients { needed: u64, available: u64 },
    #[error("unsupported form: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormKind {
    Holomorphic { weight: u32 },
    Maass { t: f64 },
}

impl FormKind {
    pub fn kernel_kind(self) -> KernelKind {
        match self {
            FormKind::Holomorphic { weight } => KernelKind::Holomorphic { weight },
            FormKind::Maass { t } => KernelKind::Maass { t },
        }
    }
}

/// A Hecke eigenform with lambda(1) = 1 and coefficients lambda(n), n <= n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspForm {
    pub label: String,
    pub kind: FormKind,
    pub level: u64,
    pub is_newform: bool,
    /// Atkin-Lehner eigenvalues w_p for p | level, when known.
    pub atkin_lehner: BTreeMap<u64, i8>,
    /// Eigenvalue under z -> -conj(z) for Maass forms, when known.
    pub reflection_sign: Option<i8>,
    lambda: Vec<f64>,
}

impl CuspForm {
    /// Builds and validates a form from normalised coefficients lambda(1..).
    pub fn new(
        label: &str,
        kind: FormKind,
        level: u64,
        is_newform: bool,
        lambda: Vec<f64>,
        atkin_lehner: BTreeMap<u64, i8>,
    ) -> Result<Self, FormError> {
        let f = CuspForm {
            label: label.to_string(),
            kind,
            level,
            is_newform,
            atkin_lehner,
            reflection_sign: None,
            lambda,
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), FormError> {
        if self.level == 0 {
            return Err(FormError::MalformedData {
                context: self.label.clone(),
                detail: "level must be positive".into(),
            });
        }
        let first = *self
            .lambda
            .first()
            .ok_or(FormError::InsufficientCoefficients {
                needed: 1,
                available: 0,
            })?;
        if (first - 1.0).abs() > 1e-9 {
            return Err(FormError::InvariantViolation {
                n: 1,
                detail: format!("lambda(1) = {first}, expected 1"),
            });
        }
        if let FormKind::Holomorphic { .. } = self.kind {
            if self.is_newform {
                for (i, &l) in self.lambda.iter().enumerate() {
                    let n = i as u64 + 1;
                    if !l.is_finite() || l.abs() > divisor_tau(n) as f64 * (1.0 + 1e-9) {
                        return Err(FormError::InvariantViolation {
                            n,
                            detail: format!(
                                "|lambda(n)| = {} exceeds tau(n) = {}",
                                l.abs(),
                                divisor_tau(n)
                            ),
                        });
                    }
                }
            }
        }
        let fac = factorize(self.level);
        if self.is_newform && fac.is_squarefree() {
            for p in fac.primes() {
                if let Some(l) = self.lambda(p) {
                    let expect = (p as f64).powf(-0.5);
                    if (l.abs() - expect).abs() > 1e-6 {
                        return Err(FormError::InvariantViolation {
                            n: p,
                            detail: format!(
                                "|lambda({p})| = {} but p | N requires {expect}",
                                l.abs()
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_reflection_sign(mut self, eps: i8) -> Result<Self, FormError> {
        if eps != 1 && eps != -1 {
            return Err(FormError::MalformedData {
                context: self.label.clone(),
                detail: format!("reflection sign must be +-1, got {eps}"),
            });
        }
        self.reflection_sign = Some(eps);
        Ok(self)
    }

    /// Pseudo-eigenvalue of W_d for d | level: the product of w_p over p | d.
    pub fn atkin_lehner_product(&self, d: u64) -> Option<i8> {
        factorize(d.max(1))
            .primes()
            .map(|p| self.atkin_lehner.get(&p).copied())
            .try_fold(1i8, |acc, w| w.map(|w| acc * w))
    }

    pub fn n_max(&self) -> u64 {
        self.lambda.len() as u64
    }

    pub fn lambda(&self, n: u64) -> Option<f64> {
        if n == 0 {
            None
        } else {
            self.lambda.get(n as usize - 1).copied()
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.lambda
    }

    pub fn require(&self, n: u64) -> Result<(), FormError> {
        if n > self.n_max() {
            Err(FormError::InsufficientCoefficients {
                needed: n,
                available: self.n_max(),
            })
        } else {
            Ok(())
        }
    }

    /// Copy keeping only lambda(n) for n <= n_max.
    pub fn truncated(&self, n_max: u64) -> Self {
        let mut f = self.clone();
        f.lambda.truncate(n_max as usize);
        f
    }

    /// Whittaker function W_f(y) of the normalised Fourier expansion.
    pub fn whittaker(&self, y: f64) -> Result<f64, FormError> {
        match self.kind {
            FormKind::Holomorphic { weight } => {
                let k = weight as f64;
                let log = -0.5 * ln_gamma(k).0 + 0.5 * k * (4.0 * PI * y).ln() - 2.0 * PI * y;
                Ok(log.exp())
            }
            FormKind::Maass { t } => {
                let kv = bessel_k_imag_scaled(0.5 * t, 2.0 * PI * y)?;
                Ok(y.sqrt() * kv.value)
            }
        }
    }
}

/// Ramanujan's tau(n) for 1 <= n <= n_max, index n - 1.
///
/// tau(n) is the coefficient of q^(n-1) in prod (1 - q^m)^24, computed as the
/// eighth power of prod (1 - q^m)^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2).
pub fn ramanujan_tau(n_max: usize) -> Vec<i128> {
    if n_max == 0 {
        return Vec::new();
    }
    let len = n_max;
    let mut cube: Vec<(usize, i128)> = Vec::new();
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        cube.push((k * (k + 1) / 2, sign * (2 * k as i128 + 1)));
        k += 1;
    }
    let mut acc = vec![0i128; len];
    for &(e, c) in &cube {
        acc[e] = c;
    }
    for _ in 1..8 {
        let mut next = vec![0i128; len];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(e, c) in &cube {
                if i + e >= len {
                    break;
                }
                next[i + e] += a * c;
            }
        }
        acc = next;
    }
    acc
}

/// The discriminant form Delta (level 1, weight 12) with lambda(n) = tau(n) / n^(11/2).
pub fn delta_oracle(n_max: usize) -> CuspForm {
    let lambda = ramanujan_tau(n_max)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let n = (i + 1) as f64;
            t as f64 / (n.powi(5) * n.sqrt())
        })
        .collect();
    CuspForm::new(
        "1.12.a.a",
        FormKind::Holomorphic { weight: 12 },
        1,
        true,
        lambda,
        BTreeMap::new(),
    )
    .expect("Delta coefficients satisfy the Deligne bound")
}

/// Largest violation of lambda(m) lambda(n) = sum_{d | (m,n)} lambda(mn/d^2)
/// over m <= m_max, n <= n_max with (n, N) = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeckeReport {
    pub max_abs_violation: f64,
    pub max_rel_violation: f64,
    pub worst: (u64, u64),
    pub pairs_checked: usize,
}

pub fn hecke_check(f: &CuspForm, m_max: u64, n_max: u64) -> Result<HeckeReport, FormError> {
    f.require(m_max * n_max)?;
    let mut rep = HeckeReport {
        max_abs_violation: 0.0,
        max_rel_violation: 0.0,
        worst: (1, 1),
        pairs_checked: 0,
    };
    for m in 1..=m_max {
        for n in 1..=n_max {
            if gcd(n, f.level) != 1 {
                continue;
            }
            let g = gcd(m, n);
            let rhs: f64 = factorize(g)
                .divisors()
                .into_iter()
                .map(|d| f.lambda(m * n / (d * d)).expect("range checked"))
                .sum();
            let lhs = f.lambda(m).expect("range checked") * f.lambda(n).expect("range checked");
            let abs = (lhs - rhs).abs();
            let rel = abs / lhs.abs().max(rhs.abs()).max(1.0);
            if abs > rep.max_abs_violation {
                rep.max_abs_violation = abs;
                rep.worst = (m, n);
            }
            rep.max_rel_violation = rep.max_rel_violation.max(rel);
            rep.pairs_checked += 1;
        }
    }
    Ok(rep)
}

/// Wilton sum S(f, X, alpha) = sum_{n <= X} lambda(n) e(n alpha) / sqrt(n).
pub fn wilton_sum(f: &CuspForm, x: f64, alpha: f64) -> Result<Complex64, FormError> {
    let n_top = x.max(0.0).floor() as u64;
    f.require(n_top)?;
    Ok((1..=n_top)
        .map(|n| {
            let theta = 2.0 * PI * ((n as f64 * alpha).fract());
            let l = f.lambda(n).expect("range checked") / (n as f64).sqrt();
            Complex64::from_polar(l, theta)
        })
        .sum())
}

/// Rankin sum sum_{n <= x} |lambda(n)|^2 / n.
pub fn rankin_sum(f: &CuspForm, x: f64) -> Result<f64, FormError> {
    let n_top = x.max(0.0).floor() as u64;
    f.require(n_top)?;
    Ok(f.lambda[..n_top as usize]
        .iter()
        .enumerate()
        .map(|(i, l)| l * l / (i + 1) as f64)
        .sum())
}
