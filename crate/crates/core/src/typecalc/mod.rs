//! Derivative-bound types and a finite-difference harness that checks them.
//!
//! A function F of x = (x_1, ..., x_n), all x_i nonzero, has type
//! (Z : F_1, ..., F_n) when |x^I d^I F| << Z F_1^{i_1} ... F_n^{i_n} for every
//! multi-index I, with constants depending on I only. F_l = 0 marks a
//! variable F does not depend on.

mod expr;
mod fixtures;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use expr::Expr;
pub use fixtures::{
    fixture_bump, fixture_exponential, fixture_kernel_i, fixture_product, fixture_w_delta,
    fixture_wrong_exponential, w_delta_composed, w_delta_inner_type, w_delta_outer_type,
    KernelFixtureParams, WDeltaParams,
};

#[derive(Debug, Error)]
pub enum TypeError {
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("inner map {0} vanishes identically")]
    VanishingInner(usize),
    #[error("variable index {0} out of range")]
    InvalidIndex(usize),
    #[error("finite differences lose {digits_lost:.1} digits at {point:?} for index {index:?}")]
    NumericallyUnstable {
        point: Vec<f64>,
        index: Vec<u32>,
        digits_lost: f64,
    },
    #[error("invalid domain: {0}")]
    Domain(String),
}

/// A type (Z : F_1, ..., F_n) with symbolic entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FuncType {
    pub names: Vec<String>,
    pub z: Expr,
    pub f: Vec<Expr>,
}

impl FuncType {
    pub fn new(names: &[&str], z: Expr, f: Vec<Expr>) -> Result<Self, TypeError> {
        if names.is_empty() || names.len() != f.len() {
            return Err(TypeError::ArityMismatch {
                expected: names.len().max(1),
                got: f.len(),
            });
        }
        Ok(FuncType {
            names: names.iter().map(|s| s.to_string()).collect(),
            z: z.simplify(),
            f: f.into_iter().map(|e| e.simplify()).collect(),
        })
    }

    /// The type (1 : 0, ..., 0) of a nonzero constant.
    pub fn constant(names: &[&str]) -> Self {
        FuncType::new(names, Expr::one(), vec![Expr::zero(); names.len()]).expect("nonempty names")
    }

    pub fn arity(&self) -> usize {
        self.f.len()
    }

    /// Canonical form of every entry, for symbolic comparison.
    pub fn canonical(&self) -> (String, Vec<String>) {
        (
            self.z.simplify().key(),
            self.f.iter().map(|e| e.simplify().key()).collect(),
        )
    }

    pub fn same_as(&self, other: &FuncType) -> bool {
        self.canonical() == other.canonical()
    }

    /// Z(x) prod F_j(x)^{i_j}.
    pub fn bound(&self, x: &[f64], index: &[u32]) -> f64 {
        let mut b = self.z.eval(x);
        for (f, &i) in self.f.iter().zip(index) {
            if i > 0 {
                b *= f.eval(x).powi(i as i32);
            }
        }
        b
    }
}

impl fmt::Display for FuncType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self.f.iter().map(|e| e.render(&self.names)).collect();
        write!(
            f,
            "({}-type) ({} : {})",
            self.names.join(","),
            self.z.render(&self.names),
            fs.join(", ")
        )
    }
}

/// Type of d/dx_k F: (Z F_k / |x_k| : F_1, ..., F_n).
pub fn type_derivative(t: &FuncType, k: usize) -> Result<FuncType, TypeError> {
    if k >= t.arity() {
        return Err(TypeError::InvalidIndex(k));
    }
    let z = Expr::Mul(vec![
        t.z.clone(),
        t.f[k].clone(),
        Expr::var(k).abs().recip(),
    ]);
    Ok(FuncType {
        names: t.names.clone(),
        z: z.simplify(),
        f: t.f.clone(),
    })
}

/// Type of F G: (Z_F Z_G : F_1 + G_1, ..., F_n + G_n).
pub fn type_product(a: &FuncType, b: &FuncType) -> Result<FuncType, TypeError> {
    if a.arity() != b.arity() {
        return Err(TypeError::ArityMismatch {
            expected: a.arity(),
            got: b.arity(),
        });
    }
    Ok(FuncType {
        names: a.names.clone(),
        z: (a.z.clone() * b.z.clone()).simplify(),
        f: a.f
            .iter()
            .zip(&b.f)
            .map(|(x, y)| (x.clone() + y.clone()).simplify())
            .collect(),
    })
}

/// Type of F(G(x)) for F of type (Z_F : F_1..F_n) in y and inner maps G_k of
/// x-type (Z_{G_k} : G_{k1}..G_{km}):
/// Z = Z_F(G), F(G)_j = sum_k [F_k(G) Z_{G_k} + |G_k|] G_{kj} / |G_k|.
pub fn type_compose(outer: &FuncType, inners: &[(FuncType, Expr)]) -> Result<FuncType, TypeError> {
    if inners.len() != outer.arity() {
        return Err(TypeError::ArityMismatch {
            expected: outer.arity(),
            got: inners.len(),
        });
    }
    let m = inners[0].0.arity();
    for (k, (t, g)) in inners.iter().enumerate() {
        if t.arity() != m {
            return Err(TypeError::ArityMismatch {
                expected: m,
                got: t.arity(),
            });
        }
        if g.is_zero() {
            return Err(TypeError::VanishingInner(k));
        }
    }
    let subs: Vec<Expr> = inners.iter().map(|(_, g)| g.clone()).collect();
    let z = outer.z.substitute(&subs).simplify();
    let mut f = Vec::with_capacity(m);
    for j in 0..m {
        let mut terms = Vec::new();
        for (k, (t, g)) in inners.iter().enumerate() {
            if t.f[j].is_zero() {
                continue;
            }
            let gabs = g.clone().abs();
            let bracket = outer.f[k].substitute(&subs) * t.z.clone() + gabs.clone();
            terms.push(Expr::Mul(vec![bracket, t.f[j].clone(), gabs.recip()]));
        }
        f.push(Expr::Add(terms).simplify());
    }
    Ok(FuncType {
        names: inners[0].0.names.clone(),
        z,
        f,
    })
}

type Evaluator = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A concrete function together with the type claimed for it on a box.
#[derive(Clone)]
pub struct TypedFunction {
    pub name: String,
    pub eval: Evaluator,
    pub claimed: FuncType,
    /// Per-variable interval [a, b] with 0 < a < b.
    pub domain: Vec<(f64, f64)>,
}

impl fmt::Debug for TypedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypedFunction")
            .field("name", &self.name)
            .field("claimed", &self.claimed.to_string())
            .field("domain", &self.domain)
            .finish()
    }
}

impl TypedFunction {
    pub fn new<F>(name: &str, claimed: FuncType, domain: Vec<(f64, f64)>, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        TypedFunction {
            name: name.to_string(),
            eval: Arc::new(f),
            claimed,
            domain,
        }
    }

    /// The same function with a different claimed type.
    pub fn with_claim(&self, claimed: FuncType) -> Self {
        TypedFunction {
            claimed,
            ..self.clone()
        }
    }
}

/// All multi-indices in `n` variables with total order 1..=max_order.
pub fn multi_indices(n: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            if cur.iter().sum::<u32>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..=left {
            cur[pos] = i;
            rec(pos + 1, left - i, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, max_order, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Largest acceptable fitted constant.
    pub c_max: f64,
    /// Allowed growth of the constant when the box is doubled.
    pub stability_factor: f64,
    /// Base step as a fraction of the local scale |x_j| / max(F_j, 1).
    pub step: f64,
    /// Fewer surviving digits than 16 minus this is an error.
    pub max_digits_lost: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 64,
            seed: 0x7e57,
            c_max: 1e3,
            stability_factor: 4.0,
            step: 0.1,
            max_digits_lost: 6.0,
        }
    }
}

/// |x^I d^I f| / (Z prod F^I) at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeSample {
    pub point: Vec<f64>,
    pub index: Vec<u32>,
    pub ratio: f64,
    pub digits_lost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeReport {
    pub name: String,
    pub claimed: String,
    /// Fitted constant on the box.
    pub constant: f64,
    /// Fitted constant on the box scaled by 2.
    pub constant_dilated: f64,
    pub worst: Option<TypeSample>,
    pub rows: Vec<TypeSample>,
    pub pass: bool,
}

impl TypeReport {
    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// One-dimensional central difference weights (offset, weight) for order j,
/// all second-order accurate.
fn stencil(order: u32) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => panic!("finite differences are limited to order 3 per variable"),
    }
}

/// Mixed partial by a tensor stencil; also returns max |f| on the stencil.
fn mixed_difference(f: &Evaluator, x: &[f64], index: &[u32], h: &[f64]) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut fmax: f64 = 0.0;
    let stencils: Vec<&[(i32, f64)]> = index.iter().map(|&i| stencil(i)).collect();
    let mut counters = vec![0usize; x.len()];
    let mut p = x.to_vec();
    loop {
        let mut w = 1.0;
        for j in 0..x.len() {
            let (off, wt) = stencils[j][counters[j]];
            p[j] = x[j] + off as f64 * h[j];
            w *= wt;
        }
        let v = f(&p);
        fmax = fmax.max(v.norm());
        acc += v * w;
        let mut j = 0;
        loop {
            if j == x.len() {
                let scale: f64 = index
                    .iter()
                    .zip(h)
                    .map(|(&i, &hj)| hj.powi(i as i32))
                    .product();
                return (acc / scale, fmax);
            }
            counters[j] += 1;
            if counters[j] < stencils[j].len() {
                break;
            }
            counters[j] = 0;
            j += 1;
        }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, domain: &[(f64, f64)]) -> Vec<f64> {
    domain
        .iter()
        .map(|&(a, b)| (a.ln() + rng.gen::<f64>() * (b.ln() - a.ln())).exp())
        .collect()
}

fn evaluate_point(
    tf: &TypedFunction,
    x: &[f64],
    index: &[u32],
    opts: &VerifyOptions,
) -> Result<TypeSample, TypeError> {
    let n = x.len();
    let t = &tf.claimed;
    let xi: f64 = x
        .iter()
        .zip(index)
        .map(|(&v, &i)| v.abs().powi(i as i32))
        .product();
    let bound = t.bound(x, index);
    let mut h: Vec<f64> = (0..n)
        .map(|j| opts.step * x[j].abs() / t.f[j].eval(x).max(1.0))
        .collect();
    let mut refinements = 0;
    loop {
        let scaled = |s: f64| -> Vec<f64> { h.iter().map(|v| v * s).collect() };
        let (d1, _) = mixed_difference(&tf.eval, x, index, &h);
        let (d2, _) = mixed_difference(&tf.eval, x, index, &scaled(0.5));
        let (d4, fmax) = mixed_difference(&tf.eval, x, index, &scaled(0.25));
        // Richardson on the h^2 and h^4 error terms
        let r1a = (d2 * 4.0 - d1) / 3.0;
        let r1b = (d4 * 4.0 - d2) / 3.0;
        let deriv = (r1b * 16.0 - r1a) / 15.0;
        let finest: f64 = h
            .iter()
            .zip(index)
            .map(|(&v, &i)| (0.25 * v).powi(i as i32))
            .product();
        let noise = 1e3 * fmax * f64::EPSILON / finest;
        let scale = deriv.norm().max(bound / xi);
        let digits_lost = if scale > 0.0 {
            (fmax / (finest * scale)).max(1.0).log10()
        } else {
            0.0
        };
        if digits_lost > opts.max_digits_lost {
            return Err(TypeError::NumericallyUnstable {
                point: x.to_vec(),
                index: index.to_vec(),
                digits_lost,
            });
        }
        // a claim that is too small gives steps that do not resolve f; shrink them
        let resolved = (deriv - r1b).norm() <= 1e-2 * deriv.norm() + noise;
        if !resolved && refinements < 24 {
            refinements += 1;
            h.iter_mut().for_each(|v| *v *= 0.5);
            continue;
        }
        let ratio = if bound > 0.0 {
            deriv.norm() * xi / bound
        } else if deriv.norm() <= noise {
            // claimed independence holds up to rounding
            0.0
        } else {
            f64::INFINITY
        };
        return Ok(TypeSample {
            point: x.to_vec(),
            index: index.to_vec(),
            ratio,
            digits_lost,
        });
    }
}

fn fit_constant(
    tf: &TypedFunction,
    domain: &[(f64, f64)],
    indices: &[Vec<u32>],
    opts: &VerifyOptions,
) -> Result<Vec<TypeSample>, TypeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let points: Vec<Vec<f64>> = (0..opts.samples)
        .map(|_| sample_point(&mut rng, domain))
        .collect();
    let jobs: Vec<(&Vec<f64>, &Vec<u32>)> = points
        .iter()
        .flat_map(|p| indices.iter().map(move |i| (p, i)))
        .collect();
    jobs.par_iter()
        .map(|(p, i)| evaluate_point(tf, p, i, opts))
        .collect()
}

/// Fits the constant C in |x^I d^I f| <= C Z prod F^I over sampled points of the
/// box and of the box scaled by 2. PASS when C <= c_max on both and the
/// dilated constant is at most `stability_factor` times the original.
pub fn verify_type(
    tf: &TypedFunction,
    indices: &[Vec<u32>],
    opts: &VerifyOptions,
) -> Result<TypeReport, TypeError> {
    let n = tf.claimed.arity();
    if tf.domain.len() != n {
        return Err(TypeError::ArityMismatch {
            expected: n,
            got: tf.domain.len(),
        });
    }
    for &(a, b) in &tf.domain {
        if !(a > 0.0 && b > a) {
            return Err(TypeError::Domain(format!(
                "interval [{a}, {b}] must satisfy 0 < a < b"
            )));
        }
    }
    for i in indices {
        if i.len() != n {
            return Err(TypeError::ArityMismatch {
                expected: n,
                got: i.len(),
            });
        }
    }
    let rows = fit_constant(tf, &tf.domain, indices, opts)?;
    let dilated: Vec<(f64, f64)> = tf.domain.iter().map(|&(a, b)| (2.0 * a, 2.0 * b)).collect();
    let rows_dilated = fit_constant(tf, &dilated, indices, opts)?;
    let max_ratio = |r: &[TypeSample]| r.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let constant = max_ratio(&rows);
    let constant_dilated = max_ratio(&rows_dilated);
    let worst = rows
        .iter()
        .chain(&rows_dilated)
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .cloned();
    let pass = constant <= opts.c_max
        && constant_dilated <= opts.c_max
        && constant_dilated <= opts.stability_factor * constant.max(f64::MIN_POSITIVE);
    Ok(TypeReport {
        name: tf.name.clone(),
        claimed: tf.claimed.to_string(),
        constant,
        constant_dilated,
        worst,
        rows,
        pass,
    })
}

/// e(x) = exp(2 pi i x).
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x.rem_euclid(1.0))
}
