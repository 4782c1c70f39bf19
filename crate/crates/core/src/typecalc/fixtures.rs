//! Concrete functions with the types claimed for them, used to exercise
//! [`verify_type`](super::verify_type).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{e, type_compose, type_product, Expr, FuncType, TypedFunction};
use crate::quad::{kernel_i, KernelParams, QuadConfig, SmoothWindow};

/// e(x) with the type (1 : |x|) on [1, 10^3].
pub fn fixture_exponential() -> TypedFunction {
    let t = FuncType::new(&["x"], Expr::one(), vec![Expr::var(0).abs()]).expect("one variable");
    TypedFunction::new("e(x)", t, vec![(1.0, 1e3)], |x| e(x[0]))
}

/// e(x) with the too small type (1 : 1).
pub fn fixture_wrong_exponential() -> TypedFunction {
    let t = FuncType::new(&["x"], Expr::one(), vec![Expr::one()]).expect("one variable");
    fixture_exponential()
        .with_claim(t)
        .renamed("e(x) claimed (1 : 1)")
}

/// The Gaussian bump exp(-u^2) cut off at |u| = 4, u = (x - 3)/sigma, with
/// type (1 : 1) on [1, 5]. Derivatives of x^j d^j grow like (x/sigma)^j, so
/// sigma = 1 keeps the constant moderate.
pub fn fixture_bump() -> TypedFunction {
    let h = SmoothWindow::gaussian_bump(3.0, 1.0);
    let t = FuncType::new(&["x"], Expr::one(), vec![Expr::one()]).expect("one variable");
    TypedFunction::new("gaussian bump", t, vec![(1.0, 5.0)], move |x| {
        Complex64::new(h.eval(x[0]), 0.0)
    })
}

/// e(x) h(x/X) for the standard bump h on [1/2, 5/2] (Z_h = 1), with the type
/// produced by the product rule from (1 : |x|) and (1 : Z_h).
pub fn fixture_product(big_x: f64) -> TypedFunction {
    let ex = FuncType::new(&["x"], Expr::one(), vec![Expr::var(0).abs()]).expect("one variable");
    let hx =
        FuncType::new(&["x"], Expr::one(), vec![Expr::param("Z_h", 1.0)]).expect("one variable");
    let t = type_product(&ex, &hx).expect("same arity");
    let h = SmoothWindow::bump(0.5, 2.5);
    TypedFunction::new(
        "e(x) h(x/X)",
        t,
        vec![(0.5 * big_x, 2.5 * big_x)],
        move |x| e(x[0]) * h.eval(x[0] / big_x),
    )
}

/// Parameters of w_delta(l1 x - l2 y - h c0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WDeltaParams {
    pub delta: f64,
    pub l1: f64,
    pub l2: f64,
    pub c0: f64,
}

impl Default for WDeltaParams {
    fn default() -> Self {
        WDeltaParams {
            delta: 0.01,
            l1: 2.0,
            l2: 3.0,
            c0: 5.0,
        }
    }
}

impl WDeltaParams {
    fn exprs(&self) -> (Expr, Expr, Expr, Expr) {
        (
            Expr::param("delta", self.delta),
            Expr::param("l1", self.l1),
            Expr::param("l2", self.l2),
            Expr::param("c0", self.c0),
        )
    }

    fn shift(&self) -> Expr {
        let (_, l1, l2, c0) = self.exprs();
        Expr::Add(vec![
            l1 * Expr::var(0),
            Expr::c(-1.0) * l2 * Expr::var(1),
            Expr::c(-1.0) * c0 * Expr::var(2),
        ])
    }
}

/// (1 : delta |D|) for w_delta as a function of D.
pub fn w_delta_outer_type(p: &WDeltaParams) -> FuncType {
    let (delta, ..) = p.exprs();
    FuncType::new(&["D"], Expr::one(), vec![delta * Expr::var(0).abs()]).expect("one variable")
}

/// The (x, y, h)-type (S : l1|x|/S, l2|y|/S, c0|h|/S) of D = l1 x - l2 y - h c0,
/// S = l1|x| + l2|y| + c0|h|, together with the value expression D.
pub fn w_delta_inner_type(p: &WDeltaParams) -> (FuncType, Expr) {
    let (_, l1, l2, c0) = p.exprs();
    let terms = [
        l1 * Expr::var(0).abs(),
        l2 * Expr::var(1).abs(),
        c0 * Expr::var(2).abs(),
    ];
    let s = Expr::Add(terms.to_vec());
    let f = terms.iter().map(|t| t.clone() / s.clone()).collect();
    let t = FuncType::new(&["x", "y", "h"], s, f).expect("three variables");
    (t, p.shift())
}

impl TypedFunction {
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// w_delta(l1 x - l2 y - h c0) with the type (1 : delta l1|x|, delta l2|y|,
/// delta c0|h|). The box keeps every delta-scaled variable between 1 and 10.
///
/// The composition rule applied to [`w_delta_outer_type`] and
/// [`w_delta_inner_type`] gives this type plus l1|x|/S, l2|y|/S, c0|h|/S,
/// each at most 1; see [`w_delta_composed`].
pub fn fixture_w_delta(p: WDeltaParams) -> TypedFunction {
    let (delta, l1, l2, c0) = p.exprs();
    let t = FuncType::new(
        &["x", "y", "h"],
        Expr::one(),
        vec![
            delta.clone() * l1 * Expr::var(0).abs(),
            delta.clone() * l2 * Expr::var(1).abs(),
            delta * c0 * Expr::var(2).abs(),
        ],
    )
    .expect("three variables");
    let domain = vec![
        (1.0 / (p.delta * p.l1), 10.0 / (p.delta * p.l1)),
        (1.0 / (p.delta * p.l2), 10.0 / (p.delta * p.l2)),
        (1.0 / (p.delta * p.c0), 10.0 / (p.delta * p.c0)),
    ];
    TypedFunction::new("w_delta(l1 x - l2 y - h c0)", t, domain, move |v| {
        let shift = p.l1 * v[0] - p.l2 * v[1] - p.c0 * v[2];
        Complex64::new(crate::traceverify::w_delta(shift, p.delta), 0.0)
    })
}

/// The type of w_delta(l1 x - l2 y - h c0) derived by the composition rule.
pub fn w_delta_composed(p: &WDeltaParams) -> FuncType {
    let outer = w_delta_outer_type(p);
    type_compose(&outer, &[w_delta_inner_type(p)])
        .expect("arities agree and D is not identically zero")
}

/// Parameters of the kernel I(x, y, d) for a holomorphic form of weight k
/// against J_{kappa - 1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelFixtureParams {
    pub l: f64,
    pub big_x: f64,
    pub big_d: f64,
    pub weight: u32,
    pub kappa: u32,
    /// Range of x sampled.
    pub x_range: (f64, f64),
}

impl Default for KernelFixtureParams {
    fn default() -> Self {
        KernelFixtureParams {
            l: 1.0,
            big_x: 16.0,
            big_d: 8.0,
            weight: 12,
            kappa: 12,
            x_range: (1.0, 100.0),
        }
    }
}

/// ```text
/// I(x, y, d) = 2 sqrt(Xx/(L d^2)) h0(d/D) h(y/X)
///   * int h(u)/(2 sqrt u) J_f(sqrt(Xxu/(L d^2))) J_{kappa-1}(4 pi sqrt(Xyu/d^2)) du
/// ```
///
/// with J_f(t) = 2 pi J_{k-1}(4 pi t), h = h0 the standard bump on [1/2, 5/2]
/// (Z_h = 1) and eta = 1, claimed to have type
/// (min{1, sqrt(xX/(L D^2))} : sqrt(xX/(L D^2)) + 1, sqrt(yX/D^2) + 1 + Z_h, 1 + Z_h).
pub fn fixture_kernel_i(p: KernelFixtureParams) -> TypedFunction {
    let lx = Expr::param("X", p.big_x);
    let ll = Expr::param("L", p.l);
    let ld = Expr::param("D", p.big_d);
    let zh = Expr::param("Z_h", 1.0);
    let sx = (Expr::var(0).abs() * lx.clone() / (ll * ld.clone().pow(2.0))).sqrt();
    let sy = (Expr::var(1).abs() * lx / ld.pow(2.0)).sqrt();
    let t = FuncType::new(
        &["x", "y", "d"],
        Expr::min(vec![Expr::one(), sx.clone()]),
        vec![
            sx + Expr::one(),
            sy + Expr::one() + zh.clone(),
            Expr::one() + zh,
        ],
    )
    .expect("three variables");
    let h = SmoothWindow::bump(0.5, 2.5);
    let inner = SmoothWindow::from_fn((0.5, 2.5), 1.0, "h(u)/(2 sqrt u)", {
        let h = h.clone();
        move |u| h.eval(u) / (2.0 * u.sqrt())
    });
    let cfg = QuadConfig::with_tolerances(1e-11, 1e-300);
    let domain = vec![
        p.x_range,
        (0.5 * p.big_x, 2.5 * p.big_x),
        (0.5 * p.big_d, 2.5 * p.big_d),
    ];
    TypedFunction::new("kernel I(x, y, d)", t, domain, move |v| {
        let (x, y, d) = (v[0], v[1], v[2]);
        let outer = h.eval(y / p.big_x) * h.eval(d / p.big_d);
        if outer == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let kp = KernelParams {
            a: (p.big_x / (p.l * d * d)).sqrt(),
            b: (p.big_x / (d * d)).sqrt(),
            x,
            y,
            kappa: p.kappa,
        };
        let integral = kernel_i(&kp, p.weight, &inner, &cfg).expect("kernel quadrature converges");
        let pref = 2.0 * (p.big_x * x / (p.l * d * d)).sqrt() * 2.0 * PI;
        Complex64::new(pref * outer * integral.value, 0.0)
    })
}
