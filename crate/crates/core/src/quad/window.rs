use std::fmt;
use std::sync::Arc;

type WindowFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A smooth compactly supported weight with derivative scale Z:
/// |h^{(j)}| is at most C (Z / width)^j, width = B - A.
#[derive(Clone)]
pub struct SmoothWindow {
    support: (f64, f64),
    deriv_scale: f64,
    eval: WindowFn,
    label: String,
}

impl fmt::Debug for SmoothWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothWindow")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("deriv_scale", &self.deriv_scale)
            .finish()
    }
}

/// exp(1 - 1/(1 - u^2)) on (-1, 1), zero outside; equals 1 at u = 0.
pub fn standard_bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

impl SmoothWindow {
    pub fn from_fn<F>(support: (f64, f64), deriv_scale: f64, label: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!(
            support.0 < support.1,
            "window support must be a proper interval"
        );
        SmoothWindow {
            support,
            deriv_scale,
            eval: Arc::new(f),
            label: label.to_string(),
        }
    }

    /// Bump filling [a, b], derivative scale 1.
    pub fn bump(a: f64, b: f64) -> Self {
        Self::bump_with_scale(a, b, 1.0)
    }

    /// Bump of width (b - a)/z centred in [a, b]; derivative scale z >= 1.
    pub fn bump_with_scale(a: f64, b: f64, z: f64) -> Self {
        assert!(z >= 1.0, "derivative scale must be at least 1");
        let c = 0.5 * (a + b);
        let hw = 0.5 * (b - a) / z;
        Self::from_fn((a, b), z, &format!("bump[{a},{b}];Z={z}"), move |x| {
            standard_bump((x - c) / hw)
        })
    }

    /// Bump whose centre and width lie anywhere inside [a, b]:
    /// centre c, half width hw, with [c - hw, c + hw] inside [a, b].
    pub fn bump_at(a: f64, b: f64, c: f64, hw: f64) -> Self {
        assert!(
            c - hw >= a - 1e-12 && c + hw <= b + 1e-12,
            "bump must sit inside its support"
        );
        let z = (0.5 * (b - a) / hw).max(1.0);
        Self::from_fn(
            (a, b),
            z,
            &format!("bump@{c}±{hw} in [{a},{b}]"),
            move |x| standard_bump((x - c) / hw),
        )
    }

    /// exp(-((x - c)/sigma)^2) cut off smoothly at |x - c| = 4 sigma, where the
    /// Gaussian is below 1e-6.
    pub fn gaussian_bump(c: f64, sigma: f64) -> Self {
        assert!(sigma > 0.0, "width must be positive");
        Self::from_fn(
            (c - 4.0 * sigma, c + 4.0 * sigma),
            8.0,
            &format!("gauss@{c}±{sigma}"),
            move |x| {
                let u = (x - c) / sigma;
                (-u * u).exp() * standard_bump(0.25 * u)
            },
        )
    }

    pub fn zero(a: f64, b: f64) -> Self {
        Self::from_fn((a, b), 1.0, "zero", |_| 0.0)
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn deriv_scale(&self) -> f64 {
        self.deriv_scale
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn width(&self) -> f64 {
        self.support.1 - self.support.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.support.0 || x >= self.support.1 {
            0.0
        } else {
            (self.eval)(x)
        }
    }

    /// x -> h(x / scale), supported on scale * [A, B].
    pub fn dilate(&self, scale: f64) -> Self {
        assert!(scale > 0.0, "dilation must be positive");
        let inner = self.clone();
        Self::from_fn(
            (self.support.0 * scale, self.support.1 * scale),
            self.deriv_scale,
            &format!("{}(x/{scale})", self.label),
            move |x| inner.eval(x / scale),
        )
    }

    /// alpha * self + beta * other.
    pub fn combine(&self, alpha: f64, other: &SmoothWindow, beta: f64) -> Self {
        let (p, q) = (self.clone(), other.clone());
        Self::from_fn(
            (
                self.support.0.min(other.support.0),
                self.support.1.max(other.support.1),
            ),
            self.deriv_scale.max(other.deriv_scale),
            &format!("{alpha}*{}+{beta}*{}", self.label, other.label),
            move |x| alpha * p.eval(x) + beta * q.eval(x),
        )
    }

    /// Pointwise product with another function (support unchanged).
    pub fn multiply<F>(&self, g: F, label: &str) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let p = self.clone();
        Self::from_fn(self.support, self.deriv_scale, label, move |x| {
            p.eval(x) * g(x)
        })
    }

    /// Largest ratio |h^{(j)}(x)| / (Z / width)^j over a grid, j <= max_order,
    /// derivatives by central differences.
    pub fn fit_derivative_constant(&self, max_order: usize) -> f64 {
        let (a, b) = self.support;
        let w = b - a;
        let scale = self.deriv_scale / w;
        let n = 400;
        let mut best: f64 = 0.0;
        for i in 1..n {
            let x = a + w * i as f64 / n as f64;
            for j in 0..=max_order {
                let d = central_difference(|t| self.eval(t), x, j, w * 1e-3);
                best = best.max(d.abs() / scale.powi(j as i32));
            }
        }
        best
    }
}

/// j-th central difference quotient with step h (j <= 4).
pub(crate) fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, j: usize, h: f64) -> f64 {
    match j {
        0 => f(x),
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => {
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
        }
        4 => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / (h * h * h * h)
        }
        _ => panic!("central_difference supports orders up to 4"),
    }
}
