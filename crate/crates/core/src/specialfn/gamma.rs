use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log sin(pi z), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::i();
    let ln_2i = Complex64::new(2.0f64.ln(), PI / 2.0);
    if w.im > 20.0 {
        -i * w - ln_2i + (Complex64::new(1.0, 0.0) - (i * w * 2.0).exp()).ln()
    } else if w.im < -20.0 {
        i * w - ln_2i + (Complex64::new(1.0, 0.0) - (-i * w * 2.0).exp()).ln()
    } else {
        w.sin().ln()
    }
}

/// Principal-ish branch of log Gamma(z); only exp() of the result is branch
/// independent, which is all callers rely on.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_complex(one - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma_complex(z: Complex64) -> Complex64 {
    ln_gamma_complex(z).exp()
}

/// log |Gamma(x)| for real x, with the sign of Gamma(x).
pub fn ln_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma_complex(Complex64::new(x, 0.0)).re, 1.0);
    }
    let s = (PI * x).sin();
    let lg = ln_gamma_complex(Complex64::new(1.0 - x, 0.0)).re;
    (PI.ln() - s.abs().ln() - lg, s.signum())
}

pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x == x.floor() && x < 171.0 {
        return (1..x as u64).map(|k| k as f64).product();
    }
    let (l, s) = ln_gamma(x);
    s * l.exp()
}
