use std::f64::consts::PI;

use proptest::prelude::*;
use rankinlab::quad::*;

fn cfg() -> QuadConfig {
    QuadConfig::with_tolerances(1e-10, 1e-13)
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

#[test]
fn integrate_examples() {
    let zero = integrate(|_| 0.0, &Domain::Finite(0.0, 1.0), &cfg()).unwrap();
    assert_eq!(zero.value, 0.0);
    let lin = integrate(|x| x, &Domain::Finite(0.0, 1.0), &cfg()).unwrap();
    assert!((lin.value - 0.5).abs() <= lin.abs_err.max(1e-15));
    let exp = integrate(
        |x| (-x).exp(),
        &Domain::SemiInfinite {
            start: 0.0,
            envelope: Envelope::Exponential {
                amplitude: 1.0,
                rate: 1.0,
            },
        },
        &cfg(),
    )
    .unwrap();
    assert!((exp.value - 1.0).abs() < 1e-10);
    let alg = integrate(
        |x| 1.0 / (x * x),
        &Domain::SemiInfinite {
            start: 1.0,
            envelope: Envelope::Algebraic {
                amplitude: 1.0,
                power: 2.0,
            },
        },
        &cfg(),
    )
    .unwrap();
    assert!((alg.value - 1.0).abs() <= alg.abs_err + 1e-12);
}

#[test]
fn oscillatory_integral_with_hint() {
    // int_0^1 cos(200 pi x)^2 dx = 1/2
    let r = integrate(
        |x| (200.0 * PI * x).cos().powi(2),
        &Domain::Finite(0.0, 1.0),
        &cfg().with_hint(100.0),
    )
    .unwrap();
    assert!((r.value - 0.5).abs() < 1e-10);
}

#[test]
fn gauss_legendre_integrates_polynomials() {
    let (x, w) = gauss_legendre(10);
    let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
    assert!((s - 2.0 / 19.0).abs() < 1e-14);
}

#[test]
fn windows_vanish_outside_support() {
    let h = SmoothWindow::bump(0.5, 2.5);
    assert_eq!(h.eval(0.5), 0.0);
    assert_eq!(h.eval(2.5), 0.0);
    assert_eq!(h.eval(0.1), 0.0);
    assert_eq!(h.eval(1.5), 1.0);
    let c = h.fit_derivative_constant(3);
    assert!(c.is_finite() && c >= 1.0, "fitted C = {c}");
    let d = h.dilate(10.0);
    // the constant is measured against (Z / width)^j, so dilation leaves it fixed
    let cd = d.fit_derivative_constant(3);
    assert!((cd - c).abs() <= 1e-6 * c, "{cd} vs {c}");
    assert_eq!(d.support(), (5.0, 25.0));
    assert!((d.eval(17.0) - h.eval(1.7)).abs() < 1e-15);
}

#[test]
fn zero_window_gives_zero_transforms() {
    let z = SmoothWindow::zero(100.0, 200.0);
    assert_eq!(transform_tilde(&z, 5, &cfg()).unwrap().value, 0.0);
    assert_eq!(
        transform_hat(&z, SpectralParam::Real(1.0), &cfg())
            .unwrap()
            .value,
        0.0
    );
    assert_eq!(
        transform_check(&z, SpectralParam::Real(1.0), &cfg())
            .unwrap()
            .value,
        0.0
    );
    let p = KernelParams {
        a: 1.0,
        b: 1.0,
        x: 2.0,
        y: 3.0,
        kappa: 12,
    };
    let hz = SmoothWindow::zero(0.5, 2.5);
    assert_eq!(kernel_i(&p, 12, &hz, &cfg()).unwrap().value, 0.0);
    assert_eq!(kernel_i0(&p, 1.0, &hz, &cfg()).unwrap().value, 0.0);
    assert_eq!(kernel_i1(&p, 1.0, &hz, &cfg()).unwrap().value, 0.0);
}

#[test]
fn tilde_matches_reference_values() {
    // mpmath quadrature of int J_l(y) phi(y) dy / y
    let cases = [
        (100.0, 200.0, 1, 4.497_398_371_850_991e-6),
        (100.0, 200.0, 150, 0.006_652_436_116_344_927),
        (100.0, 200.0, 190, 0.000_767_485_046_351_629_8),
        (5.0, 10.0, 3, -0.05835636283478981),
        (5.0, 10.0, 30, 6.2223822772494992e-15),
    ];
    for (a, b, l, want) in cases {
        let r = transform_tilde(&SmoothWindow::bump(a, b), l, &cfg()).unwrap();
        assert!(
            close(r.value, want, 1e-8) || (r.value - want).abs() <= r.abs_err,
            "l = {l}: {} vs {want}",
            r.value
        );
    }
}

#[test]
fn tilde_tail_is_negligible() {
    let phi = SmoothWindow::bump(100.0, 200.0);
    let r = transform_tilde(&phi, 2000, &cfg()).unwrap();
    assert!(r.value.abs() + r.abs_err < 1e-8);
}

#[test]
fn tilde_envelope_for_small_orders() {
    let big_x: f64 = 100.0;
    let phi = SmoothWindow::bump(big_x, 2.0 * big_x);
    let env = (1.0 + phi.deriv_scale()) * big_x.ln() / big_x;
    let mut c: f64 = 0.0;
    for l in [1, 20, 60, 100, 140, 180, 200] {
        c = c.max(transform_tilde(&phi, l, &cfg()).unwrap().value.abs() / env);
    }
    assert!(c <= 100.0, "fitted C = {c}");
}

#[test]
fn tilde_decay_slope_beyond_four_x() {
    // slope of log |phi~(l)| against log l on [4X, 8X] for X = 5
    let phi = SmoothWindow::bump(5.0, 10.0);
    let v1 = transform_tilde(&phi, 20, &cfg()).unwrap().value.abs();
    let v2 = transform_tilde(&phi, 40, &cfg()).unwrap().value.abs();
    let slope = (v2.ln() - v1.ln()) / 2.0f64.ln();
    assert!(slope < -3.0, "slope {slope}");
}

#[test]
fn hat_matches_reference_values() {
    let cases = [
        (1.0, 2.0, 0.5, 0.22500232266446484),
        (1.0, 2.0, 3.0, -0.24420041376153212),
        (100.0, 200.0, 1.0, 1.3835863683629794e-5),
    ];
    for (a, b, t, want) in cases {
        let r = transform_hat(&SmoothWindow::bump(a, b), SpectralParam::Real(t), &cfg()).unwrap();
        assert!(close(r.value, want, 1e-8), "t = {t}: {} vs {want}", r.value);
    }
}

#[test]
fn hat_envelopes() {
    let phi = SmoothWindow::bump(100.0, 200.0);
    let env = 2.0 * 100f64.ln() / 100.0;
    for t in [0.5, 1.0, 5.0] {
        let r = transform_hat(&phi, SpectralParam::Real(t), &cfg()).unwrap();
        assert!(r.value.abs() / env < 100.0);
    }
    let small = SmoothWindow::bump(1.0, 2.0);
    let r = transform_hat(&small, SpectralParam::Real(150.0), &cfg()).unwrap();
    assert!(r.value.abs() < (1.0f64 / 150.0).powi(2));
}

#[test]
fn check_matches_reference_values() {
    let cases = [
        (50.0, 100.0, 1.0, 5.283_059_746_759_199e-26),
        (200.0, 400.0, 1.0, 6.183_096_874_663_494e-95),
        (1.0, 2.0, 1.0, 0.42175762983471244),
        (1.0, 2.0, 6.0, -0.0073187566696130207),
        (0.5, 3.0, 0.3, 0.37443286586553754),
    ];
    for (a, b, t, want) in cases {
        let r = transform_check(&SmoothWindow::bump(a, b), SpectralParam::Real(t), &cfg()).unwrap();
        assert!(
            close(r.value, want, 1e-8) || (r.value - want).abs() <= r.abs_err,
            "[{a},{b}] t = {t}: {} vs {want}",
            r.value
        );
        // without an absolute floor the tiny values are resolved in relative terms too
        let tight = QuadConfig::with_tolerances(1e-10, 1e-300);
        let r = transform_check(&SmoothWindow::bump(a, b), SpectralParam::Real(t), &tight).unwrap();
        assert!(
            close(r.value, want, 1e-7),
            "[{a},{b}] t = {t} tight: {} vs {want}",
            r.value
        );
    }
}

#[test]
fn check_is_stable_and_decays_in_x() {
    let phi = SmoothWindow::bump(50.0, 100.0);
    let t = SpectralParam::Real(1.0);
    let base = transform_check(&phi, t, &cfg()).unwrap();
    let fine_cfg = QuadConfig::with_tolerances(1e-12, 1e-300)
        .with_hint(4.0 * (1.0 / (PI * 50.0) + 1.0 / 50.0));
    let fine = transform_check(&phi, t, &fine_cfg).unwrap();
    assert!((base.value - fine.value).abs() <= base.abs_err);
    let far = transform_check(&SmoothWindow::bump(200.0, 400.0), t, &cfg()).unwrap();
    assert!(far.value.abs() < base.value.abs());
}

#[test]
fn kernel_i_matches_reference_values() {
    let h = SmoothWindow::bump(0.5, 2.5);
    let cases = [
        ((1.0, 1.0, 2.0, 3.0), 12, 12, -0.006969032188962768),
        ((0.5, 0.7, 10.0, 4.0), 2, 12, -0.01222425302767089),
        ((1.0, 1.0, 1.0, 1.0), 12, 2, 0.007955292263993235),
    ];
    for ((a, b, x, y), k, kappa, want) in cases {
        let p = KernelParams { a, b, x, y, kappa };
        let r = kernel_i(&p, k, &h, &cfg()).unwrap();
        assert!(close(r.value, want, 1e-8), "{} vs {want}", r.value);
    }
    let cases = [
        (
            (1.0, 1.0, 7.0, 5.0),
            12,
            0.04889436713903242,
            7.627_711_412_356_01e-17,
        ),
        (
            (1.0, 0.5, 9.0, 3.0),
            4,
            -0.008267090386376679,
            -2.634851362154171e-17,
        ),
    ];
    for ((a, b, x, y), kappa, want0, want1) in cases {
        let p = KernelParams { a, b, x, y, kappa };
        let i0 = kernel_i0(&p, 1.0, &h, &cfg()).unwrap();
        let i1 = kernel_i1(&p, 1.0, &h, &cfg()).unwrap();
        assert!(close(i0.value, want0, 1e-8), "{} vs {want0}", i0.value);
        assert!(close(i1.value, want1, 1e-6), "{} vs {want1}", i1.value);
    }
}

#[test]
fn kernel_i_decays_with_the_gap() {
    // b sqrt(y) = 5 fixed; a sqrt(x) = 5 + gap
    let h = SmoothWindow::bump(0.5, 2.5);
    let at = |gap: f64| {
        let p = KernelParams {
            a: 1.0,
            b: 1.0,
            x: (5.0 + gap).powi(2),
            y: 25.0,
            kappa: 12,
        };
        kernel_i(&p, 12, &h, &cfg()).unwrap().value.abs()
    };
    let gaps = [10.0, 20.0, 40.0];
    let vals: Vec<f64> = gaps.iter().map(|&g| at(g)).collect();
    for j in 1..=3 {
        let c: Vec<f64> = gaps
            .iter()
            .zip(&vals)
            .map(|(g, v)| v * g.powi(j) / 2f64.powi(j))
            .collect();
        assert!(c.iter().all(|c| c.is_finite()), "j = {j}");
    }
    // faster than any fixed power in practice: the constant for j = 3 does not grow
    let c3: Vec<f64> = gaps.iter().zip(&vals).map(|(g, v)| v * g.powi(3)).collect();
    assert!(c3[2] <= c3[0], "{c3:?}");
}

#[test]
fn kernel_i_balanced_envelope() {
    let h = SmoothWindow::bump(0.5, 2.5);
    let p = KernelParams {
        a: 1.0,
        b: 1.0,
        x: 400.0,
        y: 400.0,
        kappa: 12,
    };
    let r = kernel_i(&p, 12, &h, &cfg()).unwrap();
    assert!(r.value.abs() * 21.0 < 1.0);
}

#[test]
fn kernel_i1_exponential_envelope() {
    let h = SmoothWindow::bump(0.5, 2.5);
    // a sqrt(x) = 15
    let p = KernelParams {
        a: 1.0,
        b: 1.0,
        x: 225.0,
        y: 100.0,
        kappa: 12,
    };
    let r = kernel_i1(&p, 1.0, &h, &cfg()).unwrap();
    assert!(r.value.abs() <= (-2.0 * PI * 15.0).exp() * 1e3);
    let wide = kernel_i0(&p, 1.0, &h, &cfg()).unwrap();
    assert!(wide.value.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transforms_are_linear(alpha in -1.0f64..1.0, beta in -1.0f64..1.0) {
        let p1 = SmoothWindow::bump(2.0, 6.0);
        let p2 = SmoothWindow::bump_at(2.0, 6.0, 3.0, 0.8);
        let mix = p1.combine(alpha, &p2, beta);
        let c = cfg();
        let a = transform_tilde(&p1, 4, &c).unwrap();
        let b = transform_tilde(&p2, 4, &c).unwrap();
        let m = transform_tilde(&mix, 4, &c).unwrap();
        let tol = m.abs_err + alpha.abs() * a.abs_err + beta.abs() * b.abs_err + 1e-13;
        prop_assert!((m.value - alpha * a.value - beta * b.value).abs() <= tol);
        let t = SpectralParam::Real(1.5);
        let a = transform_check(&p1, t, &c).unwrap();
        let b = transform_check(&p2, t, &c).unwrap();
        let m = transform_check(&mix, t, &c).unwrap();
        let tol = m.abs_err + alpha.abs() * a.abs_err + beta.abs() * b.abs_err + 1e-13;
        prop_assert!((m.value - alpha * a.value - beta * b.value).abs() <= tol);
    }

    #[test]
    fn refinement_moves_tilde_less_than_abs_err(l in 1u32..60) {
        let phi = SmoothWindow::bump(10.0, 20.0);
        let base = transform_tilde(&phi, l, &cfg()).unwrap();
        let fine = transform_tilde(&phi, l, &QuadConfig::with_tolerances(1e-12, 1e-15).with_hint(4.0)).unwrap();
        prop_assert!((base.value - fine.value).abs() <= base.abs_err + 1e-15);
    }
}
